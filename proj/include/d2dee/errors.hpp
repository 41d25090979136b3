// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace d2dee {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Result would overflow the representable range.
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

// A numerical procedure did not reach its declared tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Root bracketing or iteration failed to locate a solution.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs violate a documented precondition of a call.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Campaign cannot proceed (for example, no alive device).
struct CampaignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration problem. line() is 0 when not tied to a source line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = {}, int line = 0)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace d2dee
