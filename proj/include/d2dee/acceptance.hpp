// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "d2dee/config.hpp"

namespace d2dee::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;  // one line of numbers backing the verdict
};

struct Options {
  std::uint64_t seed = 20160801;
  int threads = 0;
  std::vector<int> only;  // empty: every criterion
};

// Ring of devices 300 m from the BS, 2 MB payloads, no interference,
// fixed circuit power, no control overhead.
ScenarioConfig bound_verification_config();
// Annulus campaign with the measured control-message energies.
ScenarioConfig campaign_config();

// Expected count of validating records per closed form on the audit grid.
struct AuditPin {
  const char* form;
  int ok;
  int total;
};
const std::vector<AuditPin>& audit_pins();

// Runs the selected criteria in order; on_result fires as each one finishes.
std::vector<CriterionResult> run(const Options& opt,
                                 const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace d2dee::acceptance
