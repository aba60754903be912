#pragma once

// Verification sweeps behind `fairboost verify`. Each suite checks one
// finite-domain inequality or identity over a seeded corpus and states the
// claim it checks in the report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairboost/experiments.hpp"

namespace fairboost {

struct SuiteOptions {
    std::uint64_t seed = 0;
    double tolerance = kInequalityTolerance;
    unsigned jobs = 1;
    /// Overrides the suite's default sweep size.
    std::optional<std::size_t> trials;
};

std::vector<std::string> suite_names();
RunReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace fairboost
