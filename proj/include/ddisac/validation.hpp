#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ddisac/sensing.hpp"

namespace ddisac {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;     // worst relative error observed
    double tolerance = 0.0;
    std::size_t trials = 0;
    std::string detail;
};

using FimFormula = std::function<FimEntries(const WaveformMoments&, const SensingTarget&, const DDGrid&)>;

struct ValidationOptions {
    /// Subset of {isfft, channel, lmmse, derivatives, fim, crb, power}; empty runs all.
    std::vector<std::string> checks;
    std::size_t trials = 100;
    std::uint64_t seed = 7;
    /// Closed-form FIM under test; defaults to fim_entries.
    FimFormula fim_formula;
};

/// Names of every available check, in run order.
const std::vector<std::string>& validation_check_names();

/// Runs the selected oracle comparisons on random baseline-scenario instances.
/// Throws InvalidInput for an unknown check name.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

} // namespace ddisac
