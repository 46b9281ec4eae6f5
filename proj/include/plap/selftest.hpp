#pragma once

#include <string>
#include <vector>

#include "plap/model1d.hpp"

namespace plap {

struct CheckResult {
    std::string name;
    bool pass;
    double residual;  // worst observed residual, check-specific scaling
    double threshold; // residual must stay at or below this
};

/// Runs the whole invariant suite at desk scale: generalized-trig
/// identities, cross-method agreement, scaling law, asymptotics, the Barta
/// identity residual, the Ricci certificate, and the sharpness bracket.
std::vector<CheckResult> run_selftest(const SolverConfig& cfg = {});

} // namespace plap
