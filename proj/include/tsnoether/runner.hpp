#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsnoether/config.hpp"
#include "tsnoether/noether.hpp"

namespace tsn {

/// Command-line overrides layered on top of a parsed spec.
struct RunOptions {
    std::optional<double> tol;
    std::optional<VariantChoice> variant;
    std::optional<std::string> out_dir;
    bool allow_noninvariant = false; ///< keep going past failed symmetry checks
    bool check_only = false;         ///< admissibility + invariance, no solve, no files
};

struct RunReport {
    int exit_code = 0; ///< 0 ok, 2 symmetry checks failed, 3 solver/numeric failure
    std::string text;  ///< human summary; also written as report.txt on full runs
    std::vector<std::string> files;
    bool admissibility_pass = true; ///< vacuously true without a group
    bool invariance_pass = true;
    std::vector<ConservationSeries> series; ///< one per solved trajectory
};

/// Built-in preset: uniform scale 1..10 with step 1e-3, L = x^2/t + t*v^2,
/// the scaling family (t e^s, x), x(1) = 1 and Dx(1) = 0.1, both variants.
ExperimentSpec bt_example_spec();

/// Stage order: admissibility, invariance (along the straight probe path
/// x0 + v0 (t-a)), generator, EL solves, conservation series, file emission.
/// Config-shaped problems throw (the caller maps them to its usage exit
/// code); solver and conservation failures come back as exit_code 3 with the
/// stage named in text.
RunReport run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

} // namespace tsn
