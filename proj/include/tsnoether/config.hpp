#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tsnoether/timescale.hpp"

namespace tsn {

enum class ScaleKind { Uniform, Points, Dyadic };
enum class VariantChoice { NonShifted, Shifted, Both };

const char* variant_choice_name(VariantChoice v);

/// One experiment, as read from a key = value config file. Flat keys:
///   scale.kind (uniform | points | dyadic)
///   scale.a, scale.b     uniform endpoints, or dyadic exponent range
///   scale.h              uniform step
///   scale.points         comma-separated point list
///   lagrangian           expression in t, x_i, v_i
///   dimension            d >= 1 (default 1)
///   group.g0, group.g1   expressions in (s,t) / (s,x); g1 ';'-separated
///   generator.zeta, generator.xi   direct generator override
///   init.x0, init.v0     comma-separated d-vectors
///   solver.variant       nonshifted | shifted | both (default both)
///   solver.tol           Newton tolerance (default 1e-12)
///   symmetry.s_samples   comma-separated parameter samples
///   output.dir           emission directory (default out)
/// '#' starts a comment; unknown keys are rejected.
struct ExperimentSpec {
    ScaleKind scale_kind = ScaleKind::Uniform;
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
    std::vector<double> points;
    int n_min = 0;
    int n_max = 0;

    std::string lagrangian;
    std::size_t dimension = 1;

    std::string g0;
    std::string g1;
    std::string zeta;
    std::string xi;

    std::vector<double> x0;
    std::vector<double> v0;

    VariantChoice variant = VariantChoice::Both;
    double tol = 1e-12;
    std::vector<double> s_samples = {-1.0, -0.5, 0.0, 0.5, 1.0};
    std::string output_dir = "out";

    bool has_group() const { return !g0.empty(); }
    bool has_generator() const { return !zeta.empty(); }
};

ExperimentSpec parse_config_text(std::string_view text);
ExperimentSpec parse_config(const std::string& path);

ScalePtr build_scale(const ExperimentSpec& spec);

} // namespace tsn
