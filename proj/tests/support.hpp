#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tsnoether/expr.hpp"
#include "tsnoether/grid_function.hpp"
#include "tsnoether/timescale.hpp"

// Shared test helpers. Kept free of any test-framework dependency so the
// acceptance binary can use them too.

namespace tsupport {

/// |a - b| within `ulps` units in the last place of the largest participating
/// magnitude. scale_hint covers comparisons whose intermediates dwarf the
/// result (cancellation): the identity then holds in ulps of the hint.
inline bool ulp_close(double a, double b, double ulps, double scale_hint = 0.0) {
    if (a == b) return true;
    const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(scale_hint)});
    return std::fabs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * scale;
}

/// Scattered scale with gaps drawn from [min_gap, max_gap): adversarial
/// graininess without degenerate steps.
inline tsn::ScalePtr random_scale(std::mt19937& rng, std::size_t n, double a = 0.5,
                                  double min_gap = 0.05, double max_gap = 1.0) {
    std::uniform_real_distribution<double> gap(min_gap, max_gap);
    std::vector<double> pts(n);
    double t = a;
    for (std::size_t k = 0; k < n; ++k) {
        pts[k] = t;
        t += gap(rng);
    }
    return tsn::make_timescale(std::move(pts));
}

/// Sample a scalar path t -> f(t) on the full domain, serially.
template <typename F>
tsn::GridFunction sample_path(const tsn::ScalePtr& ts, F&& f) {
    tsn::GridFunction x(ts, tsn::DomainKind::Full, 1);
    for (std::size_t k = 0; k < ts->size(); ++k) x.value(k) = f(ts->point(k));
    return x;
}

inline bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

/// Independent forward recurrence for L = c1 x^2/t + c2 t v^2 (non-shifted
/// form): dL/dv = 2 c2 t v is explicit in v because dL/dx has none, so no
/// Newton is needed. Returns the x trajectory.
inline std::vector<double> quadratic_recurrence(const tsn::TimeScale& ts, double x0, double v0,
                                                double c1 = 1.0, double c2 = 1.0) {
    const std::size_t n = ts.size();
    std::vector<double> x(n);
    x[0] = x0;
    x[1] = x0 + ts.mu(0) * v0;
    double p = 2.0 * c2 * ts.point(0) * v0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double t = ts.point(k);
        const double v = (p + ts.mu(k) * 2.0 * c1 * x[k] / t) / (2.0 * c2 * t);
        p = 2.0 * c2 * t * v;
        x[k + 1] = x[k] + ts.mu(k) * v;
    }
    return x;
}

/// Random expression over t, x, v that is total on the reals by construction
/// (guarded denominators, squared log/sqrt arguments, integer exponents).
/// Magnitude blowup through exp is left to callers' value guards.
inline tsn::ExprPtr random_safe_expr(std::mt19937& rng, int depth) {
    using namespace tsn;
    std::uniform_int_distribution<int> leaf_pick(0, 3);
    std::uniform_real_distribution<double> constant(0.3, 2.5);
    if (depth <= 0) {
        switch (leaf_pick(rng)) {
        case 0: return make_variable({VarKind::T, -1, "t"});
        case 1: return make_variable({VarKind::X, -1, "x"});
        case 2: return make_variable({VarKind::V, -1, "v"});
        default: return make_number(constant(rng));
        }
    }
    std::uniform_int_distribution<int> op_pick(0, 10);
    const auto sub = [&](int d) { return random_safe_expr(rng, d); };
    switch (op_pick(rng)) {
    case 0: return make_add(sub(depth - 1), sub(depth - 1));
    case 1: return make_sub(sub(depth - 1), sub(depth - 1));
    case 2: return make_mul(sub(depth - 1), sub(depth - 1));
    case 3: // u / (1.5 + w^2) never divides by zero
        return make_div(sub(depth - 1),
                        make_add(make_number(1.5), make_mul(sub(depth - 2), sub(depth - 2))));
    case 4: return make_pow(sub(depth - 1), make_number(2.0));
    case 5: return make_pow(sub(depth - 1), make_number(3.0));
    case 6: // positive base with a fractional exponent
        return make_pow(make_add(make_number(1.2), make_mul(sub(depth - 2), sub(depth - 2))),
                        make_number(constant(rng)));
    case 7: return make_call(Func::Sin, sub(depth - 1));
    case 8: return make_call(Func::Cos, sub(depth - 1));
    case 9: return make_call(Func::Exp, sub(depth - 1));
    default: // log(1 + w^2) and sqrt(0.5 + w^2) stay in domain
        return (op_pick(rng) % 2 == 0)
                   ? make_call(Func::Log, make_add(make_number(1.0),
                                                   make_mul(sub(depth - 2), sub(depth - 2))))
                   : make_call(Func::Sqrt, make_add(make_number(0.5),
                                                    make_mul(sub(depth - 2), sub(depth - 2))));
    }
}

inline double eval_txv(const tsn::Expr& e, double t, double x, double v) {
    tsn::EvalEnv env;
    env.t = t;
    const double xs[] = {x};
    const double vs[] = {v};
    env.x = {xs, 1};
    env.v = {vs, 1};
    return tsn::evaluate(e, env);
}

} // namespace tsupport
