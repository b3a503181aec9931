#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"
#include "tsnoether/calculus.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/lagrangian.hpp"
#include "tsnoether/symmetry.hpp"
#include "tsnoether/timescale.hpp"

using namespace tsn;
using tsupport::sample_path;

TEST_CASE("admissibility of the scaling family") {
    const SymmetryGroup G = group_from_exprs("t*exp(s)", "x", 1);
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    const std::vector<double> ss{std::log(2.0), -0.4, 0.0};
    const AdmissibilityReport rep = admissibility_check(G, *ts, ss);
    CHECK(rep.identity_at_zero);
    CHECK(rep.identity_deviation == 0.0); // t*exp(0) is exactly t
    CHECK(rep.pass);
    for (const AdmissibilitySample& s : rep.samples) {
        CHECK(s.strictly_increasing);
        CHECK(s.image_is_scale);
        CHECK(s.delta_nonzero);
        CHECK(s.regularity_vacuous);
        CHECK(s.pass());
    }
    CHECK(!rep.summary().empty());
}

TEST_CASE("admissibility catches a collapsing family") {
    // g0 = t(1-s) flattens the whole scale to a point at s = 1.
    const SymmetryGroup G = group_from_exprs("t*(1-s)", "x", 1);
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    const std::vector<double> ss{0.0, 1.0};
    const AdmissibilityReport rep = admissibility_check(G, *ts, ss);
    CHECK(!rep.pass);
    CHECK(rep.samples[0].pass());
    CHECK(!rep.samples[1].strictly_increasing);
    CHECK(!rep.samples[1].delta_nonzero);
    CHECK(!rep.samples[1].image_is_scale);
}

TEST_CASE("admissibility requires the identity at s = 0") {
    const SymmetryGroup G = group_from_exprs("t + s + 1", "x", 1);
    const ScalePtr ts = make_timescale({1, 2, 3});
    const std::vector<double> ss{0.0};
    const AdmissibilityReport rep = admissibility_check(G, *ts, ss);
    CHECK(!rep.identity_at_zero);
    CHECK(!rep.pass);
}

TEST_CASE("invariance holds for the scaling family whatever the path") {
    const Lagrangian L = lagrangian_from_expr("x^2/t + t*v^2", 1);
    const SymmetryGroup G = group_from_exprs("t*exp(s)", "x", 1);
    const ScalePtr ts = uniform_scale(1.0, 2.0, 0.05);
    const GridFunction x = sample_path(ts, [](double t) { return std::sin(t) + 2.0; });
    const std::vector<double> ss{-1.0, -0.3, 0.0, 0.7};
    const InvarianceReport rep = invariance_check(L, G, x, ss);
    CHECK(rep.pass);
    CHECK(rep.threshold == 1e-10 * (1.0 + std::fabs(rep.action)));
    for (const InvarianceSample& s : rep.samples) CHECK(s.pass);
    CHECK(!rep.summary().empty());
}

TEST_CASE("invariance fails for a non-symmetry and the identity sample stays exact") {
    const Lagrangian L = lagrangian_from_expr("v^2/2", 1);
    const SymmetryGroup G = group_from_exprs("t*exp(s)", "x", 1);
    const ScalePtr ts = uniform_scale(1.0, 2.0, 0.1);
    const GridFunction x = sample_path(ts, [](double t) { return 1.0 + 0.5 * (t - 1.0); });
    const std::vector<double> ss{0.0, 1.0};
    const InvarianceReport rep = invariance_check(L, G, x, ss);
    CHECK(!rep.pass);
    CHECK(rep.samples[0].pass);
    CHECK(rep.samples[0].max_interval_diff == 0.0); // s = 0 transforms nothing
    CHECK(!rep.samples[1].pass);
    CHECK(rep.samples[1].max_interval_diff > rep.threshold);
}

TEST_CASE("the identity group is invariant bitwise") {
    const Lagrangian L = lagrangian_from_expr("x^2/t + t*v^2", 1);
    const SymmetryGroup G = group_from_exprs("t", "x", 1);
    const ScalePtr ts = uniform_scale(1.0, 2.0, 0.1);
    const GridFunction x = sample_path(ts, [](double t) { return 1.0 + 0.5 * (t - 1.0); });
    const std::vector<double> ss{-1.0, 0.5};
    const InvarianceReport rep = invariance_check(L, G, x, ss);
    CHECK(rep.pass);
    CHECK(rep.samples[0].max_interval_diff == 0.0);
    CHECK(rep.samples[1].max_interval_diff == 0.0);
}

TEST_CASE("symbolic generator extraction") {
    const SymmetryGroup G = group_from_exprs("t*exp(s)", "x", 1);
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    const Generator gen = extract_generator(G, *ts);
    CHECK(gen.provenance == GeneratorProvenance::Analytic);
    CHECK(gen.zeta(5.0) == 5.0); // d/ds t e^s at s=0 is exactly t
    double out[1], in[1] = {7.0};
    gen.xi({in, 1}, {out, 1});
    CHECK(out[0] == 0.0);
    CHECK(!gen.zeta_source.empty());
}

TEST_CASE("numeric generator extraction cross-checks two steps") {
    const SymmetryGroup G = group_from_closures(
        [](double s, double t) { return t * std::exp(s); },
        [](double s, std::span<const double> x, std::span<double> out) { out[0] = x[0] * std::exp(s); },
        1);
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    const Generator gen = extract_generator(G, *ts);
    CHECK(gen.provenance == GeneratorProvenance::FiniteDifference);
    CHECK(gen.ds == 1e-6);
    CHECK(std::fabs(gen.zeta(2.0) - 2.0) <= 1e-9);
    double out[1], in[1] = {3.0};
    gen.xi({in, 1}, {out, 1});
    CHECK(std::fabs(out[0] - 3.0) <= 1e-9);

    // a family that wobbles below the probe step is rejected, not averaged out
    const SymmetryGroup bad = group_from_closures(
        [](double s, double t) { return t + 0.001 * std::sin(1.0e5 * s); },
        [](double, std::span<const double> x, std::span<double> out) { out[0] = x[0]; }, 1);
    CHECK_THROWS_AS(extract_generator(bad, *ts), InconsistentRichardson);
}

TEST_CASE("generators parsed directly from expressions") {
    const Generator gen = generator_from_exprs("t", "0", 1);
    CHECK(gen.zeta(3.0) == 3.0);
    double out[2], in[2] = {3.0, 4.0};
    gen.xi({in, 1}, {out, 1});
    CHECK(out[0] == 0.0);

    const Generator rot = generator_from_exprs("0", "x2;-x1", 2);
    CHECK(rot.dim == 2);
    rot.xi({in, 2}, {out, 2});
    CHECK(out[0] == 4.0);
    CHECK(out[1] == -3.0);

    CHECK_THROWS_AS(generator_from_exprs("t", "x;x", 1), DimensionMismatch);
    CHECK_THROWS_AS(generator_from_exprs("x", "0", 1), UnknownVariable); // zeta sees only t
}

TEST_CASE("infinitesimal invariance residual vanishes exactly for symmetric pairs") {
    const Lagrangian L = lagrangian_from_expr("x^2/t + t*v^2", 1);
    const Generator gen = generator_from_exprs("t", "0", 1);
    std::mt19937 rng(13);
    const ScalePtr ts = tsupport::random_scale(rng, 19);
    // arbitrary path: the residual identity is pointwise, not variational
    const GridFunction x = sample_path(ts, [](double t) { return std::sin(t) + 2.0; });
    const GridFunction r = infinitesimal_invariance_residual(L, gen, x);
    CHECK(r.kind() == DomainKind::Kappa);
    for (std::size_t k = r.first_index(); k < r.end_index(); ++k) {
        CHECK(std::fabs(r.value(k)) <= 1e-12);
    }

    // x-translations of an x-free integrand: every term is a hard zero
    const Lagrangian Lt = lagrangian_from_expr("0.7*v^2 + sin(t)*v + cos(t)", 1);
    const Generator shift = generator_from_exprs("0", "1", 1);
    const GridFunction r2 = infinitesimal_invariance_residual(Lt, shift, x);
    for (std::size_t k = r2.first_index(); k < r2.end_index(); ++k) {
        CHECK(r2.value(k) == 0.0);
    }
}

TEST_CASE("infinitesimal invariance residual measures broken symmetry") {
    // L = v^2/2 under time scaling: r = (L - pv) Delta zeta = -v^2/2.
    const Lagrangian L = lagrangian_from_expr("v^2/2", 1);
    const Generator gen = generator_from_exprs("t", "0", 1);
    const ScalePtr ts = uniform_scale(0.0, 2.0, 0.25);
    const GridFunction x = sample_path(ts, [](double t) { return 0.2 + 0.9 * t; });
    const GridFunction r = infinitesimal_invariance_residual(L, gen, x);
    const GridFunction v = delta_derivative(x);
    for (std::size_t k = r.first_index(); k < r.end_index(); ++k) {
        CHECK(tsupport::ulp_close(r.value(k), -0.5 * v.value(k) * v.value(k), 8, 1.0));
    }
}

TEST_CASE("group parsing errors") {
    CHECK_THROWS_AS(group_from_exprs("t*exp(s)", "x;x", 1), DimensionMismatch);
    CHECK_THROWS_AS(group_from_exprs("t*x", "x", 1), UnknownVariable); // g0 sees only (s,t)
    CHECK_THROWS_AS(group_from_exprs("t*exp(s", "x", 1), SyntaxError);
}
