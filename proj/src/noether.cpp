#include "tsnoether/noether.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "tsnoether/calculus.hpp"
#include "tsnoether/errors.hpp"

namespace tsn {

namespace {

/// Boundary bracket shared by I and C: zeta(sigma t) [L - p.v] + xi(x-sigma) . p.
/// Keeping one code path makes "C plus the correction equals I" an identity in
/// floating point, not just in algebra.
GridFunction invariant_base(const Lagrangian& L, const Generator& gen, const GridFunction& x,
                            bool shifted_args, Exec exec) {
    if (gen.dim != L.dim) {
        throw DimensionMismatch("generator dimension does not match the Lagrangian");
    }
    PathTables tab = tabulate_path(L, x, shifted_args, exec);
    const TimeScale& ts = x.scale();
    const std::size_t d = L.dim;
    GridFunction base(x.scale_ptr(), DomainKind::Kappa, 1);
    parallel_for(base.count(), exec, [&](std::size_t i) {
        const std::size_t k = base.first_index() + i;
        std::vector<double> xi(d);
        gen.xi(x.at(k + 1), xi);
        const double bracket = tab.value.value(k) - dot(tab.p.at(k), tab.v.at(k));
        base.value(k) = gen.zeta(ts.sigma(k)) * bracket + dot(xi, tab.p.at(k));
    });
    return base;
}

} // namespace

DriftStats drift_report(const GridFunction& q, std::size_t comp) {
    if (q.count() == 0) {
        throw EmptySeries("drift report needs a nonempty series");
    }
    if (comp >= q.dim()) {
        throw DimensionMismatch("component out of range for drift report");
    }
    DriftStats st;
    st.anchor = q.value(q.first_index(), comp);
    st.argmax = q.first_index();
    for (std::size_t k = q.first_index(); k < q.end_index(); ++k) {
        const double dev = std::abs(q.value(k, comp) - st.anchor);
        if (dev > st.max_deviation) {
            st.max_deviation = dev;
            st.argmax = k;
        }
    }
    st.relative_drift = st.max_deviation / std::max(std::abs(st.anchor), 1e-30);
    return st;
}

GridFunction conservation_integrand(const Lagrangian& L, const Generator& gen,
                                    const GridFunction& x, Exec exec) {
    if (gen.dim != L.dim) {
        throw DimensionMismatch("generator dimension does not match the Lagrangian");
    }
    PathTables tab = tabulate_path(L, x, false, exec);
    GridFunction bracket(x.scale_ptr(), DomainKind::Kappa, 1);
    parallel_for(bracket.count(), exec, [&](std::size_t i) {
        const std::size_t k = bracket.first_index() + i;
        bracket.value(k) = tab.value.value(k) - dot(tab.p.at(k), tab.v.at(k));
    });
    GridFunction nb = detail::nabla_derivative_window(bracket, exec);
    GridFunction ns = nabla_sigma(x.scale_ptr(), exec);
    const TimeScale& ts = x.scale();
    GridFunction out(x.scale_ptr(), DomainKind::KappaBoth, 1);
    parallel_for(out.count(), exec, [&](std::size_t i) {
        const std::size_t k = out.first_index() + i;
        out.value(k) = gen.zeta(ts.point(k)) * (ns.value(k) * tab.lt.value(k) - nb.value(k));
    });
    return out;
}

GridFunction noether_invariant(const Lagrangian& L, const Generator& gen, const ELSolution& sol,
                               bool allow_shifted, Exec exec) {
    if (sol.variant == ELVariant::Shifted && !allow_shifted) {
        throw VariantMismatch(
            "the invariant is stated along non-shifted solutions; set allow_shifted to "
            "evaluate it on a shifted trajectory anyway");
    }
    GridFunction base = invariant_base(L, gen, sol.x, false, exec);
    GridFunction integrand = conservation_integrand(L, gen, sol.x, exec);
    GridFunction correction = nabla_antiderivative(integrand);
    GridFunction I(sol.x.scale_ptr(), DomainKind::Kappa, 1);
    parallel_for(I.count(), exec, [&](std::size_t i) {
        const std::size_t k = I.first_index() + i;
        I.value(k) = base.value(k) + correction.value(k);
    });
    return I;
}

GridFunction uncorrected_quantity(const Lagrangian& L, const Generator& gen,
                                  const ELSolution& sol, bool shifted_args, Exec exec) {
    return invariant_base(L, gen, sol.x, shifted_args, exec);
}

ConservationSeries conservation_series(const Lagrangian& L, const Generator& gen,
                                       const ELSolution& sol, bool allow_shifted, Exec exec) {
    GridFunction I = noether_invariant(L, gen, sol, allow_shifted, exec);
    GridFunction C = uncorrected_quantity(L, gen, sol, true, exec);
    GridFunction nI = detail::nabla_derivative_window(I, exec);
    GridFunction H = second_el_residual(L, sol.x, exec);
    ConservationSeries out{variant_name(sol.variant), std::move(I), std::move(C),
                           std::move(nI),             std::move(H), DriftStats{},
                           DriftStats{}};
    out.drift_I = drift_report(out.I);
    out.drift_C = drift_report(out.C);
    return out;
}

} // namespace tsn
