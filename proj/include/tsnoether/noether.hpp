#pragma once

#include <cstddef>
#include <string>

#include "tsnoether/el_solver.hpp"
#include "tsnoether/grid_function.hpp"
#include "tsnoether/symmetry.hpp"

namespace tsn {

/// Deviation of a series from its first value. The relative floor keeps a
/// genuinely zero conserved value from dividing by zero.
struct DriftStats {
    double anchor = 0.0;        ///< q at the window's first point
    double max_deviation = 0.0; ///< max |q(t) - anchor|
    double relative_drift = 0.0;///< max_deviation / max(|anchor|, 1e-30)
    std::size_t argmax = 0;     ///< global index where the max occurs
};

DriftStats drift_report(const GridFunction& q, std::size_t comp = 0);

/// Integrand of the conservation law's correction term on T^kappa_kappa:
/// zeta(t) * (nabla-sigma * dL/dt - nabla[L - dL/dv . Dx]), arguments
/// (t, x, Dx). Pointwise equal to zeta * second_el_residual.
GridFunction conservation_integrand(const Lagrangian& L, const Generator& gen,
                                    const GridFunction& x, Exec exec = Exec::Auto);

/// The corrected invariant on T^kappa:
///   I(t) = zeta(sigma(t)) [L - dL/dv . Dx] + xi(x(sigma(t))) . dL/dv
///          + nabla-integral of the correction integrand over (a, t],
/// arguments (t, x, Dx). Constant along non-shifted EL solutions; requires one
/// unless allow_shifted (the comparison study evaluates it on shifted
/// trajectories knowing it has no reason to be conserved there).
GridFunction noether_invariant(const Lagrangian& L, const Generator& gen, const ELSolution& sol,
                               bool allow_shifted = false, Exec exec = Exec::Auto);

/// The uncorrected quantity on T^kappa: the boundary bracket of I with no
/// integral term. shifted_args moves the position arguments to x(sigma(t))
/// (xi's argument is x(sigma(t)) either way); that is the form the prior
/// literature states. Accepts either solver variant.
GridFunction uncorrected_quantity(const Lagrangian& L, const Generator& gen,
                                  const ELSolution& sol, bool shifted_args,
                                  Exec exec = Exec::Auto);

/// Everything the drift comparison needs for one trajectory.
struct ConservationSeries {
    std::string trajectory; ///< which EL variant produced the path
    GridFunction I;         ///< T^kappa
    GridFunction C;         ///< T^kappa, shifted-argument form
    GridFunction nabla_I;   ///< T^kappa_kappa
    GridFunction H;         ///< T^kappa_kappa, second-EL residual
    DriftStats drift_I;
    DriftStats drift_C;
};

ConservationSeries conservation_series(const Lagrangian& L, const Generator& gen,
                                       const ELSolution& sol, bool allow_shifted = false,
                                       Exec exec = Exec::Auto);

} // namespace tsn
