#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsnoether/grid_function.hpp"
#include "tsnoether/lagrangian.hpp"
#include "tsnoether/parallel.hpp"
#include "tsnoether/timescale.hpp"

namespace tsn {

/// Which Euler-Lagrange equation a trajectory solves: the non-shifted form
/// nabla[dL/dv(., x, Dx)] = nabla-sigma * dL/dx(., x, Dx), or the shifted form
/// Delta[dL/dv(., x-sigma, Dx)] = dL/dx(., x-sigma, Dx).
enum class ELVariant { NonShifted, Shifted };

const char* variant_name(ELVariant v);

/// Newton record for one solved step.
struct NewtonStat {
    std::size_t step = 0;       ///< global point index the step solved at
    std::size_t iterations = 0; ///< Newton updates taken
    double residual = 0.0;      ///< final max-norm of the step equation
};

struct SolveOptions {
    double tol = 1e-12;
    std::size_t max_iter = 50;
};

/// Forward-stepped initial-value solution. x is the source of truth: v is the
/// exact delta derivative of x (reconstructed, never stored independently) and
/// p is dL/dv along the trajectory, with shifted position arguments when the
/// variant is shifted.
struct ELSolution {
    ScalePtr scale;
    ELVariant variant = ELVariant::NonShifted;
    GridFunction x; ///< full domain, dim d
    GridFunction v; ///< T^kappa, dim d
    GridFunction p; ///< T^kappa, dim d
    std::vector<NewtonStat> stats;
    double tol = 0.0;
};

/// Step the non-shifted equation from x(a) = x0, Dx(a) = v0: the momentum
/// recurrence p_k = p_{k-1} + mu_k dL/dx is solved for v_k by Newton at each
/// interior point (nu_k nabla-sigma_k = mu_k turns the equation into that
/// recurrence), then x_{k+1} = x_k + mu_k v_k.
ELSolution solve_el_nonshifted(const Lagrangian& L, const ScalePtr& ts,
                               std::span<const double> x0, std::span<const double> v0,
                               const SolveOptions& opts = {});

/// Step the shifted equation: q_k = q_{k-1} + mu_{k-1} dL/dx(t_{k-1}, x_k,
/// v_{k-1}), with dL/dv(t_k, x_k + mu_k v, v) = q_k solved for v by Newton.
/// The first momentum uses the shifted position x_1 (kept in one place: here).
ELSolution solve_el_shifted(const Lagrangian& L, const ScalePtr& ts,
                            std::span<const double> x0, std::span<const double> v0,
                            const SolveOptions& opts = {});

/// Wrap an externally supplied full-domain path as an ELSolution (no Newton
/// stats; tol = 0). Used for closed-form trajectories.
ELSolution solution_from_path(const Lagrangian& L, const GridFunction& x, ELVariant variant);

/// Residual of the non-shifted equation at T^kappa_kappa, dim d.
GridFunction el_residual_nonshifted(const Lagrangian& L, const GridFunction& x,
                                    Exec exec = Exec::Auto);

/// Residual of the shifted equation where the Delta of the momentum exists:
/// global indices [0, card-2), dim d.
GridFunction el_residual_shifted(const Lagrangian& L, const GridFunction& x,
                                 Exec exec = Exec::Auto);

/// H(t) = nabla-sigma * dL/dt + nabla[Dx . dL/dv - L] at T^kappa_kappa, the
/// auxiliary quantity a critical point must annihilate for the uncorrected
/// conservation law to hold; generically nonzero on scattered scales.
GridFunction second_el_residual(const Lagrangian& L, const GridFunction& x,
                                Exec exec = Exec::Auto);

/// Per-point trajectory tables on T^kappa shared by residual and conservation
/// evaluations: v = Dx, the momentum p = dL/dv, and L, dL/dt, dL/dx, all at
/// (t_k, x_k, v_k), or at (t_k, x_{k+1}, v_k) when shifted_args is set.
struct PathTables {
    ScalePtr scale;
    std::size_t dim = 1;
    GridFunction v;
    GridFunction p;
    GridFunction value;
    GridFunction lt;
    GridFunction lx;
};

PathTables tabulate_path(const Lagrangian& L, const GridFunction& x, bool shifted_args,
                         Exec exec = Exec::Auto);

/// Sequential left-to-right dot product. One shared evaluation order keeps
/// cross-module identities exact in floating point.
double dot(std::span<const double> a, std::span<const double> b);

} // namespace tsn
