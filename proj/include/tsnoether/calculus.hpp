#pragma once

#include <vector>

#include "tsnoether/grid_function.hpp"

namespace tsn {

/// Delta derivative (f(sigma(t)) - f(t)) / mu(t). Public form takes a
/// full-domain f and returns values on T^kappa.
GridFunction delta_derivative(const GridFunction& f, Exec exec = Exec::Auto);

/// Nabla derivative (f(t) - f(rho(t))) / nu(t). Full domain in, T_kappa out.
GridFunction nabla_derivative(const GridFunction& f, Exec exec = Exec::Auto);

/// Delta integral over [t_lo, t_hi): sum of mu(tau) f(tau). One value per
/// component; [t, t) is the empty sum.
std::vector<double> delta_integral(const GridFunction& f, double t_lo, double t_hi);

/// Nabla integral over (t_lo, t_hi]: sum of nu(tau) f(tau).
std::vector<double> nabla_integral(const GridFunction& f, double t_lo, double t_hi);

/// nabla-sigma(t) = mu(t)/nu(t) at interior points (T^kappa_kappa). Equals 1
/// on uniform grids; the jump-compression factor everywhere else.
GridFunction nabla_sigma(ScalePtr scale, Exec exec = Exec::Auto);

/// f(sigma(t)) on the full domain (sigma(b) = b keeps it total).
GridFunction compose_sigma(const GridFunction& f, Exec exec = Exec::Auto);

/// U(t) = delta-integral of f from the left end of f's window; U lives one
/// index wider to the right, U(anchor) = 0. Serial prefix sum by design.
GridFunction delta_antiderivative(const GridFunction& f);

/// V(t) = nabla-integral of f from just left of f's window; one index wider
/// to the left, V(anchor) = 0. Serial prefix sum by design.
GridFunction nabla_antiderivative(const GridFunction& f);

namespace detail {

/// Window-general delta derivative: input [i0, i1) gives output [i0, i1-1).
GridFunction delta_derivative_window(const GridFunction& f, Exec exec = Exec::Auto);

/// Window-general nabla derivative: input [i0, i1) gives output [i0+1, i1).
GridFunction nabla_derivative_window(const GridFunction& f, Exec exec = Exec::Auto);

} // namespace detail

} // namespace tsn
