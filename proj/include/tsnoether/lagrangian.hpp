#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsnoether/expr.hpp"

namespace tsn {

/// A Lagrangian L(t, x, v) with x, v in R^d. First partials are always
/// available (symbolic when built from an expression, central finite
/// differences when built from a bare value closure). Second partials exist
/// only on the symbolic path; solvers fall back to forward-difference
/// Jacobians without them. All callables must be pure: the grid kernels
/// evaluate them concurrently.
struct Lagrangian {
    using Value = std::function<double(double, std::span<const double>, std::span<const double>)>;
    using Gradient =
        std::function<void(double, std::span<const double>, std::span<const double>,
                           std::span<double>)>;

    std::size_t dim = 1;
    Value value;
    Value dt;
    Gradient dx; ///< d components
    Gradient dv; ///< d components

    /// Row-major d*d second partials; row i, column j.
    Gradient d2_vv; ///< d2L / dv_i dv_j
    Gradient d2_xv; ///< d2L / dx_i dv_j
    Gradient d2_vx; ///< d2L / dv_i dx_j
    bool has_second = false;

    /// Printable form when built from an expression, empty otherwise.
    std::string source;
};

/// Compile an expression into a Lagrangian with symbolic partials. Allowed
/// variables: t, x1..xd, v1..vd (x, v alias the single components for d = 1).
Lagrangian lagrangian_from_expr(const ExprPtr& expr, std::size_t dim);
Lagrangian lagrangian_from_expr(std::string_view source, std::size_t dim);

/// Wrap user closures. Missing partials (empty std::function) are filled with
/// central finite differences of `value`.
Lagrangian lagrangian_from_closures(Lagrangian::Value value, Lagrangian::Value dt,
                                    Lagrangian::Gradient dx, Lagrangian::Gradient dv,
                                    std::size_t dim);

/// Largest relative deviation between the stored partials and central finite
/// differences of the value callable at one probe point. Validation helper;
/// healthy Lagrangians stay below ~1e-5 at O(1) magnitudes.
double partial_deviation(const Lagrangian& L, double t, std::span<const double> x,
                         std::span<const double> v);

} // namespace tsn
