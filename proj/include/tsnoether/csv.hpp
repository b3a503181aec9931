#pragma once

#include <span>
#include <string>

#include "tsnoether/el_solver.hpp"
#include "tsnoether/grid_function.hpp"
#include "tsnoether/noether.hpp"

namespace tsn {

/// CSV text for one grid function: header `t,f_1,...,f_d` (or the given
/// component names), one row per covered point, shortest round-trip decimals,
/// LF line endings. Pure string builder; callers own the file IO.
std::string grid_csv(const GridFunction& f, std::span<const std::string> names = {});

/// Solution table over the full scale: `t,x_1..,v_1..,p_1..,el_residual`.
/// Cells outside a column's domain stay empty; el_res may live on whichever
/// window its variant defines it on.
std::string solution_csv(const ELSolution& sol, const GridFunction& el_res);

/// Conservation table on T^kappa_kappa (where every column exists):
/// `t,I,C,nabla_I,second_el_residual`.
std::string conservation_csv(const ConservationSeries& series);

} // namespace tsn
