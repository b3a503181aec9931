#include "tsnoether/csv.hpp"

#include <cstddef>
#include <sstream>
#include <vector>

#include "tsnoether/errors.hpp"
#include "tsnoether/format.hpp"

namespace tsn {

namespace {

/// One named column group backed by a grid function.
struct Column {
    std::string name; ///< base name; components append _1.._d when suffixed
    const GridFunction* grid;
    bool suffixed = false; ///< force the _1 suffix even in dimension 1
};

void append_header(std::ostringstream& os, const Column& col) {
    if (col.grid->dim() == 1 && !col.suffixed) {
        os << ',' << col.name;
        return;
    }
    for (std::size_t c = 0; c < col.grid->dim(); ++c) {
        os << ',' << col.name << '_' << (c + 1);
    }
}

void append_cells(std::ostringstream& os, const Column& col, std::size_t k) {
    for (std::size_t c = 0; c < col.grid->dim(); ++c) {
        os << ',';
        if (col.grid->covers(k)) {
            os << format_double(col.grid->value(k, c));
        }
    }
}

std::string table(const TimeScale& ts, std::size_t row_first, std::size_t row_end,
                  std::span<const Column> cols) {
    std::ostringstream os;
    os << 't';
    for (const Column& col : cols) {
        append_header(os, col);
    }
    os << '\n';
    for (std::size_t k = row_first; k < row_end; ++k) {
        os << format_double(ts.point(k));
        for (const Column& col : cols) {
            append_cells(os, col, k);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace

std::string grid_csv(const GridFunction& f, std::span<const std::string> names) {
    if (!names.empty() && names.size() != f.dim()) {
        throw DimensionMismatch("need one column name per component");
    }
    std::ostringstream os;
    os << 't';
    for (std::size_t c = 0; c < f.dim(); ++c) {
        if (!names.empty()) {
            os << ',' << names[c];
        } else {
            os << ",f_" << (c + 1);
        }
    }
    os << '\n';
    for (std::size_t k = f.first_index(); k < f.end_index(); ++k) {
        os << format_double(f.t(k));
        for (std::size_t c = 0; c < f.dim(); ++c) {
            os << ',' << format_double(f.value(k, c));
        }
        os << '\n';
    }
    return os.str();
}

std::string solution_csv(const ELSolution& sol, const GridFunction& el_res) {
    GridFunction::require_same_scale(sol.x, el_res);
    const Column cols[] = {{"x", &sol.x, true},
                           {"v", &sol.v, true},
                           {"p", &sol.p, true},
                           {"el_residual", &el_res, false}};
    const TimeScale& ts = sol.x.scale();
    return table(ts, 0, ts.size(), cols);
}

std::string conservation_csv(const ConservationSeries& series) {
    const Column cols[] = {{"I", &series.I},
                           {"C", &series.C},
                           {"nabla_I", &series.nabla_I},
                           {"second_el_residual", &series.H}};
    const DomainWindow w = series.nabla_I.window();
    return table(series.I.scale(), w.first, w.end(), cols);
}

} // namespace tsn
