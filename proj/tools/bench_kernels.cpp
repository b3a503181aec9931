#include "tsnoether/calculus.hpp"
#include "tsnoether/el_solver.hpp"
#include "tsnoether/grid_function.hpp"
#include "tsnoether/lagrangian.hpp"
#include "tsnoether/noether.hpp"
#include "tsnoether/parallel.hpp"
#include "tsnoether/symmetry.hpp"
#include "tsnoether/timescale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <span>
#include <utility>
#include <vector>

// Times every Exec-aware grid kernel serial vs parallel on one large scale
// and checks the two results are bitwise identical, which the slot-per-index
// kernel design guarantees.

namespace {

using tsn::Exec;

double best_of_ms(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void row(const char* name, std::size_t n, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s %9zu %12.2f %12.2f %9.2fx  %s\n", name, n, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "yes" : "NO");
}

} // namespace

int main() {
    const std::size_t n = std::size_t{1} << 21;
    const double h = 1e-5;
    std::vector<double> pts(n);
    for (std::size_t k = 0; k < n; ++k) pts[k] = 1.0 + h * static_cast<double>(k);
    const tsn::ScalePtr ts = tsn::make_timescale(std::move(pts));

    const tsn::Lagrangian L = tsn::lagrangian_from_expr("x^2/t + t*v^2", 1);
    const tsn::Generator gen = tsn::generator_from_exprs("t", "0", 1);
    const auto path_fn = [](double t) { return std::sin(t); };
    const int reps = 3;

    std::printf("threads available: %d\n\n", tsn::max_threads());
    std::printf("%-24s %9s %12s %12s %10s  %s\n", "kernel", "n", "serial ms", "parallel ms",
                "speedup", "identical");

    tsn::GridFunction x_serial =
        tsn::GridFunction::sample(ts, tsn::DomainKind::Full, path_fn, Exec::Serial);
    tsn::GridFunction x_parallel = x_serial;
    const double sample_s = best_of_ms(reps, [&] {
        x_serial = tsn::GridFunction::sample(ts, tsn::DomainKind::Full, path_fn, Exec::Serial);
    });
    const double sample_p = best_of_ms(reps, [&] {
        x_parallel = tsn::GridFunction::sample(ts, tsn::DomainKind::Full, path_fn, Exec::Parallel);
    });
    row("sample", n, sample_s, sample_p, same_bits(x_serial.raw(), x_parallel.raw()));
    const tsn::GridFunction& x = x_serial;

    tsn::GridFunction dd_serial = tsn::delta_derivative(x, Exec::Serial);
    tsn::GridFunction dd_parallel = dd_serial;
    const double dd_s = best_of_ms(reps, [&] { dd_serial = tsn::delta_derivative(x, Exec::Serial); });
    const double dd_p =
        best_of_ms(reps, [&] { dd_parallel = tsn::delta_derivative(x, Exec::Parallel); });
    row("delta_derivative", n, dd_s, dd_p, same_bits(dd_serial.raw(), dd_parallel.raw()));

    tsn::GridFunction ns_serial = tsn::nabla_sigma(ts, Exec::Serial);
    tsn::GridFunction ns_parallel = ns_serial;
    const double ns_s = best_of_ms(reps, [&] { ns_serial = tsn::nabla_sigma(ts, Exec::Serial); });
    const double ns_p = best_of_ms(reps, [&] { ns_parallel = tsn::nabla_sigma(ts, Exec::Parallel); });
    row("nabla_sigma", n, ns_s, ns_p, same_bits(ns_serial.raw(), ns_parallel.raw()));

    tsn::PathTables tab_serial = tsn::tabulate_path(L, x, false, Exec::Serial);
    tsn::PathTables tab_parallel = tab_serial;
    const double tab_s =
        best_of_ms(reps, [&] { tab_serial = tsn::tabulate_path(L, x, false, Exec::Serial); });
    const double tab_p =
        best_of_ms(reps, [&] { tab_parallel = tsn::tabulate_path(L, x, false, Exec::Parallel); });
    row("tabulate_path", n, tab_s, tab_p,
        same_bits(tab_serial.p.raw(), tab_parallel.p.raw()) &&
            same_bits(tab_serial.value.raw(), tab_parallel.value.raw()) &&
            same_bits(tab_serial.lt.raw(), tab_parallel.lt.raw()) &&
            same_bits(tab_serial.lx.raw(), tab_parallel.lx.raw()));

    tsn::GridFunction el_serial = tsn::el_residual_nonshifted(L, x, Exec::Serial);
    tsn::GridFunction el_parallel = el_serial;
    const double el_s =
        best_of_ms(reps, [&] { el_serial = tsn::el_residual_nonshifted(L, x, Exec::Serial); });
    const double el_p =
        best_of_ms(reps, [&] { el_parallel = tsn::el_residual_nonshifted(L, x, Exec::Parallel); });
    row("el_residual", n, el_s, el_p, same_bits(el_serial.raw(), el_parallel.raw()));

    tsn::GridFunction ci_serial = tsn::conservation_integrand(L, gen, x, Exec::Serial);
    tsn::GridFunction ci_parallel = ci_serial;
    const double ci_s =
        best_of_ms(reps, [&] { ci_serial = tsn::conservation_integrand(L, gen, x, Exec::Serial); });
    const double ci_p = best_of_ms(
        reps, [&] { ci_parallel = tsn::conservation_integrand(L, gen, x, Exec::Parallel); });
    row("conservation_integrand", n, ci_s, ci_p, same_bits(ci_serial.raw(), ci_parallel.raw()));

    return 0;
}
