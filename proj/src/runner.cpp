#include "tsnoether/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "tsnoether/csv.hpp"
#include "tsnoether/el_solver.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/format.hpp"
#include "tsnoether/lagrangian.hpp"
#include "tsnoether/svg.hpp"
#include "tsnoether/symmetry.hpp"

namespace tsn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string ms_text(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f ms", ms);
    return buf;
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("short write to '" + path + "'");
    }
}

ChartSeries chart_from(const GridFunction& f, std::string name) {
    ChartSeries s;
    s.name = std::move(name);
    s.t.reserve(f.count());
    s.y.reserve(f.count());
    for (std::size_t k = f.first_index(); k < f.end_index(); ++k) {
        s.t.push_back(f.t(k));
        s.y.push_back(f.value(k));
    }
    return s;
}

void describe_solution(std::ostringstream& txt, const ELSolution& sol, double ms) {
    std::size_t max_iter = 0;
    double worst = 0.0;
    for (const NewtonStat& st : sol.stats) {
        max_iter = std::max(max_iter, st.iterations);
        worst = std::max(worst, st.residual);
    }
    txt << "solve " << variant_name(sol.variant) << ": " << sol.x.scale().size()
        << " points, max Newton iterations " << max_iter << ", worst step residual "
        << format_double(worst) << " (" << ms_text(ms) << ")\n";
}

void describe_series(std::ostringstream& txt, const ConservationSeries& cs) {
    txt << "I along the " << cs.trajectory << " trajectory: I(a) = "
        << format_double(cs.drift_I.anchor) << ", max drift " << format_double(cs.drift_I.max_deviation)
        << ", relative " << format_double(cs.drift_I.relative_drift) << "\n";
    txt << "C along the " << cs.trajectory << " trajectory: C(a) = "
        << format_double(cs.drift_C.anchor) << ", max drift " << format_double(cs.drift_C.max_deviation)
        << ", relative " << format_double(cs.drift_C.relative_drift) << "\n";
    if (cs.drift_I.relative_drift > 0.0) {
        txt << "  drift ratio C/I = "
            << format_double(cs.drift_C.relative_drift / cs.drift_I.relative_drift) << "\n";
    }
}

} // namespace

ExperimentSpec bt_example_spec() {
    ExperimentSpec spec;
    spec.scale_kind = ScaleKind::Uniform;
    spec.a = 1.0;
    spec.b = 10.0;
    spec.h = 1e-3;
    spec.lagrangian = "x^2/t + t*v^2";
    spec.dimension = 1;
    spec.g0 = "t*exp(s)";
    spec.g1 = "x";
    spec.x0 = {1.0};
    spec.v0 = {0.1};
    spec.variant = VariantChoice::Both;
    spec.tol = 1e-12;
    spec.s_samples = {-1.0, -0.5, 0.0, 0.5, 1.0};
    spec.output_dir = "out";
    return spec;
}

RunReport run_experiment(const ExperimentSpec& spec_in, const RunOptions& opts) {
    ExperimentSpec spec = spec_in;
    if (opts.tol) spec.tol = *opts.tol;
    if (opts.variant) spec.variant = *opts.variant;
    if (opts.out_dir) spec.output_dir = *opts.out_dir;

    RunReport rep;
    std::ostringstream txt;

    const ScalePtr ts = build_scale(spec);
    const Lagrangian L = lagrangian_from_expr(spec.lagrangian, spec.dimension);
    txt << "scale: " << ts->size() << " points on [" << format_double(ts->a()) << ", "
        << format_double(ts->b()) << "]\n";
    txt << "lagrangian: " << L.source << " (dimension " << spec.dimension << ")\n";

    // Straight probe path through the initial data; used by the invariance
    // integral, which quantifies over paths but needs a concrete one.
    GridFunction probe(ts, DomainKind::Full, spec.dimension);
    for (std::size_t k = 0; k < ts->size(); ++k) {
        for (std::size_t i = 0; i < spec.dimension; ++i) {
            probe.value(k, i) = spec.x0[i] + spec.v0[i] * (ts->point(k) - ts->a());
        }
    }

    std::optional<SymmetryGroup> G;
    if (spec.has_group()) {
        G = group_from_exprs(spec.g0, spec.g1, spec.dimension);
        const auto t0 = Clock::now();
        const AdmissibilityReport adm = admissibility_check(*G, *ts, spec.s_samples);
        rep.admissibility_pass = adm.pass;
        txt << adm.summary();
        try {
            const InvarianceReport inv = invariance_check(L, *G, probe, spec.s_samples);
            rep.invariance_pass = inv.pass;
            txt << inv.summary();
        } catch (const Error& e) {
            rep.invariance_pass = false;
            txt << "invariance: ERROR: " << e.what() << "\n";
        }
        txt << "symmetry checks took " << ms_text(ms_since(t0)) << "\n";
    } else {
        txt << "no group given; admissibility and invariance are vacuous\n";
    }

    const bool checks_pass = rep.admissibility_pass && rep.invariance_pass;
    if (opts.check_only) {
        rep.exit_code = checks_pass ? 0 : 2;
        rep.text = txt.str();
        return rep;
    }
    if (!checks_pass && !opts.allow_noninvariant) {
        txt << "stopping: symmetry checks failed (pass --allow-noninvariant to continue)\n";
        rep.exit_code = 2;
        rep.text = txt.str();
        return rep;
    }

    Generator gen;
    if (spec.has_generator()) {
        gen = generator_from_exprs(spec.zeta, spec.xi, spec.dimension);
        txt << "generator (given): zeta = " << gen.zeta_source << ", xi = " << gen.xi_source
            << "\n";
    } else {
        gen = extract_generator(*G, *ts);
        txt << "generator (from the group): zeta = " << gen.zeta_source
            << ", xi = " << gen.xi_source << "\n";
    }

    std::vector<ELSolution> sols;
    try {
        const SolveOptions sopt{spec.tol, 50};
        if (spec.variant != VariantChoice::Shifted) {
            const auto t0 = Clock::now();
            sols.push_back(solve_el_nonshifted(L, ts, spec.x0, spec.v0, sopt));
            describe_solution(txt, sols.back(), ms_since(t0));
        }
        if (spec.variant != VariantChoice::NonShifted) {
            const auto t0 = Clock::now();
            sols.push_back(solve_el_shifted(L, ts, spec.x0, spec.v0, sopt));
            describe_solution(txt, sols.back(), ms_since(t0));
        }
    } catch (const Error& e) {
        txt << "solver: FAILED: " << e.what() << "\n";
        rep.exit_code = 3;
        rep.text = txt.str();
        return rep;
    }

    try {
        for (const ELSolution& sol : sols) {
            rep.series.push_back(
                conservation_series(L, gen, sol, sol.variant == ELVariant::Shifted));
            describe_series(txt, rep.series.back());
        }
    } catch (const Error& e) {
        txt << "conservation: FAILED: " << e.what() << "\n";
        rep.exit_code = 3;
        rep.text = txt.str();
        return rep;
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + spec.output_dir + "'");
    }
    auto emit = [&](const std::string& name, std::string_view content) {
        const std::string path = (fs::path(spec.output_dir) / name).string();
        write_file(path, content);
        rep.files.push_back(path);
    };

    for (std::size_t i = 0; i < sols.size(); ++i) {
        const ELSolution& sol = sols[i];
        const GridFunction res = sol.variant == ELVariant::NonShifted
                                     ? el_residual_nonshifted(L, sol.x)
                                     : el_residual_shifted(L, sol.x);
        emit(std::string("solution_") + variant_name(sol.variant) + ".csv",
             solution_csv(sol, res));
        emit(std::string("conservation_") + variant_name(sol.variant) + ".csv",
             conservation_csv(rep.series[i]));
    }

    // The headline figure tracks the non-shifted trajectory when present.
    const ConservationSeries* fig = nullptr;
    for (const ConservationSeries& cs : rep.series) {
        if (!fig || cs.trajectory == variant_name(ELVariant::NonShifted)) fig = &cs;
    }
    if (fig) {
        const ChartSeries chart[] = {chart_from(fig->I, "I"), chart_from(fig->C, "C")};
        emit("figure1.svg",
             render_line_chart(chart, std::string("conserved quantities, ") + fig->trajectory +
                                          " trajectory"));
    }

    txt << "files:";
    for (const std::string& f : rep.files) {
        txt << ' ' << f;
    }
    txt << " " << (fs::path(spec.output_dir) / "report.txt").string() << "\n";
    rep.text = txt.str();
    emit("report.txt", rep.text);
    return rep;
}

} // namespace tsn
