#include "tsnoether/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "tsnoether/calculus.hpp"
#include "tsnoether/el_solver.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/format.hpp"

namespace tsn {

namespace {

std::vector<ExprPtr> parse_components(std::string_view src, const VarSet& allowed,
                                      std::size_t dim) {
    std::vector<ExprPtr> comps;
    std::size_t start = 0;
    while (true) {
        const std::size_t semi = src.find(';', start);
        const std::string_view piece =
            semi == std::string_view::npos ? src.substr(start) : src.substr(start, semi - start);
        ExprPtr e = parse_expression(piece);
        bind_check(*e, allowed);
        comps.push_back(std::move(e));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    if (comps.size() != dim) {
        throw DimensionMismatch("expected " + std::to_string(dim) + " ';'-separated components, got " +
                                std::to_string(comps.size()));
    }
    return comps;
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

} // namespace

SymmetryGroup group_from_exprs(std::string_view g0_src, std::string_view g1_src,
                               std::size_t dim) {
    VarSet time_vars;
    time_vars.t = true;
    time_vars.s = true;
    ExprPtr g0 = parse_expression(g0_src);
    bind_check(*g0, time_vars);

    VarSet space_vars;
    space_vars.s = true;
    space_vars.x_dim = dim;
    std::vector<ExprPtr> g1 = parse_components(g1_src, space_vars, dim);

    SymmetryGroup G;
    G.dim = dim;
    G.g0 = [g0](double s, double t) {
        EvalEnv env;
        env.s = s;
        env.t = t;
        return evaluate(*g0, env);
    };
    G.g1 = [g1](double s, std::span<const double> x, std::span<double> out) {
        EvalEnv env;
        env.s = s;
        env.x = x;
        for (std::size_t i = 0; i < g1.size(); ++i) {
            out[i] = evaluate(*g1[i], env);
        }
    };
    G.g0_expr = std::move(g0);
    G.g1_expr = std::move(g1);
    return G;
}

SymmetryGroup group_from_closures(
    std::function<double(double, double)> g0,
    std::function<void(double, std::span<const double>, std::span<double>)> g1,
    std::size_t dim) {
    SymmetryGroup G;
    G.dim = dim;
    G.g0 = std::move(g0);
    G.g1 = std::move(g1);
    return G;
}

Generator generator_from_exprs(std::string_view zeta_src, std::string_view xi_src,
                               std::size_t dim) {
    VarSet time_vars;
    time_vars.t = true;
    ExprPtr zeta = parse_expression(zeta_src);
    bind_check(*zeta, time_vars);

    VarSet space_vars;
    space_vars.x_dim = dim;
    std::vector<ExprPtr> xi = parse_components(xi_src, space_vars, dim);

    Generator gen;
    gen.dim = dim;
    gen.zeta = [zeta](double t) {
        EvalEnv env;
        env.t = t;
        return evaluate(*zeta, env);
    };
    gen.xi = [xi](std::span<const double> x, std::span<double> out) {
        EvalEnv env;
        env.x = x;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            out[i] = evaluate(*xi[i], env);
        }
    };
    gen.provenance = GeneratorProvenance::Analytic;
    gen.zeta_source = to_string(*zeta);
    std::string xs;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (i) xs += "; ";
        xs += to_string(*xi[i]);
    }
    gen.xi_source = xs;
    return gen;
}

Generator generator_from_closures(
    std::function<double(double)> zeta,
    std::function<void(std::span<const double>, std::span<double>)> xi, std::size_t dim) {
    Generator gen;
    gen.dim = dim;
    gen.zeta = std::move(zeta);
    gen.xi = std::move(xi);
    gen.provenance = GeneratorProvenance::Analytic;
    return gen;
}

Generator extract_generator(const SymmetryGroup& G, const TimeScale& ts,
                            std::span<const double> probe_points, double ds) {
    const std::size_t d = G.dim;
    if (G.g0_expr && G.g1_expr.size() == d) {
        // Symbolic path: d/ds at s = 0 stays an expression; no step error.
        ExprPtr dz = differentiate(G.g0_expr, VarKind::S);
        std::vector<ExprPtr> dxi;
        dxi.reserve(d);
        for (const ExprPtr& c : G.g1_expr) {
            dxi.push_back(differentiate(c, VarKind::S));
        }
        Generator gen;
        gen.dim = d;
        gen.zeta = [dz](double t) {
            EvalEnv env;
            env.t = t;
            env.s = 0.0;
            return evaluate(*dz, env);
        };
        gen.xi = [dxi](std::span<const double> x, std::span<double> out) {
            EvalEnv env;
            env.x = x;
            env.s = 0.0;
            for (std::size_t i = 0; i < dxi.size(); ++i) {
                out[i] = evaluate(*dxi[i], env);
            }
        };
        gen.provenance = GeneratorProvenance::Analytic;
        gen.zeta_source = to_string(*dz);
        std::string xs;
        for (std::size_t i = 0; i < dxi.size(); ++i) {
            if (i) xs += "; ";
            xs += to_string(*dxi[i]);
        }
        gen.xi_source = xs;
        return gen;
    }

    if (!(ds > 0.0)) {
        throw Error("extract_generator needs a positive step");
    }

    // Numeric path: central differences at s = 0, consistency-checked against
    // the half step over the scale points and any extra probes.
    auto central_t = [&G](double t, double h) { return (G.g0(h, t) - G.g0(-h, t)) / (2.0 * h); };
    auto probe_one = [&](double full, double half, double where) {
        const double rel = std::abs(full - half) / std::max({1.0, std::abs(full), std::abs(half)});
        if (rel > 1e-4) {
            throw InconsistentRichardson("generator steps ds and ds/2 disagree (rel " +
                                         format_double(rel) + ") near " + format_double(where));
        }
    };

    std::vector<double> probes(ts.points().begin(), ts.points().end());
    probes.insert(probes.end(), probe_points.begin(), probe_points.end());
    std::vector<double> xbuf(d), hi(d), lo(d), hi2(d), lo2(d);
    for (double t : probes) {
        probe_one(central_t(t, ds), central_t(t, ds / 2.0), t);
        // Reuse the same values as coordinate probes for xi.
        std::fill(xbuf.begin(), xbuf.end(), t);
        G.g1(ds, xbuf, hi);
        G.g1(-ds, xbuf, lo);
        G.g1(ds / 2.0, xbuf, hi2);
        G.g1(-ds / 2.0, xbuf, lo2);
        for (std::size_t i = 0; i < d; ++i) {
            probe_one((hi[i] - lo[i]) / (2.0 * ds), (hi2[i] - lo2[i]) / ds, t);
        }
    }

    Generator gen;
    gen.dim = d;
    gen.zeta = [g0 = G.g0, ds](double t) { return (g0(ds, t) - g0(-ds, t)) / (2.0 * ds); };
    gen.xi = [g1 = G.g1, ds, d](std::span<const double> x, std::span<double> out) {
        std::vector<double> up(d), down(d);
        g1(ds, x, up);
        g1(-ds, x, down);
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = (up[i] - down[i]) / (2.0 * ds);
        }
    };
    gen.provenance = GeneratorProvenance::FiniteDifference;
    gen.ds = ds;
    return gen;
}

AdmissibilityReport admissibility_check(const SymmetryGroup& G, const TimeScale& ts,
                                        std::span<const double> s_samples) {
    const std::size_t S = ts.size();
    const std::size_t d = G.dim;
    AdmissibilityReport rep;

    // Identity at s = 0, deviation normalized by 1 + |value|.
    double dev = 0.0;
    std::vector<double> xbuf(d), out(d);
    for (std::size_t k = 0; k < S; ++k) {
        const double t = ts.point(k);
        dev = std::max(dev, std::abs(G.g0(0.0, t) - t) / (1.0 + std::abs(t)));
        std::fill(xbuf.begin(), xbuf.end(), t);
        G.g1(0.0, xbuf, out);
        for (std::size_t i = 0; i < d; ++i) {
            dev = std::max(dev, std::abs(out[i] - t) / (1.0 + std::abs(t)));
        }
    }
    rep.identity_deviation = dev;
    rep.identity_at_zero = dev <= 1e-12;

    bool all = rep.identity_at_zero;
    std::vector<double> tg(S);
    for (double s : s_samples) {
        AdmissibilitySample sample;
        sample.s = s;
        for (std::size_t k = 0; k < S; ++k) {
            tg[k] = G.g0(s, ts.point(k));
        }
        sample.strictly_increasing = true;
        sample.delta_nonzero = true;
        for (std::size_t k = 0; k + 1 < S; ++k) {
            if (!(tg[k + 1] > tg[k])) sample.strictly_increasing = false;
            if (tg[k + 1] - tg[k] == 0.0) sample.delta_nonzero = false;
        }
        try {
            image_scale(ts, [&G, s](double t) { return G.g0(s, t); });
            sample.image_is_scale = true;
        } catch (const Error&) {
            sample.image_is_scale = false;
        }
        all = all && sample.pass();
        rep.samples.push_back(sample);
    }
    rep.pass = all;
    return rep;
}

std::string AdmissibilityReport::summary() const {
    std::ostringstream os;
    os << "admissibility: " << (pass ? "PASS" : "FAIL") << "\n";
    os << "  identity at s=0: " << yesno(identity_at_zero) << " (deviation "
       << format_double(identity_deviation) << ")\n";
    for (const AdmissibilitySample& smp : samples) {
        os << "  s=" << format_double(smp.s) << ": strictly increasing "
           << yesno(smp.strictly_increasing) << ", image is a scale " << yesno(smp.image_is_scale)
           << ", Delta g0 nonzero " << yesno(smp.delta_nonzero)
           << ", regularity vacuous on a finite scale\n";
    }
    return os.str();
}

InvarianceReport invariance_check(const Lagrangian& L, const SymmetryGroup& G,
                                  const GridFunction& x, std::span<const double> s_samples) {
    if (x.kind() != DomainKind::Full) {
        throw DomainMismatch("invariance check needs a full-domain path");
    }
    if (x.dim() != L.dim || G.dim != L.dim) {
        throw DimensionMismatch("path/group dimension does not match the Lagrangian");
    }
    const TimeScale& ts = x.scale();
    const std::size_t S = ts.size();
    const std::size_t d = L.dim;

    GridFunction v = delta_derivative(x);
    std::vector<double> base(S - 1);
    for (std::size_t k = 0; k + 1 < S; ++k) {
        base[k] = L.value(ts.point(k), x.at(k), v.at(k));
    }
    // Prefix action integrals; P[k] = integral over [a, t_k].
    std::vector<double> pb(S, 0.0);
    for (std::size_t k = 0; k + 1 < S; ++k) {
        pb[k + 1] = pb[k] + ts.mu(k) * base[k];
    }

    InvarianceReport rep;
    rep.action = pb[S - 1];
    rep.threshold = 1e-10 * (1.0 + std::abs(rep.action));

    std::vector<double> tg(S);
    std::vector<double> y(S * d), w(d);
    std::vector<double> pc(S, 0.0);
    bool all = true;
    for (double s : s_samples) {
        InvarianceSample sample;
        sample.s = s;
        for (std::size_t k = 0; k < S; ++k) {
            tg[k] = G.g0(s, ts.point(k));
            G.g1(s, x.at(k), std::span<double>(y.data() + k * d, d));
        }
        double max_point = 0.0;
        for (std::size_t k = 0; k + 1 < S; ++k) {
            const double dg = (tg[k + 1] - tg[k]) / ts.mu(k);
            if (dg == 0.0) {
                throw NumericDomain("division by zero", "Delta g0");
            }
            for (std::size_t i = 0; i < d; ++i) {
                w[i] = (y[(k + 1) * d + i] - y[k * d + i]) / ts.mu(k) / dg;
            }
            const double c =
                L.value(tg[k], std::span<const double>(y.data() + k * d, d), w) * dg;
            max_point = std::max(max_point, std::abs(c - base[k]));
            pc[k + 1] = pc[k] + ts.mu(k) * c;
        }
        // The worst subinterval mismatch over ALL endpoint pairs is the spread
        // of D_k = pc[k] - pb[k]: the pair difference is D_j - D_i.
        double dmin = 0.0, dmax = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const double dk = pc[k] - pb[k];
            dmin = std::min(dmin, dk);
            dmax = std::max(dmax, dk);
        }
        sample.max_interval_diff = dmax - dmin;
        sample.max_pointwise_diff = max_point;
        sample.pass = sample.max_interval_diff <= rep.threshold;
        all = all && sample.pass;
        rep.samples.push_back(sample);
    }
    rep.pass = all;
    return rep;
}

std::string InvarianceReport::summary() const {
    std::ostringstream os;
    os << "invariance: " << (pass ? "PASS" : "FAIL") << " (action integral "
       << format_double(action) << ", threshold " << format_double(threshold) << ")\n";
    for (const InvarianceSample& smp : samples) {
        os << "  s=" << format_double(smp.s) << ": max interval mismatch "
           << format_double(smp.max_interval_diff) << ", max pointwise "
           << format_double(smp.max_pointwise_diff) << " -> " << (smp.pass ? "pass" : "FAIL")
           << "\n";
    }
    return os.str();
}

GridFunction infinitesimal_invariance_residual(const Lagrangian& L, const Generator& gen,
                                               const GridFunction& x, Exec exec) {
    if (x.kind() != DomainKind::Full) {
        throw DomainMismatch("invariance residual needs a full-domain path");
    }
    if (x.dim() != L.dim || gen.dim != L.dim) {
        throw DimensionMismatch("path/generator dimension does not match the Lagrangian");
    }
    const ScalePtr ts = x.scale_ptr();
    const std::size_t d = L.dim;

    PathTables tab = tabulate_path(L, x, false, exec);
    GridFunction zg = GridFunction::sample(ts, DomainKind::Full, gen.zeta, exec);
    GridFunction xig(ts, DomainKind::Full, d);
    parallel_for(ts->size(), exec, [&](std::size_t k) { gen.xi(x.at(k), xig.at(k)); });
    GridFunction dz = delta_derivative(zg, exec);
    GridFunction dxi = delta_derivative(xig, exec);

    GridFunction r(ts, DomainKind::Kappa, 1);
    parallel_for(r.count(), exec, [&](std::size_t i) {
        const std::size_t k = r.first_index() + i;
        const double a = tab.value.value(k) - dot(tab.p.at(k), tab.v.at(k));
        r.value(k) = tab.lt.value(k) * zg.value(k) + dot(tab.lx.at(k), xig.at(k)) +
                     dot(tab.p.at(k), dxi.at(k)) + a * dz.value(k);
    });
    return r;
}

} // namespace tsn
