#include "tsnoether/el_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tsnoether/calculus.hpp"
#include "tsnoether/errors.hpp"
#include "tsnoether/format.hpp"

namespace tsn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

/// Gaussian elimination with partial pivoting; A is d*d row-major and is
/// destroyed, the solution replaces b. A pivot below the matrix scale times a
/// few ulps means the Newton system carries no usable direction.
void solve_linear(std::vector<double>& A, std::vector<double>& b, std::size_t d,
                  std::size_t step) {
    double amax = 0.0;
    for (double c : A) amax = std::max(amax, std::abs(c));
    if (!(amax > 0.0)) {
        throw SingularJacobian("zero Jacobian at step " + std::to_string(step));
    }
    const double tiny = amax * 64.0 * kEps * static_cast<double>(d);
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(A[r * d + col]) > std::abs(A[piv * d + col])) piv = r;
        }
        if (std::abs(A[piv * d + col]) <= tiny) {
            throw SingularJacobian("singular Jacobian at step " + std::to_string(step));
        }
        if (piv != col) {
            for (std::size_t c = col; c < d; ++c) {
                std::swap(A[piv * d + c], A[col * d + c]);
            }
            std::swap(b[piv], b[col]);
        }
        const double inv = 1.0 / A[col * d + col];
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = A[r * d + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col + 1; c < d; ++c) {
                A[r * d + c] -= f * A[col * d + c];
            }
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = d; col-- > 0;) {
        double s = b[col];
        for (std::size_t c = col + 1; c < d; ++c) {
            s -= A[col * d + c] * b[c];
        }
        b[col] = s / A[col * d + col];
    }
}

struct StepResult {
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Damped-free Newton iteration on v. F fills the residual and returns the
/// rounding floor of its own evaluation; the convergence target is
/// max(tol_abs, floor) because no iterate can beat the floor.
template <typename FFn, typename JFn>
StepResult newton_solve(std::size_t d, std::vector<double>& v, double tol_abs,
                        std::size_t max_iter, std::size_t step, FFn&& F, JFn&& J) {
    std::vector<double> r(d), jac(d * d), dv(d);
    double res = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter <= max_iter; ++iter) {
        const double floor = F(v, r);
        res = max_abs(r);
        if (!std::isfinite(res)) {
            throw NewtonDivergence("non-finite step equation at step " + std::to_string(step),
                                   step, res);
        }
        if (res <= std::max(tol_abs, floor)) {
            return {iter, res};
        }
        if (iter == max_iter) break;
        J(v, jac);
        dv = r;
        solve_linear(jac, dv, d, step);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] -= dv[i];
        }
    }
    throw NewtonDivergence("Newton stalled at step " + std::to_string(step) + " (residual " +
                               format_double(res) + ", tolerance " + format_double(tol_abs) +
                               ")",
                           step, res);
}

void check_initial(const Lagrangian& L, std::span<const double> x0,
                   std::span<const double> v0) {
    if (x0.size() != L.dim || v0.size() != L.dim) {
        throw DimensionMismatch("initial data dimension does not match the Lagrangian");
    }
    for (double c : x0) {
        if (!std::isfinite(c)) throw NonFiniteValue("x0 must be finite");
    }
    for (double c : v0) {
        if (!std::isfinite(c)) throw NonFiniteValue("v0 must be finite");
    }
}

void require_path(const Lagrangian& L, const GridFunction& x) {
    if (x.kind() != DomainKind::Full) {
        throw DomainMismatch("trajectory must cover the full scale");
    }
    if (x.dim() != L.dim) {
        throw DimensionMismatch("trajectory dimension does not match the Lagrangian");
    }
}

/// dL/dv along a stepped path, the solution's p field.
GridFunction path_momentum(const Lagrangian& L, const GridFunction& x, bool shifted_args,
                           const GridFunction& v) {
    const std::size_t d = L.dim;
    GridFunction p(x.scale_ptr(), DomainKind::Kappa, d);
    const std::size_t shift = shifted_args ? 1 : 0;
    for (std::size_t k = p.first_index(); k < p.end_index(); ++k) {
        L.dv(x.t(k), x.at(k + shift), v.at(k), p.at(k));
    }
    return p;
}

ELSolution assemble(const Lagrangian& L, GridFunction x, ELVariant variant,
                    std::vector<NewtonStat> stats, double tol) {
    GridFunction v = delta_derivative(x);
    GridFunction p = path_momentum(L, x, variant == ELVariant::Shifted, v);
    return ELSolution{x.scale_ptr(), variant,        std::move(x), std::move(v),
                      std::move(p),  std::move(stats), tol};
}

} // namespace

const char* variant_name(ELVariant v) {
    return v == ELVariant::NonShifted ? "nonshifted" : "shifted";
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

ELSolution solve_el_nonshifted(const Lagrangian& L, const ScalePtr& ts,
                               std::span<const double> x0, std::span<const double> v0,
                               const SolveOptions& opts) {
    check_initial(L, x0, v0);
    const std::size_t d = L.dim;
    const std::size_t S = ts->size();
    GridFunction x(ts, DomainKind::Full, d);
    std::vector<double> v(v0.begin(), v0.end());
    for (std::size_t i = 0; i < d; ++i) {
        x.value(0, i) = x0[i];
        x.value(1, i) = x0[i] + ts->mu(0) * v[i];
    }

    std::vector<double> p(d), lv(d), lx(d);
    L.dv(ts->point(0), x.at(0), v, p);

    std::vector<NewtonStat> stats;
    stats.reserve(S - 2);
    std::vector<double> jvv(d * d), jxv(d * d);
    std::vector<double> r0(d), r1(d), vh(d);
    for (std::size_t k = 1; k + 1 < S; ++k) {
        const double t = ts->point(k);
        const double mu = ts->mu(k);
        const double nu = ts->nu(k);
        std::span<const double> xk = x.at(k);

        auto eval_f = [&](const std::vector<double>& vv, std::vector<double>& out) {
            L.dv(t, xk, vv, lv);
            L.dx(t, xk, vv, lx);
            for (std::size_t i = 0; i < d; ++i) {
                out[i] = lv[i] - mu * lx[i] - p[i];
            }
            return 16.0 * kEps * (max_abs(lv) + mu * max_abs(lx) + max_abs(p));
        };
        auto eval_j = [&](const std::vector<double>& vv, std::vector<double>& jac) {
            if (L.has_second) {
                L.d2_vv(t, xk, vv, jvv);
                L.d2_xv(t, xk, vv, jxv);
                for (std::size_t i = 0; i < d * d; ++i) {
                    jac[i] = jvv[i] - mu * jxv[i];
                }
            } else {
                eval_f(vv, r0);
                vh = vv;
                for (std::size_t j = 0; j < d; ++j) {
                    const double h = std::max(1e-7, 1e-7 * std::abs(vv[j]));
                    vh[j] = vv[j] + h;
                    eval_f(vh, r1);
                    vh[j] = vv[j];
                    for (std::size_t i = 0; i < d; ++i) {
                        jac[i * d + j] = (r1[i] - r0[i]) / h;
                    }
                }
            }
        };

        const StepResult st = newton_solve(d, v, opts.tol * nu, opts.max_iter, k, eval_f, eval_j);
        stats.push_back({k, st.iterations, st.residual});
        L.dv(t, xk, v, p);
        for (std::size_t i = 0; i < d; ++i) {
            x.value(k + 1, i) = x.value(k, i) + mu * v[i];
        }
    }
    return assemble(L, std::move(x), ELVariant::NonShifted, std::move(stats), opts.tol);
}

ELSolution solve_el_shifted(const Lagrangian& L, const ScalePtr& ts,
                            std::span<const double> x0, std::span<const double> v0,
                            const SolveOptions& opts) {
    check_initial(L, x0, v0);
    const std::size_t d = L.dim;
    const std::size_t S = ts->size();
    GridFunction x(ts, DomainKind::Full, d);
    std::vector<double> v(v0.begin(), v0.end());
    for (std::size_t i = 0; i < d; ++i) {
        x.value(0, i) = x0[i];
        x.value(1, i) = x0[i] + ts->mu(0) * v[i];
    }

    std::vector<double> q(d), lv(d), lx(d), xs(d);
    L.dv(ts->point(0), x.at(1), v, q);

    std::vector<NewtonStat> stats;
    stats.reserve(S - 2);
    std::vector<double> jvv(d * d), jvx(d * d);
    std::vector<double> r0(d), r1(d), vh(d);
    for (std::size_t k = 1; k + 1 < S; ++k) {
        const double t = ts->point(k);
        const double mu = ts->mu(k);
        const double mu_prev = ts->mu(k - 1);
        std::span<const double> xk = x.at(k);

        L.dx(ts->point(k - 1), xk, v, lx);
        for (std::size_t i = 0; i < d; ++i) {
            q[i] += mu_prev * lx[i];
        }

        auto eval_f = [&](const std::vector<double>& vv, std::vector<double>& out) {
            for (std::size_t i = 0; i < d; ++i) {
                xs[i] = xk[i] + mu * vv[i];
            }
            L.dv(t, xs, vv, lv);
            for (std::size_t i = 0; i < d; ++i) {
                out[i] = lv[i] - q[i];
            }
            return 16.0 * kEps * (max_abs(lv) + max_abs(q) + max_abs(xs));
        };
        auto eval_j = [&](const std::vector<double>& vv, std::vector<double>& jac) {
            if (L.has_second) {
                for (std::size_t i = 0; i < d; ++i) {
                    xs[i] = xk[i] + mu * vv[i];
                }
                L.d2_vv(t, xs, vv, jvv);
                L.d2_vx(t, xs, vv, jvx);
                for (std::size_t i = 0; i < d * d; ++i) {
                    jac[i] = jvv[i] + mu * jvx[i];
                }
            } else {
                eval_f(vv, r0);
                vh = vv;
                for (std::size_t j = 0; j < d; ++j) {
                    const double h = std::max(1e-7, 1e-7 * std::abs(vv[j]));
                    vh[j] = vv[j] + h;
                    eval_f(vh, r1);
                    vh[j] = vv[j];
                    for (std::size_t i = 0; i < d; ++i) {
                        jac[i * d + j] = (r1[i] - r0[i]) / h;
                    }
                }
            }
        };

        // Residual nodes straddle two steps, so each step pays half the gap.
        const double tol_abs = opts.tol * 0.5 * std::min(mu_prev, mu);
        const StepResult st = newton_solve(d, v, tol_abs, opts.max_iter, k, eval_f, eval_j);
        stats.push_back({k, st.iterations, st.residual});
        for (std::size_t i = 0; i < d; ++i) {
            x.value(k + 1, i) = x.value(k, i) + mu * v[i];
        }
    }
    return assemble(L, std::move(x), ELVariant::Shifted, std::move(stats), opts.tol);
}

ELSolution solution_from_path(const Lagrangian& L, const GridFunction& x, ELVariant variant) {
    require_path(L, x);
    return assemble(L, x, variant, {}, 0.0);
}

PathTables tabulate_path(const Lagrangian& L, const GridFunction& x, bool shifted_args,
                         Exec exec) {
    require_path(L, x);
    const std::size_t d = L.dim;
    const ScalePtr ts = x.scale_ptr();
    PathTables tab{ts,
                   d,
                   delta_derivative(x, exec),
                   GridFunction(ts, DomainKind::Kappa, d),
                   GridFunction(ts, DomainKind::Kappa, 1),
                   GridFunction(ts, DomainKind::Kappa, 1),
                   GridFunction(ts, DomainKind::Kappa, d)};
    const std::size_t shift = shifted_args ? 1 : 0;
    parallel_for(tab.v.count(), exec, [&](std::size_t i) {
        const std::size_t k = tab.v.first_index() + i;
        const double t = x.t(k);
        std::span<const double> pos = x.at(k + shift);
        std::span<const double> vk = tab.v.at(k);
        L.dv(t, pos, vk, tab.p.at(k));
        L.dx(t, pos, vk, tab.lx.at(k));
        tab.value.value(k) = L.value(t, pos, vk);
        tab.lt.value(k) = L.dt(t, pos, vk);
    });
    return tab;
}

GridFunction el_residual_nonshifted(const Lagrangian& L, const GridFunction& x, Exec exec) {
    PathTables tab = tabulate_path(L, x, false, exec);
    GridFunction np = detail::nabla_derivative_window(tab.p, exec);
    GridFunction ns = nabla_sigma(x.scale_ptr(), exec);
    GridFunction r(x.scale_ptr(), DomainKind::KappaBoth, L.dim);
    parallel_for(r.count(), exec, [&](std::size_t i) {
        const std::size_t k = r.first_index() + i;
        for (std::size_t c = 0; c < L.dim; ++c) {
            r.value(k, c) = np.value(k, c) - ns.value(k) * tab.lx.value(k, c);
        }
    });
    return r;
}

GridFunction el_residual_shifted(const Lagrangian& L, const GridFunction& x, Exec exec) {
    PathTables tab = tabulate_path(L, x, true, exec);
    GridFunction dp = detail::delta_derivative_window(tab.p, exec);
    GridFunction r(x.scale_ptr(), DomainWindow{0, x.scale().size() - 2}, L.dim);
    parallel_for(r.count(), exec, [&](std::size_t i) {
        const std::size_t k = r.first_index() + i;
        for (std::size_t c = 0; c < L.dim; ++c) {
            r.value(k, c) = dp.value(k, c) - tab.lx.value(k, c);
        }
    });
    return r;
}

GridFunction second_el_residual(const Lagrangian& L, const GridFunction& x, Exec exec) {
    PathTables tab = tabulate_path(L, x, false, exec);
    GridFunction energy(x.scale_ptr(), DomainKind::Kappa, 1);
    parallel_for(energy.count(), exec, [&](std::size_t i) {
        const std::size_t k = energy.first_index() + i;
        energy.value(k) = dot(tab.p.at(k), tab.v.at(k)) - tab.value.value(k);
    });
    GridFunction ne = detail::nabla_derivative_window(energy, exec);
    GridFunction ns = nabla_sigma(x.scale_ptr(), exec);
    GridFunction h(x.scale_ptr(), DomainKind::KappaBoth, 1);
    parallel_for(h.count(), exec, [&](std::size_t i) {
        const std::size_t k = h.first_index() + i;
        h.value(k) = ns.value(k) * tab.lt.value(k) + ne.value(k);
    });
    return h;
}

} // namespace tsn
