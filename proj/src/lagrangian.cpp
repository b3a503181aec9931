#include "tsnoether/lagrangian.hpp"

#include <cmath>
#include <memory>

#include "tsnoether/errors.hpp"

namespace tsn {

namespace {

double fd_step(double at) { return 1e-6 * std::max(1.0, std::abs(at)); }

/// Central difference of a scalar callable along one coordinate.
template <typename F>
double central(const F& f, double at) {
    const double h = fd_step(at);
    return (f(at + h) - f(at - h)) / (2.0 * h);
}

struct ExprTables {
    std::size_t dim;
    ExprPtr value;
    ExprPtr dt;
    std::vector<ExprPtr> dx, dv;
    std::vector<ExprPtr> d2_vv, d2_xv, d2_vx; // row-major
};

Lagrangian::Value value_of(std::shared_ptr<const ExprTables> tab) {
    return [tab](double t, std::span<const double> x, std::span<const double> v) {
        EvalEnv env;
        env.t = t;
        env.x = x;
        env.v = v;
        return evaluate(*tab->value, env);
    };
}

Lagrangian::Value scalar_of(std::shared_ptr<const ExprTables> tab, ExprPtr e) {
    return [tab, e = std::move(e)](double t, std::span<const double> x,
                                   std::span<const double> v) {
        EvalEnv env;
        env.t = t;
        env.x = x;
        env.v = v;
        return evaluate(*e, env);
    };
}

Lagrangian::Gradient gradient_of(std::shared_ptr<const ExprTables> tab,
                                 const std::vector<ExprPtr>* comps) {
    return [tab, comps](double t, std::span<const double> x, std::span<const double> v,
                        std::span<double> out) {
        EvalEnv env;
        env.t = t;
        env.x = x;
        env.v = v;
        for (std::size_t i = 0; i < comps->size(); ++i) {
            out[i] = evaluate(*(*comps)[i], env);
        }
    };
}

} // namespace

Lagrangian lagrangian_from_expr(const ExprPtr& expr, std::size_t dim) {
    if (dim == 0) {
        throw DimensionMismatch("dimension must be at least 1");
    }
    VarSet allowed;
    allowed.t = true;
    allowed.x_dim = dim;
    allowed.v_dim = dim;
    bind_check(*expr, allowed);

    auto tab = std::make_shared<ExprTables>();
    tab->dim = dim;
    tab->value = expr;
    tab->dt = differentiate(expr, VarKind::T);
    for (std::size_t i = 0; i < dim; ++i) {
        tab->dx.push_back(differentiate(expr, VarKind::X, static_cast<int>(i)));
        tab->dv.push_back(differentiate(expr, VarKind::V, static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            tab->d2_vv.push_back(differentiate(tab->dv[i], VarKind::V, static_cast<int>(j)));
            tab->d2_xv.push_back(differentiate(tab->dx[i], VarKind::V, static_cast<int>(j)));
            tab->d2_vx.push_back(differentiate(tab->dv[i], VarKind::X, static_cast<int>(j)));
        }
    }

    std::shared_ptr<const ExprTables> shared = tab;
    Lagrangian L;
    L.dim = dim;
    L.value = value_of(shared);
    L.dt = scalar_of(shared, shared->dt);
    L.dx = gradient_of(shared, &shared->dx);
    L.dv = gradient_of(shared, &shared->dv);
    L.d2_vv = gradient_of(shared, &shared->d2_vv);
    L.d2_xv = gradient_of(shared, &shared->d2_xv);
    L.d2_vx = gradient_of(shared, &shared->d2_vx);
    L.has_second = true;
    L.source = to_string(*expr);
    return L;
}

Lagrangian lagrangian_from_expr(std::string_view source, std::size_t dim) {
    return lagrangian_from_expr(parse_expression(source), dim);
}

Lagrangian lagrangian_from_closures(Lagrangian::Value value, Lagrangian::Value dt,
                                    Lagrangian::Gradient dx, Lagrangian::Gradient dv,
                                    std::size_t dim) {
    if (dim == 0) {
        throw DimensionMismatch("dimension must be at least 1");
    }
    if (!value) {
        throw Error("a Lagrangian needs a value callable");
    }
    Lagrangian L;
    L.dim = dim;
    L.value = value;
    L.dt = dt ? std::move(dt) : Lagrangian::Value([value](double t, std::span<const double> x,
                                                          std::span<const double> v) {
        return central([&](double tt) { return value(tt, x, v); }, t);
    });
    L.dx = dx ? std::move(dx)
              : Lagrangian::Gradient([value, dim](double t, std::span<const double> x,
                                                  std::span<const double> v,
                                                  std::span<double> out) {
                    std::vector<double> xx(x.begin(), x.end());
                    for (std::size_t i = 0; i < dim; ++i) {
                        const double save = xx[i];
                        out[i] = central(
                            [&](double xi) {
                                xx[i] = xi;
                                const double r = value(t, xx, v);
                                xx[i] = save;
                                return r;
                            },
                            save);
                    }
                });
    L.dv = dv ? std::move(dv)
              : Lagrangian::Gradient([value, dim](double t, std::span<const double> x,
                                                  std::span<const double> v,
                                                  std::span<double> out) {
                    std::vector<double> vv(v.begin(), v.end());
                    for (std::size_t i = 0; i < dim; ++i) {
                        const double save = vv[i];
                        out[i] = central(
                            [&](double vi) {
                                vv[i] = vi;
                                const double r = value(t, x, vv);
                                vv[i] = save;
                                return r;
                            },
                            save);
                    }
                });
    L.has_second = false;
    return L;
}

double partial_deviation(const Lagrangian& L, double t, std::span<const double> x,
                         std::span<const double> v) {
    const std::size_t d = L.dim;
    std::vector<double> grad(d);
    double worst = 0.0;
    auto update = [&worst](double got, double want) {
        const double scale = std::max({1.0, std::abs(got), std::abs(want)});
        worst = std::max(worst, std::abs(got - want) / scale);
    };

    update(L.dt(t, x, v), central([&](double tt) { return L.value(tt, x, v); }, t));

    std::vector<double> xx(x.begin(), x.end());
    L.dx(t, x, v, grad);
    for (std::size_t i = 0; i < d; ++i) {
        const double save = xx[i];
        const double fd = central(
            [&](double xi) {
                xx[i] = xi;
                const double r = L.value(t, xx, v);
                xx[i] = save;
                return r;
            },
            save);
        update(grad[i], fd);
    }

    std::vector<double> vv(v.begin(), v.end());
    L.dv(t, x, v, grad);
    for (std::size_t i = 0; i < d; ++i) {
        const double save = vv[i];
        const double fd = central(
            [&](double vi) {
                vv[i] = vi;
                const double r = L.value(t, x, vv);
                vv[i] = save;
                return r;
            },
            save);
        update(grad[i], fd);
    }
    return worst;
}

} // namespace tsn
