#include "tsnoether/calculus.hpp"

#include "tsnoether/errors.hpp"

namespace tsn {

namespace detail {

GridFunction delta_derivative_window(const GridFunction& f, Exec exec) {
    if (f.count() < 2) {
        throw DomainMismatch("delta derivative needs at least two covered points");
    }
    GridFunction out(f.scale_ptr(), DomainWindow{f.first_index(), f.count() - 1}, f.dim());
    const TimeScale& ts = f.scale();
    const std::size_t dim = f.dim();
    parallel_for(out.count(), exec, [&](std::size_t i) {
        const std::size_t k = out.first_index() + i;
        const double inv_mu = 1.0 / ts.mu(k);
        for (std::size_t c = 0; c < dim; ++c) {
            out.value(k, c) = (f.value(k + 1, c) - f.value(k, c)) * inv_mu;
        }
    });
    return out;
}

GridFunction nabla_derivative_window(const GridFunction& f, Exec exec) {
    if (f.count() < 2) {
        throw DomainMismatch("nabla derivative needs at least two covered points");
    }
    GridFunction out(f.scale_ptr(), DomainWindow{f.first_index() + 1, f.count() - 1}, f.dim());
    const TimeScale& ts = f.scale();
    const std::size_t dim = f.dim();
    parallel_for(out.count(), exec, [&](std::size_t i) {
        const std::size_t k = out.first_index() + i;
        const double inv_nu = 1.0 / ts.nu(k);
        for (std::size_t c = 0; c < dim; ++c) {
            out.value(k, c) = (f.value(k, c) - f.value(k - 1, c)) * inv_nu;
        }
    });
    return out;
}

} // namespace detail

GridFunction delta_derivative(const GridFunction& f, Exec exec) {
    if (f.kind() != DomainKind::Full) {
        throw DomainMismatch("delta_derivative expects a full-domain function");
    }
    return detail::delta_derivative_window(f, exec);
}

GridFunction nabla_derivative(const GridFunction& f, Exec exec) {
    if (f.kind() != DomainKind::Full) {
        throw DomainMismatch("nabla_derivative expects a full-domain function");
    }
    return detail::nabla_derivative_window(f, exec);
}

// The integrals and antiderivatives below are deliberately serial: a fixed
// summation order is part of the determinism contract.

std::vector<double> delta_integral(const GridFunction& f, double t_lo, double t_hi) {
    const TimeScale& ts = f.scale();
    const std::size_t lo = ts.require_index(t_lo);
    const std::size_t hi = ts.require_index(t_hi);
    if (hi < lo) {
        throw ReversedBounds("delta integral bounds reversed");
    }
    if (lo < hi && (lo < f.first_index() || hi > f.end_index())) {
        throw DomainMismatch("delta integral needs f on [t_lo, t_hi)");
    }
    std::vector<double> acc(f.dim(), 0.0);
    for (std::size_t k = lo; k < hi; ++k) {
        const double mu = ts.mu(k);
        for (std::size_t c = 0; c < f.dim(); ++c) {
            acc[c] += mu * f.value(k, c);
        }
    }
    return acc;
}

std::vector<double> nabla_integral(const GridFunction& f, double t_lo, double t_hi) {
    const TimeScale& ts = f.scale();
    const std::size_t lo = ts.require_index(t_lo);
    const std::size_t hi = ts.require_index(t_hi);
    if (hi < lo) {
        throw ReversedBounds("nabla integral bounds reversed");
    }
    if (lo < hi && (lo + 1 < f.first_index() || hi + 1 > f.end_index())) {
        throw DomainMismatch("nabla integral needs f on (t_lo, t_hi]");
    }
    std::vector<double> acc(f.dim(), 0.0);
    for (std::size_t k = lo + 1; k <= hi; ++k) {
        const double nu = ts.nu(k);
        for (std::size_t c = 0; c < f.dim(); ++c) {
            acc[c] += nu * f.value(k, c);
        }
    }
    return acc;
}

GridFunction nabla_sigma(ScalePtr scale, Exec exec) {
    GridFunction out(std::move(scale), DomainKind::KappaBoth, 1);
    const TimeScale& ts = out.scale();
    parallel_for(out.count(), exec, [&](std::size_t i) {
        const std::size_t k = out.first_index() + i;
        out.value(k) = ts.mu(k) / ts.nu(k);
    });
    return out;
}

GridFunction compose_sigma(const GridFunction& f, Exec exec) {
    if (f.kind() != DomainKind::Full) {
        throw DomainMismatch("compose_sigma expects a full-domain function");
    }
    GridFunction out(f.scale_ptr(), DomainKind::Full, f.dim());
    const TimeScale& ts = f.scale();
    const std::size_t dim = f.dim();
    parallel_for(out.count(), exec, [&](std::size_t i) {
        const std::size_t k = ts.sigma_index(i);
        for (std::size_t c = 0; c < dim; ++c) {
            out.value(i, c) = f.value(k, c);
        }
    });
    return out;
}

GridFunction delta_antiderivative(const GridFunction& f) {
    const TimeScale& ts = f.scale();
    if (f.end_index() + 1 > ts.size()) {
        throw DomainMismatch("delta antiderivative needs an integrand inside T^kappa");
    }
    GridFunction out(f.scale_ptr(), DomainWindow{f.first_index(), f.count() + 1}, f.dim());
    for (std::size_t c = 0; c < f.dim(); ++c) {
        out.value(f.first_index(), c) = 0.0;
    }
    for (std::size_t k = f.first_index(); k < f.end_index(); ++k) {
        const double mu = ts.mu(k);
        for (std::size_t c = 0; c < f.dim(); ++c) {
            out.value(k + 1, c) = out.value(k, c) + mu * f.value(k, c);
        }
    }
    return out;
}

GridFunction nabla_antiderivative(const GridFunction& f) {
    if (f.first_index() == 0) {
        throw DomainMismatch("nabla antiderivative needs a window starting past the minimum");
    }
    const TimeScale& ts = f.scale();
    GridFunction out(f.scale_ptr(), DomainWindow{f.first_index() - 1, f.count() + 1}, f.dim());
    for (std::size_t c = 0; c < f.dim(); ++c) {
        out.value(f.first_index() - 1, c) = 0.0;
    }
    for (std::size_t k = f.first_index(); k < f.end_index(); ++k) {
        const double nu = ts.nu(k);
        for (std::size_t c = 0; c < f.dim(); ++c) {
            out.value(k, c) = out.value(k - 1, c) + nu * f.value(k, c);
        }
    }
    return out;
}

} // namespace tsn
