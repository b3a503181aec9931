#include "tsnoether/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsnoether/errors.hpp"

namespace tsn {

TimeScale::TimeScale(std::vector<double> points) : pts_(std::move(points)) {
    if (pts_.size() < 3) {
        throw TooFewPoints("a time scale needs at least 3 points, got " +
                           std::to_string(pts_.size()));
    }
    for (double t : pts_) {
        if (!std::isfinite(t)) {
            throw NonFiniteValue("non-finite point in time scale");
        }
    }
    std::sort(pts_.begin(), pts_.end());
    for (std::size_t k = 1; k < pts_.size(); ++k) {
        if (pts_[k] == pts_[k - 1]) {
            throw DuplicatePoint("duplicate point " + std::to_string(pts_[k]));
        }
    }

    const std::size_t n = pts_.size();
    sigma_.resize(n);
    rho_.resize(n);
    mu_.resize(n);
    nu_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        sigma_[k] = pts_[sigma_index(k)];
        rho_[k] = pts_[rho_index(k)];
        mu_[k] = sigma_[k] - pts_[k];
        nu_[k] = pts_[k] - rho_[k];
    }
}

std::optional<std::size_t> TimeScale::index_of(double t) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
    if (it != pts_.end() && *it == t) {
        return static_cast<std::size_t>(it - pts_.begin());
    }
    return std::nullopt;
}

std::size_t TimeScale::require_index(double t) const {
    if (auto k = index_of(t)) {
        return *k;
    }
    throw PointNotInScale("t = " + std::to_string(t) + " is not a scale point");
}

ScalePtr make_timescale(std::vector<double> points) {
    return std::make_shared<const TimeScale>(std::move(points));
}

ScalePtr uniform_scale(double a, double b, double h) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(h)) {
        throw NonFiniteValue("uniform scale parameters must be finite");
    }
    if (b <= a) {
        throw ReversedBounds("need a < b, got a = " + std::to_string(a) +
                             ", b = " + std::to_string(b));
    }
    if (h <= 0.0) {
        throw NonDivisibleRange("step h must be positive");
    }
    const double q = (b - a) / h;
    const double rounded = std::round(q);
    if (std::abs(q - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw NonDivisibleRange("(b-a)/h = " + std::to_string(q) + " is not integral");
    }
    const auto n = static_cast<std::size_t>(rounded);
    if (n < 2) {
        throw TooFewPoints("uniform scale would have fewer than 3 points");
    }
    std::vector<double> pts(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        pts[k] = a + static_cast<double>(k) * h;
    }
    pts[n] = b; // exact right endpoint, not a + n*h
    return make_timescale(std::move(pts));
}

ScalePtr dyadic_scale(int n_min, int n_max) {
    if (n_max < n_min) {
        throw ReversedBounds("dyadic exponent range reversed");
    }
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n_max - n_min) + 1);
    for (int n = n_min; n <= n_max; ++n) {
        pts.push_back(std::ldexp(1.0, n));
    }
    return make_timescale(std::move(pts));
}

ScalePtr image_scale(const TimeScale& ts, const std::function<double(double)>& v) {
    std::vector<double> pts(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        pts[k] = v(ts.point(k));
        if (!std::isfinite(pts[k])) {
            throw NonFiniteValue("image map produced a non-finite point");
        }
        if (k > 0 && pts[k] <= pts[k - 1]) {
            throw NotStrictlyIncreasing("image map is not strictly increasing at index " +
                                        std::to_string(k));
        }
    }
    return make_timescale(std::move(pts));
}

} // namespace tsn
