#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace tsn {

/// A finite time scale: a strictly increasing set of at least three real
/// points. Jump operators follow the bounded conventions sigma(b) = b and
/// rho(a) = a, so mu(b) = 0 and nu(a) = 0 are stored as plain values; the
/// domain restrictions live in the types built on top, never in epsilon
/// guards here.
class TimeScale {
public:
    /// Validating constructor; accepts the points in any order and sorts.
    explicit TimeScale(std::vector<double> points);

    std::size_t size() const { return pts_.size(); }
    /// Index of the last point (size() - 1).
    std::size_t last() const { return pts_.size() - 1; }

    double point(std::size_t k) const { return pts_[k]; }
    double a() const { return pts_.front(); }
    double b() const { return pts_.back(); }

    std::size_t sigma_index(std::size_t k) const { return k + 1 < pts_.size() ? k + 1 : k; }
    std::size_t rho_index(std::size_t k) const { return k > 0 ? k - 1 : 0; }

    double sigma(std::size_t k) const { return sigma_[k]; }
    double rho(std::size_t k) const { return rho_[k]; }
    double mu(std::size_t k) const { return mu_[k]; }
    double nu(std::size_t k) const { return nu_[k]; }

    /// Exact floating-point lookup; points are addressed by index everywhere,
    /// and membership means bit-for-bit equality.
    std::optional<std::size_t> index_of(double t) const;
    /// Like index_of but throws PointNotInScale.
    std::size_t require_index(double t) const;

    std::span<const double> points() const { return pts_; }

private:
    std::vector<double> pts_;
    std::vector<double> sigma_;
    std::vector<double> rho_;
    std::vector<double> mu_;
    std::vector<double> nu_;
};

using ScalePtr = std::shared_ptr<const TimeScale>;

/// Build a scale from an explicit point list.
ScalePtr make_timescale(std::vector<double> points);

/// Uniform scale {a, a+h, ..., b}. (b-a)/h must be integral up to rounding;
/// the last point is exactly b.
ScalePtr uniform_scale(double a, double b, double h);

/// Dyadic scale {2^n : n_min <= n <= n_max}.
ScalePtr dyadic_scale(int n_min, int n_max);

/// Image scale T~ = v(T) for a strictly increasing map v.
ScalePtr image_scale(const TimeScale& ts, const std::function<double(double)>& v);

} // namespace tsn
