#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tsnoether/parallel.hpp"
#include "tsnoether/timescale.hpp"

namespace tsn {

/// The named evaluation domains of time-scale calculus. Domain restriction is
/// a property of the value, not an epsilon check: a derivative simply has no
/// slot for the excluded endpoints.
enum class DomainKind {
    Full,      ///< every scale point
    Kappa,     ///< T^kappa, max removed
    KappaLow,  ///< T_kappa, min removed
    KappaBoth, ///< T^kappa_kappa, both removed
    Window,    ///< some other contiguous index range
};

/// Index window [first, first + count) that a DomainKind occupies on a scale.
struct DomainWindow {
    std::size_t first = 0;
    std::size_t count = 0;
    std::size_t end() const { return first + count; }
};

DomainWindow domain_window(const TimeScale& ts, DomainKind kind);

/// A (possibly vector-valued) function tabulated on a contiguous index range
/// of a time scale. Values are addressed by the scale's global point index.
class GridFunction {
public:
    /// Zero-filled values on a named domain.
    GridFunction(ScalePtr scale, DomainKind kind, std::size_t dim = 1);
    /// Zero-filled values on an explicit window.
    GridFunction(ScalePtr scale, DomainWindow window, std::size_t dim = 1);

    /// Tabulate a scalar function of t on a named domain.
    static GridFunction sample(ScalePtr scale, DomainKind kind,
                               const std::function<double(double)>& f,
                               Exec exec = Exec::Auto);

    const TimeScale& scale() const { return *scale_; }
    const ScalePtr& scale_ptr() const { return scale_; }

    std::size_t dim() const { return dim_; }
    std::size_t first_index() const { return window_.first; }
    std::size_t end_index() const { return window_.end(); }
    std::size_t count() const { return window_.count; }
    DomainWindow window() const { return window_; }

    /// The named kind this window coincides with, or Window if none.
    DomainKind kind() const;
    bool covers(std::size_t global_index) const {
        return global_index >= window_.first && global_index < window_.end();
    }

    /// Scale point for a global index.
    double t(std::size_t global_index) const { return scale_->point(global_index); }

    double value(std::size_t global_index, std::size_t comp = 0) const {
        return data_[(global_index - window_.first) * dim_ + comp];
    }
    double& value(std::size_t global_index, std::size_t comp = 0) {
        return data_[(global_index - window_.first) * dim_ + comp];
    }
    std::span<const double> at(std::size_t global_index) const {
        return {data_.data() + (global_index - window_.first) * dim_, dim_};
    }
    std::span<double> at(std::size_t global_index) {
        return {data_.data() + (global_index - window_.first) * dim_, dim_};
    }

    std::span<const double> raw() const { return data_; }
    std::span<double> raw() { return data_; }

    /// Throws DomainMismatch unless both functions live on the same scale.
    static void require_same_scale(const GridFunction& f, const GridFunction& g);

private:
    ScalePtr scale_;
    DomainWindow window_;
    std::size_t dim_;
    std::vector<double> data_;
};

} // namespace tsn
