#include "tsnoether/grid_function.hpp"

#include <algorithm>

#include "tsnoether/errors.hpp"

namespace tsn {

DomainWindow domain_window(const TimeScale& ts, DomainKind kind) {
    const std::size_t n = ts.size();
    switch (kind) {
    case DomainKind::Full:
        return {0, n};
    case DomainKind::Kappa:
        return {0, n - 1};
    case DomainKind::KappaLow:
        return {1, n - 1};
    case DomainKind::KappaBoth:
        return {1, n - 2};
    case DomainKind::Window:
        break;
    }
    throw DomainMismatch("Window is not a constructible named domain");
}

GridFunction::GridFunction(ScalePtr scale, DomainKind kind, std::size_t dim)
    : scale_(std::move(scale)), window_(domain_window(*scale_, kind)), dim_(dim),
      data_(window_.count * dim, 0.0) {}

GridFunction::GridFunction(ScalePtr scale, DomainWindow window, std::size_t dim)
    : scale_(std::move(scale)), window_(window), dim_(dim), data_(window.count * dim, 0.0) {
    if (window_.end() > scale_->size()) {
        throw DomainMismatch("window exceeds the scale");
    }
}

GridFunction GridFunction::sample(ScalePtr scale, DomainKind kind,
                                  const std::function<double(double)>& f, Exec exec) {
    GridFunction out(std::move(scale), kind, 1);
    const std::size_t first = out.first_index();
    const TimeScale& ts = out.scale();
    double* data = out.data_.data();
    parallel_for(out.count(), exec,
                 [&ts, first, data, &f](std::size_t i) { data[i] = f(ts.point(first + i)); });
    return out;
}

DomainKind GridFunction::kind() const {
    for (DomainKind k : {DomainKind::Full, DomainKind::Kappa, DomainKind::KappaLow,
                         DomainKind::KappaBoth}) {
        const DomainWindow w = domain_window(*scale_, k);
        if (w.first == window_.first && w.count == window_.count) {
            return k;
        }
    }
    return DomainKind::Window;
}

void GridFunction::require_same_scale(const GridFunction& f, const GridFunction& g) {
    if (f.scale_ == g.scale_) {
        return;
    }
    const auto& a = f.scale().points();
    const auto& b = g.scale().points();
    if (a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin())) {
        return;
    }
    throw DomainMismatch("grid functions live on different scales");
}

} // namespace tsn
