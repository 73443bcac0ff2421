#include "bgpwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bgpwave/errors.hpp"

namespace bgpwave {

Grid Grid::uniform(double half_width, double step) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ParameterError("grid half width must be positive, got " + std::to_string(half_width));
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ParameterError("grid step must be positive, got " + std::to_string(step));
    }
    const double cells = 2.0 * half_width / step;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells))) {
        throw ParameterError("2a/h = " + std::to_string(cells) +
                             " is not an integer; the grid cannot place a node at x = 0");
    }
    const long long m = static_cast<long long>(rounded);
    if (m % 2 != 0) {
        throw ParameterError("2a/h = " + std::to_string(m) +
                             " must be even so that x = 0 is a node");
    }
    if (m < 4) {
        throw ParameterError("grid needs at least 5 points, got " + std::to_string(m + 1));
    }
    if (m > 50'000'000) {
        throw ParameterError("grid too large: " + std::to_string(m + 1) + " points");
    }
    return Grid(half_width, step, static_cast<int>(m) + 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) xs[static_cast<size_t>(i)] = x(i);
    return xs;
}


}  // namespace bgpwave
