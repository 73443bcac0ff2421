#pragma once

#include <vector>

namespace bgpwave {

/// Uniform grid on [-a, a] with x = 0 guaranteed to be a node.
///
/// Nodes are x_i = (i - zero_index()) * h, so x = 0 is exact in floating
/// point and the grid is symmetric about it. Construction rejects (a, h)
/// pairs where 2a/h is not an even integer, since the normalization
/// F(0) = 1/2 must be imposable at a node.
class Grid {
public:
    static Grid uniform(double half_width, double step);

    double half_width() const noexcept { return a_; }
    double step() const noexcept { return h_; }
    int size() const noexcept { return n_; }
    int zero_index() const noexcept { return zero_; }

    double x(int i) const noexcept { return (i - zero_) * h_; }
    std::vector<double> points() const;

private:
    Grid(double a, double h, int n) noexcept
        : a_(a), h_(h), n_(n), zero_((n - 1) / 2) {}

    double a_;
    double h_;
    int n_;
    int zero_;
};

}  // namespace bgpwave
