#include "fracocp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracocp {

Trajectory::Trajectory(std::size_t nodes, std::size_t dimension, double fill)
    : nodes_(nodes)
    , dimension_(dimension)
    , values_(nodes * dimension, fill)
{
}

std::vector<double> Trajectory::column(std::size_t component) const
{
    if (component >= dimension_) {
        throw std::out_of_range("Trajectory::column: component out of range");
    }
    std::vector<double> out(nodes_);
    for (std::size_t k = 0; k < nodes_; ++k) {
        out[k] = (*this)(k, component);
    }
    return out;
}

Trajectory Trajectory::reversed() const
{
    Trajectory out(nodes_, dimension_);
    for (std::size_t k = 0; k < nodes_; ++k) {
        std::ranges::copy(row(k), out.row(nodes_ - 1 - k).begin());
    }
    return out;
}

double max_abs_difference(const Trajectory& a, const Trajectory& b)
{
    if (a.nodes() != b.nodes() || a.dimension() != b.dimension()) {
        throw std::invalid_argument("max_abs_difference: trajectory shapes differ");
    }
    double worst = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        worst = std::max(worst, std::abs(da[i] - db[i]));
    }
    return worst;
}

} // namespace fracocp
