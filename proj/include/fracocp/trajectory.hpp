#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracocp {

/// Dense node-major matrix: one row per time node, one column per component.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t nodes, std::size_t dimension, double fill = 0.0);

    std::size_t nodes() const { return nodes_; }
    std::size_t dimension() const { return dimension_; }

    std::span<double> row(std::size_t node)
    {
        return {values_.data() + node * dimension_, dimension_};
    }
    std::span<const double> row(std::size_t node) const
    {
        return {values_.data() + node * dimension_, dimension_};
    }

    double& operator()(std::size_t node, std::size_t component)
    {
        return values_[node * dimension_ + component];
    }
    double operator()(std::size_t node, std::size_t component) const
    {
        return values_[node * dimension_ + component];
    }

    /// Column copy, convenient for plotting and tests.
    std::vector<double> column(std::size_t component) const;

    /// Same data with the node order reversed.
    Trajectory reversed() const;

    std::span<const double> data() const { return values_; }

    bool operator==(const Trajectory&) const = default;

private:
    std::size_t nodes_ = 0;
    std::size_t dimension_ = 0;
    std::vector<double> values_;
};

/// Largest absolute componentwise difference; throws on shape mismatch.
double max_abs_difference(const Trajectory& a, const Trajectory& b);

} // namespace fracocp
