// grid.hpp
// Quadrature grids on a phase interval [a, b].

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bayesphase {

inline constexpr int kDefaultGridSize = 2049;

// Uniform grid with composite Simpson weights. Node count is odd.
class PhaseGrid {
public:
    // Throws ParameterError unless b > a and size is odd and >= 3.
    PhaseGrid(double a, double b, int size = kDefaultGridSize);

    double lower() const { return a_; }
    double upper() const { return b_; }
    double width() const { return b_ - a_; }
    double spacing() const { return h_; }
    std::size_t size() const { return nodes_.size(); }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }

    // Index of the node closest to theta; RangeError if theta lies more than
    // half a spacing outside [a, b].
    std::size_t nearest(double theta) const;
    bool contains(double theta) const;

    // Simpson integral of values sampled on the nodes.
    double integrate(std::span<const double> values) const;

private:
    double a_;
    double b_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite Simpson rule with `size` (odd) uniform nodes on [a, b].
QuadratureRule simpson(int size, double a, double b);

}  // namespace bayesphase
