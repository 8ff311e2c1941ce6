// grid.cpp

#include "bayesphase/grid.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>

#include "bayesphase/errors.hpp"

namespace bayesphase {

QuadratureRule simpson(int size, double a, double b) {
    if (size < 3 || size % 2 == 0) throw ParameterError("Simpson rule needs an odd node count >= 3");
    if (!(b > a)) throw ParameterError("empty integration interval");
    QuadratureRule rule;
    rule.nodes.resize(size);
    rule.weights.resize(size);
    const double h = (b - a) / (size - 1);
    for (int i = 0; i < size; ++i) {
        rule.nodes[i] = (i == size - 1) ? b : a + i * h;
        rule.weights[i] = (i == 0 || i == size - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] *= h / 3.0;
    }
    return rule;
}

PhaseGrid::PhaseGrid(double a, double b, int size) : a_(a), b_(b), h_(0.0) {
    auto rule = simpson(size, a, b);
    nodes_ = std::move(rule.nodes);
    weights_ = std::move(rule.weights);
    h_ = (b - a) / (size - 1);
}

bool PhaseGrid::contains(double theta) const {
    return theta >= a_ - 0.5 * h_ && theta <= b_ + 0.5 * h_;
}

std::size_t PhaseGrid::nearest(double theta) const {
    if (!contains(theta)) throw RangeError("phase outside grid range");
    const double pos = std::round((theta - a_) / h_);
    return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(size() - 1)));
}

double PhaseGrid::integrate(std::span<const double> values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * values[i];
    return s;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ParameterError("Gauss-Legendre rule needs n >= 1");
    // Boost returns the non-negative zeros in ascending order.
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x;
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
        if (*it > 0.0) x.push_back(-*it);
    x.insert(x.end(), zeros.begin(), zeros.end());
    QuadratureRule rule;
    const double half = 0.5 * (b - a);
    for (double xi : x) {
        const double dp = boost::math::legendre_p_prime(n, xi);
        rule.nodes.push_back(a + half * (xi + 1.0));
        rule.weights.push_back(half * 2.0 / ((1.0 - xi * xi) * dp * dp));
    }
    return rule;
}

}  // namespace bayesphase
