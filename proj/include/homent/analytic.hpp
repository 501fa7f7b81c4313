#ifndef HOMENT_ANALYTIC_HPP
#define HOMENT_ANALYTIC_HPP

// Closed-form metric components and determinants for two five-vertex graphs:
//   A1: the single edge {0,1} plus three isolated vertices,
//   A2: the triangle {0,1,2} plus two isolated vertices.
// They serve as oracles for the numeric fisher_metric path.

#include <Eigen/Core>

#include "homent/errors.hpp"
#include "homent/graph.hpp"
#include "homent/infogeo.hpp"

namespace homent::analytic {

using Matrix5 = Eigen::Matrix<double, 5, 5>;

inline Graph single_edge_graph() { return Graph(5, {{0, 1}}); }
inline Graph triangle_graph() { return Graph(5, {{0, 1}, {1, 2}, {0, 2}}); }

namespace detail {

inline void require_five(const ParameterPoint& t)
{
    if (t.size() != 5)
        throw InputError("closed forms are defined for five coordinates");
}

}  // namespace detail

/// theta^1 > 0, theta^1 theta^2 > 1, theta^3..theta^5 > 0.
inline bool in_domain_g1(const ParameterPoint& t)
{
    detail::require_five(t);
    return t[0] > 0 && t[0] * t[1] > 1 && t[2] > 0 && t[3] > 0 && t[4] > 0;
}

/// As for A1, plus theta^3 > (theta^1 + theta^2 - 2) / (theta^1 theta^2 - 1).
inline bool in_domain_g2(const ParameterPoint& t)
{
    detail::require_five(t);
    return t[0] > 0 && t[0] * t[1] > 1 && t[2] > (t[0] + t[1] - 2) / (t[0] * t[1] - 1) && t[3] > 0 && t[4] > 0;
}

inline double analytic_det_g1(const ParameterPoint& t)
{
    if (!in_domain_g1(t))
        throw DomainError();
    const double d = t[0] * t[1] - 1;
    const double rest = t[2] * t[3] * t[4];
    return (1 + t[0] * t[1]) / (32 * rest * rest * d * d * d);
}

inline double analytic_det_g2(const ParameterPoint& t)
{
    if (!in_domain_g2(t))
        throw DomainError();
    const double a = t[0], b = t[1], c = t[2];
    // det of the triangle block of psi
    const double d = a * (b * c - 1) - b - c + 2;
    const double numerator = a * a * ((b * c) * (b * c) - 1) + 2 * a * (b + c - 2 * b * c) - (b - c) * (b - c);
    const double outer = t[3] * t[4];
    return numerator / (32 * outer * outer * d * d * d * d);
}

inline Matrix5 analytic_metric_g1(const ParameterPoint& t)
{
    if (!in_domain_g1(t))
        throw DomainError();
    const double d2 = 2 * (t[0] * t[1] - 1) * (t[0] * t[1] - 1);
    Matrix5 g = Matrix5::Zero();
    g(0, 0) = t[1] * t[1] / d2;
    g(1, 1) = t[0] * t[0] / d2;
    g(0, 1) = g(1, 0) = 1 / d2;
    for (int i = 2; i < 5; ++i)
        g(i, i) = 1 / (2 * t[i] * t[i]);
    return g;
}

inline Matrix5 analytic_metric_g2(const ParameterPoint& t)
{
    if (!in_domain_g2(t))
        throw DomainError();
    const double a = t[0], b = t[1], c = t[2];
    const double d = a * (b * c - 1) - b - c + 2;
    const double d2 = 2 * d * d;
    const auto sq = [](double x) { return x * x; };
    Matrix5 g = Matrix5::Zero();
    g(0, 0) = sq(b * c - 1) / d2;
    g(1, 1) = sq(a * c - 1) / d2;
    g(2, 2) = sq(a * b - 1) / d2;
    g(0, 1) = g(1, 0) = sq(1 - c) / d2;
    g(0, 2) = g(2, 0) = sq(1 - b) / d2;
    g(1, 2) = g(2, 1) = sq(1 - a) / d2;
    g(3, 3) = 1 / (2 * t[3] * t[3]);
    g(4, 4) = 1 / (2 * t[4] * t[4]);
    return g;
}

}  // namespace homent::analytic

#endif  // HOMENT_ANALYTIC_HPP
