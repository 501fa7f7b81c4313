#ifndef HOMENT_INFOGEO_HPP
#define HOMENT_INFOGEO_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include "homent/errors.hpp"
#include "homent/graph.hpp"

namespace homent {

/**
 * Point theta = (theta^1, ..., theta^n) of the bare parameter space: the
 * variances of n independent zero-mean Gaussians, one per vertex.
 */
class ParameterPoint {
public:
    ParameterPoint() = default;
    explicit ParameterPoint(Eigen::VectorXd theta) : theta_(std::move(theta)) {}
    ParameterPoint(std::initializer_list<double> theta) : theta_(static_cast<Eigen::Index>(theta.size()))
    {
        Eigen::Index i = 0;
        for (double t : theta)
            theta_[i++] = t;
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(theta_.size()); }
    double operator[](std::size_t i) const { return theta_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& values() const noexcept { return theta_; }

    /// Every coordinate finite and strictly positive.
    bool in_bare_domain() const { return (theta_.array().isFinite() && (theta_.array() > 0.0)).all(); }

private:
    Eigen::VectorXd theta_;
};

/// Relative pivot floor used by the positive-definiteness test.
inline constexpr double pd_pivot_tolerance = 1e-12;

/// Default cap on sqrt(det g): the double overflow limit.
inline constexpr double default_overflow_cap = 1e308;

/// psi_theta(A) = diag(theta) + A.
inline Eigen::MatrixXd psi(const ParameterPoint& theta, const Graph& g)
{
    const std::size_t n = g.vertex_count();
    if (theta.size() != n)
        throw InputError("theta has " + std::to_string(theta.size()) + " coordinates, graph has " +
                         std::to_string(n) + " vertices");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.diagonal() = theta.values();
    for (const Edge& e : g.edges()) {
        m(e.u, e.v) = 1.0;
        m(e.v, e.u) = 1.0;
    }
    return m;
}

/**
 * Cholesky factorization used as the positive-definiteness test: fails when
 * Eigen rejects the matrix or when a pivot L_ii^2 drops below
 * pd_pivot_tolerance times the largest diagonal entry.
 */
inline bool positive_definite_factor(const Eigen::MatrixXd& m, Eigen::LLT<Eigen::MatrixXd>& llt)
{
    if (!m.allFinite())
        return false;
    if (m.rows() == 0)
        return true;
    llt.compute(m);
    if (llt.info() != Eigen::Success)
        return false;
    const double floor = pd_pivot_tolerance * m.diagonal().maxCoeff();
    const auto l_diag = llt.matrixLLT().diagonal();
    return (l_diag.array().square() >= floor).all();
}

/// Membership in Theta-tilde = {theta > 0 : psi_theta(A) positive definite}.
inline bool in_domain(const ParameterPoint& theta, const Graph& g)
{
    if (theta.size() != g.vertex_count() || !theta.in_bare_domain())
        return false;
    Eigen::LLT<Eigen::MatrixXd> llt;
    return positive_definite_factor(psi(theta, g), llt);
}

struct MetricEvaluation {
    Eigen::MatrixXd g_tilde;
    double log_det_g = 0.0;
    /// det g and sqrt(det g) as doubles; +inf once they exceed the double range.
    double det_g = 0.0;
    double sqrt_det = 0.0;
    double log_psi_det = 0.0;
    double psi_det = 0.0;
    bool overflow_flag = false;
};

/// log det of a symmetric matrix expected to be positive definite.
inline double log_det_spd(const Eigen::MatrixXd& m)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success)
        return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    // Cholesky can fail on badly scaled but still positive definite inputs.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    return lu.matrixLU().diagonal().array().abs().log().sum();
}

/**
 * Metric given a positive-definite factorization of psi:
 * g_ij = (psi^-1_ij)^2 / 2, with the determinants kept in log space.
 */
inline MetricEvaluation metric_from_factor(const Eigen::LLT<Eigen::MatrixXd>& psi_llt, std::size_t n,
                                           double overflow_cap = default_overflow_cap)
{
    const auto dim = static_cast<Eigen::Index>(n);
    MetricEvaluation out;
    Eigen::MatrixXd inverse = psi_llt.solve(Eigen::MatrixXd::Identity(dim, dim));
    // The triangular solves leave rounding-level asymmetry.
    inverse = 0.5 * (inverse + inverse.transpose()).eval();
    out.g_tilde = 0.5 * inverse.array().square().matrix();
    out.log_psi_det = 2.0 * psi_llt.matrixLLT().diagonal().array().log().sum();
    out.psi_det = std::exp(out.log_psi_det);
    out.log_det_g = log_det_spd(out.g_tilde);
    out.det_g = std::exp(out.log_det_g);
    out.sqrt_det = std::exp(0.5 * out.log_det_g);
    out.overflow_flag = 0.5 * out.log_det_g > std::log(overflow_cap);
    return out;
}

/// Fisher-Rao metric of the graph's manifold at theta; throws DomainError outside Theta-tilde.
inline MetricEvaluation fisher_metric(const ParameterPoint& theta, const Graph& g,
                                      double overflow_cap = default_overflow_cap)
{
    if (theta.size() != g.vertex_count())
        throw InputError("theta has " + std::to_string(theta.size()) + " coordinates, graph has " +
                         std::to_string(g.vertex_count()) + " vertices");
    if (g.vertex_count() == 0) {
        MetricEvaluation empty;
        empty.det_g = empty.sqrt_det = empty.psi_det = 1.0;
        return empty;
    }
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (!theta.in_bare_domain() || !positive_definite_factor(psi(theta, g), llt))
        throw DomainError();
    return metric_from_factor(llt, g.vertex_count(), overflow_cap);
}

namespace detail {

inline nlohmann::json finite_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const MetricEvaluation& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.g_tilde.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.g_tilde.cols(); ++j)
            row.push_back(detail::finite_or_null(m.g_tilde(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"g_tilde", std::move(rows)},
            {"log_det_g", m.log_det_g},
            {"det_g", detail::finite_or_null(m.det_g)},
            {"sqrt_det", detail::finite_or_null(m.sqrt_det)},
            {"log_psi_det", m.log_psi_det},
            {"psi_det", detail::finite_or_null(m.psi_det)},
            {"overflow_flag", m.overflow_flag}};
}

}  // namespace homent

#endif  // HOMENT_INFOGEO_HPP
