#ifndef HOMENT_ENTROPY_HPP
#define HOMENT_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "homent/errors.hpp"
#include "homent/graph.hpp"
#include "homent/infogeo.hpp"
#include "homent/parallel.hpp"
#include "homent/rng.hpp"

namespace homent {

/**
 * How the integrand is regularized.
 *
 * analytic_regularizer: w = sqrt(det g) * R(theta) with the trace cutoff and
 * log(1 + det(psi)^m) factor. numerical_cutoff: w = sqrt(det g), dropping
 * points where it exceeds the overflow cap.
 */
enum class IntegrationMode { analytic_regularizer, numerical_cutoff };

/**
 * uniform: i.i.d. points in the hypercube, points outside the domain count
 * as zero, so the estimate covers the in-box domain volume.
 * chain: Metropolis random walk targeting the uniform law on the in-box
 * domain; the estimate is box volume times the chain average of w.
 */
enum class SamplerKind { uniform, chain };

struct IntegrationConfig {
    IntegrationMode mode = IntegrationMode::analytic_regularizer;
    SamplerKind sampler = SamplerKind::uniform;
    /// Trace threshold of the regularizer; defaults to 10 n.
    std::optional<double> h;
    double box_lo = 0.1;
    double box_hi = 10.0;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double overflow_cap = default_overflow_cap;
    /// Exponent m in log(1 + det(psi)^m); defaults to n.
    std::optional<unsigned> regularizer_exponent;
    std::size_t chains = 4;
    /// Burn-in steps per chain, during which the step size adapts.
    std::size_t burn_in = 1000;
    /// Worker threads (0 = hardware concurrency). Results do not depend on it.
    unsigned threads = 0;

    void validate() const
    {
        if (!(std::isfinite(box_lo) && std::isfinite(box_hi) && box_lo > 0 && box_lo < box_hi))
            throw InputError("box must satisfy 0 < lo < hi");
        if (samples < 1)
            throw InputError("samples must be at least 1");
        if (h && !(*h > 0 && std::isfinite(*h)))
            throw InputError("h must be positive");
        if (!(overflow_cap > 0))
            throw InputError("overflow cap must be positive");
        if (regularizer_exponent && *regularizer_exponent == 0)
            throw InputError("regularizer exponent must be positive");
        if (chains < 1)
            throw InputError("at least one chain is required");
    }

    /// Copy with the n-dependent defaults filled in.
    IntegrationConfig resolved(std::size_t n) const
    {
        IntegrationConfig out = *this;
        if (!out.h)
            out.h = 10.0 * static_cast<double>(n);
        if (!out.regularizer_exponent)
            out.regularizer_exponent = static_cast<unsigned>(std::max<std::size_t>(n, 1));
        return out;
    }
};

struct EntropyEstimate {
    std::size_t n = 0;
    double S = 0.0;
    double stderr_S = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_in_domain = 0;
    std::size_t n_overflow_excluded = 0;
    /// Mean of sqrt(det g) over the points that entered the estimate.
    double mean_sqrt_det = 0.0;
    double log_mean_sqrt_det = 0.0;
    /// Chain sampler: fraction of accepted proposals after burn-in.
    double acceptance_rate = 0.0;
    IntegrationConfig config;
};

/// Evaluation of the integrand at one point.
struct PointEvaluation {
    bool in_domain = false;
    /// sqrt(det g) above the overflow cap.
    bool overflow = false;
    /// Contributes to the estimate (in domain, and not excluded by the cap).
    bool kept = false;
    double log_sqrt_det = -std::numeric_limits<double>::infinity();
    double log_weight = -std::numeric_limits<double>::infinity();
};

/**
 * log R for trace Tr C0 and log det psi. The two Heaviside terms partition
 * the line: below or at h the cutoff factor is 1, above it is e^-Tr.
 */
inline double log_regularizer(double trace, double log_det_psi, double h, unsigned exponent)
{
    const double x = static_cast<double>(exponent) * log_det_psi;
    double log_log1p;
    if (x > 35.0)
        log_log1p = std::log(x + std::log1p(std::exp(-x)));
    else if (x < -35.0)
        log_log1p = x;
    else
        log_log1p = std::log(std::log1p(std::exp(x)));
    return (trace <= h ? 0.0 : -trace) + log_log1p;
}

namespace detail {

/**
 * Integrand evaluator with reusable buffers; one per worker.
 *
 * Vertices are reordered by increasing theta before any arithmetic, so a
 * relabeled graph evaluated at the correspondingly relabeled point performs
 * exactly the same floating-point operations.
 */
class PointEvaluator {
public:
    PointEvaluator(const Graph& g, const IntegrationConfig& cfg)
        : n_(g.vertex_count()),
          adjacency_(g.adjacency_matrix()),
          analytic_(cfg.mode == IntegrationMode::analytic_regularizer),
          h_(*cfg.h),
          exponent_(*cfg.regularizer_exponent),
          log_cap_(std::log(cfg.overflow_cap)),
          order_(n_),
          psi_(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_))
    {
    }

    PointEvaluation operator()(std::span<const double> theta)
    {
        PointEvaluation out;
        for (double t : theta)
            if (!(t > 0) || !std::isfinite(t))
                return out;

        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return theta[a] < theta[b] || (theta[a] == theta[b] && a < b);
        });
        double trace = 0.0;
        for (std::size_t r = 0; r < n_; ++r) {
            const std::size_t vr = order_[r];
            trace += theta[vr];
            for (std::size_t c = 0; c < n_; ++c)
                psi_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    r == c ? theta[vr] : static_cast<double>(adjacency_[vr * n_ + order_[c]]);
        }
        if (!positive_definite_factor(psi_, llt_))
            return out;
        out.in_domain = true;

        const MetricEvaluation metric = metric_from_factor(llt_, n_);
        out.log_sqrt_det = 0.5 * metric.log_det_g;
        out.overflow = out.log_sqrt_det > log_cap_;
        if (analytic_) {
            out.log_weight = out.log_sqrt_det + log_regularizer(trace, metric.log_psi_det, h_, exponent_);
            out.kept = true;
        } else {
            out.log_weight = out.log_sqrt_det;
            out.kept = !out.overflow;
        }
        return out;
    }

private:
    std::size_t n_;
    std::vector<std::uint8_t> adjacency_;
    bool analytic_;
    double h_;
    unsigned exponent_;
    double log_cap_;
    std::vector<std::size_t> order_;
    Eigen::MatrixXd psi_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Running sums of w and w^2 held as exp(shift) * (sum, sumsq).
class LogSumAccumulator {
public:
    void add(double log_w)
    {
        if (log_w == -std::numeric_limits<double>::infinity())
            return;
        if (log_w > shift_)
            rescale(log_w);
        const double r = std::exp(log_w - shift_);
        sum_ += r;
        sumsq_ += r * r;
    }

    void merge(const LogSumAccumulator& other)
    {
        if (other.sum_ == 0.0)
            return;
        if (other.shift_ > shift_)
            rescale(other.shift_);
        const double f = std::exp(other.shift_ - shift_);
        sum_ += other.sum_ * f;
        sumsq_ += other.sumsq_ * f * f;
    }

    bool empty() const noexcept { return sum_ == 0.0; }
    double log_sum() const { return shift_ + std::log(sum_); }
    double log_sum_sq() const { return 2.0 * shift_ + std::log(sumsq_); }

private:
    void rescale(double new_shift)
    {
        if (sum_ != 0.0) {
            const double f = std::exp(shift_ - new_shift);
            sum_ *= f;
            sumsq_ *= f * f;
        }
        shift_ = new_shift;
    }

    double shift_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double sumsq_ = 0.0;
};

struct Tally {
    std::size_t samples = 0;
    std::size_t in_domain = 0;
    std::size_t overflow_excluded = 0;
    std::size_t kept = 0;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    LogSumAccumulator weight;
    LogSumAccumulator sqrt_det;

    void record(const PointEvaluation& e)
    {
        ++samples;
        if (!e.in_domain)
            return;
        ++in_domain;
        if (!e.kept) {
            ++overflow_excluded;
            return;
        }
        ++kept;
        weight.add(e.log_weight);
        sqrt_det.add(e.log_sqrt_det);
    }

    void merge(const Tally& o)
    {
        samples += o.samples;
        in_domain += o.in_domain;
        overflow_excluded += o.overflow_excluded;
        kept += o.kept;
        proposals += o.proposals;
        accepted += o.accepted;
        weight.merge(o.weight);
        sqrt_det.merge(o.sqrt_det);
    }
};

inline std::string dump_theta(std::span<const double> theta)
{
    std::string s = "theta = (";
    for (std::size_t i = 0; i < theta.size(); ++i)
        s += (i ? ", " : "") + std::to_string(theta[i]);
    return s + ")";
}

inline void check_finite(const PointEvaluation& e, std::span<const double> theta)
{
    if (e.kept && !std::isfinite(e.log_weight))
        throw NumericalError("non-finite integrand at " + dump_theta(theta));
}

/// Points per independently seeded block of the uniform sampler.
inline constexpr std::size_t uniform_chunk = 4096;
/// Batches per chain for the batch-means error estimate.
inline constexpr std::size_t batches_per_chain = 10;
/// Step-size adaptation interval and target acceptance rate during burn-in.
inline constexpr std::size_t adapt_interval = 50;
inline constexpr double target_acceptance = 0.3;

/// Draw a coordinate vector in index order and place draw i at relabel[i].
template <typename Draw>
void fill_mapped(std::vector<double>& out, std::span<const Vertex> relabel, Draw&& draw)
{
    for (std::size_t i = 0; i < out.size(); ++i)
        out[relabel.empty() ? i : relabel[i]] = draw();
}

inline double reflect_into(double x, double lo, double hi)
{
    const double width = hi - lo;
    double y = std::fmod(x - lo, 2.0 * width);
    if (y < 0)
        y += 2.0 * width;
    if (y > width)
        y = 2.0 * width - y;
    return std::clamp(lo + y, lo, hi);
}

inline Tally run_uniform(const Graph& g, const IntegrationConfig& cfg, std::span<const Vertex> relabel)
{
    const std::size_t n = g.vertex_count();
    const std::size_t chunks = (cfg.samples + uniform_chunk - 1) / uniform_chunk;
    std::vector<Tally> tallies(chunks);
    parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        Rng rng(derive_seed(cfg.seed, {0, c}));
        PointEvaluator eval(g, cfg);
        std::vector<double> theta(n);
        const std::size_t begin = c * uniform_chunk;
        const std::size_t end = std::min(cfg.samples, begin + uniform_chunk);
        Tally& t = tallies[c];
        for (std::size_t s = begin; s < end; ++s) {
            fill_mapped(theta, relabel, [&] { return rng.uniform(cfg.box_lo, cfg.box_hi); });
            const auto e = eval(theta);
            check_finite(e, theta);
            t.record(e);
        }
    });
    Tally total;
    for (const auto& t : tallies)
        total.merge(t);
    return total;
}

struct ChainResult {
    Tally tally;
    std::vector<Tally> batches;
};

inline ChainResult run_chain(const Graph& g, const IntegrationConfig& cfg, std::span<const Vertex> relabel,
                             std::size_t chain, std::size_t length)
{
    const std::size_t n = g.vertex_count();
    const double lo = cfg.box_lo;
    const double hi = cfg.box_hi;
    Rng rng(derive_seed(cfg.seed, {1, chain}));
    PointEvaluator eval(g, cfg);

    // Raising every diagonal entry preserves positive definiteness, so walk
    // the constant start point from the box centre towards the upper corner.
    std::vector<double> state(n, 0.5 * (lo + hi));
    PointEvaluation current = eval(state);
    for (int k = 1; k <= 60 && !current.in_domain; ++k) {
        std::fill(state.begin(), state.end(), hi - (hi - 0.5 * (lo + hi)) * std::ldexp(1.0, -k));
        current = eval(state);
    }
    if (!current.in_domain)
        throw NumericalError("volume estimate degenerate: hypercube [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]^n does not meet the positive-definite domain");
    check_finite(current, state);

    double step = 0.1 * (hi - lo);
    std::vector<double> proposal(n);
    std::vector<double> increments(n);
    std::size_t window_accepted = 0;

    ChainResult result;
    const std::size_t batch_count = std::min(batches_per_chain, std::max<std::size_t>(length, 1));
    result.batches.resize(batch_count);

    for (std::size_t it = 0; it < cfg.burn_in + length; ++it) {
        fill_mapped(increments, relabel, [&] { return rng.uniform(-1.0, 1.0); });
        for (std::size_t i = 0; i < n; ++i)
            proposal[i] = reflect_into(state[i] + step * increments[i], lo, hi);
        const auto e = eval(proposal);
        const bool accept = e.in_domain;
        if (accept) {
            check_finite(e, proposal);
            std::swap(state, proposal);
            current = e;
        }

        if (it < cfg.burn_in) {
            window_accepted += accept ? 1 : 0;
            if ((it + 1) % adapt_interval == 0) {
                const double rate = static_cast<double>(window_accepted) / adapt_interval;
                step = std::clamp(step * std::exp(rate - target_acceptance), 1e-12 * (hi - lo), hi - lo);
                window_accepted = 0;
            }
            continue;
        }
        const std::size_t k = it - cfg.burn_in;
        Tally& batch = result.batches[k * batch_count / length];
        ++batch.proposals;
        batch.accepted += accept ? 1 : 0;
        batch.record(current);
    }
    for (const auto& b : result.batches)
        result.tally.merge(b);
    return result;
}

}  // namespace detail

/// R(theta) for a point of the domain; throws DomainError otherwise.
inline double regularizer(const ParameterPoint& theta, const Graph& g, const IntegrationConfig& cfg)
{
    const auto c = cfg.resolved(g.vertex_count());
    if (theta.size() != g.vertex_count())
        throw InputError("theta dimension does not match the graph");
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (!theta.in_bare_domain() || !positive_definite_factor(psi(theta, g), llt))
        throw DomainError();
    const double log_det_psi = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return std::exp(log_regularizer(theta.values().sum(), log_det_psi, *c.h, *c.regularizer_exponent));
}

/// Integrand at a single point under the given configuration.
inline PointEvaluation sample_weight(const ParameterPoint& theta, const Graph& g, const IntegrationConfig& cfg)
{
    if (theta.size() != g.vertex_count())
        throw InputError("theta dimension does not match the graph");
    detail::PointEvaluator eval(g, cfg.resolved(g.vertex_count()));
    return eval(std::span<const double>(theta.values().data(), theta.size()));
}

/**
 * Monte Carlo estimate of the regularized volume V and S = ln V.
 *
 * With a non-empty `relabel`, the i-th coordinate of every draw is placed at
 * position relabel[i]; estimating permute(g, relabel) this way reproduces
 * the estimate for g bit for bit. The result depends only on the graph, the
 * configuration and the fixed block/chain partition, never on the thread
 * count.
 */
inline EntropyEstimate mc_volume(const Graph& g, const IntegrationConfig& config, std::span<const Vertex> relabel = {})
{
    const std::size_t n = g.vertex_count();
    if (n == 0)
        throw InputError("entropy needs at least one vertex");
    if (!relabel.empty() && relabel.size() != n)
        throw InputError("relabeling size does not match the graph");
    config.validate();
    const IntegrationConfig cfg = config.resolved(n);
    const double log_box = static_cast<double>(n) * std::log(cfg.box_hi - cfg.box_lo);

    EntropyEstimate est;
    est.n = n;
    est.config = cfg;
    detail::Tally total;
    double log_mean = 0.0;

    if (cfg.sampler == SamplerKind::uniform) {
        total = detail::run_uniform(g, cfg, relabel);
        if (total.kept == 0)
            throw NumericalError("volume estimate degenerate: no sample contributed");
        const auto samples = static_cast<double>(total.samples);
        log_mean = total.weight.log_sum() - std::log(samples);
        if (total.samples > 1) {
            // Relative standard error of the mean from q = sum w^2 / (sum w)^2.
            const double q = std::exp(total.weight.log_sum_sq() - 2.0 * total.weight.log_sum());
            est.stderr_S = std::sqrt(std::max(0.0, (samples * q - 1.0) / (samples - 1.0)));
        }
    } else {
        std::vector<detail::ChainResult> results(cfg.chains);
        parallel_for(cfg.chains, cfg.threads, [&](std::size_t c) {
            const std::size_t length = cfg.samples / cfg.chains + (c < cfg.samples % cfg.chains ? 1 : 0);
            results[c] = detail::run_chain(g, cfg, relabel, c, length);
        });
        std::vector<double> batch_log_means;
        for (const auto& r : results) {
            total.merge(r.tally);
            for (const auto& b : r.batches)
                if (b.kept > 0)
                    batch_log_means.push_back(b.weight.log_sum() - std::log(static_cast<double>(b.kept)));
        }
        if (total.kept == 0)
            throw NumericalError("volume estimate degenerate: every chain state was excluded");
        log_mean = total.weight.log_sum() - std::log(static_cast<double>(total.kept));
        const std::size_t b = batch_log_means.size();
        if (b > 1) {
            double m = 0.0;
            for (double lm : batch_log_means)
                m += std::exp(lm - log_mean);
            m /= static_cast<double>(b);
            double var = 0.0;
            for (double lm : batch_log_means)
                var += (std::exp(lm - log_mean) - m) * (std::exp(lm - log_mean) - m);
            var /= static_cast<double>(b - 1);
            est.stderr_S = std::sqrt(var / static_cast<double>(b));
        }
        est.acceptance_rate =
            total.proposals ? static_cast<double>(total.accepted) / static_cast<double>(total.proposals) : 0.0;
    }

    est.S = log_box + log_mean;
    est.n_samples = total.samples;
    est.n_in_domain = total.in_domain;
    est.n_overflow_excluded = total.overflow_excluded;
    est.log_mean_sqrt_det = total.sqrt_det.log_sum() - std::log(static_cast<double>(total.kept));
    est.mean_sqrt_det = std::exp(est.log_mean_sqrt_det);
    if (!std::isfinite(est.S))
        throw NumericalError("volume estimate degenerate: S is not finite");
    return est;
}

/// S / n.
inline double entropy_per_node(const Graph& g, const IntegrationConfig& cfg)
{
    return mc_volume(g, cfg).S / static_cast<double>(g.vertex_count());
}

inline std::string to_string(IntegrationMode m)
{
    return m == IntegrationMode::analytic_regularizer ? "analytic" : "numerical";
}

inline std::string to_string(SamplerKind s) { return s == SamplerKind::uniform ? "uniform" : "chain"; }

inline nlohmann::json to_json(const IntegrationConfig& c)
{
    nlohmann::json j = {{"mode", to_string(c.mode)},
                        {"sampler", to_string(c.sampler)},
                        {"box_lo", c.box_lo},
                        {"box_hi", c.box_hi},
                        {"samples", c.samples},
                        {"seed", c.seed},
                        {"overflow_cap", c.overflow_cap}};
    j["h"] = c.h ? nlohmann::json(*c.h) : nlohmann::json(nullptr);
    j["regularizer_exponent"] = c.regularizer_exponent ? nlohmann::json(*c.regularizer_exponent) : nlohmann::json(nullptr);
    if (c.sampler == SamplerKind::chain) {
        j["chains"] = c.chains;
        j["burn_in"] = c.burn_in;
    }
    return j;
}

inline nlohmann::json to_json(const EntropyEstimate& e)
{
    nlohmann::json j = {{"n", e.n},
                        {"S", e.S},
                        {"S_over_n", e.S / static_cast<double>(e.n)},
                        {"stderr_S", e.stderr_S},
                        {"n_samples", e.n_samples},
                        {"n_in_domain", e.n_in_domain},
                        {"n_overflow_excluded", e.n_overflow_excluded},
                        {"log_mean_sqrt_det", e.log_mean_sqrt_det},
                        {"config", to_json(e.config)}};
    j["mean_sqrt_det"] = std::isfinite(e.mean_sqrt_det) ? nlohmann::json(e.mean_sqrt_det) : nlohmann::json(nullptr);
    if (e.config.sampler == SamplerKind::chain)
        j["acceptance_rate"] = e.acceptance_rate;
    return j;
}

}  // namespace homent

#endif  // HOMENT_ENTROPY_HPP
