#ifndef HOMENT_SWEEP_HPP
#define HOMENT_SWEEP_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "homent/complex.hpp"
#include "homent/entropy.hpp"
#include "homent/errors.hpp"
#include "homent/graph.hpp"
#include "homent/homology.hpp"
#include "homent/parallel.hpp"
#include "homent/rng.hpp"

namespace homent {

/// One realization of a sweep: x is k/n for G(n,k) and gamma for power-law graphs.
struct SweepRow {
    double x = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double S_over_n = 0.0;
    /// Standard error of S / n.
    double stderr = 0.0;
    std::size_t beta0 = 0;
    std::size_t beta1 = 0;
    double realized_k_over_n = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_overflow_excluded = 0;
};

struct SweepOptions {
    IntegrationConfig integration;
    std::uint64_t seed = 1;
    std::size_t reps = 5;
    unsigned threads = 0;
};

struct PowerLawSweepOptions {
    double alpha = 0.0;
    double window_lo = 0.7;
    double window_hi = 0.85;
    /// Graph draws per gamma before giving up on filling `reps` rows.
    std::size_t max_attempts = 200000;
    PowerLawOptions generator;
};

/// Mean and sample standard deviation per sweep coordinate.
struct SweepSummaryRow {
    double x = 0.0;
    std::size_t count = 0;
    double S_over_n_mean = 0.0;
    double S_over_n_sd = 0.0;
    double beta0_mean = 0.0;
    double beta0_sd = 0.0;
    double beta1_mean = 0.0;
    double beta1_sd = 0.0;
    double realized_k_over_n_mean = 0.0;
};

namespace detail {

/// Betti numbers (beta0, beta1) and entropy of one realization.
inline SweepRow evaluate_row(const Graph& g, IntegrationConfig cfg, std::uint64_t row_seed)
{
    SweepRow row;
    row.seed = row_seed;
    const auto complex = clique_complex(g, 2);
    const auto betti = betti_numbers(complex, 1);
    row.beta0 = betti.beta[0];
    row.beta1 = betti.beta[1];

    cfg.seed = derive_seed(row_seed, {1});
    cfg.threads = 1;
    const auto est = mc_volume(g, cfg);
    const auto n = static_cast<double>(g.vertex_count());
    row.S_over_n = est.S / n;
    row.stderr = est.stderr_S / n;
    row.n_samples = est.n_samples;
    row.n_overflow_excluded = est.n_overflow_excluded;
    row.realized_k_over_n = static_cast<double>(g.edge_count()) / n;
    return row;
}

}  // namespace detail

/// Edge count for a k/n target, rounded to nearest.
inline std::uint64_t edges_for_ratio(std::size_t n, double k_over_n)
{
    if (!(k_over_n >= 0) || !std::isfinite(k_over_n))
        throw InputError("k/n must be a non-negative number");
    const auto k = static_cast<std::uint64_t>(std::llround(k_over_n * static_cast<double>(n)));
    if (k > max_edge_count(n))
        throw InputError("k/n = " + std::to_string(k_over_n) + " exceeds the complete graph on " +
                         std::to_string(n) + " vertices");
    return k;
}

/**
 * G(n,k) sweep: `reps` realizations per edge count. Row r (k-major order)
 * uses seed derive_seed(seed, {r}); its graph and entropy seeds derive from
 * that, so rows are independent of scheduling.
 */
inline std::vector<SweepRow> sweep_gnk(std::size_t n, std::vector<std::uint64_t> ks, const SweepOptions& opt)
{
    if (n == 0)
        throw InputError("sweep needs n >= 1");
    if (opt.reps == 0)
        throw InputError("reps must be at least 1");
    opt.integration.validate();
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (auto k : ks)
        if (k > max_edge_count(n))
            throw InputError("k = " + std::to_string(k) + " exceeds the complete graph on " + std::to_string(n) +
                             " vertices");

    std::vector<SweepRow> rows(ks.size() * opt.reps);
    parallel_for(rows.size(), opt.threads, [&](std::size_t r) {
        const std::uint64_t k = ks[r / opt.reps];
        const std::uint64_t row_seed = derive_seed(opt.seed, {r});
        const Graph g = generate_gnk(n, k, derive_seed(row_seed, {0}));
        SweepRow row = detail::evaluate_row(g, opt.integration, row_seed);
        row.x = static_cast<double>(k) / static_cast<double>(n);
        row.rep = r % opt.reps;
        rows[r] = row;
    });
    return rows;
}

/**
 * Power-law sweep: per gamma, draws graphs with seeds derive_seed(seed,
 * {gamma index, attempt}) until `reps` of them have realized k/n inside the
 * window. Throws RetryExhausted with diagnostics when max_attempts is hit.
 */
inline std::vector<SweepRow> sweep_powerlaw(std::size_t n, std::vector<double> gammas, const SweepOptions& opt,
                                            const PowerLawSweepOptions& pl)
{
    if (n < 2)
        throw InputError("power-law sweep needs n >= 2");
    if (opt.reps == 0)
        throw InputError("reps must be at least 1");
    if (!(pl.window_lo <= pl.window_hi))
        throw InputError("k/n window must satisfy lo <= hi");
    opt.integration.validate();
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

    struct Accepted {
        double gamma;
        std::size_t rep;
        std::uint64_t seed;
        Graph graph;
    };
    std::vector<Accepted> accepted;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        std::size_t found = 0;
        double lo_seen = INFINITY;
        double hi_seen = -INFINITY;
        std::size_t attempt = 0;
        for (; attempt < pl.max_attempts && found < opt.reps; ++attempt) {
            const std::uint64_t row_seed = derive_seed(opt.seed, {gi, attempt});
            auto draw = generate_power_law(n, gammas[gi], pl.alpha, derive_seed(row_seed, {0}), pl.generator);
            lo_seen = std::min(lo_seen, draw.realized_k_over_n);
            hi_seen = std::max(hi_seen, draw.realized_k_over_n);
            if (draw.realized_k_over_n < pl.window_lo || draw.realized_k_over_n > pl.window_hi)
                continue;
            accepted.push_back({gammas[gi], found++, row_seed, std::move(draw.graph)});
        }
        if (found < opt.reps)
            throw RetryExhausted("gamma = " + std::to_string(gammas[gi]) + ": " + std::to_string(found) + " of " +
                                 std::to_string(opt.reps) + " realizations inside k/n window [" +
                                 std::to_string(pl.window_lo) + ", " + std::to_string(pl.window_hi) + "] after " +
                                 std::to_string(attempt) + " attempts; observed k/n range [" +
                                 std::to_string(lo_seen) + ", " + std::to_string(hi_seen) + "]");
    }

    std::vector<SweepRow> rows(accepted.size());
    parallel_for(rows.size(), opt.threads, [&](std::size_t r) {
        const auto& a = accepted[r];
        SweepRow row = detail::evaluate_row(a.graph, opt.integration, a.seed);
        row.x = a.gamma;
        row.rep = a.rep;
        rows[r] = row;
    });
    return rows;
}

inline std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows)
{
    std::map<double, std::vector<const SweepRow*>> groups;
    for (const auto& r : rows)
        groups[r.x].push_back(&r);
    const auto mean_sd = [](const std::vector<double>& v, double& mean, double& sd) {
        mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    };
    std::vector<SweepSummaryRow> out;
    for (const auto& [x, members] : groups) {
        SweepSummaryRow s;
        s.x = x;
        s.count = members.size();
        std::vector<double> sn, b0, b1, kn;
        for (const auto* m : members) {
            sn.push_back(m->S_over_n);
            b0.push_back(static_cast<double>(m->beta0));
            b1.push_back(static_cast<double>(m->beta1));
            kn.push_back(m->realized_k_over_n);
        }
        double unused = 0.0;
        mean_sd(sn, s.S_over_n_mean, s.S_over_n_sd);
        mean_sd(b0, s.beta0_mean, s.beta0_sd);
        mean_sd(b1, s.beta1_mean, s.beta1_sd);
        mean_sd(kn, s.realized_k_over_n_mean, unused);
        out.push_back(s);
    }
    return out;
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_comments(std::ostream& out, const std::vector<std::string>& comments)
{
    for (const auto& c : comments)
        out << "# " << c << '\n';
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                            const std::vector<std::string>& comments = {})
{
    write_comments(out, comments);
    out << "x,rep,seed,S_over_n,stderr,beta0,beta1,realized_k_over_n,n_samples,n_overflow_excluded\n";
    for (const auto& r : rows)
        out << format_double(r.x) << ',' << r.rep << ',' << r.seed << ',' << format_double(r.S_over_n) << ','
            << format_double(r.stderr) << ',' << r.beta0 << ',' << r.beta1 << ','
            << format_double(r.realized_k_over_n) << ',' << r.n_samples << ',' << r.n_overflow_excluded << '\n';
}

inline void write_summary_csv(std::ostream& out, const std::vector<SweepSummaryRow>& rows,
                              const std::vector<std::string>& comments = {})
{
    write_comments(out, comments);
    out << "x,count,S_over_n_mean,S_over_n_sd,beta0_mean,beta0_sd,beta1_mean,beta1_sd,realized_k_over_n_mean\n";
    for (const auto& s : rows)
        out << format_double(s.x) << ',' << s.count << ',' << format_double(s.S_over_n_mean) << ','
            << format_double(s.S_over_n_sd) << ',' << format_double(s.beta0_mean) << ','
            << format_double(s.beta0_sd) << ',' << format_double(s.beta1_mean) << ','
            << format_double(s.beta1_sd) << ',' << format_double(s.realized_k_over_n_mean) << '\n';
}

/// gnuplot script plotting S/n, beta0 and beta1 of a summary file against x.
inline std::string gnuplot_script(const std::string& summary_csv, const std::string& x_label)
{
    return "set datafile separator ','\n"
           "set key outside\n"
           "set xlabel '" + x_label + "'\n"
           "set y2tics\n"
           "plot '" + summary_csv + "' using 1:3:4 with yerrorlines title 'S/n', \\\n"
           "     '' using 1:5 axes x1y2 with linespoints title 'beta0', \\\n"
           "     '' using 1:7 axes x1y2 with linespoints title 'beta1'\n";
}

}  // namespace homent

#endif  // HOMENT_SWEEP_HPP
