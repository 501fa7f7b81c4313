#ifndef HOMENT_GRAPH_HPP
#define HOMENT_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "homent/errors.hpp"
#include "homent/rng.hpp"

namespace homent {

using Vertex = std::uint32_t;

/// Undirected edge stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    constexpr Edge() = default;
    constexpr Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Simple undirected graph on the dense vertex set {0, ..., n-1}.
 *
 * Immutable after construction. Edges are kept sorted and deduplicated, and
 * neighbor lists are sorted, so two graphs with the same edge set compare
 * equal regardless of how they were built.
 */
class Graph {
public:
    Graph() = default;

    explicit Graph(std::size_t n) : n_(n), neighbors_(n) {}

    Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), neighbors_(n)
    {
        for (const Edge& e : edges_) {
            if (e.u == e.v)
                throw InputError("self-loop on vertex " + std::to_string(e.u));
            if (e.v >= n_)
                throw InputError("vertex label " + std::to_string(e.v) + " out of range for n=" +
                                 std::to_string(n_));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (const Edge& e : edges_) {
            neighbors_[e.u].push_back(e.v);
            neighbors_[e.v].push_back(e.u);
        }
        for (auto& nb : neighbors_)
            std::sort(nb.begin(), nb.end());
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const Vertex> neighbors(Vertex v) const { return neighbors_.at(v); }
    std::size_t degree(Vertex v) const { return neighbors_.at(v).size(); }

    bool adjacent(Vertex a, Vertex b) const
    {
        if (a >= n_ || b >= n_ || a == b)
            return false;
        const auto& nb = neighbors_[a];
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    std::vector<std::size_t> degrees() const
    {
        std::vector<std::size_t> d(n_);
        for (std::size_t v = 0; v < n_; ++v)
            d[v] = neighbors_[v].size();
        return d;
    }

    /// Row-major 0/1 adjacency matrix.
    std::vector<std::uint8_t> adjacency_matrix() const
    {
        std::vector<std::uint8_t> a(n_ * n_, 0);
        for (const Edge& e : edges_) {
            a[e.u * n_ + e.v] = 1;
            a[e.v * n_ + e.u] = 1;
        }
        return a;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> neighbors_;
};

namespace detail {

inline std::string line_error(std::size_t line, const std::string& what)
{
    return "line " + std::to_string(line) + ": " + what;
}

inline bool parse_label(std::string_view token, std::uint64_t& out)
{
    if (token.empty() || token.size() > 19)
        return false;
    std::uint64_t value = 0;
    for (char c : token) {
        if (c < '0' || c > '9')
            return false;
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    out = value;
    return true;
}

inline std::vector<std::string_view> split_whitespace(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace detail

/**
 * Parse the edge-list text format.
 *
 * One "i j" pair per line; '#' starts a comment line; an optional "n <count>"
 * header before the first edge fixes the vertex count (otherwise n is one
 * more than the largest label). LF and CRLF line endings are accepted.
 */
inline Graph parse_edge_list(std::istream& in)
{
    constexpr std::uint64_t max_label = std::numeric_limits<Vertex>::max() - 1;
    std::vector<Edge> edges;
    std::uint64_t declared_n = 0;
    bool has_header = false;
    std::uint64_t max_seen = 0;
    bool any_edge = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = detail::split_whitespace(line);
        if (tokens.empty() || tokens.front().front() == '#')
            continue;
        if (tokens.front() == "n") {
            if (has_header)
                throw InputError(detail::line_error(lineno, "duplicate vertex-count header"));
            if (any_edge)
                throw InputError(detail::line_error(lineno, "vertex-count header after edges"));
            if (tokens.size() != 2 || !detail::parse_label(tokens[1], declared_n) || declared_n > max_label + 1)
                throw InputError(detail::line_error(lineno, "expected \"n <count>\""));
            has_header = true;
            continue;
        }
        if (tokens.size() != 2)
            throw InputError(detail::line_error(lineno, "expected two vertex labels"));
        std::uint64_t a = 0;
        std::uint64_t b = 0;
        if (!detail::parse_label(tokens[0], a) || !detail::parse_label(tokens[1], b))
            throw InputError(detail::line_error(lineno, "vertex labels must be non-negative integers"));
        if (a > max_label || b > max_label)
            throw InputError(detail::line_error(lineno, "vertex label too large"));
        if (a == b)
            throw InputError(detail::line_error(lineno, "self-loop on vertex " + std::to_string(a)));
        if (has_header && (a >= declared_n || b >= declared_n))
            throw InputError(detail::line_error(lineno, "vertex label exceeds declared n=" +
                                                             std::to_string(declared_n)));
        edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
        max_seen = std::max({max_seen, a, b});
        any_edge = true;
    }
    const std::uint64_t n = has_header ? declared_n : (any_edge ? max_seen + 1 : 0);
    return Graph(static_cast<std::size_t>(n), std::move(edges));
}

inline Graph parse_edge_list(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_edge_list(in);
}

/// Canonical text form: "n <count>" header, then sorted edges, one per line.
inline std::string serialize(const Graph& g)
{
    std::string out = "n " + std::to_string(g.vertex_count()) + "\n";
    for (const Edge& e : g.edges())
        out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

/// Relabel vertex i as pi[i]; pi must be a bijection on {0, ..., n-1}.
inline Graph permute(const Graph& g, std::span<const Vertex> pi)
{
    const std::size_t n = g.vertex_count();
    if (pi.size() != n)
        throw InputError("permutation has " + std::to_string(pi.size()) + " entries, graph has " +
                         std::to_string(n) + " vertices");
    std::vector<bool> hit(n, false);
    for (Vertex p : pi) {
        if (p >= n || hit[p])
            throw InputError("relabeling is not a bijection");
        hit[p] = true;
    }
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges())
        edges.emplace_back(pi[e.u], pi[e.v]);
    return Graph(n, std::move(edges));
}

/// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
inline std::vector<Vertex> random_permutation(std::size_t n, Rng& rng)
{
    std::vector<Vertex> pi(n);
    std::iota(pi.begin(), pi.end(), Vertex{0});
    for (std::size_t i = n; i > 1; --i)
        std::swap(pi[i - 1], pi[rng.below(i)]);
    return pi;
}

namespace detail {

/// Index of pair {i, j} (i < j) in the row-major upper triangle, inverted.
inline Edge pair_from_index(std::uint64_t idx, std::size_t n)
{
    // Row i holds n-1-i pairs; walk rows. n is small enough for this to be cheap
    // relative to graph construction.
    std::uint64_t i = 0;
    std::uint64_t row = n - 1;
    while (idx >= row) {
        idx -= row;
        ++i;
        --row;
    }
    return Edge(static_cast<Vertex>(i), static_cast<Vertex>(i + 1 + idx));
}

}  // namespace detail

inline std::uint64_t max_edge_count(std::size_t n)
{
    return static_cast<std::uint64_t>(n) * (n ? n - 1 : 0) / 2;
}

/**
 * Uniform random graph G(n, k): a k-subset of the n(n-1)/2 vertex pairs,
 * drawn with Floyd's algorithm.
 */
inline Graph generate_gnk(std::size_t n, std::uint64_t k, std::uint64_t seed)
{
    const std::uint64_t total = max_edge_count(n);
    if (k > total)
        throw InputError("k=" + std::to_string(k) + " exceeds n(n-1)/2=" + std::to_string(total));
    Rng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    std::vector<std::uint64_t> order;
    order.reserve(static_cast<std::size_t>(k));
    for (std::uint64_t j = total - k; j < total; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        const std::uint64_t pick = chosen.insert(t).second ? t : j;
        if (pick == j)
            chosen.insert(j);
        order.push_back(pick);
    }
    std::vector<Edge> edges;
    edges.reserve(order.size());
    for (std::uint64_t idx : order)
        edges.push_back(detail::pair_from_index(idx, n));
    return Graph(n, std::move(edges));
}

struct PowerLawOptions {
    /// Configuration-model attempts before falling back to erasing bad edges.
    std::size_t max_retries = 100;
    /// When false, exhausting retries throws instead of erasing.
    bool allow_erased_fallback = true;
};

/// A power-law graph together with how it was realized.
struct PowerLawDraw {
    Graph graph;
    std::vector<std::size_t> degree_sequence;
    double realized_k_over_n = 0.0;
    std::size_t attempts = 0;
    /// True when self-loops or multi-edges were erased after retries ran out.
    bool erased_fallback = false;
};

/**
 * Random graph with power-law degree law n(d) = e^alpha d^-gamma.
 *
 * Degrees are drawn i.i.d. from P(d) proportional to d^-gamma on [1, n-1]
 * (the sequence is redrawn until its sum is even), then wired with the
 * configuration model. Wirings containing self-loops or multi-edges are
 * rejected; after `max_retries` rejections the last wiring is kept with the
 * offending stubs erased and `erased_fallback` set. The factor e^alpha only
 * scales the count law and cancels in the sampling distribution.
 */
inline PowerLawDraw generate_power_law(std::size_t n, double gamma, double alpha, std::uint64_t seed,
                                       const PowerLawOptions& options = {})
{
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw InputError("power-law exponent must satisfy gamma > 1");
    if (!std::isfinite(alpha))
        throw InputError("alpha must be finite");
    if (options.max_retries == 0)
        throw InputError("power-law wiring needs max_retries >= 1");
    PowerLawDraw draw;
    if (n < 2) {
        draw.graph = Graph(n);
        draw.degree_sequence.assign(n, 0);
        return draw;
    }

    Rng rng(seed);
    std::vector<double> cdf(n - 1);
    double acc = 0.0;
    for (std::size_t d = 1; d < n; ++d) {
        acc += std::pow(static_cast<double>(d), -gamma);
        cdf[d - 1] = acc;
    }
    for (double& c : cdf)
        c /= acc;

    std::vector<std::size_t>& seq = draw.degree_sequence;
    seq.resize(n);
    std::size_t stub_total = 0;
    do {
        stub_total = 0;
        for (auto& d : seq) {
            const double u = rng.uniform01();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            d = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 2) + 1;
            stub_total += d;
        }
    } while (stub_total % 2 != 0);

    std::vector<Vertex> stubs;
    stubs.reserve(stub_total);
    for (std::size_t v = 0; v < n; ++v)
        stubs.insert(stubs.end(), seq[v], static_cast<Vertex>(v));

    std::vector<Edge> edges;
    for (std::size_t attempt = 1; attempt <= options.max_retries; ++attempt) {
        draw.attempts = attempt;
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        edges.clear();
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            if (stubs[i] == stubs[i + 1]) {
                simple = false;
                continue;
            }
            edges.emplace_back(stubs[i], stubs[i + 1]);
        }
        if (simple) {
            std::vector<Edge> sorted = edges;
            std::sort(sorted.begin(), sorted.end());
            simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        }
        if (simple) {
            draw.graph = Graph(n, std::move(edges));
            draw.realized_k_over_n = static_cast<double>(draw.graph.edge_count()) / static_cast<double>(n);
            return draw;
        }
    }

    if (!options.allow_erased_fallback) {
        std::string msg = "configuration model failed after " + std::to_string(options.max_retries) +
                          " attempts; degree sequence:";
        for (auto d : seq)
            msg += " " + std::to_string(d);
        throw RetryExhausted(msg);
    }
    // Graph's constructor collapses duplicates; self-loops were already skipped.
    draw.erased_fallback = true;
    draw.graph = Graph(n, std::move(edges));
    draw.realized_k_over_n = static_cast<double>(draw.graph.edge_count()) / static_cast<double>(n);
    return draw;
}

}  // namespace homent

#endif  // HOMENT_GRAPH_HPP
