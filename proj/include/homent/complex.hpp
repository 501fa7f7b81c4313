#ifndef HOMENT_COMPLEX_HPP
#define HOMENT_COMPLEX_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "homent/errors.hpp"
#include "homent/graph.hpp"

namespace homent {

/// Strictly increasing vertex tuple; a p-simplex has p+1 vertices.
using Simplex = std::vector<Vertex>;

/**
 * Clique simplicial complex of a graph, materialized up to a dimension cap.
 *
 * simplices(p) lists every p-simplex in lexicographic order; that order is
 * the canonical basis used by the boundary matrices.
 */
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    SimplicialComplex(std::size_t n, std::size_t p_max_built, int dimension,
                      std::vector<std::vector<Simplex>> by_dim)
        : n_(n), p_max_built_(p_max_built), dimension_(dimension), by_dim_(std::move(by_dim))
    {
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t p_max_built() const noexcept { return p_max_built_; }

    /// sup of simplex dimensions (largest clique size minus one); -1 when empty.
    int dimension() const noexcept { return dimension_; }

    /// Every simplex of the complex is materialized.
    bool is_complete() const noexcept { return dimension_ <= static_cast<int>(p_max_built_); }

    /// p-simplices in canonical order; empty for p above the built range.
    const std::vector<Simplex>& simplices(std::size_t p) const
    {
        static const std::vector<Simplex> none;
        return p < by_dim_.size() ? by_dim_[p] : none;
    }

    std::size_t count(std::size_t p) const { return simplices(p).size(); }

    std::size_t total_simplices() const
    {
        std::size_t total = 0;
        for (const auto& s : by_dim_)
            total += s.size();
        return total;
    }

    /// Position of a simplex in the canonical basis of its dimension.
    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        if (s.empty())
            return std::nullopt;
        const auto& list = simplices(s.size() - 1);
        const auto it = std::lower_bound(list.begin(), list.end(), s);
        if (it == list.end() || *it != s)
            return std::nullopt;
        return static_cast<std::size_t>(it - list.begin());
    }

private:
    std::size_t n_ = 0;
    std::size_t p_max_built_ = 0;
    int dimension_ = -1;
    std::vector<std::vector<Simplex>> by_dim_;
};

struct ComplexSummary {
    std::vector<std::size_t> nu;
    int dim = -1;
    /// Only set when the complex is complete.
    std::optional<long long> chi;
};

namespace detail {

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (Vertex v : s) {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Bron-Kerbosch with Tomita pivoting over sorted vertex vectors.
inline void bron_kerbosch(const Graph& g, Simplex& r, std::vector<Vertex> p, std::vector<Vertex> x,
                          std::vector<Simplex>& out)
{
    if (p.empty()) {
        if (x.empty()) {
            Simplex clique = r;
            std::sort(clique.begin(), clique.end());
            out.push_back(std::move(clique));
        }
        return;
    }

    // Pivot: vertex of P u X with the most neighbors in P.
    Vertex pivot = p.front();
    std::size_t best = 0;
    for (const auto* set : {&p, &x}) {
        for (Vertex u : *set) {
            const auto nb = g.neighbors(u);
            std::size_t hits = 0;
            for (Vertex w : p)
                hits += std::binary_search(nb.begin(), nb.end(), w) ? 1 : 0;
            if (hits >= best) {
                best = hits;
                pivot = u;
            }
        }
    }

    const auto pivot_nb = g.neighbors(pivot);
    std::vector<Vertex> candidates;
    std::set_difference(p.begin(), p.end(), pivot_nb.begin(), pivot_nb.end(), std::back_inserter(candidates));

    for (Vertex v : candidates) {
        const auto nb = g.neighbors(v);
        std::vector<Vertex> p_next;
        std::vector<Vertex> x_next;
        std::set_intersection(p.begin(), p.end(), nb.begin(), nb.end(), std::back_inserter(p_next));
        std::set_intersection(x.begin(), x.end(), nb.begin(), nb.end(), std::back_inserter(x_next));
        r.push_back(v);
        bron_kerbosch(g, r, std::move(p_next), std::move(x_next), out);
        r.pop_back();
        p.erase(std::lower_bound(p.begin(), p.end(), v));
        x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
}

/// Insert every subset of `clique` with between 1 and max_size vertices.
inline void expand_faces(const Simplex& clique, std::size_t max_size,
                         std::vector<std::unordered_set<Simplex, SimplexHash>>& sets)
{
    const std::size_t m = clique.size();
    const std::size_t top = std::min(m, max_size);
    Simplex face;
    std::vector<std::size_t> idx;
    for (std::size_t size = 1; size <= top; ++size) {
        idx.resize(size);
        for (std::size_t i = 0; i < size; ++i)
            idx[i] = i;
        while (true) {
            face.clear();
            for (std::size_t i : idx)
                face.push_back(clique[i]);
            sets[size - 1].insert(face);
            // Next combination in lexicographic order.
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == m - size + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace detail

/// All inclusion-maximal cliques, each sorted, in lexicographic order.
inline std::vector<Simplex> maximal_cliques(const Graph& g)
{
    std::vector<Simplex> out;
    if (g.vertex_count() == 0)
        return out;
    std::vector<Vertex> p(g.vertex_count());
    for (std::size_t v = 0; v < p.size(); ++v)
        p[v] = static_cast<Vertex>(v);
    Simplex r;
    detail::bron_kerbosch(g, r, std::move(p), {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * Clique complex of g with simplices of dimension 0..p_max.
 *
 * Maximal cliques are expanded into their faces up to p_max+1 vertices and
 * deduplicated. The true dimension is recorded even when it exceeds the cap.
 */
inline SimplicialComplex clique_complex(const Graph& g, std::size_t p_max)
{
    const auto cliques = maximal_cliques(g);
    int dim = -1;
    for (const auto& c : cliques)
        dim = std::max(dim, static_cast<int>(c.size()) - 1);

    const std::size_t levels = dim < 0 ? 0 : std::min<std::size_t>(p_max, static_cast<std::size_t>(dim)) + 1;
    std::vector<std::unordered_set<Simplex, detail::SimplexHash>> sets(levels);
    for (const auto& c : cliques)
        detail::expand_faces(c, levels, sets);

    std::vector<std::vector<Simplex>> by_dim(levels);
    for (std::size_t p = 0; p < levels; ++p) {
        by_dim[p].assign(sets[p].begin(), sets[p].end());
        std::sort(by_dim[p].begin(), by_dim[p].end());
    }
    return SimplicialComplex(g.vertex_count(), p_max, dim, std::move(by_dim));
}

/// Euler-Poincare characteristic; requires the complex to be complete.
inline long long euler_characteristic(const SimplicialComplex& s)
{
    if (!s.is_complete())
        throw InputError("chi undefined under truncation: dim K=" + std::to_string(s.dimension()) +
                         " exceeds p_max=" + std::to_string(s.p_max_built()));
    // The empty complex has chi = 0.
    long long chi = 0;
    for (int p = 0; p <= s.dimension(); ++p) {
        const auto nu = static_cast<long long>(s.count(static_cast<std::size_t>(p)));
        chi += (p % 2 == 0) ? nu : -nu;
    }
    return chi;
}

inline ComplexSummary summarize(const SimplicialComplex& s)
{
    ComplexSummary out;
    out.dim = s.dimension();
    const std::size_t levels = s.dimension() < 0
                                   ? 0
                                   : std::min<std::size_t>(s.p_max_built(), static_cast<std::size_t>(s.dimension())) + 1;
    for (std::size_t p = 0; p < levels; ++p)
        out.nu.push_back(s.count(p));
    if (s.is_complete())
        out.chi = euler_characteristic(s);
    return out;
}

inline nlohmann::json to_json(const SimplicialComplex& s)
{
    nlohmann::json simplices = nlohmann::json::array();
    for (std::size_t p = 0; s.dimension() >= 0 && p <= std::min<std::size_t>(s.p_max_built(), s.dimension()); ++p)
        simplices.push_back(s.simplices(p));
    return {{"n", s.vertex_count()}, {"p_max_built", s.p_max_built()}, {"dim", s.dimension()},
            {"simplices", std::move(simplices)}};
}

}  // namespace homent

#endif  // HOMENT_COMPLEX_HPP
