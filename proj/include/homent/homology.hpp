#ifndef HOMENT_HOMOLOGY_HPP
#define HOMENT_HOMOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homent/complex.hpp"
#include "homent/errors.hpp"
#include "homent/graph.hpp"

namespace homent {

/// One nonzero of a sparse integer matrix column.
struct MatrixEntry {
    std::size_t row = 0;
    int value = 0;

    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/**
 * Matrix of the boundary map d_p : C_p -> C_{p-1} in the canonical bases.
 *
 * Column j is the p-simplex simplices(p)[j] with increasing-vertex
 * orientation; its entries are sorted by row.
 */
struct BoundaryMatrix {
    std::size_t p = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<MatrixEntry>> columns;
};

struct BettiVector {
    std::vector<std::size_t> beta;
    /// Characteristic of the coefficient field; 0 means exact rationals.
    std::uint64_t field_char = 0;
};

/// Default prime for modular ranks: 2^31 - 1.
inline constexpr std::uint64_t default_rank_prime = 2147483647ULL;

/// Sign of the face obtained by omitting vertex i is (-1)^i.
inline BoundaryMatrix boundary_matrix(const SimplicialComplex& s, std::size_t p)
{
    if (p < 1 || p > s.p_max_built())
        throw InputError("boundary map d_" + std::to_string(p) + " outside built range 1.." +
                         std::to_string(s.p_max_built()));
    BoundaryMatrix m;
    m.p = p;
    const auto& faces = s.simplices(p - 1);
    const auto& cells = s.simplices(p);
    m.rows = faces.size();
    m.cols = cells.size();
    m.columns.resize(cells.size());
    Simplex face(p);
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const Simplex& cell = cells[j];
        auto& col = m.columns[j];
        col.reserve(p + 1);
        // Omitting vertex i, for i from p down to 0, yields faces in increasing
        // lexicographic order, so the column comes out sorted by row.
        for (std::size_t k = 0; k <= p; ++k) {
            const std::size_t i = p - k;
            std::size_t w = 0;
            for (std::size_t t = 0; t <= p; ++t)
                if (t != i)
                    face[w++] = cell[t];
            const auto row = s.index_of(face);
            if (!row)
                throw InputError("complex is not closed under faces");
            col.push_back({*row, (i % 2 == 0) ? 1 : -1});
        }
    }
    return m;
}

namespace detail {

/// Arithmetic in Z/pZ for p < 2^32.
struct ModPrime {
    using value_type = std::uint64_t;
    std::uint64_t prime = default_rank_prime;

    value_type from_int(int v) const
    {
        const auto m = static_cast<std::int64_t>(prime);
        return static_cast<value_type>(((v % m) + m) % m);
    }
    bool is_zero(value_type a) const { return a == 0; }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + prime - b; }
    value_type mul(value_type a, value_type b) const { return (a * b) % prime; }
    value_type inverse(value_type a) const
    {
        // Fermat: a^(p-2).
        value_type result = 1;
        value_type base = a;
        std::uint64_t e = prime - 2;
        while (e) {
            if (e & 1)
                result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
};

/// Exact rational arithmetic.
struct Rationals {
    using value_type = boost::multiprecision::cpp_rational;

    value_type from_int(int v) const { return value_type(v); }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inverse(const value_type& a) const { return value_type(1) / a; }
};

/**
 * Rank by left-to-right column reduction: each column is reduced against
 * earlier columns until its lowest nonzero row is not a pivot of any of them.
 * The number of nonzero reduced columns is the rank over the field.
 */
template <typename Field>
std::size_t reduced_rank(const BoundaryMatrix& m, const Field& field)
{
    using T = typename Field::value_type;
    using Column = std::vector<std::pair<std::size_t, T>>;

    std::vector<Column> reduced;
    reduced.reserve(m.cols);
    std::unordered_map<std::size_t, std::size_t> pivot_of_row;
    Column work;
    Column scratch;

    for (const auto& col : m.columns) {
        work.clear();
        for (const auto& e : col)
            work.emplace_back(e.row, field.from_int(e.value));

        while (!work.empty()) {
            const std::size_t low = work.back().first;
            const auto it = pivot_of_row.find(low);
            if (it == pivot_of_row.end())
                break;
            const Column& other = reduced[it->second];
            // work <- work - (work_low / other_low) * other
            const T factor = field.mul(work.back().second, field.inverse(other.back().second));
            scratch.clear();
            std::size_t a = 0;
            std::size_t b = 0;
            while (a < work.size() || b < other.size()) {
                if (b == other.size() || (a < work.size() && work[a].first < other[b].first)) {
                    scratch.push_back(work[a++]);
                } else if (a == work.size() || other[b].first < work[a].first) {
                    scratch.emplace_back(other[b].first, field.sub(field.from_int(0), field.mul(factor, other[b].second)));
                    ++b;
                } else {
                    T v = field.sub(work[a].second, field.mul(factor, other[b].second));
                    if (!field.is_zero(v))
                        scratch.emplace_back(work[a].first, std::move(v));
                    ++a;
                    ++b;
                }
            }
            std::swap(work, scratch);
        }

        if (!work.empty()) {
            pivot_of_row.emplace(work.back().first, reduced.size());
            reduced.push_back(work);
        }
    }
    return reduced.size();
}

}  // namespace detail

/// Rank of a boundary matrix over GF(prime).
inline std::size_t rank_mod_prime(const BoundaryMatrix& m, std::uint64_t prime = default_rank_prime)
{
    return detail::reduced_rank(m, detail::ModPrime{prime});
}

/// Rank of a boundary matrix over the rationals, in exact arithmetic.
inline std::size_t rank_exact(const BoundaryMatrix& m)
{
    return detail::reduced_rank(m, detail::Rationals{});
}

struct BettiOptions {
    /// Use exact rational ranks instead of GF(prime).
    bool exact = false;
    std::uint64_t prime = default_rank_prime;
    /// Exact ranks are refused above this many simplices.
    std::size_t exact_simplex_limit = 20000;
};

/**
 * Unreduced Betti numbers beta_0..beta_up_to:
 * beta_p = nu_p - rank d_p - rank d_{p+1}, with rank d_0 = 0.
 *
 * d_{up_to+1} must be available: either p_max_built >= up_to+1, or the
 * complex is complete, in which case missing maps are zero.
 */
inline BettiVector betti_numbers(const SimplicialComplex& s, std::size_t up_to, const BettiOptions& options = {})
{
    if (s.p_max_built() < up_to + 1 && !s.is_complete())
        throw InputError("Betti numbers up to dimension " + std::to_string(up_to) + " need p_max >= " +
                         std::to_string(up_to + 1) + " (complex built to " + std::to_string(s.p_max_built()) + ")");
    if (options.exact && s.total_simplices() > options.exact_simplex_limit)
        throw InputError("exact ranks refused: " + std::to_string(s.total_simplices()) +
                         " simplices exceed the limit of " + std::to_string(options.exact_simplex_limit));

    const auto rank_of = [&](std::size_t p) -> std::size_t {
        if (p == 0 || p > s.p_max_built() || s.count(p) == 0)
            return 0;
        const auto m = boundary_matrix(s, p);
        return options.exact ? rank_exact(m) : rank_mod_prime(m, options.prime);
    };

    BettiVector out;
    out.field_char = options.exact ? 0 : options.prime;
    std::vector<std::size_t> ranks(up_to + 2);
    for (std::size_t p = 1; p <= up_to + 1; ++p)
        ranks[p] = rank_of(p);
    for (std::size_t p = 0; p <= up_to; ++p)
        out.beta.push_back(s.count(p) - ranks[p] - ranks[p + 1]);
    return out;
}

/// Union-find component count.
inline std::size_t connected_components(const Graph& g)
{
    std::vector<std::size_t> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = g.vertex_count();
    for (const Edge& e : g.edges()) {
        const auto a = find(e.u);
        const auto b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

/// |E| - |V| + components: beta_1 of a triangle-free graph.
inline std::size_t cycle_rank(const Graph& g)
{
    return g.edge_count() + connected_components(g) - g.vertex_count();
}

}  // namespace homent

#endif  // HOMENT_HOMOLOGY_HPP
