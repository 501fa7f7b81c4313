#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "homent/graph.hpp"
#include "oracles.hpp"

using namespace homent;

TEST_CASE("edges are stored with the smaller endpoint first")
{
    const Edge e(7, 3);
    CHECK(e.u == 3);
    CHECK(e.v == 7);
    CHECK(Edge(3, 7) == e);
}

TEST_CASE("graph construction validates and deduplicates")
{
    const Graph g(4, {{1, 0}, {0, 1}, {2, 3}});
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(1, 0));
    CHECK_FALSE(g.adjacent(0, 2));
    CHECK_FALSE(g.adjacent(0, 0));
    CHECK(g.degrees() == std::vector<std::size_t>{1, 1, 1, 1});

    CHECK_THROWS_AS(Graph(3, {{1, 1}}), InputError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
}

TEST_CASE("adjacency matrix is symmetric 0/1")
{
    const Graph g(3, {{0, 2}});
    const auto a = g.adjacency_matrix();
    CHECK(a == std::vector<std::uint8_t>{0, 0, 1, 0, 0, 0, 1, 0, 0});
}

TEST_CASE("edge list parsing")
{
    SECTION("header, comments, blank lines and CRLF")
    {
        const auto g = parse_edge_list("# a comment\r\nn 6\r\n\r\n0 1\r\n  2\t3  \n# trailing\n");
        CHECK(g.vertex_count() == 6);
        CHECK(g.edge_count() == 2);
        CHECK(g.adjacent(2, 3));
    }
    SECTION("without a header n is one past the largest label")
    {
        const auto g = parse_edge_list("0 4\n1 2\n");
        CHECK(g.vertex_count() == 5);
    }
    SECTION("empty input is the empty graph")
    {
        CHECK(parse_edge_list("").vertex_count() == 0);
        CHECK(parse_edge_list("# only comments\n").vertex_count() == 0);
    }
    SECTION("errors carry the line number")
    {
        const auto message = [](std::string_view text) {
            try {
                parse_edge_list(text);
            } catch (const InputError& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(message("0 1\nx 2\n").find("line 2") != std::string::npos);
        CHECK(message("0 1\n3 3\n").find("line 2") != std::string::npos);
        CHECK(message("n 3\n0 1\n1 3\n").find("line 3") != std::string::npos);
        CHECK(message("0 1 2\n").find("line 1") != std::string::npos);
        CHECK(message("0 1\nn 4\n").find("line 2") != std::string::npos);
        CHECK(message("n 4\nn 4\n").find("line 2") != std::string::npos);
        CHECK(message("-1 2\n").find("line 1") != std::string::npos);
    }
}

TEST_CASE("serialize and parse round-trip")
{
    std::mt19937_64 rng(11);
    for (const auto& g : oracle::random_corpus(100, 12, 3)) {
        const auto back = parse_edge_list(serialize(g));
        CHECK(back == g);
    }
    CHECK(serialize(Graph(3, {{2, 0}})) == "n 3\n0 2\n");
}

TEST_CASE("permute preserves degree multiset and rejects non-bijections")
{
    Rng rng(5);
    for (const auto& g : oracle::random_corpus(50, 10, 8)) {
        const auto pi = random_permutation(g.vertex_count(), rng);
        const auto h = permute(g, pi);
        auto da = g.degrees();
        auto db = h.degrees();
        std::sort(da.begin(), da.end());
        std::sort(db.begin(), db.end());
        CHECK(da == db);
        CHECK(h.edge_count() == g.edge_count());
        for (const Edge& e : g.edges())
            CHECK(h.adjacent(pi[e.u], pi[e.v]));
    }
    const Graph g(3, {{0, 1}});
    const std::vector<Vertex> repeated{0, 0, 1};
    const std::vector<Vertex> short_pi{0, 1};
    const std::vector<Vertex> out_of_range{0, 1, 3};
    CHECK_THROWS_AS(permute(g, repeated), InputError);
    CHECK_THROWS_AS(permute(g, short_pi), InputError);
    CHECK_THROWS_AS(permute(g, out_of_range), InputError);
}

TEST_CASE("G(n,k) has exactly k edges and is reproducible")
{
    CHECK(max_edge_count(0) == 0);
    CHECK(max_edge_count(5) == 10);
    for (std::uint64_t k : {0, 1, 5, 10}) {
        const auto g = generate_gnk(5, k, 9);
        CHECK(g.edge_count() == k);
        CHECK(g == generate_gnk(5, k, 9));
    }
    CHECK(generate_gnk(5, 10, 1).edge_count() == 10);
    CHECK_THROWS_AS(generate_gnk(5, 11, 1), InputError);
    CHECK(generate_gnk(50, 100, 1) != generate_gnk(50, 100, 2));
}

TEST_CASE("G(4,3) is uniform over the 20 three-edge graphs")
{
    constexpr int draws = 4000;
    std::map<std::string, int> counts;
    for (int i = 0; i < draws; ++i)
        ++counts[serialize(generate_gnk(4, 3, static_cast<std::uint64_t>(i) + 1000))];
    REQUIRE(counts.size() == 20);
    const double p = 1.0 / 20.0;
    const double sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& [graph, c] : counts)
        CHECK(std::abs(c - draws * p) <= 5 * sigma);
}

TEST_CASE("power-law graphs are simple and follow the declared degree sequence")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto draw = generate_power_law(30, 2.5, 0.0, seed);
        std::size_t sum = 0;
        for (auto d : draw.degree_sequence) {
            CHECK(d >= 1);
            CHECK(d <= 29);
            sum += d;
        }
        CHECK(sum % 2 == 0);
        CHECK(draw.realized_k_over_n == Catch::Approx(draw.graph.edge_count() / 30.0));
        if (!draw.erased_fallback)
            CHECK(draw.graph.degrees() == draw.degree_sequence);
        else
            CHECK(2 * draw.graph.edge_count() < sum);
    }
}

TEST_CASE("power-law generation is deterministic and alpha only scales the count law")
{
    const auto a = generate_power_law(40, 3.0, 0.0, 17);
    const auto b = generate_power_law(40, 3.0, 2.5, 17);
    CHECK(a.graph == b.graph);
    CHECK(a.degree_sequence == b.degree_sequence);
}

TEST_CASE("power-law retry exhaustion")
{
    PowerLawOptions strict;
    strict.max_retries = 1;
    strict.allow_erased_fallback = false;
    bool threw = false;
    for (std::uint64_t seed = 1; seed < 200 && !threw; ++seed) {
        try {
            generate_power_law(8, 1.2, 0.0, seed, strict);
        } catch (const RetryExhausted& e) {
            threw = true;
            CHECK(std::string(e.what()).find("degree sequence") != std::string::npos);
        }
    }
    CHECK(threw);

    PowerLawOptions lenient;
    lenient.max_retries = 1;
    bool erased = false;
    for (std::uint64_t seed = 1; seed < 200 && !erased; ++seed)
        erased = generate_power_law(8, 1.2, 0.0, seed, lenient).erased_fallback;
    CHECK(erased);

    CHECK_THROWS_AS(generate_power_law(10, 1.0, 0.0, 1), InputError);
    CHECK_THROWS_AS(generate_power_law(10, 2.0, INFINITY, 1), InputError);
}

TEST_CASE("seed derivation separates paths")
{
    CHECK(derive_seed(1, {0}) != derive_seed(1, {1}));
    CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
    CHECK(derive_seed(1, {2}) == derive_seed(1, {2}));
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(7) < 7);
    }
}
