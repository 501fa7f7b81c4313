#include <algorithm>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "homent/sweep.hpp"

using namespace homent;

namespace {

SweepOptions small_options(unsigned threads = 1)
{
    SweepOptions opt;
    opt.integration.mode = IntegrationMode::numerical_cutoff;
    opt.integration.sampler = SamplerKind::chain;
    opt.integration.samples = 2000;
    opt.integration.burn_in = 200;
    opt.seed = 3;
    opt.reps = 2;
    opt.threads = threads;
    return opt;
}

std::string csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    write_sweep_csv(out, rows, {"test"});
    return out.str();
}

}  // namespace

TEST_CASE("edge counts from k/n")
{
    CHECK(edges_for_ratio(50, 0.1) == 5);
    CHECK(edges_for_ratio(50, 0.25) == 13);
    CHECK(edges_for_ratio(10, 4.5) == 45);
    CHECK_THROWS_AS(edges_for_ratio(10, 4.6), InputError);
    CHECK_THROWS_AS(edges_for_ratio(10, -1), InputError);
}

TEST_CASE("G(n,k) sweep endpoints")
{
    const std::size_t n = 10;
    const auto rows = sweep_gnk(n, {45, 0, 10}, small_options());
    REQUIRE(rows.size() == 6);
    CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.x < b.x; }));
    double min_empty = 1e300, min_other = 1e300;
    for (const auto& r : rows) {
        if (r.x == 0.0) {
            CHECK(r.beta0 == n);
            CHECK(r.beta1 == 0);
            min_empty = std::min(min_empty, r.S_over_n);
        } else {
            min_other = std::min(min_other, r.S_over_n);
        }
        if (r.x == 4.5) {
            CHECK(r.beta0 == 1);
            CHECK(r.beta1 == 0);
        }
        CHECK(r.realized_k_over_n == r.x);
        CHECK(r.n_samples == 2000);
        CHECK(r.stderr > 0.0);
    }
    CHECK(min_empty < min_other);
}

TEST_CASE("sweeps do not depend on the thread count")
{
    const auto a = sweep_gnk(12, {3, 12, 30}, small_options(1));
    const auto b = sweep_gnk(12, {3, 12, 30}, small_options(4));
    CHECK(csv(a) == csv(b));
}

TEST_CASE("sweep CSV layout")
{
    const auto text = csv(sweep_gnk(6, {3}, small_options()));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# test");
    std::getline(in, line);
    CHECK(line == "x,rep,seed,S_over_n,stderr,beta0,beta1,realized_k_over_n,n_samples,n_overflow_excluded");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("summary aggregates per coordinate")
{
    std::vector<SweepRow> rows(3);
    rows[0].x = rows[1].x = 1.0;
    rows[2].x = 2.0;
    rows[0].S_over_n = 1.0;
    rows[1].S_over_n = 3.0;
    rows[0].beta0 = 4;
    rows[1].beta0 = 2;
    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].count == 2);
    CHECK(s[0].S_over_n_mean == 2.0);
    CHECK(s[0].S_over_n_sd == Catch::Approx(std::sqrt(2.0)));
    CHECK(s[0].beta0_mean == 3.0);
    CHECK(s[1].count == 1);
    CHECK(s[1].S_over_n_sd == 0.0);
}

TEST_CASE("power-law sweep keeps only rows inside the window")
{
    PowerLawSweepOptions pl;
    pl.max_attempts = 20000;
    auto opt = small_options();
    opt.reps = 3;
    const auto rows = sweep_powerlaw(30, {3.0, 2.5}, opt, pl);
    REQUIRE(rows.size() == 6);
    CHECK(rows.front().x == 2.5);
    for (const auto& r : rows) {
        CHECK(r.realized_k_over_n >= 0.7);
        CHECK(r.realized_k_over_n <= 0.85);
    }
    auto threaded = opt;
    threaded.threads = 3;
    CHECK(csv(rows) == csv(sweep_powerlaw(30, {2.5, 3.0}, threaded, pl)));
}

TEST_CASE("power-law sweep reports an unreachable window")
{
    PowerLawSweepOptions pl;
    pl.window_lo = 5.0;
    pl.window_hi = 6.0;
    pl.max_attempts = 50;
    try {
        sweep_powerlaw(20, {3.0}, small_options(), pl);
        FAIL("expected retry exhaustion");
    } catch (const RetryExhausted& e) {
        const std::string msg = e.what();
        CHECK(msg.find("after 50 attempts") != std::string::npos);
        CHECK(msg.find("observed k/n range") != std::string::npos);
    }
}

TEST_CASE("doubles print in shortest round-trip form")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(1e308) == "1e+308");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("gnuplot stub references the summary file")
{
    const auto s = gnuplot_script("out.csv.summary.csv", "k/n");
    CHECK(s.find("'out.csv.summary.csv'") != std::string::npos);
    CHECK(s.find("set xlabel 'k/n'") != std::string::npos);
}
