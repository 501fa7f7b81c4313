#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " " + HOMENT_CLI_PATH + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& name) { return std::string(HOMENT_SAMPLES_DIR) + "/" + name; }

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path temp_dir()
{
    const auto dir = fs::temp_directory_path() / ("homent_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("betti on sample files")
{
    auto r = run("betti --edges " + sample("pentagon.txt"));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["beta"] == std::vector<int>{1, 1, 0});
    CHECK(j["chi"] == 0);
    CHECK(j["field_char"] == 2147483647);

    r = run("betti --edges " + sample("empty5.txt") + " --max-dim 1");
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["beta"] == std::vector<int>{5, 0});

    r = run("betti --edges " + sample("pentagon.txt") + " --format csv --exact");
    REQUIRE(r.code == 0);
    CHECK(r.out == "p,nu,beta\n0,5,1\n1,5,1\n2,0,0\n");
}

TEST_CASE("betti on a sparse random graph")
{
    const auto r = run("betti --gnk 200,50 --seed 7 --max-dim 1");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["beta"][1] == 0);
    CHECK(j["n"] == 200);
    CHECK(j["edges"] == 50);
}

TEST_CASE("entropy output is finite and reproducible")
{
    const std::string args = "entropy --edges " + sample("a1.txt") + " --h 50 --samples 1e5 --seed 1";
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto j = json::parse(a.out);
    CHECK(std::isfinite(j["S"].get<double>()));
    CHECK(j["stderr_S"].get<double>() > 0.0);
    CHECK(j["config"]["h"] == 50.0);
    CHECK(j["n_samples"] == 100000);
    CHECK(!j.contains("elapsed_ms"));
    CHECK(run(args).out == a.out);
    CHECK(json::parse(run(args + " --timing").out).contains("elapsed_ms"));
}

TEST_CASE("HOMENT_SEED is the seed fallback")
{
    const std::string args = "entropy --edges " + sample("a1.txt") + " --samples 2000";
    CHECK(run(args, "HOMENT_SEED=5").out == run(args + " --seed 5").out);
    CHECK(run(args, "HOMENT_SEED=5").out != run(args + " --seed 6").out);
}

TEST_CASE("metric subcommand")
{
    auto r = run("metric --edges " + sample("a1.txt") + " --theta 2,2,1,1,1 --dump-metric");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["det_g"].get<double>() == Catch::Approx(5.0 / 864.0).epsilon(1e-12));
    CHECK(j["g_tilde"].size() == 5);
    CHECK(j["in_domain"] == true);

    r = run("metric --edges " + sample("a1.txt") + " --theta 0.5,0.5,1,1,1");
    CHECK(r.code == 3);
    r = run("metric --edges " + sample("a1.txt") + " --theta 1,2");
    CHECK(r.code == 2);
}

TEST_CASE("generate and complex round-trip")
{
    const auto dir = temp_dir();
    const auto path = (dir / "g.txt").string();
    REQUIRE(run("generate --gnk 12,20 --seed 4 --out " + path).code == 0);
    const auto a = json::parse(run("betti --edges " + path).out);
    const auto b = json::parse(run("betti --gnk 12,20 --seed 4").out);
    CHECK(a["beta"] == b["beta"]);
    CHECK(a["nu"] == b["nu"]);

    const auto c = json::parse(run("complex --edges " + sample("a2.txt")).out);
    CHECK(c["dim"] == 2);
    CHECK(c["simplices"][2].size() == 1);

    const auto p = run("generate --powerlaw 30,2.5 --seed 2");
    REQUIRE(p.code == 0);
    CHECK(p.out.find("erased_fallback") != std::string::npos);
}

TEST_CASE("exit codes")
{
    const auto dir = temp_dir();
    CHECK(run("betti --edges " + (dir / "missing.txt").string()).code == 2);

    const auto bad = (dir / "bad.txt").string();
    std::ofstream(bad) << "0 1\n1 x\n";
    CHECK(run("betti --edges " + bad).code == 2);

    CHECK(run("betti --no-such-flag").code == 2);
    CHECK(run("betti").code == 2);
    CHECK(run("entropy --edges " + sample("a1.txt") + " --samples 0").code == 2);
    CHECK(run("entropy --edges " + sample("a1.txt") + " --mode other").code == 2);
    CHECK(run("entropy --edges " + sample("a1.txt") + " --box 0.1,0.5 --samples 1000").code == 3);
    CHECK(run("sweep-powerlaw --n 20 --gammas 3 --reps 1 --window 5,6 --max-attempts 20 --samples 100").code == 4);
    CHECK(run("--version").code == 0);
}

TEST_CASE("sweep files embed a command that reproduces them")
{
    const auto dir = temp_dir();
    const auto first = dir / "sweep.csv";
    REQUIRE(run("sweep-gnk --n 10 --kn 0,0.5,1 --reps 2 --samples 1000 --burn-in 100 --seed 9 --gnuplot --out " +
                first.string())
                .code == 0);
    const std::string text = read_file(first);
    CHECK(fs::exists(first.string() + ".summary.csv"));
    CHECK(fs::exists(first.string() + ".gp"));

    std::istringstream lines(text);
    std::string line;
    std::string command;
    while (std::getline(lines, line))
        if (line.rfind("# command: homent ", 0) == 0)
            command = line.substr(std::string("# command: homent ").size());
    REQUIRE(!command.empty());
    CHECK(command.find("--k 0,5,10") != std::string::npos);

    const auto second = dir / "rerun.csv";
    REQUIRE(run(command + " --out " + second.string()).code == 0);
    CHECK(read_file(second) == text);
    CHECK(run(command).out == text);
}

TEST_CASE("power-law sweep rows stay inside the window")
{
    const auto r = run("sweep-powerlaw --n 30 --gammas 2.6,3.4 --reps 3 --samples 1000 --burn-in 100");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x')
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        REQUIRE(cells.size() == 10);
        const double kn = std::stod(cells[7]);
        CHECK(kn >= 0.7);
        CHECK(kn <= 0.85);
        ++rows;
    }
    CHECK(rows == 6);
}
