// homent: Betti numbers and geometric entropy of graphs from the command line.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "homent/homent.hpp"

namespace {

using namespace homent;
using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v))
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(what + ": '" + s + "' is not a number");
    }
}

/// Non-negative integer, also accepting scientific notation such as 1e5.
std::uint64_t to_count(const std::string& s, const std::string& what)
{
    const double v = to_double(s, what);
    if (v < 0 || v != std::floor(v) || v > 9.0e18)
        throw InputError(what + ": '" + s + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> double_list(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    for (const auto& part : split(s, ','))
        out.push_back(to_double(part, what));
    return out;
}

/// Graph selected by --edges, --gnk or --powerlaw.
struct InputOptions {
    std::string edges;
    std::string gnk;
    std::string powerlaw;
};

struct LoadedGraph {
    Graph graph;
    json meta;
};

LoadedGraph load_graph(const InputOptions& in, std::uint64_t seed)
{
    const int given = !in.edges.empty() + !in.gnk.empty() + !in.powerlaw.empty();
    if (given != 1)
        throw InputError("exactly one of --edges, --gnk, --powerlaw is required");
    LoadedGraph out;
    if (!in.edges.empty()) {
        std::ifstream file(in.edges);
        if (!file)
            throw InputError("cannot open " + in.edges);
        try {
            out.graph = parse_edge_list(file);
        } catch (const InputError& e) {
            throw InputError(in.edges + ": " + e.what());
        }
        out.meta = {{"source", "edges"}, {"path", in.edges}};
    } else if (!in.gnk.empty()) {
        const auto parts = split(in.gnk, ',');
        if (parts.size() != 2)
            throw InputError("--gnk expects N,K");
        const auto n = to_count(parts[0], "--gnk N");
        const auto k = to_count(parts[1], "--gnk K");
        out.graph = generate_gnk(n, k, seed);
        out.meta = {{"source", "gnk"}, {"n", n}, {"k", k}, {"seed", seed}};
    } else {
        const auto parts = split(in.powerlaw, ',');
        if (parts.size() != 2 && parts.size() != 3)
            throw InputError("--powerlaw expects N,GAMMA[,ALPHA]");
        const auto n = to_count(parts[0], "--powerlaw N");
        const double gamma = to_double(parts[1], "--powerlaw GAMMA");
        const double alpha = parts.size() == 3 ? to_double(parts[2], "--powerlaw ALPHA") : 0.0;
        auto draw = generate_power_law(n, gamma, alpha, seed);
        out.meta = {{"source", "powerlaw"},       {"n", n},
                    {"gamma", gamma},             {"alpha", alpha},
                    {"seed", seed},               {"realized_k_over_n", draw.realized_k_over_n},
                    {"attempts", draw.attempts},  {"erased_fallback", draw.erased_fallback},
                    {"degree_sequence", draw.degree_sequence}};
        out.graph = std::move(draw.graph);
    }
    return out;
}

void add_input_options(CLI::App* cmd, InputOptions& in)
{
    cmd->add_option("--edges", in.edges, "edge-list file ('n <count>' header optional, '#' comments)");
    cmd->add_option("--gnk", in.gnk, "random graph G(N,K): N vertices, K uniformly chosen edges");
    cmd->add_option("--powerlaw", in.powerlaw, "power-law graph N,GAMMA[,ALPHA]");
}

/// Integration flags kept as text so defaults can differ between commands.
struct IntegrationFlags {
    std::string mode;
    std::string sampler;
    std::string samples;
    std::optional<double> h;
    std::string box;
    std::optional<unsigned> exponent;
    std::optional<double> overflow_cap;
    std::optional<std::size_t> chains;
    std::optional<std::size_t> burn_in;
};

void add_integration_options(CLI::App* cmd, IntegrationFlags& f)
{
    cmd->add_option("--mode", f.mode, "analytic | numerical");
    cmd->add_option("--sampler", f.sampler, "uniform | chain");
    cmd->add_option("--samples", f.samples, "Monte Carlo samples (1e5 style accepted)");
    cmd->add_option("--h", f.h, "trace threshold of the regularizer (default 10 n)");
    cmd->add_option("--box", f.box, "hypercube bounds LO,HI (default 0.1,10)");
    cmd->add_option("--exponent", f.exponent, "exponent m in log(1 + det(psi)^m) (default n)");
    cmd->add_option("--overflow-cap", f.overflow_cap, "cap on sqrt(det g) in numerical mode (default 1e308)");
    cmd->add_option("--chains", f.chains, "chain sampler: independent chains (default 4)");
    cmd->add_option("--burn-in", f.burn_in, "chain sampler: burn-in steps per chain (default 1000)");
}

IntegrationConfig build_config(const IntegrationFlags& f, IntegrationConfig cfg, std::uint64_t seed, unsigned threads)
{
    if (f.mode == "analytic")
        cfg.mode = IntegrationMode::analytic_regularizer;
    else if (f.mode == "numerical")
        cfg.mode = IntegrationMode::numerical_cutoff;
    else if (!f.mode.empty())
        throw InputError("--mode must be analytic or numerical");
    if (f.sampler == "uniform")
        cfg.sampler = SamplerKind::uniform;
    else if (f.sampler == "chain")
        cfg.sampler = SamplerKind::chain;
    else if (!f.sampler.empty())
        throw InputError("--sampler must be uniform or chain");
    if (!f.samples.empty())
        cfg.samples = to_count(f.samples, "--samples");
    if (f.h)
        cfg.h = *f.h;
    if (!f.box.empty()) {
        const auto b = double_list(f.box, "--box");
        if (b.size() != 2)
            throw InputError("--box expects LO,HI");
        cfg.box_lo = b[0];
        cfg.box_hi = b[1];
    }
    if (f.exponent)
        cfg.regularizer_exponent = *f.exponent;
    if (f.overflow_cap)
        cfg.overflow_cap = *f.overflow_cap;
    if (f.chains)
        cfg.chains = *f.chains;
    if (f.burn_in)
        cfg.burn_in = *f.burn_in;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

/// Flags that reproduce a resolved configuration.
std::string config_flags(const IntegrationConfig& c)
{
    std::string s = " --mode " + std::string(c.mode == IntegrationMode::analytic_regularizer ? "analytic" : "numerical") +
                    " --sampler " + to_string(c.sampler) + " --samples " + std::to_string(c.samples) + " --box " +
                    format_double(c.box_lo) + "," + format_double(c.box_hi) + " --overflow-cap " +
                    format_double(c.overflow_cap);
    if (c.h)
        s += " --h " + format_double(*c.h);
    if (c.regularizer_exponent)
        s += " --exponent " + std::to_string(*c.regularizer_exponent);
    if (c.sampler == SamplerKind::chain)
        s += " --chains " + std::to_string(c.chains) + " --burn-in " + std::to_string(c.burn_in);
    return s;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw InputError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw InputError("cannot write " + path);
    f << text;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int exit_code(ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Betti numbers and information-geometric entropy of graphs"};
    app.set_version_flag("--version", version);
    // --h is the regularizer threshold, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    bool timing = false;
    unsigned threads = 0;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (env HOMENT_SEED)")->envname("HOMENT_SEED");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--threads", threads, "worker threads, 0 = all cores; results do not depend on it");
    };

    InputOptions input;
    IntegrationFlags iflags;
    std::size_t max_dim = 2;
    bool exact = false;

    auto* betti = app.add_subcommand("betti", "Betti numbers of the clique complex");
    add_input_options(betti, input);
    add_common(betti);
    betti->add_option("--max-dim", max_dim, "highest homology dimension (default 2)");
    betti->add_flag("--exact", exact, "exact rational ranks instead of GF(2^31-1)");
    betti->add_option("--format", format, "json | csv");
    betti->add_flag("--timing", timing, "include elapsed_ms in the JSON output");

    auto* complex_cmd = app.add_subcommand("complex", "dump the clique complex as JSON");
    add_input_options(complex_cmd, input);
    add_common(complex_cmd);
    complex_cmd->add_option("--max-dim", max_dim, "highest simplex dimension built (default 2)");

    auto* entropy = app.add_subcommand("entropy", "Monte Carlo estimate of S = ln V");
    add_input_options(entropy, input);
    add_common(entropy);
    add_integration_options(entropy, iflags);
    entropy->add_flag("--timing", timing, "include elapsed_ms in the output");

    std::string theta_text;
    bool dump_metric = false;
    auto* metric = app.add_subcommand("metric", "Fisher-Rao metric at one point");
    add_input_options(metric, input);
    add_common(metric);
    metric->add_option("--theta", theta_text, "point T1,...,Tn")->required();
    metric->add_flag("--dump-metric", dump_metric, "include the full metric matrix");
    std::optional<double> metric_cap;
    metric->add_option("--overflow-cap", metric_cap, "cap on sqrt(det g) (default 1e308)");

    auto* generate = app.add_subcommand("generate", "write a random graph as an edge list");
    add_input_options(generate, input);
    add_common(generate);

    std::size_t sweep_n = 50;
    std::size_t reps = 5;
    std::string kn_text;
    std::string k_text;
    std::string gammas_text;
    double alpha = 0.0;
    std::string window_text;
    std::string max_attempts_text;
    bool gnuplot = false;

    auto* sweep_gnk_cmd = app.add_subcommand("sweep-gnk", "S/n and Betti numbers across G(n,k)");
    add_common(sweep_gnk_cmd);
    add_integration_options(sweep_gnk_cmd, iflags);
    sweep_gnk_cmd->add_option("--n", sweep_n, "vertices (default 50)");
    sweep_gnk_cmd->add_option("--kn", kn_text, "k/n values (default 0.1,0.25,0.5,0.75,1,1.5,2,2.5,3)");
    sweep_gnk_cmd->add_option("--k", k_text, "edge counts, instead of --kn");
    sweep_gnk_cmd->add_option("--reps", reps, "realizations per k (default 5)");
    sweep_gnk_cmd->add_flag("--gnuplot", gnuplot, "write a gnuplot script next to --out");
    sweep_gnk_cmd->add_flag("--timing", timing, "report elapsed time on stderr");

    auto* sweep_pl_cmd = app.add_subcommand("sweep-powerlaw", "S/n and Betti numbers across power-law exponents");
    add_common(sweep_pl_cmd);
    add_integration_options(sweep_pl_cmd, iflags);
    sweep_pl_cmd->add_option("--n", sweep_n, "vertices (default 50)");
    sweep_pl_cmd->add_option("--gammas", gammas_text, "exponents (default 2.4,2.6,2.8,3,3.2,3.5,3.8,4.1,4.4)");
    sweep_pl_cmd->add_option("--reps", reps, "accepted realizations per gamma (default 5)");
    sweep_pl_cmd->add_option("--alpha", alpha, "log prefactor of the degree law (default 0)");
    sweep_pl_cmd->add_option("--window", window_text, "accepted k/n range LO,HI (default 0.7,0.85)");
    sweep_pl_cmd->add_option("--max-attempts", max_attempts_text, "draws per gamma before giving up (default 200000)");
    sweep_pl_cmd->add_flag("--gnuplot", gnuplot, "write a gnuplot script next to --out");
    sweep_pl_cmd->add_flag("--timing", timing, "report elapsed time on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code(ExitCode::input_error);
    }

    const auto start = Clock::now();
    try {
        if (betti->parsed()) {
            if (format != "json" && format != "csv")
                throw InputError("--format must be json or csv");
            const auto loaded = load_graph(input, seed);
            const auto complex = clique_complex(loaded.graph, max_dim + 1);
            BettiOptions options;
            options.exact = exact;
            const auto b = betti_numbers(complex, max_dim, options);
            const auto summary = summarize(complex);
            Output out(out_path);
            if (format == "csv") {
                out.stream() << "p,nu,beta\n";
                for (std::size_t p = 0; p <= max_dim; ++p)
                    out.stream() << p << ',' << (p < summary.nu.size() ? summary.nu[p] : 0) << ',' << b.beta[p]
                                 << '\n';
            } else {
                json j = {{"n", loaded.graph.vertex_count()},
                          {"edges", loaded.graph.edge_count()},
                          {"input", loaded.meta},
                          {"nu", summary.nu},
                          {"dim", summary.dim},
                          {"p_max_built", complex.p_max_built()},
                          {"beta", b.beta},
                          {"field_char", b.field_char},
                          {"version", version}};
                j["chi"] = summary.chi ? json(*summary.chi) : json(nullptr);
                if (timing)
                    j["elapsed_ms"] = elapsed_ms(start);
                out.stream() << j.dump(2) << '\n';
            }
        } else if (complex_cmd->parsed()) {
            const auto loaded = load_graph(input, seed);
            json j = to_json(clique_complex(loaded.graph, max_dim));
            j["input"] = loaded.meta;
            Output out(out_path);
            out.stream() << j.dump(2) << '\n';
        } else if (entropy->parsed()) {
            const auto loaded = load_graph(input, seed);
            const auto cfg = build_config(iflags, IntegrationConfig{}, seed, threads);
            const auto est = mc_volume(loaded.graph, cfg);
            json j = to_json(est);
            j["edges"] = loaded.graph.edge_count();
            j["input"] = loaded.meta;
            j["version"] = version;
            if (timing)
                j["elapsed_ms"] = elapsed_ms(start);
            Output out(out_path);
            out.stream() << j.dump(2) << '\n';
        } else if (metric->parsed()) {
            const auto loaded = load_graph(input, seed);
            const auto values = double_list(theta_text, "--theta");
            Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
            for (std::size_t i = 0; i < values.size(); ++i)
                v[static_cast<Eigen::Index>(i)] = values[i];
            const ParameterPoint theta(v);
            json j;
            j["theta"] = values;
            j["in_domain"] = in_domain(theta, loaded.graph);
            if (!j["in_domain"].get<bool>() && theta.size() == loaded.graph.vertex_count())
                throw DomainError("theta outside Theta-tilde: psi_theta(A) is not positive definite");
            auto m = to_json(fisher_metric(theta, loaded.graph, metric_cap.value_or(default_overflow_cap)));
            if (!dump_metric)
                m.erase("g_tilde");
            j.update(m);
            Output out(out_path);
            out.stream() << j.dump(2) << '\n';
        } else if (generate->parsed()) {
            const auto loaded = load_graph(input, seed);
            Output out(out_path);
            out.stream() << "# " << loaded.meta.dump() << '\n' << serialize(loaded.graph);
        } else if (sweep_gnk_cmd->parsed() || sweep_pl_cmd->parsed()) {
            const bool is_gnk = sweep_gnk_cmd->parsed();
            IntegrationConfig defaults;
            defaults.mode = IntegrationMode::numerical_cutoff;
            defaults.sampler = SamplerKind::chain;
            defaults.samples = 10000;
            SweepOptions opt;
            opt.integration = build_config(iflags, defaults, seed, threads).resolved(sweep_n);
            opt.seed = seed;
            opt.reps = reps;
            opt.threads = threads;

            std::vector<SweepRow> rows;
            std::string command = std::string("homent ") + (is_gnk ? "sweep-gnk" : "sweep-powerlaw") +
                                  " --n " + std::to_string(sweep_n) + " --reps " + std::to_string(reps) +
                                  " --seed " + std::to_string(seed);
            if (is_gnk) {
                if (!kn_text.empty() && !k_text.empty())
                    throw InputError("give either --kn or --k");
                std::vector<std::uint64_t> ks;
                if (!k_text.empty()) {
                    for (const auto& part : split(k_text, ','))
                        ks.push_back(to_count(part, "--k"));
                } else {
                    const auto kn = double_list(kn_text.empty() ? "0.1,0.25,0.5,0.75,1,1.5,2,2.5,3" : kn_text, "--kn");
                    for (double x : kn)
                        ks.push_back(edges_for_ratio(sweep_n, x));
                }
                std::sort(ks.begin(), ks.end());
                ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
                command += " --k ";
                for (std::size_t i = 0; i < ks.size(); ++i)
                    command += (i ? "," : "") + std::to_string(ks[i]);
                rows = sweep_gnk(sweep_n, ks, opt);
            } else {
                auto gammas = double_list(gammas_text.empty() ? "2.4,2.6,2.8,3,3.2,3.5,3.8,4.1,4.4" : gammas_text,
                                          "--gammas");
                std::sort(gammas.begin(), gammas.end());
                gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
                PowerLawSweepOptions pl;
                pl.alpha = alpha;
                if (!window_text.empty()) {
                    const auto w = double_list(window_text, "--window");
                    if (w.size() != 2)
                        throw InputError("--window expects LO,HI");
                    pl.window_lo = w[0];
                    pl.window_hi = w[1];
                }
                if (!max_attempts_text.empty())
                    pl.max_attempts = to_count(max_attempts_text, "--max-attempts");
                command += " --gammas ";
                for (std::size_t i = 0; i < gammas.size(); ++i)
                    command += (i ? "," : "") + format_double(gammas[i]);
                command += " --alpha " + format_double(pl.alpha) + " --window " + format_double(pl.window_lo) + "," +
                           format_double(pl.window_hi) + " --max-attempts " + std::to_string(pl.max_attempts);
                rows = sweep_powerlaw(sweep_n, gammas, opt, pl);
            }
            command += config_flags(opt.integration);

            const std::vector<std::string> comments = {std::string("homent ") + version, "command: " + command};
            Output out(out_path);
            write_sweep_csv(out.stream(), rows, comments);
            if (!out_path.empty()) {
                const std::string summary_path = out_path + ".summary.csv";
                std::ofstream summary(summary_path, std::ios::binary);
                if (!summary)
                    throw InputError("cannot write " + summary_path);
                write_summary_csv(summary, summarize(rows), comments);
                if (gnuplot)
                    write_text_file(out_path + ".gp", gnuplot_script(summary_path, is_gnk ? "k/n" : "gamma"));
            } else if (gnuplot) {
                throw InputError("--gnuplot needs --out");
            }
            if (timing)
                std::cerr << "elapsed_ms " << elapsed_ms(start) << '\n';
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::input_error);
    } catch (const RetryExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::retry_exhaustion);
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::numerical_degeneracy);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(ExitCode::numerical_degeneracy);
    }
    return exit_code(ExitCode::success);
}
