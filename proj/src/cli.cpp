#include "girg/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "girg/analysis.hpp"
#include "girg/config.hpp"
#include "girg/experiment.hpp"
#include "girg/io.hpp"
#include "girg/kernels.hpp"
#include "girg/sampler.hpp"
#include "girg/weights.hpp"

namespace girg {

namespace {

namespace fs = std::filesystem;

void print_power_law(std::ostream& out, const PowerLawReport& r) {
    out << "PL1 " << (r.pl1_pass ? "pass" : "fail") << " min_weight=" << format_double(r.min_weight) << '\n'
        << "PL2 lower " << (r.pl2_lower_pass ? "pass" : "fail") << " worst_ratio=" << format_double(r.worst_ratio_lower)
        << " at w=" << format_double(r.worst_lower_at) << " (c1=" << format_double(r.c1) << ")\n"
        << "PL2 upper " << (r.pl2_upper_pass ? "pass" : "fail") << " worst_ratio=" << format_double(r.worst_ratio_upper)
        << " at w=" << format_double(r.worst_upper_at) << " (c2=" << format_double(r.c2) << ")\n"
        << "eta=" << format_double(r.eta) << " grid_points=" << r.grid_points << '\n';
}

struct GenerateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string sampler;
    std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    ModelConfig config = a.config.empty() ? ModelConfig{} : read_config(a.config);
    if (a.seed) config.seed = *a.seed;
    if (!a.sampler.empty()) config.sampler = parse_sampler(a.sampler);
    validate_config(config);
    const Graph g = generate(config);
    if (a.out.empty()) {
        write_graph(out, g);
    } else {
        fs::path path = a.out;
        if (fs::is_directory(path)) path /= "graph.g";
        write_graph(path.string(), g);
        err << "wrote " << path.string() << " (n=" << g.num_vertices() << ", m=" << g.num_edges() << ")\n";
    }
    return 0;
}

struct AnalyzeArgs {
    std::string graph;
    std::size_t pairs = 2000;
    std::uint64_t seed = 1;
    std::size_t fit_lo = 5, fit_hi = 100;
    std::string out;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const Graph g = read_graph(a.graph);
    std::ostringstream report;
    report << "n=" << g.num_vertices() << " m=" << g.num_edges() << " d=" << g.dim() << '\n';

    DegreeReport deg;
    try {
        deg = degree_report(g, FitRange{a.fit_lo, a.fit_hi});
    } catch (const std::domain_error&) {
        deg = degree_report(g);
    }
    report << "degree mean=" << format_double(deg.mean_degree) << " max=" << deg.max_degree;
    if (deg.fit_points)
        report << " slope=" << format_double(deg.fitted_slope) << " stderr=" << format_double(deg.slope_stderr)
               << " fit_points=" << deg.fit_points;
    report << '\n';

    const auto comps = components(g);
    report << "components count=" << comps.count() << " giant_fraction=" << format_double(comps.giant_fraction)
           << " second_size=" << comps.second_size << '\n';

    if (g.weights().core_size() > 0) {
        const auto core = core_report(g);
        report << "core vertices=" << core.core_vertices << " connected=" << (core.core_connected ? 1 : 0)
               << " diameter=" << core.core_diameter << '\n';
    } else {
        report << "core empty\n";
    }

    if (g.num_vertices() >= 3) {
        const auto greedy = greedy_summary(g);
        report << "greedy eligible=" << greedy.eligible << " reached=" << greedy.reached
               << " step_limit=" << greedy.step_limit << '\n';
    }

    if (comps.sizes.front() >= 2 && g.num_vertices() >= 3) {
        const auto dist = distance_report(g, a.pairs, a.seed, &comps);
        report << "distance pairs=" << dist.sampled_pairs << (dist.exhaustive ? " (all)" : "")
               << " mean=" << format_double(dist.mean_distance) << " stderr=" << format_double(dist.std_error)
               << " target=" << format_double(dist.target) << " ratio=" << format_double(dist.ratio)
               << " diameter" << (dist.diameter_is_exact ? "=" : ">=") << dist.diameter_estimate << '\n';
    }
    out << report.str();

    if (!a.out.empty()) {
        std::error_code ec;
        fs::create_directories(a.out, ec);
        if (ec) throw IoError("cannot create output directory " + a.out + ": " + ec.message());
        std::ofstream ccdf(fs::path(a.out) / "ccdf.csv");
        if (!ccdf) throw IoError("cannot open for writing: " + (fs::path(a.out) / "ccdf.csv").string());
        ccdf << "d,count\n";
        for (const auto& [d, c] : deg.ccdf) ccdf << d << ',' << c << '\n';
        std::ofstream summary(fs::path(a.out) / "report.txt");
        if (!summary) throw IoError("cannot open for writing: " + (fs::path(a.out) / "report.txt").string());
        summary << report.str();
        if (!ccdf || !summary) throw IoError("write failed in " + a.out);
    }
    return 0;
}

struct VerifyArgs {
    std::string weights;
    std::string config;
    std::optional<std::uint64_t> seed;
    double eta = kDefaultEta;
    double c1 = kDefaultC1;
    double c2 = kDefaultC2;
    double delta = 0.1;
    std::size_t ep1_configs = 20;
    std::size_t ep1_samples = 100000;
    std::size_t ep2_pairs = 200;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    if (a.weights.empty() == a.config.empty())
        throw std::invalid_argument("verify: give exactly one of --weights or --config");
    if (!a.weights.empty()) {
        const auto report = verify_power_law(read_weights(a.weights), a.eta, a.c1, a.c2);
        print_power_law(out, report);
        out << (report.pass() ? "PASS" : "FAIL") << '\n';
        return report.pass() ? 0 : 1;
    }

    ModelConfig config = read_config(a.config);
    if (a.seed) config.seed = *a.seed;
    const auto weights = weights_for(config);
    const auto pl = verify_power_law(weights, a.eta, a.c1, a.c2);
    print_power_law(out, pl);

    bool ep1_pass = true;
    const auto ep1 = ep1_random_configurations(config.kernel, config.d, a.ep1_configs, a.ep1_samples, config.seed);
    double lo = INFINITY, hi = 0.0;
    for (const auto& c : ep1) {
        lo = std::min(lo, c.result.ratio);
        hi = std::max(hi, c.result.ratio);
        ep1_pass = ep1_pass && c.result.ratio >= 0.25 && c.result.ratio <= 4.0;
    }
    out << "EP1 " << (ep1_pass ? "pass" : "fail") << " kernel=" << describe(config.kernel)
        << " configurations=" << ep1.size() << " ratio_range=[" << format_double(lo) << ", " << format_double(hi)
        << "]\n";

    const auto ep2 = verify_ep2(config.kernel, weights, config.d, a.eta, a.delta, a.ep2_pairs, config.seed);
    out << "EP2 " << (ep2.pass ? "pass" : "fail") << " min_p=" << format_double(ep2.min_p)
        << " bound=" << format_double(ep2.bound) << " heavy=" << ep2.heavy_vertices
        << " pairs=" << ep2.pairs_checked << " delta=" << format_double(a.delta) << '\n';

    const bool pass = pl.pass() && ep1_pass && ep2.pass;
    out << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? 0 : 1;
}

struct ExperimentArgs {
    std::string plan;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    bool save_graphs = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
    ExperimentPlan plan = read_plan(a.plan);
    if (!a.out.empty()) plan.out_dir = a.out;
    if (a.seed) plan.seed = *a.seed;
    if (a.workers) plan.workers = *a.workers;
    if (a.save_graphs) plan.save_graphs = true;
    const auto result = run_experiment(plan);
    out << "rows=" << result.rows.size() << " failures=" << result.failures << " out=" << plan.out_dir << '\n';
    for (const auto& f : result.files)
        if (f.rfind("graphs/", 0) != 0) out << "  " << f << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate and analyse geometric inhomogeneous random graphs.", "girg-lab"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Sample a graph from a model config");
    generate_cmd->add_option("--config", gen.config, "Model config file (key = value)");
    generate_cmd->add_option("--seed", gen.seed, "Override the config seed");
    generate_cmd->add_option("--sampler", gen.sampler, "Override the sampler (naive | grid)");
    generate_cmd->add_option("--out", gen.out, "Output graph file or directory (default: stdout)");

    AnalyzeArgs ana;
    auto* analyze_cmd = app.add_subcommand("analyze", "Measure a graph file");
    analyze_cmd->add_option("graph", ana.graph, "Graph file")->required();
    analyze_cmd->add_option("--pairs", ana.pairs, "Sampled vertex pairs for the distance estimate");
    analyze_cmd->add_option("--seed", ana.seed, "Seed for pair sampling");
    analyze_cmd->add_option("--fit-lo", ana.fit_lo, "Lower degree of the power-law fit");
    analyze_cmd->add_option("--fit-hi", ana.fit_hi, "Upper degree of the power-law fit");
    analyze_cmd->add_option("--out", ana.out, "Directory for ccdf.csv and report.txt");

    VerifyArgs ver;
    auto* verify_cmd = app.add_subcommand("verify", "Check weight and kernel conditions");
    verify_cmd->add_option("--weights", ver.weights, "Weight file: power-law checks only");
    verify_cmd->add_option("--config", ver.config, "Model config: power-law, marginal and heavy-pair checks");
    verify_cmd->add_option("--seed", ver.seed, "Override the config seed");
    verify_cmd->add_option("--eta", ver.eta, "Power-law slack");
    verify_cmd->add_option("--c1", ver.c1, "Lower power-law constant");
    verify_cmd->add_option("--c2", ver.c2, "Upper power-law constant");
    verify_cmd->add_option("--delta", ver.delta, "Heavy-pair exponent slack");
    verify_cmd->add_option("--ep1-configs", ver.ep1_configs, "Random marginal configurations");
    verify_cmd->add_option("--ep1-samples", ver.ep1_samples, "Monte Carlo samples per configuration");
    verify_cmd->add_option("--ep2-pairs", ver.ep2_pairs, "Random heavy pairs");

    ExperimentArgs exp;
    auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment plan");
    experiment_cmd->add_option("--config,plan", exp.plan, "Plan file")->required();
    experiment_cmd->add_option("--out", exp.out, "Output directory (overrides the plan)");
    experiment_cmd->add_option("--seed", exp.seed, "Override the plan seed");
    experiment_cmd->add_option("--workers", exp.workers, "Concurrent replicates");
    experiment_cmd->add_flag("--save-graphs", exp.save_graphs, "Also write graphs/*.g");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 1;
    }

    try {
        if (*generate_cmd) return cmd_generate(gen, out, err);
        if (*analyze_cmd) return cmd_analyze(ana, out);
        if (*verify_cmd) return cmd_verify(ver, out);
        if (*experiment_cmd) return cmd_experiment(exp, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 1;
}

}  // namespace girg
