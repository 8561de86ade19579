// Command-line front end: graph generation and the single-period,
// multi-period, non-stubborn and analytic-bound experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fjm/harness.hpp"

namespace {

struct GraphFlags {
    std::string path;
    std::string gen;
    std::size_t n = 0;
    std::optional<std::size_t> m;
    std::optional<std::size_t> d;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& f) {
    auto* graph = cmd->add_option("--graph", f.path, "Edge-list file (u v [w] per line)");
    auto* gen = cmd->add_option("--gen", f.gen, "Synthetic generator")->check(CLI::IsMember({"ba", "dreg"}));
    graph->excludes(gen);
    cmd->add_option("--n", f.n, "Node count for --gen");
    cmd->add_option("--m", f.m, "Edges per new node (ba)");
    cmd->add_option("--d", f.d, "Degree (dreg)");
}

fjm::GeneratorSpec generator_from(const GraphFlags& f) {
    fjm::GeneratorSpec spec;
    spec.n = f.n;
    if (f.gen == "ba") {
        if (!f.m) throw CLI::ValidationError("--gen ba requires --m");
        spec.kind = fjm::GeneratorSpec::Kind::BarabasiAlbert;
        spec.param = *f.m;
    } else {
        if (!f.d) throw CLI::ValidationError("--gen dreg requires --d");
        spec.kind = fjm::GeneratorSpec::Kind::RandomRegular;
        spec.param = *f.d;
    }
    if (spec.n == 0) throw CLI::ValidationError("--gen requires --n");
    return spec;
}

struct RunFlags {
    GraphFlags graph;
    std::optional<double> alpha;
    double beta = 0.025;
    double gamma = 0.01;
    std::size_t reps = 20;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    std::size_t max_periods = 10'000;
    std::optional<double> epsilon;
    double fixed_point_tol = 1e-10;
    double innate_mu = 0.5;
    double innate_var = 0.2;
    std::string out;
    std::size_t threads = 1;
    std::string manifest;
};

CLI::App* add_run_command(CLI::App& app, const std::string& name, const std::string& help, RunFlags& f) {
    auto* cmd = app.add_subcommand(name, help);
    add_graph_flags(cmd, f.graph);
    cmd->add_option("--alpha", f.alpha, "Fraction of nodes attached to the up-biasing source");
    cmd->add_option("--beta", f.beta, "Media influence factor")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Media bias")->capture_default_str();
    cmd->add_option("--reps", f.reps, "Repetitions")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Base seed; repetition r uses seed + r")->capture_default_str();
    cmd->add_option("--tol", f.tol, "Relative residual tolerance of the linear solves")->capture_default_str();
    cmd->add_option("--max-periods", f.max_periods, "Period cap")->capture_default_str();
    cmd->add_option("--epsilon", f.epsilon, "Radicalized-down threshold on the mean opinion (default 10/n)");
    cmd->add_option("--fixed-point-tol", f.fixed_point_tol, "Per-period l-inf change that ends a run")
        ->capture_default_str();
    cmd->add_option("--innate-mu", f.innate_mu, "Mean of the innate-opinion Gaussian")->capture_default_str();
    cmd->add_option("--innate-var", f.innate_var, "Variance of the innate-opinion Gaussian")->capture_default_str();
    cmd->add_option("--out", f.out, "CSV output path (manifest written to <out>.manifest)");
    cmd->add_option("--threads", f.threads, "Worker threads across repetitions")->capture_default_str();
    cmd->add_option("--manifest", f.manifest, "Re-run the configuration recorded in a manifest");
    return cmd;
}

fjm::ExperimentConfig config_from(const RunFlags& f, fjm::RunMode mode) {
    fjm::ExperimentConfig cfg;
    if (!f.manifest.empty()) {
        std::ifstream in(f.manifest);
        if (!in) throw std::runtime_error("cannot open manifest '" + f.manifest + "'");
        cfg = fjm::config_from_manifest(fjm::RunManifest::parse(in));
        if (cfg.mode != mode)
            throw std::runtime_error("manifest records mode '" + std::string(fjm::to_string(cfg.mode)) + "'");
        if (!f.out.empty()) cfg.output = f.out;
        cfg.threads = f.threads;
        return cfg;
    }

    cfg.mode = mode;
    if (!f.graph.path.empty())
        cfg.graph_source = f.graph.path;
    else if (!f.graph.gen.empty())
        cfg.graph_source = generator_from(f.graph);
    else
        throw CLI::ValidationError("one of --graph or --gen is required");
    cfg.media.alpha = f.alpha.value_or(mode == fjm::RunMode::NonStubborn ? 1.0 : 0.5);
    cfg.media.beta = f.beta;
    cfg.media.gamma = f.gamma;
    cfg.repetitions = f.reps;
    cfg.base_seed = f.seed;
    cfg.tol = f.tol;
    cfg.max_periods = f.max_periods;
    cfg.epsilon = f.epsilon;
    cfg.fixed_point_tol = f.fixed_point_tol;
    cfg.innate_mu = f.innate_mu;
    cfg.innate_var = f.innate_var;
    cfg.output = f.out;
    cfg.threads = f.threads;
    return cfg;
}

int run(const RunFlags& f, fjm::RunMode mode) {
    const auto cfg = config_from(f, mode);
    const auto result = fjm::run_experiment(cfg);
    if (cfg.output.empty()) {
        std::cout << result.csv();
    } else {
        fjm::write_experiment(cfg, result);
        std::cerr << "wrote " << result.rows.size() << " rows to " << cfg.output << " (manifest " << cfg.output
                  << ".manifest)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Friedkin-Johnsen opinion dynamics with external media sources"};
    app.require_subcommand(1);

    GraphFlags gen_flags;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Emit a synthetic graph as an edge list");
    generate->add_option("--gen", gen_flags.gen, "Generator")->required()->check(CLI::IsMember({"ba", "dreg"}));
    generate->add_option("--n", gen_flags.n, "Node count")->required();
    generate->add_option("--m", gen_flags.m, "Edges per new node (ba)");
    generate->add_option("--d", gen_flags.d, "Degree (dreg)");
    generate->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    generate->add_option("--out", gen_out, "Output path (stdout if omitted)");

    RunFlags eq_flags, per_flags, ns_flags, bd_flags;
    auto* equilibrium = add_run_command(app, "equilibrium", "Single-period equilibrium with two stubborn sources", eq_flags);
    auto* periods = add_run_command(app, "periods", "Multi-period trajectory", per_flags);
    auto* nonstubborn = add_run_command(app, "nonstubborn", "Single non-stubborn source", ns_flags);
    auto* bounds = add_run_command(app, "bounds", "Analytic sums and bounds only, no solve", bd_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            const auto spec = generator_from(gen_flags);
            const auto g = fjm::generate_graph(spec, gen_seed);
            std::vector<std::string> header{
                "generator " + fjm::describe(spec) + " seed=" + std::to_string(gen_seed),
                "nodes " + std::to_string(g.num_nodes()) + " edges " + std::to_string(g.num_edges()),
            };
            if (gen_out.empty()) {
                fjm::write_edge_list(std::cout, g, header);
            } else {
                std::ofstream out(gen_out, std::ios::binary);
                fjm::write_edge_list(out, g, header);
                if (!out) throw std::runtime_error("failed writing '" + gen_out + "'");
            }
            return 0;
        }
        if (equilibrium->parsed()) return run(eq_flags, fjm::RunMode::Equilibrium);
        if (periods->parsed()) return run(per_flags, fjm::RunMode::Periods);
        if (nonstubborn->parsed()) return run(ns_flags, fjm::RunMode::NonStubborn);
        if (bounds->parsed()) return run(bd_flags, fjm::RunMode::Bounds);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
