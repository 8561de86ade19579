#include "fjm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "fjm/nonstubborn.hpp"

namespace fjm {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

struct RepOutput {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> manifest;
};

const std::vector<std::string>& columns_for(RunMode m) {
    static const std::vector<std::string> periods{"rep",     "period",    "sum_z",     "mean_z",
                                                  "z_M",     "z_Mprime",  "truncated", "stop_cause"};
    static const std::vector<std::string> equilibrium{
        "rep",       "n",           "count_M",     "alpha_effective",       "sum_s",
        "sum_z",     "z_M",         "z_Mprime",    "truncated",             "bound_lower",
        "bound_upper", "exact_regular", "truncated_regular_sum", "truncated_lower_bound"};
    static const std::vector<std::string> nonstubborn{"rep", "n", "sum_s", "sum_z", "s_M", "z_M_star", "sum_bound"};
    static const std::vector<std::string> bounds{
        "rep",         "n",           "d_min",         "d_max",
        "alpha_effective", "sum_s",   "truncated",     "bound_lower",
        "bound_upper", "exact_regular", "truncated_regular_sum", "truncated_lower_bound", "ell_star"};
    switch (m) {
        case RunMode::Periods: return periods;
        case RunMode::Equilibrium: return equilibrium;
        case RunMode::NonStubborn: return nonstubborn;
        case RunMode::Bounds: return bounds;
    }
    return periods;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

double parse_f64(const std::string& s) {
    std::size_t pos = 0;
    auto v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

RepOutput run_repetition(const ExperimentConfig& cfg, const Graph* shared_graph, std::size_t rep) {
    const auto seeds = derive_seeds(cfg.base_seed, rep);
    const auto& gen = std::get_if<GeneratorSpec>(&cfg.graph_source);
    const Graph g = shared_graph ? *shared_graph : generate_graph(*gen, seeds.graph);
    const std::size_t n = g.num_nodes();
    const auto stats = g.stats();
    const std::string r = std::to_string(rep);
    const std::string key = "rep." + r + ".";

    RepOutput out;
    auto note = [&](const std::string& k, std::string v) { out.manifest.emplace_back(key + k, std::move(v)); };
    note("seed", std::to_string(seeds.rep_seed));
    note("graph.nodes", std::to_string(n));
    note("graph.edges", std::to_string(g.num_edges()));
    note("graph.d_min", format_double(stats.d_min));
    note("graph.d_max", format_double(stats.d_max));
    note("graph.regular", fmt_bool(stats.is_regular));

    const auto s = sample_innate(n, cfg.innate_mu, std::sqrt(cfg.innate_var), seeds.innate);
    const double sum_s = s.sum();
    note("innate.sum", format_double(sum_s));

    const std::size_t count_M = media_count(n, cfg.media.alpha);
    note("count_M", std::to_string(count_M) + " (alpha*n = " + format_double(cfg.media.alpha * static_cast<double>(n)) +
                        ", rounded half away from zero)");
    MediaConfig realized = cfg.media;
    realized.alpha = n == 0 ? 0.0 : static_cast<double>(count_M) / static_cast<double>(n);
    note("alpha_effective", format_double(realized.alpha));

    const auto src = source_opinions(s, cfg.media.gamma);
    const auto bounds = [&]() -> std::optional<SumBounds> {
        if (src.truncated) return std::nullopt;
        return sum_bounds(stats, sum_s, n, realized);
    }();
    std::optional<double> trunc_sum, trunc_lb;
    if (src.truncated && stats.is_regular) {
        trunc_sum = truncated_regular_sum(stats.d_max, n, sum_s, realized);
        trunc_lb = truncated_lower_bound(sum_s, realized.alpha, realized.gamma);
    }

    switch (cfg.mode) {
        case RunMode::Periods: {
            const auto assignment = assign_media(g, cfg.media.alpha, seeds.assignment);
            StopCriteria stop = StopCriteria::defaults(n, cfg.media.gamma);
            if (cfg.epsilon) stop.epsilon = *cfg.epsilon;
            stop.max_periods = cfg.max_periods;
            stop.fixed_point_tol = cfg.fixed_point_tol;
            note("epsilon", format_double(*stop.epsilon));
            note("up_threshold", format_double(*stop.up_threshold));

            const auto traj = run_periods(g, s, cfg.media, assignment, stop, cfg.tol);
            const std::string cause(to_string(traj.stop_cause));
            for (const auto& rec : traj.records)
                out.rows.push_back({r, std::to_string(rec.period), format_double(rec.sum_z), format_double(rec.mean_z),
                                    format_double(rec.z_M), format_double(rec.z_Mprime), fmt_bool(rec.truncated),
                                    cause});
            note("stop_cause", cause);
            note("periods", std::to_string(traj.records.back().period));
            note("ell_star", fmt_opt(traj.ell_star_predicted));
            note("first_truncation_period",
                 traj.first_truncation_period ? std::to_string(*traj.first_truncation_period) : "");
            break;
        }
        case RunMode::Equilibrium: {
            const auto assignment = assign_media(g, cfg.media.alpha, seeds.assignment);
            const auto z = equilibrium_with_media(g, s, assignment, cfg.media.beta, make_zeta(assignment, src),
                                                  EquilibriumMethod::DirectSolve, cfg.tol);
            out.rows.push_back({r, std::to_string(n), std::to_string(count_M), format_double(realized.alpha),
                                format_double(sum_s), format_double(z.sum()), format_double(src.z_M),
                                format_double(src.z_Mprime), fmt_bool(src.truncated),
                                fmt_opt(bounds ? std::optional(bounds->lower) : std::nullopt),
                                fmt_opt(bounds ? std::optional(bounds->upper) : std::nullopt),
                                fmt_opt(bounds ? bounds->exact_if_regular : std::nullopt), fmt_opt(trunc_sum),
                                fmt_opt(trunc_lb)});
            break;
        }
        case RunMode::NonStubborn: {
            const auto res = nonstubborn_equilibrium(g, s, cfg.media, cfg.tol);
            note("s_M", format_double(res.s_M) + " (min{(1+gamma) s_bar, 1})");
            out.rows.push_back({r, std::to_string(n), format_double(sum_s), format_double(res.node_opinions.sum()),
                                format_double(res.s_M), format_double(res.z_M_star),
                                format_double(nonstubborn_sum_bound(n, sum_s, cfg.media.gamma))});
            break;
        }
        case RunMode::Bounds: {
            std::optional<double> ell;
            if (stats.is_regular && realized.alpha > 0.5 && realized.beta > 0.0 && sum_s > 0.0 && !src.truncated)
                ell = ell_star(n, sum_s, stats.d_max, realized);
            out.rows.push_back({r, std::to_string(n), format_double(stats.d_min), format_double(stats.d_max),
                                format_double(realized.alpha), format_double(sum_s), fmt_bool(src.truncated),
                                fmt_opt(bounds ? std::optional(bounds->lower) : std::nullopt),
                                fmt_opt(bounds ? std::optional(bounds->upper) : std::nullopt),
                                fmt_opt(bounds ? bounds->exact_if_regular : std::nullopt), fmt_opt(trunc_sum),
                                fmt_opt(trunc_lb), fmt_opt(ell)});
            break;
        }
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view to_string(RunMode m) {
    switch (m) {
        case RunMode::Periods: return "periods";
        case RunMode::Equilibrium: return "equilibrium";
        case RunMode::NonStubborn: return "nonstubborn";
        case RunMode::Bounds: return "bounds";
    }
    return "periods";
}

RunMode parse_run_mode(std::string_view s) {
    for (auto m : {RunMode::Periods, RunMode::Equilibrium, RunMode::NonStubborn, RunMode::Bounds})
        if (to_string(m) == s) return m;
    throw std::invalid_argument("unknown run mode '" + std::string(s) + "'");
}

Graph generate_graph(const GeneratorSpec& spec, std::uint64_t seed) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::BarabasiAlbert: return gen_barabasi_albert(spec.n, spec.param, seed);
        case GeneratorSpec::Kind::RandomRegular: return gen_random_regular(spec.n, spec.param, seed);
    }
    throw std::invalid_argument("unknown generator");
}

std::string describe(const GeneratorSpec& spec) {
    if (spec.kind == GeneratorSpec::Kind::BarabasiAlbert)
        return "ba n=" + std::to_string(spec.n) + " m=" + std::to_string(spec.param);
    return "dreg n=" + std::to_string(spec.n) + " d=" + std::to_string(spec.param);
}

void ExperimentConfig::validate() const {
    media.validate();
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (!(innate_var > 0.0)) throw std::invalid_argument("innate variance must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (mode == RunMode::NonStubborn && media.alpha != 1.0)
        throw std::invalid_argument("nonstubborn mode uses a single source; alpha must be 1");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

RepetitionSeeds derive_seeds(std::uint64_t base_seed, std::size_t rep) {
    const std::uint64_t s = base_seed + rep;
    return {s, s, splitmix64(s ^ 0x696E6E617465ULL), splitmix64(s ^ 0x6D65646961ULL)};
}

std::optional<std::string> RunManifest::get(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

std::string RunManifest::to_text() const {
    std::string out = "# fjmedia run manifest\n";
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
}

RunManifest RunManifest::parse(std::istream& in) {
    RunManifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find(" = ");
        if (eq == std::string::npos) throw std::invalid_argument("manifest: malformed line '" + line + "'");
        m.add(line.substr(0, eq), line.substr(eq + 3));
    }
    return m;
}

ExperimentConfig config_from_manifest(const RunManifest& m) {
    auto need = [&](std::string_view k) {
        auto v = m.get(k);
        if (!v) throw std::invalid_argument("manifest: missing key '" + std::string(k) + "'");
        return *v;
    };

    ExperimentConfig cfg;
    cfg.mode = parse_run_mode(need("mode"));
    if (need("graph.source") == "file") {
        cfg.graph_source = need("graph.path");
    } else {
        GeneratorSpec spec;
        const auto kind = need("graph.generator");
        if (kind == "ba") {
            spec.kind = GeneratorSpec::Kind::BarabasiAlbert;
            spec.param = parse_u64(need("graph.m"));
        } else if (kind == "dreg") {
            spec.kind = GeneratorSpec::Kind::RandomRegular;
            spec.param = parse_u64(need("graph.d"));
        } else {
            throw std::invalid_argument("manifest: unknown generator '" + kind + "'");
        }
        spec.n = parse_u64(need("graph.n"));
        cfg.graph_source = spec;
    }
    cfg.media.alpha = parse_f64(need("alpha"));
    cfg.media.beta = parse_f64(need("beta"));
    cfg.media.gamma = parse_f64(need("gamma"));
    cfg.innate_mu = parse_f64(need("innate.mu"));
    cfg.innate_var = parse_f64(need("innate.var"));
    cfg.repetitions = parse_u64(need("reps"));
    cfg.base_seed = parse_u64(need("seed"));
    cfg.tol = parse_f64(need("tol"));
    cfg.max_periods = parse_u64(need("max_periods"));
    const auto eps = need("epsilon");
    if (eps != "auto") cfg.epsilon = parse_f64(eps);
    cfg.fixed_point_tol = parse_f64(need("fixed_point_tol"));
    cfg.output = need("output");
    return cfg;
}

std::string ExperimentResult::csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
}

OpinionVector sample_innate(std::size_t n, double mu, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_innate: sigma must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mu, sigma);
    std::vector<double> v(n);
    for (auto& x : v) x = std::clamp(dist(rng), 0.0, 1.0);
    return OpinionVector(std::move(v));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    ExperimentResult res;
    res.columns = columns_for(cfg.mode);
    auto& m = res.manifest;
    m.add("software", kSoftwareVersion);
    m.add("mode", std::string(to_string(cfg.mode)));

    std::optional<Graph> shared;
    if (const auto* path = std::get_if<std::string>(&cfg.graph_source)) {
        m.add("graph.source", "file");
        m.add("graph.path", *path);
        m.add("graph.remap", "node ids renumbered 0..n-1 by first appearance");
        shared = load_edge_list_file(*path);
    } else {
        const auto& spec = std::get<GeneratorSpec>(cfg.graph_source);
        m.add("graph.source", "generator");
        const bool ba = spec.kind == GeneratorSpec::Kind::BarabasiAlbert;
        m.add("graph.generator", ba ? "ba" : "dreg");
        m.add("graph.n", std::to_string(spec.n));
        m.add(ba ? "graph.m" : "graph.d", std::to_string(spec.param));
    }
    m.add("alpha", format_double(cfg.media.alpha));
    m.add("beta", format_double(cfg.media.beta));
    m.add("gamma", format_double(cfg.media.gamma));
    m.add("innate.sampler", "gaussian, clipped to [0, 1]");
    m.add("innate.mu", format_double(cfg.innate_mu));
    m.add("innate.var", format_double(cfg.innate_var));
    m.add("innate.sigma", format_double(std::sqrt(cfg.innate_var)));
    m.add("reps", std::to_string(cfg.repetitions));
    m.add("seed", std::to_string(cfg.base_seed));
    m.add("seeding", "rep seed = seed + rep; graph uses rep seed; innate and assignment use splitmix64 substreams");
    m.add("tol", format_double(cfg.tol));
    m.add("max_periods", std::to_string(cfg.max_periods));
    m.add("epsilon", cfg.epsilon ? format_double(*cfg.epsilon) : "auto");
    m.add("fixed_point_tol", format_double(cfg.fixed_point_tol));
    m.add("media.rounding", "count_M = round(alpha*n), half away from zero");
    m.add("media.assignment", "uniform without replacement, fixed across periods");
    m.add("media.truncation", "z_M = min{(1+gamma) s_bar, 1}; equality counts as not truncated");
    m.add("output", cfg.output);

    std::vector<RepOutput> outputs(cfg.repetitions);
    std::vector<std::exception_ptr> errors(cfg.repetitions);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t rep; (rep = next++) < cfg.repetitions;) {
            try {
                outputs[rep] = run_repetition(cfg, shared ? &*shared : nullptr, rep);
            } catch (...) {
                errors[rep] = std::current_exception();
            }
        }
    };
    const std::size_t nthreads = std::min(cfg.threads, cfg.repetitions);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        if (errors[rep]) {
            try {
                std::rethrow_exception(errors[rep]);
            } catch (const std::exception& e) {
                throw ExperimentError(rep, e.what());
            }
        }
        for (auto& e : outputs[rep].manifest) m.entries.push_back(std::move(e));
        for (auto& r : outputs[rep].rows) res.rows.push_back(std::move(r));
    }
    return res;
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result) {
    namespace fs = std::filesystem;
    if (cfg.output.empty()) throw std::invalid_argument("no output path configured");

    const std::vector<std::pair<fs::path, std::string>> files{
        {fs::path(cfg.output), result.csv()},
        {fs::path(cfg.output + ".manifest"), result.manifest.to_text()},
    };
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    try {
        for (const auto& [path, text] : files) {
            auto tmp = path;
            tmp += ".partial";
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << text;
            out.close();
            if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
        for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace fjm
