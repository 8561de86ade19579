#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fjm/fj_core.hpp"
#include "fjm/graph.hpp"
#include "fjm/media.hpp"
#include "fjm/periods.hpp"

namespace fjm {

inline constexpr const char* kSoftwareVersion = "fjmedia 0.1.0";

enum class RunMode { Periods, Equilibrium, NonStubborn, Bounds };

std::string_view to_string(RunMode m);
RunMode parse_run_mode(std::string_view s);

struct GeneratorSpec {
    enum class Kind { BarabasiAlbert, RandomRegular } kind = Kind::RandomRegular;
    std::size_t n = 0;
    /// m for Barabasi-Albert, d for random regular.
    std::size_t param = 0;
};

Graph generate_graph(const GeneratorSpec& spec, std::uint64_t seed);
std::string describe(const GeneratorSpec& spec);

struct ExperimentConfig {
    RunMode mode = RunMode::Periods;
    /// Edge-list path, or a generator re-run for every repetition.
    std::variant<std::string, GeneratorSpec> graph_source = GeneratorSpec{};
    MediaConfig media;
    double innate_mu = 0.5;
    /// Variance of the Gaussian before clipping; sigma = sqrt(innate_var).
    double innate_var = 0.2;
    std::size_t repetitions = 20;
    std::uint64_t base_seed = 1;
    std::size_t max_periods = 10'000;
    /// Radicalized-down threshold; 10/n when unset.
    std::optional<double> epsilon;
    double fixed_point_tol = 1e-10;
    double tol = 1e-12;
    /// CSV destination; the manifest goes to `output + ".manifest"`.
    std::string output;
    std::size_t threads = 1;

    void validate() const;
};

/// Per-repetition seeds. The graph generator takes the repetition seed
/// base_seed + rep itself; innate sampling and media assignment draw from
/// splitmix64-derived substreams of it.
struct RepetitionSeeds {
    std::uint64_t rep_seed;
    std::uint64_t graph;
    std::uint64_t innate;
    std::uint64_t assignment;
};

RepetitionSeeds derive_seeds(std::uint64_t base_seed, std::size_t rep);

/// Ordered key/value record of everything needed to reproduce a run.
struct RunManifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
    std::optional<std::string> get(std::string_view key) const;
    std::string to_text() const;
    static RunManifest parse(std::istream& in);
};

/// Rebuilds the config recorded in a manifest.
ExperimentConfig config_from_manifest(const RunManifest& m);

struct ExperimentResult {
    RunManifest manifest;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Header plus rows, comma separated, LF line endings.
    std::string csv() const;
};

class ExperimentError : public std::runtime_error {
public:
    ExperimentError(std::size_t rep, const std::string& what)
        : std::runtime_error("repetition " + std::to_string(rep) + ": " + what), rep_(rep) {}
    std::size_t repetition() const { return rep_; }

private:
    std::size_t rep_;
};

/// I.i.d. normal(mu, sigma^2) draws clipped into [0, 1].
OpinionVector sample_innate(std::size_t n, double mu, double sigma, std::uint64_t seed);

/// Runs every repetition and collects rows in repetition order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the CSV and manifest through temporary files; nothing is left
/// behind if a write fails.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result);

std::string format_double(double v);

}  // namespace fjm
