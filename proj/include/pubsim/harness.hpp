#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pubsim/coverage_model.hpp"
#include "pubsim/degree_dist.hpp"
#include "pubsim/sim.hpp"

namespace pubsim {

// Topology selector, round-trippable through its text form:
//   poisson:<mean>
//   powerlaw:<exponent>[:<k_min>[:<k_max>]]   (k_max 0 = default)
//   aiello:<a>:<b>
//   empirical:<degree-file>
struct TopologySpec {
    enum class Kind { Poisson, PowerLaw, Aiello, Empirical };

    Kind kind = Kind::Poisson;
    double lambda = 0.0;       // poisson mean, or power-law exponent
    int k_min = 1;
    int k_max = 0;             // 0: ceil(sqrt(n)) when n is known, else 1000
    double a = 0.0, b = 1.0;   // aiello parameters
    std::string degrees_file;

    static TopologySpec parse(const std::string& text);
    std::string to_string() const;

    DegreeDistribution make_distribution(int n_hint = 0) const;
    // Target degrees for one network: the fixed aiello sequence (n ignored),
    // or n i.i.d. samples. Parity is fixed up either way so the result is
    // always realizable.
    std::vector<int> degree_sequence(int n, Xoshiro256& rng) const;
    bool fixes_node_count() const { return kind == Kind::Aiello; }
};

struct ExperimentConfig {
    TopologySpec topology;
    int n = 10000;  // ignored when the topology fixes the node count
    int replicates = 20;
    int events_per_network = 400;
    std::vector<double> sigma_grid;
    std::vector<double> gamma_grid;
    std::uint64_t master_seed = 1;
    int ttl = kInfiniteTtl;

    static ExperimentConfig from_json(std::istream& in);
    void validate() const;  // throws ConfigError
};

struct SweepRow {
    std::string topology;
    int n = 0;
    int replicates = 0;
    int events = 0;
    std::uint64_t seed = 0;
    int ttl = kInfiniteTtl;
    double sigma = 0.0;
    double gamma = 0.0;
    double sim_mean_receivers = 0.0;
    double sim_mean_subscribers = 0.0;
    double sim_stddev_receivers = 0.0;
    double model_mean_receivers = 0.0;  // +infinity when divergent
    bool model_divergent = false;
    double giant_component_mean = 0.0;
};

struct PerNetworkRow {
    double sigma = 0.0;
    double gamma = 0.0;
    int network_id = 0;
    std::uint64_t network_seed = 0;
    int giant_component = 0;
    double mean_receivers = 0.0;
    double mean_subscribers = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;             // pooled over replicates x events (canonical)
    std::vector<PerNetworkRow> per_network; // one row per (grid point, network)
};

// Full grid run. Replicate networks are built once from streams
// (master_seed, 1, replicate) and reused across grid points; subscriptions
// come from (master_seed, 2, grid_index, replicate) and each event from
// (master_seed, 3, grid_index, replicate, event). Grid order: sigma outer,
// gamma inner. Deterministic for a fixed config.
SweepResult run_sweep(const ExperimentConfig& config);

// CSV, 6 significant digits, "inf" for a divergent model column. Throws
// IoError on empty input so no header-only files are produced.
void emit_report(std::span<const SweepRow> rows, std::ostream& out);
std::vector<SweepRow> parse_report(std::istream& in);
void emit_per_network(std::span<const PerNetworkRow> rows, std::ostream& out);

enum class VaryParam { Sigma, Gamma };

struct PhasePoint {
    double value = 0.0;           // the varied parameter
    double fraction_big = 0.0;    // events covering > 10% of their network's giant component
    double mean_receivers = 0.0;
};

struct PhaseScanResult {
    VaryParam varied = VaryParam::Sigma;
    double fixed_value = 0.0;
    std::vector<PhasePoint> points;
    // first grid value where fraction_big exceeds 0.5
    std::optional<double> empirical_transition;
    // critical value of the varied parameter; nullopt when no giant
    // component is possible at any parameter choice
    std::optional<ThresholdSolution> analytic_threshold;
};

// Scans the grid of the varied parameter with the other held at the front of
// its grid. Same streams and determinism as run_sweep.
PhaseScanResult phase_scan(const ExperimentConfig& config, VaryParam varied);
void emit_phase_report(const PhaseScanResult& scan, std::ostream& out);

}  // namespace pubsim
