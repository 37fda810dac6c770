#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fcomp/types.hpp"

namespace fcomp::simkit {

/// Which events the detector arm records. In the which-way context one path
/// carries a beam block; in the interference context the fringe is taken on
/// one selected exit port, or on both ports merged (common compensation, no
/// port selection).
enum class ContextKind { whichway, interference };
enum class PortSelection { plus, minus, both };

struct Context {
    ContextKind kind = ContextKind::interference;
    Path blocked_path = Path::two;          // whichway only
    PortSelection selection = PortSelection::plus; // interference only

    static Context whichway(Path blocked) { return {ContextKind::whichway, blocked, PortSelection::both}; }
    static Context interference(Port port) {
        return {ContextKind::interference, Path::two,
                port == Port::plus ? PortSelection::plus : PortSelection::minus};
    }
    static Context interference_unselected() {
        return {ContextKind::interference, Path::two, PortSelection::both};
    }
};

std::string to_label(const Context& ctx);

struct ExperimentConfig {
    BeamConfig beam;
    double alpha = 0.0;
    Context context;
    std::vector<double> beta_schedule;
    uint64_t shots_per_setting = 1;
    uint64_t seed = 0;
    bool poisson_totals = false;

    /// Throws std::invalid_argument on an empty schedule or zero shot count.
    void validate() const;
};

/// Exact joint probabilities of the five elementary outcomes of one shot at
/// one compensation setting: exit port x analyzer result, plus absorption in
/// the beam block. Both ports are always present; port selection is applied
/// downstream when counts are binned.
struct OutcomeDistribution {
    double port_spin[2][2]{}; // [port: 0 = plus, 1 = minus][spin x: 0 = +, 1 = -]
    double absorbed = 0.0;

    double& at(Port port, int spin_x_minus) {
        return port_spin[port == Port::plus ? 0 : 1][spin_x_minus];
    }
    double at(Port port, int spin_x_minus) const {
        return port_spin[port == Port::plus ? 0 : 1][spin_x_minus];
    }
    double total() const;
};

/// Counts accumulated at one compensation setting. n_absorbed holds every
/// shot that did not reach the x analyzer of the configured arm: beam-block
/// hits in the which-way context, unselected-port exits under interference
/// port selection.
struct SettingCounts {
    double beta = 0.0;
    uint64_t n_x_plus = 0;
    uint64_t n_x_minus = 0;
    uint64_t n_absorbed = 0;

    uint64_t total() const { return n_x_plus + n_x_minus + n_absorbed; }
    uint64_t detected() const { return n_x_plus + n_x_minus; }
};

/// Detector counts versus compensation angle for one context/port.
struct FringeDataset {
    ExperimentConfig config;
    std::vector<SettingCounts> rows;
};

/// Event probabilities for one compensation setting, from the state-vector
/// pipeline: prepare, couple, (block,) project on each exit, compensate,
/// analyze the spin along +/-x.
OutcomeDistribution outcome_distribution(const ExperimentConfig& config, double beta);

/// Draws counts for every setting of the schedule. Fully deterministic for a
/// given config (the RNG streams are keyed by seed, setting and shot, so the
/// result does not depend on max_threads). max_threads = 0 picks a default.
FringeDataset sample_run(const ExperimentConfig& config, unsigned max_threads = 0);

/// Analyzer readout <sigma_x> = (N+ - N-) / (N+ + N-) with its binomial
/// standard error 2 sqrt(N+ N- / N^3). Throws std::invalid_argument when no
/// counts were detected.
struct SigmaXEstimate {
    double value = 0.0;
    double std_error = 0.0;
};
SigmaXEstimate estimate_sigma_x(uint64_t n_x_plus, uint64_t n_x_minus);

/// Binomial standard error with half-count regularization, nonzero whenever
/// N > 0; used as the weighting error in fits so that settings with an empty
/// bin keep a finite weight.
double regularized_sigma_x_error(uint64_t n_x_plus, uint64_t n_x_minus);

/// CSV with header beta_rad,n_x_plus,n_x_minus,n_absorbed.
void write_csv(const FringeDataset& dataset, std::ostream& out);
std::vector<SettingCounts> read_csv_rows(std::istream& in);

/// JSON document embedding the full ExperimentConfig next to the rows.
std::string to_json(const FringeDataset& dataset);
FringeDataset dataset_from_json(const std::string& text);

std::string to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

} // namespace fcomp::simkit
