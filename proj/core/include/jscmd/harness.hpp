// Experiment driver: seeded Monte-Carlo over a (source, channel) grid and
// a ladder of decoders, with pooled SER/SNR metrics and CSV output.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jscmd/hmm_estimator.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/source_model.hpp"

namespace jscmd {

struct CodebookParams {
    std::size_t l1 = 8;
    std::size_t spread = 3;
    double cell_width = 0.0; // <= 0 picks the default span
};

/// Synthetic HMM for the hmm_* decoder experiments: M states with
/// Gaussian emissions quantized to the codebook cells. The pairwise
/// emission mean for a transition i -> j is
///   (1 - pair_mix) * state_means[j] + pair_mix * state_means[i].
struct HmmExperimentParams {
    std::size_t m = 3;
    std::vector<double> state_means; // empty: evenly spaced in [-1.5, 1.5]
    double sigma_obs = 0.8;
    double stay_prob = 0.9;
    double pair_mix = 0.0;
};

HmmModel make_experiment_hmm(const HmmExperimentParams& params,
                             const MdqCodebook& cb);

/// States and continuous emissions drawn from the synthetic HMM.
struct HmmSample {
    std::vector<int> states;
    std::vector<double> values;
};
HmmSample sample_experiment_hmm(const HmmExperimentParams& params,
                                std::uint64_t seed, std::size_t n);

struct ExperimentConfig {
    std::vector<double> rho{0.0, 0.5, 0.9};
    std::vector<double> p_cross{0.001, 0.005, 0.01, 0.05};
    std::vector<double> p_erase{0.0, 0.05, 0.1, 0.2};
    std::vector<double> sigma; // nonempty switches the grid to AWGN mode
    std::size_t n = 10000;    // positions per trial
    std::size_t trials = 20;
    std::vector<std::string> decoders{"hard", "map", "mmse", "mmse_iid"};
    CodebookParams codebook;
    std::uint64_t base_seed = 1;
    bool include_timing = false; // keep wall_ms at 0 in the CSV by default
    HmmExperimentParams hmm;     // used only by the hmm_* decoders
};

/// Every decoder name run_experiment understands.
const std::vector<std::string>& known_decoders();

/// Throws std::invalid_argument on out-of-range grids, empty dimensions,
/// or unknown decoder names.
void validate_config(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const std::string& text);

struct MetricRow {
    double rho = 0.0;
    double p_cross = 0.0;
    double p_erase = 0.0;
    double sigma = 0.0;
    std::string decoder;
    double ser = 0.0;
    double snr_db = 0.0;
    std::size_t trials = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::size_t infeasible = 0; // trials skipped; reported outside the CSV
};

/// Runs the full grid. Metrics are pooled over positions across trials
/// (single ratio per point, not a mean of per-trial ratios). Grid points
/// may execute on `threads` workers; results are merged by grid order,
/// so the output is identical for any thread count.
std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg,
                                      unsigned threads = 1);

/// Header plus one row per metric, 6-decimal fixed floats, sorted by
/// (rho, p_erase, p_cross, sigma, decoder).
std::string emit_csv(std::span<const MetricRow> rows);

/// Seed derivation used by run_experiment, exposed so tests can rebuild
/// the exact per-trial streams.
std::uint64_t trial_source_seed(std::uint64_t base, std::size_t rho_index,
                                std::size_t trial);
std::uint64_t trial_channel_seed(std::uint64_t base, std::size_t point_index,
                                 std::size_t trial, std::size_t k);
std::uint64_t trial_hmm_seed(std::uint64_t base, std::size_t trial);

} // namespace jscmd
