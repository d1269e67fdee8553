// Brute-force reference computations and randomized comparison suites.
// Everything here recomputes from first principles (direct likelihood
// evaluation, explicit enumeration of candidate sequences) and stays off
// the table-sharing and dynamic-programming paths it is used to check.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/hmm_estimator.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/source_model.hpp"

namespace jscmd::oracle {

/// N x L table of sum_k log P_k(y_{k,n} | lambda_k(c)), evaluated one
/// (position, codeword, channel) at a time.
std::vector<double> stage_log_likelihoods(
    const std::vector<ChannelModel>& channels, const ReceivedSequence& recv,
    const MdqCodebook& cb);

/// Log-posterior objective of one codeword sequence under the factored
/// model, using an oracle likelihood table from stage_log_likelihoods.
double sequence_objective(const MarkovSourceModel& model,
                          const std::vector<double>& like,
                          std::span<const int> seq);

/// Maximum of sequence_objective over all L^N sequences.
double max_sequence_objective(const MarkovSourceModel& model,
                              const std::vector<double>& like, std::size_t N);

/// Exhaustive per-position posterior marginals (N x L, rows normalized),
/// accumulated over every codeword sequence in the linear domain.
std::vector<double> posterior_marginals(const MarkovSourceModel& model,
                                        const std::vector<double>& like,
                                        std::size_t N);

/// Maximum joint objective over all (state sequence, codeword sequence)
/// pairs of the HMM estimation problem.
double max_hmm_joint_objective(const HmmModel& hmm,
                               const std::vector<double>& like,
                               std::size_t N);

/// One randomly drawn decoding problem: model, codebook, channels, and a
/// received block (usually a real transmission, sometimes arbitrary
/// symbols to stress unusual observations).
struct RandomInstance {
    MarkovSourceModel model;
    MdqCodebook codebook;
    std::vector<ChannelModel> channels;
    ReceivedSequence received;
    std::vector<int> transmitted; // empty for arbitrary-symbol draws
};

struct RandomInstanceOptions {
    std::size_t max_l = 6;
    std::size_t max_n = 8;
    std::size_t max_search = 200000; // cap on L^N
};

RandomInstance random_instance(std::uint64_t seed,
                               const RandomInstanceOptions& opts = {});

struct RandomHmmInstance {
    HmmModel hmm;
    MdqCodebook codebook;
    std::vector<ChannelModel> channels;
    ReceivedSequence received;
    std::vector<int> true_states;
};

struct RandomHmmOptions {
    std::size_t max_m = 3;
    std::size_t max_l = 4;
    std::size_t max_n = 6;
    std::size_t max_search = 400000; // cap on (M*L)^N
};

RandomHmmInstance random_hmm_instance(std::uint64_t seed,
                                      const RandomHmmOptions& opts = {});

/// Result of a randomized equivalence suite.
struct SuiteResult {
    int instances = 0;
    int failures = 0;
    double max_abs_diff = 0.0;

    bool ok() const { return failures == 0; }
};

/// map_decode objective vs. exhaustive maximization, |diff| <= tol.
SuiteResult run_map_suite(int instances, std::uint64_t seed,
                          double tol = 1e-9);
/// forward_backward posteriors vs. exhaustive marginals, per entry and
/// row-sum both within tol.
SuiteResult run_mmse_suite(int instances, std::uint64_t seed,
                           double tol = 1e-9);
/// hmm_map_estimate objective vs. exhaustive joint maximization.
SuiteResult run_hmm_suite(int instances, std::uint64_t seed,
                          double tol = 1e-9);

} // namespace jscmd::oracle
