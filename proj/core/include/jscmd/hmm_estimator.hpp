// Hidden Markov state estimation from multiple noisy descriptions of the
// quantized observations: the exact joint MAP trellis and the two
// memoryless resource-reduced approximations.
#pragma once

#include <cstdint>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/mdq.hpp"

namespace jscmd {

/// HMM with M states emitting central-quantizer codewords. The
/// observation law is conditioned on the state transition,
/// P_O(x | s_prev, s_cur); `observation_reduced` is the per-state law
/// P_O(x | s) used at stage 1 and by the memoryless estimators.
struct HmmModel {
    std::size_t M = 0;
    std::size_t L = 0;
    std::vector<double> initial;             // M
    std::vector<double> transition;          // M x M, row = previous state
    std::vector<double> observation;         // M x M x L
    std::vector<double> observation_reduced; // M x L
    std::vector<double> log_initial;
    std::vector<double> log_transition;
    std::vector<double> log_observation;
    std::vector<double> log_observation_reduced;
    double log_floor = -1e9;

    double trans(std::size_t prev, std::size_t cur) const {
        return transition[prev * M + cur];
    }
    double log_trans(std::size_t prev, std::size_t cur) const {
        return log_transition[prev * M + cur];
    }
    double obs(std::size_t prev, std::size_t cur, std::size_t x) const {
        return observation[(prev * M + cur) * L + x];
    }
    double log_obs(std::size_t prev, std::size_t cur, std::size_t x) const {
        return log_observation[(prev * M + cur) * L + x];
    }
    double log_obs_reduced(std::size_t s, std::size_t x) const {
        return log_observation_reduced[s * L + x];
    }

    /// Validates that every stochastic slice sums to 1 within 1e-9.
    static HmmModel from(std::vector<double> initial,
                         std::vector<double> transition,
                         std::vector<double> observation,
                         std::vector<double> observation_reduced,
                         double log_floor = -1e9);
};

struct HmmMapResult {
    std::vector<int> states;    // decoded state sequence
    std::vector<int> codewords; // the inner-argmax codeword per position
    double objective = 0.0;
    std::uint64_t candidate_evals = 0; // codeword candidates examined
};

/// Exact joint MAP over (state sequence, codeword sequence): trellis over
/// states with the per-edge inner maximization
///   xi(cur, prev) = max_x { log P_O(x|prev,cur) + sum_k log P_k(y|lambda_k(x)) }.
/// Ties break toward the smaller state index, then the smaller codeword.
HmmMapResult hmm_map_estimate(const HmmModel& hmm, const MdqCodebook& cb,
                              const std::vector<ChannelModel>& channels,
                              const ReceivedSequence& recv);

/// Cheapest tier: hard-decision decode each position, then per-position
///   z_n = argmax_z P_S(z) P_O(x_n | z).
/// Totally erased positions fall back to argmax_z P_S(z).
std::vector<int> hmm_estimate_cheapest(const HmmModel& hmm,
                                       const MdqCodebook& cb,
                                       const ReceivedSequence& recv);

/// Middle tier: channel-aware but memoryless. Picks the codeword with
/// the largest joint channel likelihood, then the state as above.
std::vector<int> hmm_estimate_mid(const HmmModel& hmm, const MdqCodebook& cb,
                                  const std::vector<ChannelModel>& channels,
                                  const ReceivedSequence& recv);

} // namespace jscmd
