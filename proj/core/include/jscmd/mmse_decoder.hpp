// MMSE decoding via the forward-backward recursion extended to K
// observation streams, plus the memoryless (iid) reduction.
#pragma once

#include <cstddef>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/source_model.hpp"

namespace jscmd {

/// Per-position posteriors P(x_n = l | y_1..y_K), rows normalized to 1.
/// The forward pass runs on likelihoods shifted by their per-stage
/// maximum `like_shifts[n]` and normalized by `alpha_scales[n]`, so
/// sum_n (log alpha_scales[n] + like_shifts[n]) recovers the observation
/// log-likelihood.
struct PosteriorTable {
    std::size_t n = 0;
    std::size_t L = 0;
    std::vector<double> probs;        // n x L, row-major
    std::vector<double> alpha_scales; // n entries, all positive
    std::vector<double> like_shifts;  // n entries

    double at(std::size_t pos, std::size_t l) const {
        return probs[pos * L + l];
    }
};

/// Scaled alpha/beta recursion over the kernel
///   gamma_n(l', l) = P(l | l') * prod_k P_k(y_{k,n} | lambda_k(l)),
/// with alpha_1(l) = P(l) * prod_k P_k(y_{k,1} | lambda_k(l)) and
/// beta_N = 1. Throws InfeasibleObservation when the total probability
/// of the observations is zero.
PosteriorTable forward_backward(const MarkovSourceModel& model,
                                const MdqCodebook& cb,
                                const std::vector<ChannelModel>& channels,
                                const ReceivedSequence& recv);

/// Conditional-mean reconstruction: sum_l posterior(n,l) * centroid(l).
std::vector<double> mmse_reconstruct(const PosteriorTable& posterior,
                                     const MdqCodebook& cb);

/// Memoryless variant: per-position posterior proportional to
/// P(x_n = l) * prod_k P_k(y_{k,n} | lambda_k(l)), using the stationary
/// cell prior implied by the codebook boundaries. O(L K N).
std::vector<double> mmse_decode_iid(const MdqCodebook& cb,
                                    const std::vector<ChannelModel>& channels,
                                    const ReceivedSequence& recv);

} // namespace jscmd
