// Memoryless diversity channels: bit-level corruption and per-codeword
// log-likelihood evaluation.
#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "jscmd/mdq.hpp"

namespace jscmd {

/// Observed symbol of the error-and-erasure channel.
enum class EecSymbol : std::uint8_t { zero = 0, one = 1, erased = 2 };

/// Error-and-erasure channel: each bit independently erased with
/// probability p_erase, else inverted with probability p_cross.
struct EecChannel {
    double p_erase = 0.0;
    double p_cross = 0.0;
    std::uint64_t rng_seed = 0;
};

/// BPSK over additive white Gaussian noise of power spectral density
/// sigma: y = (2b - 1) + n with n ~ N(0, sigma/2).
struct AwgnChannel {
    double sigma = 1.0;
    std::uint64_t rng_seed = 0;
};

using ChannelModel = std::variant<EecChannel, AwgnChannel>;

std::vector<EecSymbol> transmit(const EecChannel& ch,
                                std::span<const std::uint8_t> bits);
std::vector<double> transmit(const AwgnChannel& ch,
                             std::span<const std::uint8_t> bits);

/// log P(observed | sent) accumulated per bit. -inf only when some factor
/// is exactly zero.
double log_likelihood(const EecChannel& ch,
                      std::span<const EecSymbol> observed,
                      std::span<const std::uint8_t> sent);
double log_likelihood(const AwgnChannel& ch, std::span<const double> observed,
                      std::span<const std::uint8_t> sent);

/// One description's worth of channel output for a whole sequence,
/// flattened position-major (N x B symbols).
struct ReceivedDescription {
    int bits = 0;
    std::variant<std::vector<EecSymbol>, std::vector<double>> symbols;

    std::size_t positions() const;
};

/// The K observed streams a decoder works from.
struct ReceivedSequence {
    std::size_t n = 0;
    std::vector<ReceivedDescription> descriptions; // K entries
};

/// Push each description of an encoded block through its channel.
ReceivedSequence transmit_streams(const std::vector<ChannelModel>& channels,
                                  const Encoded& enc, const MdqCodebook& cb);

/// Length-L vector of log P_k(observed | lambda_k(c)) for every central
/// codeword c; the workhorse table behind every trellis stage.
std::vector<double> likelihood_table(const EecChannel& ch,
                                     std::span<const EecSymbol> observed,
                                     const MdqCodebook& cb, std::size_t k);
std::vector<double> likelihood_table(const AwgnChannel& ch,
                                     std::span<const double> observed,
                                     const MdqCodebook& cb, std::size_t k);

/// N x L matrix (row per position) of summed per-channel log-likelihoods
/// sum_k log P_k(y_{k,n} | lambda_k(c)).
std::vector<double> all_stage_log_likelihoods(
    const std::vector<ChannelModel>& channels, const ReceivedSequence& recv,
    const MdqCodebook& cb);

/// What a channel-oblivious decoder sees: per description and position,
/// the side index read straight off the received bits, or kErasedIndex
/// when any bit of the codeword is erased or the bits spell an index
/// outside the side codebook. AWGN symbols are sliced at 0.
std::vector<std::vector<int>> hard_decision_indices(
    const ReceivedSequence& recv, const MdqCodebook& cb);

} // namespace jscmd
