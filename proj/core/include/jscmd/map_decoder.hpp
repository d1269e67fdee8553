// MAP sequence decoding over the stage x codeword trellis: exact dynamic
// program (longest path in the weighted DAG) and the matrix-search fast
// path for totally monotone (Gaussian-Markov) transition matrices.
#pragma once

#include <cstdint>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/source_model.hpp"

namespace jscmd {

struct MapDecodeResult {
    std::vector<int> sequence; // decoded central codeword indices
    double objective = 0.0;    // achieved value of the log-posterior sum
    std::uint64_t candidate_evals = 0; // stage-matrix entries examined
};

/// Outcome of the Monge condition check on a model's log-transition
/// matrix. When it fails, (a, a2, b, b2) is the first violating
/// quadruple: log P(a|b2) + log P(a2|b) > log P(a|b) + log P(a2|b2).
struct MongeCheckResult {
    bool holds = true;
    std::size_t a = 0, a2 = 0, b = 0, b2 = 0;
};

/// Adjacent-pair check by default (sufficient by composition); the
/// exhaustive mode scans every quadruple and exists to guard the
/// shortcut in tests.
MongeCheckResult check_monge(const MarkovSourceModel& model,
                             bool exhaustive = false);

/// Exact MAP decoding: argmax over central codeword sequences of
///   sum_n [ log P(x_n|x_{n-1}) + sum_k log P_k(y_{k,n}|lambda_k(x_n)) ],
/// with ties broken toward the smaller codeword index. Stage 1 uses the
/// prior as its transition row. Throws InfeasibleObservation if some
/// stage has zero probability under every codeword.
MapDecodeResult map_decode(const MarkovSourceModel& model,
                           const MdqCodebook& cb,
                           const std::vector<ChannelModel>& channels,
                           const ReceivedSequence& recv);

/// Same output as map_decode (identical stage values, shared tie rule),
/// but per-stage row maxima are found by SMAWK in O(L) entry
/// evaluations instead of O(L^2). Refuses to run when check_monge fails.
MapDecodeResult map_decode_fast(const MarkovSourceModel& model,
                                const MdqCodebook& cb,
                                const std::vector<ChannelModel>& channels,
                                const ReceivedSequence& recv);

} // namespace jscmd
