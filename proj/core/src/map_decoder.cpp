#include "jscmd/map_decoder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jscmd/errors.hpp"
#include "jscmd/smawk.hpp"

namespace jscmd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Backward recovery: x_N maximizes w(N, .), then each predecessor
// maximizes w(n-1, c) + log P(x_n | c). Any maximizing choice extends an
// optimal path; the leftmost scan fixes ties deterministically.
MapDecodeResult backtrack(const MarkovSourceModel& model,
                          const std::vector<double>& w, std::size_t n_stages,
                          std::uint64_t evals) {
    std::size_t L = model.L;
    MapDecodeResult res;
    res.candidate_evals = evals;
    res.sequence.resize(n_stages);

    const double* last = w.data() + (n_stages - 1) * L;
    std::size_t best = 0;
    for (std::size_t c = 1; c < L; ++c)
        if (last[c] > last[best]) best = c;
    res.objective = last[best];
    res.sequence[n_stages - 1] = static_cast<int>(best);

    for (std::size_t n = n_stages - 1; n >= 1; --n) {
        const double* row = w.data() + (n - 1) * L;
        std::size_t next = static_cast<std::size_t>(res.sequence[n]);
        std::size_t arg = 0;
        double top = row[0] + model.log_trans(0, next);
        for (std::size_t c = 1; c < L; ++c) {
            double v = row[c] + model.log_trans(c, next);
            if (v > top) {
                top = v;
                arg = c;
            }
        }
        res.sequence[n - 1] = static_cast<int>(arg);
    }
    return res;
}

void check_stage_feasible(const double* w_row, std::size_t L, std::size_t n) {
    for (std::size_t a = 0; a < L; ++a)
        if (w_row[a] != kNegInf) return;
    throw InfeasibleObservation("map_decode: stage " + std::to_string(n + 1) +
                                " has zero probability for every codeword");
}

} // namespace

MongeCheckResult check_monge(const MarkovSourceModel& model, bool exhaustive) {
    std::size_t L = model.L;
    MongeCheckResult res;
    if (exhaustive) {
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t a2 = a + 1; a2 < L; ++a2)
                for (std::size_t b = 0; b < L; ++b)
                    for (std::size_t b2 = b + 1; b2 < L; ++b2) {
                        double lhs = model.log_trans(b2, a) +
                                     model.log_trans(b, a2);
                        double rhs = model.log_trans(b, a) +
                                     model.log_trans(b2, a2);
                        if (lhs > rhs) return {false, a, a2, b, b2};
                    }
        return res;
    }
    for (std::size_t a = 0; a + 1 < L; ++a)
        for (std::size_t b = 0; b + 1 < L; ++b) {
            double lhs = model.log_trans(b + 1, a) + model.log_trans(b, a + 1);
            double rhs = model.log_trans(b, a) + model.log_trans(b + 1, a + 1);
            if (lhs > rhs) return {false, a, a + 1, b, b + 1};
        }
    return res;
}

MapDecodeResult map_decode(const MarkovSourceModel& model,
                           const MdqCodebook& cb,
                           const std::vector<ChannelModel>& channels,
                           const ReceivedSequence& recv) {
    if (recv.n == 0)
        throw std::invalid_argument("map_decode: empty received sequence");
    if (model.L != cb.L)
        throw std::invalid_argument("map_decode: model/codebook size mismatch");
    std::size_t L = model.L;
    std::size_t N = recv.n;
    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);

    std::vector<double> w(N * L);
    std::vector<double> prev(L, 0.0);
    std::uint64_t evals = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double* like_row = like.data() + n * L;
        double* w_row = w.data() + n * L;
        for (std::size_t a = 0; a < L; ++a) w_row[a] = kNegInf;
        // Row-major sweep over predecessors; stage 1 treats the prior as
        // its transition row so every stage runs the same L^2 loop.
        for (std::size_t b = 0; b < L; ++b) {
            double wb = prev[b];
            const double* trans_row = (n == 0)
                                          ? model.log_prior.data()
                                          : model.log_transition.data() + b * L;
            for (std::size_t a = 0; a < L; ++a) {
                double cand = (wb + trans_row[a]) + like_row[a];
                if (cand > w_row[a]) w_row[a] = cand;
            }
            evals += L;
        }
        check_stage_feasible(w_row, L, n);
        prev.assign(w_row, w_row + L);
    }
    return backtrack(model, w, N, evals);
}

MapDecodeResult map_decode_fast(const MarkovSourceModel& model,
                                const MdqCodebook& cb,
                                const std::vector<ChannelModel>& channels,
                                const ReceivedSequence& recv) {
    if (recv.n == 0)
        throw std::invalid_argument("map_decode_fast: empty received sequence");
    if (model.L != cb.L)
        throw std::invalid_argument(
            "map_decode_fast: model/codebook size mismatch");
    MongeCheckResult monge = check_monge(model);
    if (!monge.holds)
        throw std::invalid_argument(
            "map_decode_fast: transition matrix violates the Monge condition "
            "at (a=" + std::to_string(monge.a) +
            ", a'=" + std::to_string(monge.a2) +
            ", b=" + std::to_string(monge.b) +
            ", b'=" + std::to_string(monge.b2) + ")");

    std::size_t L = model.L;
    std::size_t N = recv.n;
    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);

    std::vector<double> w(N * L);
    std::vector<double> prev(L, 0.0);
    std::uint64_t evals = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double* like_row = like.data() + n * L;
        double* w_row = w.data() + n * L;
        const double* log_prior = model.log_prior.data();
        const double* log_trans = model.log_transition.data();

        // -inf likelihoods (zero-probability observations) void the total
        // monotonicity the matrix search relies on; such stages take the
        // exact sweep instead. Both branches evaluate the same entry
        // expression, so stage values stay bit-identical to map_decode.
        bool finite = true;
        for (std::size_t a = 0; a < L && finite; ++a)
            if (like_row[a] == kNegInf) finite = false;
        for (std::size_t b = 0; b < L && finite; ++b)
            if (prev[b] == kNegInf) finite = false;

        if (finite) {
            auto entry = [&](std::size_t a, std::size_t b) {
                ++evals;
                double lt = (n == 0) ? log_prior[a] : log_trans[b * L + a];
                return (prev[b] + lt) + like_row[a];
            };
            std::vector<std::size_t> arg = smawk_row_maxima(L, L, entry);
            for (std::size_t a = 0; a < L; ++a) w_row[a] = entry(a, arg[a]);
        } else {
            for (std::size_t a = 0; a < L; ++a) w_row[a] = kNegInf;
            for (std::size_t b = 0; b < L; ++b) {
                double wb = prev[b];
                const double* trans_row = (n == 0) ? log_prior
                                                   : log_trans + b * L;
                for (std::size_t a = 0; a < L; ++a) {
                    double cand = (wb + trans_row[a]) + like_row[a];
                    if (cand > w_row[a]) w_row[a] = cand;
                }
                evals += L;
            }
        }
        check_stage_feasible(w_row, L, n);
        prev.assign(w_row, w_row + L);
    }
    return backtrack(model, w, N, evals);
}

} // namespace jscmd
