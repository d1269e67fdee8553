#include "jscmd/mmse_decoder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jscmd/errors.hpp"
#include "jscmd/gauss.hpp"

namespace jscmd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// exp of a log-likelihood row shifted by its maximum, so at least one
// entry is 1 and AWGN stages cannot underflow to an all-zero row. The
// shift cancels once rows are normalized.
double shifted_exp_row(const double* like_row, std::size_t L, double* out,
                       std::size_t stage) {
    double shift = kNegInf;
    for (std::size_t l = 0; l < L; ++l)
        if (like_row[l] > shift) shift = like_row[l];
    if (shift == kNegInf)
        throw InfeasibleObservation(
            "stage " + std::to_string(stage + 1) +
            ": every codeword has zero likelihood");
    for (std::size_t l = 0; l < L; ++l)
        out[l] = std::exp(like_row[l] - shift);
    return shift;
}

} // namespace

PosteriorTable forward_backward(const MarkovSourceModel& model,
                                const MdqCodebook& cb,
                                const std::vector<ChannelModel>& channels,
                                const ReceivedSequence& recv) {
    if (recv.n == 0)
        throw std::invalid_argument("forward_backward: empty sequence");
    if (model.L != cb.L)
        throw std::invalid_argument(
            "forward_backward: model/codebook size mismatch");
    std::size_t L = model.L;
    std::size_t N = recv.n;

    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);
    std::vector<double> glike(N * L);

    PosteriorTable table;
    table.n = N;
    table.L = L;
    table.alpha_scales.resize(N);
    table.like_shifts.resize(N);
    for (std::size_t n = 0; n < N; ++n)
        table.like_shifts[n] =
            shifted_exp_row(like.data() + n * L, L, glike.data() + n * L, n);

    // Forward pass, normalized each stage to dodge underflow; the scale
    // factors cancel in the posterior.
    std::vector<double> alpha(N * L);
    for (std::size_t n = 0; n < N; ++n) {
        double* a_row = alpha.data() + n * L;
        const double* g_row = glike.data() + n * L;
        if (n == 0) {
            for (std::size_t l = 0; l < L; ++l)
                a_row[l] = model.prior[l] * g_row[l];
        } else {
            const double* a_prev = alpha.data() + (n - 1) * L;
            for (std::size_t l = 0; l < L; ++l) {
                double sum = 0.0;
                for (std::size_t lp = 0; lp < L; ++lp)
                    sum += a_prev[lp] * model.trans(lp, l);
                a_row[l] = g_row[l] * sum;
            }
        }
        double scale = 0.0;
        for (std::size_t l = 0; l < L; ++l) scale += a_row[l];
        if (scale <= 0.0)
            throw InfeasibleObservation(
                "forward_backward: zero total probability at stage " +
                std::to_string(n + 1));
        for (std::size_t l = 0; l < L; ++l) a_row[l] /= scale;
        table.alpha_scales[n] = scale;
    }

    // Backward pass; rows rescaled by their maximum for range only.
    std::vector<double> beta_next(L, 1.0), beta(L);
    table.probs.resize(N * L);
    for (std::size_t n = N; n-- > 0;) {
        if (n + 1 < N) {
            const double* g_next = glike.data() + (n + 1) * L;
            double top = 0.0;
            for (std::size_t l = 0; l < L; ++l) {
                double sum = 0.0;
                for (std::size_t lp = 0; lp < L; ++lp)
                    sum += model.trans(l, lp) * g_next[lp] * beta_next[lp];
                beta[l] = sum;
                if (sum > top) top = sum;
            }
            if (top > 0.0)
                for (std::size_t l = 0; l < L; ++l) beta[l] /= top;
            beta_next = beta;
        }
        double* p_row = table.probs.data() + n * L;
        const double* a_row = alpha.data() + n * L;
        double total = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            p_row[l] = a_row[l] * beta_next[l];
            total += p_row[l];
        }
        if (total <= 0.0)
            throw InfeasibleObservation(
                "forward_backward: zero posterior mass at stage " +
                std::to_string(n + 1));
        for (std::size_t l = 0; l < L; ++l) p_row[l] /= total;
    }
    return table;
}

std::vector<double> mmse_reconstruct(const PosteriorTable& posterior,
                                     const MdqCodebook& cb) {
    if (posterior.L != cb.L)
        throw std::invalid_argument(
            "mmse_reconstruct: posterior/codebook size mismatch");
    std::vector<double> out(posterior.n);
    for (std::size_t n = 0; n < posterior.n; ++n) {
        double sum = 0.0;
        for (std::size_t l = 0; l < posterior.L; ++l)
            sum += posterior.at(n, l) * cb.centroids[l];
        out[n] = sum;
    }
    return out;
}

std::vector<double> mmse_decode_iid(const MdqCodebook& cb,
                                    const std::vector<ChannelModel>& channels,
                                    const ReceivedSequence& recv) {
    std::size_t L = cb.L;
    std::size_t N = recv.n;
    std::vector<double> prior(L);
    for (std::size_t l = 0; l < L; ++l)
        prior[l] = norm_cell_prob(cb.boundaries[l], cb.boundaries[l + 1]);

    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);
    std::vector<double> g(L);
    std::vector<double> out(N);
    for (std::size_t n = 0; n < N; ++n) {
        shifted_exp_row(like.data() + n * L, L, g.data(), n);
        double total = 0.0, moment = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            double p = prior[l] * g[l];
            total += p;
            moment += p * cb.centroids[l];
        }
        if (total <= 0.0)
            throw InfeasibleObservation(
                "mmse_decode_iid: zero total probability at position " +
                std::to_string(n + 1));
        out[n] = moment / total;
    }
    return out;
}

} // namespace jscmd
