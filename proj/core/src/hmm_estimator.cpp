#include "jscmd/hmm_estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jscmd/errors.hpp"

namespace jscmd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamped_log(double p, double floor) {
    if (p <= 0.0) return floor;
    return std::max(std::log(p), floor);
}

void check_stochastic(const double* v, std::size_t n, const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] < 0.0)
            throw std::invalid_argument(std::string(what) +
                                        ": negative entry");
        sum += v[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(what) +
                                    ": does not sum to 1");
}

} // namespace

HmmModel HmmModel::from(std::vector<double> initial,
                        std::vector<double> transition,
                        std::vector<double> observation,
                        std::vector<double> observation_reduced,
                        double log_floor) {
    HmmModel m;
    m.M = initial.size();
    if (m.M == 0) throw std::invalid_argument("HmmModel: empty state set");
    if (transition.size() != m.M * m.M)
        throw std::invalid_argument("HmmModel: transition shape");
    if (observation.size() % (m.M * m.M) != 0)
        throw std::invalid_argument("HmmModel: observation shape");
    m.L = observation.size() / (m.M * m.M);
    if (m.L == 0 || observation_reduced.size() != m.M * m.L)
        throw std::invalid_argument("HmmModel: reduced observation shape");

    check_stochastic(initial.data(), m.M, "initial");
    for (std::size_t i = 0; i < m.M; ++i)
        check_stochastic(transition.data() + i * m.M, m.M, "transition row");
    for (std::size_t ij = 0; ij < m.M * m.M; ++ij)
        check_stochastic(observation.data() + ij * m.L, m.L,
                         "observation slice");
    for (std::size_t i = 0; i < m.M; ++i)
        check_stochastic(observation_reduced.data() + i * m.L, m.L,
                         "reduced observation row");

    m.initial = std::move(initial);
    m.transition = std::move(transition);
    m.observation = std::move(observation);
    m.observation_reduced = std::move(observation_reduced);
    m.log_floor = log_floor;
    auto log_of = [&](const std::vector<double>& src) {
        std::vector<double> out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
            out[i] = clamped_log(src[i], log_floor);
        return out;
    };
    m.log_initial = log_of(m.initial);
    m.log_transition = log_of(m.transition);
    m.log_observation = log_of(m.observation);
    m.log_observation_reduced = log_of(m.observation_reduced);
    return m;
}

HmmMapResult hmm_map_estimate(const HmmModel& hmm, const MdqCodebook& cb,
                              const std::vector<ChannelModel>& channels,
                              const ReceivedSequence& recv) {
    if (recv.n == 0)
        throw std::invalid_argument("hmm_map_estimate: empty sequence");
    if (hmm.L != cb.L)
        throw std::invalid_argument(
            "hmm_map_estimate: model/codebook size mismatch");
    std::size_t M = hmm.M;
    std::size_t L = hmm.L;
    std::size_t N = recv.n;
    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);

    std::vector<double> w(N * M);
    std::vector<double> prev(M, 0.0);
    std::vector<int> back(N * M, 0);
    std::vector<int> xstar(N * M * M, 0);
    std::uint64_t evals = 0;

    // Every stage runs the uniform M x M x L loop; stage 1 substitutes
    // the initial distribution for the state transition and the reduced
    // observation law for the pairwise one.
    for (std::size_t n = 0; n < N; ++n) {
        const double* like_row = like.data() + n * L;
        double* w_row = w.data() + n * M;
        for (std::size_t cur = 0; cur < M; ++cur) {
            double best = kNegInf;
            int best_prev = 0;
            for (std::size_t pr = 0; pr < M; ++pr) {
                const double* obs_row =
                    (n == 0) ? hmm.log_observation_reduced.data() + cur * L
                             : hmm.log_observation.data() + (pr * M + cur) * L;
                double xi = kNegInf;
                int xi_arg = 0;
                for (std::size_t x = 0; x < L; ++x) {
                    ++evals;
                    double v = obs_row[x] + like_row[x];
                    if (v > xi) {
                        xi = v;
                        xi_arg = static_cast<int>(x);
                    }
                }
                xstar[(n * M + pr) * M + cur] = xi_arg;
                double st = (n == 0) ? hmm.log_initial[cur]
                                     : hmm.log_trans(pr, cur);
                double cand = (prev[pr] + st) + xi;
                if (cand > best) {
                    best = cand;
                    best_prev = static_cast<int>(pr);
                }
            }
            w_row[cur] = best;
            back[n * M + cur] = best_prev;
        }
        bool feasible = false;
        for (std::size_t s = 0; s < M; ++s)
            if (w_row[s] != kNegInf) feasible = true;
        if (!feasible)
            throw InfeasibleObservation(
                "hmm_map_estimate: stage " + std::to_string(n + 1) +
                " has zero probability for every state");
        prev.assign(w_row, w_row + M);
    }

    HmmMapResult res;
    res.candidate_evals = evals;
    res.states.resize(N);
    res.codewords.resize(N);
    const double* last = w.data() + (N - 1) * M;
    std::size_t s = 0;
    for (std::size_t c = 1; c < M; ++c)
        if (last[c] > last[s]) s = c;
    res.objective = last[s];
    for (std::size_t n = N; n-- > 0;) {
        res.states[n] = static_cast<int>(s);
        std::size_t pr = static_cast<std::size_t>(back[n * M + s]);
        res.codewords[n] = xstar[(n * M + pr) * M + s];
        s = pr;
    }
    return res;
}

namespace {

int argmax_state_given_codeword(const HmmModel& hmm, int x) {
    std::size_t best = 0;
    double top = kNegInf;
    for (std::size_t z = 0; z < hmm.M; ++z) {
        double v = hmm.log_initial[z] +
                   hmm.log_obs_reduced(z, static_cast<std::size_t>(x));
        if (v > top) {
            top = v;
            best = z;
        }
    }
    return static_cast<int>(best);
}

int argmax_prior_state(const HmmModel& hmm) {
    std::size_t best = 0;
    for (std::size_t z = 1; z < hmm.M; ++z)
        if (hmm.log_initial[z] > hmm.log_initial[best]) best = z;
    return static_cast<int>(best);
}

} // namespace

std::vector<int> hmm_estimate_cheapest(const HmmModel& hmm,
                                       const MdqCodebook& cb,
                                       const ReceivedSequence& recv) {
    if (hmm.L != cb.L)
        throw std::invalid_argument(
            "hmm_estimate_cheapest: model/codebook size mismatch");
    auto indices = hard_decision_indices(recv, cb);
    std::vector<int> states(recv.n);
    std::vector<int> tuple(cb.K);
    for (std::size_t n = 0; n < recv.n; ++n) {
        for (std::size_t k = 0; k < cb.K; ++k) tuple[k] = indices[k][n];
        auto value = hard_decode(cb, tuple);
        if (!value) {
            states[n] = argmax_prior_state(hmm);
            continue;
        }
        states[n] = argmax_state_given_codeword(hmm, cb.quantize(*value));
    }
    return states;
}

std::vector<int> hmm_estimate_mid(const HmmModel& hmm, const MdqCodebook& cb,
                                  const std::vector<ChannelModel>& channels,
                                  const ReceivedSequence& recv) {
    if (hmm.L != cb.L)
        throw std::invalid_argument(
            "hmm_estimate_mid: model/codebook size mismatch");
    std::vector<double> like = all_stage_log_likelihoods(channels, recv, cb);
    std::vector<int> states(recv.n);
    for (std::size_t n = 0; n < recv.n; ++n) {
        const double* row = like.data() + n * cb.L;
        std::size_t x = 0;
        for (std::size_t c = 1; c < cb.L; ++c)
            if (row[c] > row[x]) x = c;
        states[n] = argmax_state_given_codeword(hmm, static_cast<int>(x));
    }
    return states;
}

} // namespace jscmd
