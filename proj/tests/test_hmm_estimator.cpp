#include "jscmd/hmm_estimator.hpp"

#include <stdexcept>
#include <algorithm>

#include <cmath>
#include <vector>

#include "doctest.h"
#include "jscmd/harness.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/oracles.hpp"
#include "jscmd/serialization.hpp"
#include "test_support.hpp"

using namespace jscmd;

namespace {

ReceivedSequence transmit_cells(const MdqCodebook& cb,
                                const std::vector<ChannelModel>& channels,
                                const std::vector<int>& cells) {
    Encoded enc;
    enc.central = cells;
    enc.streams.assign(cb.K, std::vector<int>(cells.size()));
    for (std::size_t n = 0; n < cells.size(); ++n)
        for (std::size_t k = 0; k < cb.K; ++k)
            enc.streams[k][n] = cb.assignment[cells[n]][k];
    return transmit_streams(channels, enc, cb);
}

double state_accuracy(const std::vector<int>& got,
                      const std::vector<int>& truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (got[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(got.size());
}

} // namespace

TEST_CASE("single-state HMM reduces to memoryless MAP decoding") {
    auto cb = build_2dsq(4, 1, GaussMarkovSource{});
    std::vector<double> q{0.4, 0.3, 0.2, 0.1};
    auto hmm = HmmModel::from({1.0}, {1.0}, q, q);
    auto model = MarkovSourceModel::from(
        q, {q[0], q[1], q[2], q[3], q[0], q[1], q[2], q[3], q[0], q[1], q[2],
            q[3], q[0], q[1], q[2], q[3]});

    auto pipe = test_support::run_pipeline(cb, 0.0, 40, 0.2, 0.1, 313);
    auto est = hmm_map_estimate(hmm, cb, pipe.channels, pipe.recv);
    auto map = map_decode(model, cb, pipe.channels, pipe.recv);
    CHECK(est.codewords == map.sequence);
    CHECK(est.objective == doctest::Approx(map.objective).epsilon(1e-12));
    for (int s : est.states) CHECK(s == 0);
}

TEST_CASE("noiseless injective observations recover the state path") {
    auto cb = build_2dsq(4, 1, GaussMarkovSource{});
    // Transition (i, j) emits codeword 2i + j, uniquely.
    std::vector<double> obs(2 * 2 * 4, 0.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            obs[(i * 2 + j) * 4 + (2 * i + j)] = 1.0;
    std::vector<double> reduced(2 * 4, 0.0);
    reduced[0 * 4 + 0] = 1.0; // state 0 starts at codeword 0
    reduced[1 * 4 + 3] = 1.0; // state 1 starts at codeword 3
    auto hmm = HmmModel::from({0.5, 0.5}, {0.7, 0.3, 0.4, 0.6}, obs, reduced);

    std::vector<int> states{0, 1, 0, 0, 1, 1};
    std::vector<int> emitted(states.size());
    emitted[0] = states[0] == 0 ? 0 : 3;
    for (std::size_t n = 1; n < states.size(); ++n)
        emitted[n] = 2 * states[n - 1] + states[n];

    auto channels = test_support::eec_pair(0.0, 0.0, 5);
    auto recv = transmit_cells(cb, channels, emitted);
    auto est = hmm_map_estimate(hmm, cb, channels, recv);
    CHECK(est.states == states);
    CHECK(est.codewords == emitted);
}

TEST_CASE("joint MAP matches exhaustive maximization on random instances") {
    auto suite = oracle::run_hmm_suite(50, 17);
    CHECK(suite.ok());
    CHECK(suite.max_abs_diff <= 1e-9);
}

TEST_CASE("inner loop runs exactly N*M^2*L candidate evaluations") {
    HmmExperimentParams params;
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    auto hmm = make_experiment_hmm(params, cb);
    auto sample = sample_experiment_hmm(params, 21, 50);
    auto enc = encode(cb, sample.values);
    auto channels = test_support::eec_pair(0.1, 0.02, 23);
    auto recv = transmit_streams(channels, enc, cb);
    auto est = hmm_map_estimate(hmm, cb, channels, recv);
    CHECK(est.candidate_evals == 50ull * 3 * 3 * 21);
}

TEST_CASE("cheapest estimator: disjoint supports, noiseless") {
    auto cb = build_2dsq(4, 1, GaussMarkovSource{});
    // State 0 emits {0,1}, state 1 emits {2,3}; the pair law follows the
    // current state.
    std::vector<double> reduced{0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5};
    std::vector<double> obs;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            obs.insert(obs.end(), reduced.begin() + j * 4,
                       reduced.begin() + (j + 1) * 4);
    auto hmm = HmmModel::from({0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}, obs, reduced);

    std::vector<int> states{0, 0, 1, 1, 0};
    std::vector<int> emitted{0, 1, 2, 3, 1};
    auto channels = test_support::eec_pair(0.0, 0.0, 2);
    auto recv = transmit_cells(cb, channels, emitted);
    CHECK(hmm_estimate_cheapest(hmm, cb, recv) == states);
    // With exact hard decisions the middle tier agrees.
    CHECK(hmm_estimate_mid(hmm, cb, channels, recv) == states);
}

TEST_CASE("cheapest estimator: total erasure falls back to the state prior") {
    auto cb = build_2dsq(2, 1, GaussMarkovSource{});
    std::vector<double> uniform_obs{0.5, 0.5};
    std::vector<double> obs, reduced, trans;
    for (int ij = 0; ij < 9; ++ij)
        obs.insert(obs.end(), uniform_obs.begin(), uniform_obs.end());
    for (int i = 0; i < 3; ++i) {
        reduced.insert(reduced.end(), uniform_obs.begin(), uniform_obs.end());
        trans.insert(trans.end(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    }
    auto hmm = HmmModel::from({0.2, 0.5, 0.3}, trans, obs, reduced);
    auto channels = test_support::eec_pair(1.0, 0.0, 4);
    auto recv = transmit_cells(cb, channels, {0, 1, 0, 1});
    auto states = hmm_estimate_cheapest(hmm, cb, recv);
    CHECK(states == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("middle estimator: single description, heavy crossover") {
    HmmExperimentParams params;
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    auto hmm = make_experiment_hmm(params, cb);
    auto sample = sample_experiment_hmm(params, 77, 30);
    auto enc = encode(cb, sample.values);
    auto channels = test_support::eec_pair(0.0, 0.3, 31);
    auto recv = transmit_streams(channels, enc, cb);
    test_support::erase_description(recv, 1);

    auto states = hmm_estimate_mid(hmm, cb, channels, recv);
    // x* must maximize the one informative likelihood table.
    auto like = all_stage_log_likelihoods(channels, recv, cb);
    for (std::size_t n = 0; n < recv.n; ++n) {
        const double* row = like.data() + n * cb.L;
        std::size_t x = 0;
        for (std::size_t c = 1; c < cb.L; ++c)
            if (row[c] > row[x]) x = c;
        std::size_t best = 0;
        double top = -1e300;
        for (std::size_t z = 0; z < hmm.M; ++z) {
            double v = hmm.log_initial[z] + hmm.log_obs_reduced(z, x);
            if (v > top) {
                top = v;
                best = z;
            }
        }
        CHECK(states[n] == static_cast<int>(best));
    }
}

TEST_CASE("middle beats cheapest under pure bit errors") {
    HmmExperimentParams params;
    params.stay_prob = 0.95;
    params.sigma_obs = 1.0;
    params.state_means = {-2.0, 0.0, 2.0};
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    auto hmm = make_experiment_hmm(params, cb);
    auto sample = sample_experiment_hmm(params, 5150, 6000);
    auto enc = encode(cb, sample.values);
    auto channels = test_support::eec_pair(0.0, 0.15, 51);
    auto recv = transmit_streams(channels, enc, cb);

    double acc_mid =
        state_accuracy(hmm_estimate_mid(hmm, cb, channels, recv),
                       sample.states);
    double acc_cheap =
        state_accuracy(hmm_estimate_cheapest(hmm, cb, recv), sample.states);
    CHECK(acc_mid >= acc_cheap - 0.005);
}

TEST_CASE("resource ladder: error rate ordering exact <= mid <= cheapest") {
    HmmExperimentParams params;
    params.stay_prob = 0.95;
    params.sigma_obs = 1.0;
    params.state_means = {-2.0, 0.0, 2.0};
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    auto hmm = make_experiment_hmm(params, cb);

    std::size_t positions = 0;
    std::size_t err_exact = 0, err_mid = 0, err_cheap = 0;
    for (int trial = 0; trial < 2; ++trial) {
        auto sample = sample_experiment_hmm(params, 9000 + trial, 6000);
        auto enc = encode(cb, sample.values);
        auto channels = test_support::eec_pair(0.2, 0.03, 61 + trial);
        auto recv = transmit_streams(channels, enc, cb);
        auto exact = hmm_map_estimate(hmm, cb, channels, recv).states;
        auto mid = hmm_estimate_mid(hmm, cb, channels, recv);
        auto cheap = hmm_estimate_cheapest(hmm, cb, recv);
        for (std::size_t n = 0; n < recv.n; ++n) {
            err_exact += exact[n] != sample.states[n];
            err_mid += mid[n] != sample.states[n];
            err_cheap += cheap[n] != sample.states[n];
            ++positions;
        }
    }
    REQUIRE(positions >= 10000);
    double rate_exact = static_cast<double>(err_exact) / positions;
    double rate_mid = static_cast<double>(err_mid) / positions;
    double rate_cheap = static_cast<double>(err_cheap) / positions;
    CHECK(rate_exact <= rate_mid + 0.005);
    CHECK(rate_mid <= rate_cheap + 0.005);
}

TEST_CASE("hmm model JSON round trip") {
    HmmExperimentParams params;
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    auto hmm = make_experiment_hmm(params, cb);
    auto back = hmm_from_json(hmm_to_json(hmm));
    CHECK(back.M == hmm.M);
    CHECK(back.L == hmm.L);
    for (std::size_t i = 0; i < hmm.observation.size(); ++i)
        CHECK(back.observation[i] ==
              doctest::Approx(hmm.observation[i]).epsilon(1e-15));
}

TEST_CASE("stochastic slice validation") {
    CHECK_THROWS_AS(HmmModel::from({0.5, 0.6}, {1, 0, 0, 1},
                                   {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
                                   {0.5, 0.5, 0.5, 0.5}),
                    std::invalid_argument);
}
