#include "jscmd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "jscmd/gauss.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/mmse_decoder.hpp"
#include "jscmd/random.hpp"

namespace jscmd::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::uint8_t> bits_of(int index, int bits) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
    for (int b = 0; b < bits; ++b)
        out[b] = static_cast<std::uint8_t>((index >> (bits - 1 - b)) & 1);
    return out;
}

} // namespace

std::vector<double> stage_log_likelihoods(
    const std::vector<ChannelModel>& channels, const ReceivedSequence& recv,
    const MdqCodebook& cb) {
    std::vector<double> like(recv.n * cb.L, 0.0);
    for (std::size_t n = 0; n < recv.n; ++n) {
        for (std::size_t c = 0; c < cb.L; ++c) {
            double sum = 0.0;
            for (std::size_t k = 0; k < cb.K; ++k) {
                const auto& desc = recv.descriptions[k];
                std::size_t B = static_cast<std::size_t>(desc.bits);
                auto sent = bits_of(cb.assignment[c][k], desc.bits);
                if (std::holds_alternative<EecChannel>(channels[k])) {
                    const auto& syms =
                        std::get<std::vector<EecSymbol>>(desc.symbols);
                    sum += log_likelihood(
                        std::get<EecChannel>(channels[k]),
                        std::span<const EecSymbol>(syms.data() + n * B, B),
                        sent);
                } else {
                    const auto& syms =
                        std::get<std::vector<double>>(desc.symbols);
                    sum += log_likelihood(
                        std::get<AwgnChannel>(channels[k]),
                        std::span<const double>(syms.data() + n * B, B),
                        sent);
                }
            }
            like[n * cb.L + c] = sum;
        }
    }
    return like;
}

double sequence_objective(const MarkovSourceModel& model,
                          const std::vector<double>& like,
                          std::span<const int> seq) {
    double obj = 0.0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        std::size_t x = static_cast<std::size_t>(seq[n]);
        double lt = (n == 0) ? model.log_prior[x]
                             : model.log_trans(
                                   static_cast<std::size_t>(seq[n - 1]), x);
        obj += lt + like[n * model.L + x];
    }
    return obj;
}

double max_sequence_objective(const MarkovSourceModel& model,
                              const std::vector<double>& like, std::size_t N) {
    std::size_t L = model.L;
    double best = kNegInf;
    // Depth-first walk over all L^N sequences with running partial sums.
    std::vector<int> seq(N, 0);
    auto dfs = [&](auto&& self, std::size_t n, double acc) -> void {
        if (n == N) {
            if (acc > best) best = acc;
            return;
        }
        for (std::size_t x = 0; x < L; ++x) {
            double lt = (n == 0) ? model.log_prior[x]
                                 : model.log_trans(
                                       static_cast<std::size_t>(seq[n - 1]),
                                       x);
            seq[n] = static_cast<int>(x);
            self(self, n + 1, acc + lt + like[n * L + x]);
        }
    };
    dfs(dfs, 0, 0.0);
    return best;
}

std::vector<double> posterior_marginals(const MarkovSourceModel& model,
                                        const std::vector<double>& like,
                                        std::size_t N) {
    std::size_t L = model.L;
    std::vector<double> glike(like.size());
    for (std::size_t i = 0; i < like.size(); ++i)
        glike[i] = std::exp(like[i]);

    std::vector<double> marg(N * L, 0.0);
    std::vector<int> seq(N, 0);
    double total = 0.0;
    auto dfs = [&](auto&& self, std::size_t n, double weight) -> void {
        if (n == N) {
            total += weight;
            for (std::size_t m = 0; m < N; ++m)
                marg[m * L + static_cast<std::size_t>(seq[m])] += weight;
            return;
        }
        for (std::size_t x = 0; x < L; ++x) {
            double pt = (n == 0) ? model.prior[x]
                                 : model.trans(
                                       static_cast<std::size_t>(seq[n - 1]),
                                       x);
            seq[n] = static_cast<int>(x);
            self(self, n + 1, weight * pt * glike[n * L + x]);
        }
    };
    dfs(dfs, 0, 1.0);
    if (total <= 0.0)
        throw std::runtime_error(
            "posterior_marginals: observation has zero probability");
    for (double& v : marg) v /= total;
    return marg;
}

double max_hmm_joint_objective(const HmmModel& hmm,
                               const std::vector<double>& like,
                               std::size_t N) {
    std::size_t M = hmm.M;
    std::size_t L = hmm.L;
    double best = kNegInf;
    std::vector<int> z(N, 0);
    auto dfs = [&](auto&& self, std::size_t n, double acc) -> void {
        if (n == N) {
            if (acc > best) best = acc;
            return;
        }
        for (std::size_t s = 0; s < M; ++s) {
            z[n] = static_cast<int>(s);
            for (std::size_t x = 0; x < L; ++x) {
                double st, ob;
                if (n == 0) {
                    st = hmm.log_initial[s];
                    ob = hmm.log_obs_reduced(s, x);
                } else {
                    std::size_t pr = static_cast<std::size_t>(z[n - 1]);
                    st = hmm.log_trans(pr, s);
                    ob = hmm.log_obs(pr, s, x);
                }
                self(self, n + 1, acc + st + ob + like[n * L + x]);
            }
        }
    };
    dfs(dfs, 0, 0.0);
    return best;
}

namespace {

std::vector<double> random_stochastic_row(Rng& rng, std::size_t n,
                                          bool allow_zeros) {
    std::vector<double> row(n);
    for (auto& v : row) v = 0.05 + rng.uniform();
    if (allow_zeros && n >= 3) {
        std::size_t zeros = 1 + static_cast<std::size_t>(rng.uniform() * 2);
        for (std::size_t i = 0; i < zeros; ++i)
            row[static_cast<std::size_t>(rng.uniform() * n) % n] = 0.0;
        bool any = false;
        for (double v : row) any |= v > 0.0;
        if (!any) row[0] = 1.0;
    }
    double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& v : row) v /= sum;
    return row;
}

MdqCodebook random_codebook(Rng& rng, std::size_t L) {
    // Side sizes big enough to host L distinct tuples.
    std::size_t l1 = 2 + static_cast<std::size_t>(rng.uniform() * 3);
    std::size_t l2 = 2 + static_cast<std::size_t>(rng.uniform() * 3);
    while (l1 * l2 < L) (rng.bernoulli(0.5) ? l1 : l2) += 1;

    std::vector<std::pair<int, int>> tuples;
    for (std::size_t i = 0; i < l1; ++i)
        for (std::size_t j = 0; j < l2; ++j)
            tuples.emplace_back(static_cast<int>(i), static_cast<int>(j));
    for (std::size_t i = tuples.size(); i-- > 1;)
        std::swap(tuples[i],
                  tuples[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
    tuples.resize(L);

    std::vector<double> boundaries(L + 1);
    boundaries.front() = -std::numeric_limits<double>::infinity();
    boundaries.back() = std::numeric_limits<double>::infinity();
    std::vector<double> cuts(L - 1);
    for (auto& c : cuts) c = -2.5 + 5.0 * rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i < cuts.size(); ++i) boundaries[i + 1] = cuts[i];

    std::vector<double> centroids(L);
    for (std::size_t c = 0; c < L; ++c)
        centroids[c] = norm_cell_mean(boundaries[c], boundaries[c + 1]);

    std::vector<std::vector<double>> side_centroids{
        std::vector<double>(l1, 0.0), std::vector<double>(l2, 0.0)};
    std::vector<std::vector<int>> assignment;
    for (auto [i, j] : tuples) assignment.push_back({i, j});
    for (std::size_t k = 0; k < 2; ++k) {
        std::size_t lk = k == 0 ? l1 : l2;
        std::vector<double> mass(lk, 0.0), moment(lk, 0.0);
        for (std::size_t c = 0; c < L; ++c) {
            int m = assignment[c][k];
            mass[m] += norm_cell_prob(boundaries[c], boundaries[c + 1]);
            moment[m] +=
                norm_pdf(boundaries[c]) - norm_pdf(boundaries[c + 1]);
        }
        for (std::size_t m = 0; m < lk; ++m)
            side_centroids[k][m] = mass[m] > 0.0 ? moment[m] / mass[m] : 0.0;
    }
    return MdqCodebook::create(2, {l1, l2}, std::move(boundaries),
                               std::move(centroids), std::move(side_centroids),
                               std::move(assignment));
}

std::vector<ChannelModel> random_eec_channels(Rng& rng, std::size_t K) {
    std::vector<ChannelModel> channels;
    for (std::size_t k = 0; k < K; ++k)
        channels.push_back(EecChannel{0.05 + 0.55 * rng.uniform(),
                                      0.01 + 0.29 * rng.uniform(),
                                      rng.next_u64()});
    return channels;
}

std::vector<int> sample_markov_path(Rng& rng, const MarkovSourceModel& model,
                                    std::size_t N) {
    std::vector<int> path(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double* dist =
            (n == 0) ? model.prior.data()
                     : model.transition.data() +
                           static_cast<std::size_t>(path[n - 1]) * model.L;
        double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = model.L - 1;
        for (std::size_t l = 0; l < model.L; ++l) {
            acc += dist[l];
            if (u < acc) {
                pick = l;
                break;
            }
        }
        path[n] = static_cast<int>(pick);
    }
    return path;
}

ReceivedSequence random_observation(Rng& rng, const MdqCodebook& cb,
                                    std::size_t N) {
    ReceivedSequence recv;
    recv.n = N;
    recv.descriptions.resize(cb.K);
    for (std::size_t k = 0; k < cb.K; ++k) {
        std::size_t B = static_cast<std::size_t>(cb.bits_per_description[k]);
        std::vector<EecSymbol> syms(N * B);
        for (auto& s : syms)
            s = static_cast<EecSymbol>(
                static_cast<std::uint8_t>(rng.uniform() * 3.0));
        recv.descriptions[k].bits = static_cast<int>(B);
        recv.descriptions[k].symbols = std::move(syms);
    }
    return recv;
}

ReceivedSequence transmit_path(Rng& rng, const MdqCodebook& cb,
                               const std::vector<ChannelModel>& channels,
                               std::span<const int> path) {
    Encoded enc;
    enc.central.assign(path.begin(), path.end());
    enc.streams.assign(cb.K, std::vector<int>(path.size()));
    for (std::size_t n = 0; n < path.size(); ++n)
        for (std::size_t k = 0; k < cb.K; ++k)
            enc.streams[k][n] =
                cb.assignment[static_cast<std::size_t>(path[n])][k];
    // Reseed the channels per call so repeated transmissions differ.
    std::vector<ChannelModel> seeded = channels;
    for (auto& ch : seeded)
        std::visit([&](auto& c) { c.rng_seed = rng.next_u64(); }, ch);
    return transmit_streams(seeded, enc, cb);
}

} // namespace

RandomInstance random_instance(std::uint64_t seed,
                               const RandomInstanceOptions& opts) {
    Rng rng(seed);
    std::size_t L =
        2 + static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(opts.max_l - 1));
    if (L > opts.max_l) L = opts.max_l;
    std::size_t N = 0;
    do {
        N = 1 + static_cast<std::size_t>(rng.uniform() *
                                         static_cast<double>(opts.max_n));
        if (N > opts.max_n) N = opts.max_n;
    } while (std::pow(static_cast<double>(L), static_cast<double>(N)) >
             static_cast<double>(opts.max_search));

    RandomInstance inst;
    bool zeros = rng.bernoulli(0.2);
    std::vector<double> prior = random_stochastic_row(rng, L, zeros);
    std::vector<double> transition;
    for (std::size_t r = 0; r < L; ++r) {
        auto row = random_stochastic_row(rng, L, zeros);
        transition.insert(transition.end(), row.begin(), row.end());
    }
    inst.model =
        MarkovSourceModel::from(std::move(prior), std::move(transition));
    inst.codebook = random_codebook(rng, L);
    inst.channels = random_eec_channels(rng, inst.codebook.K);

    if (rng.bernoulli(0.3)) {
        inst.received = random_observation(rng, inst.codebook, N);
    } else {
        inst.transmitted = sample_markov_path(rng, inst.model, N);
        inst.received =
            transmit_path(rng, inst.codebook, inst.channels, inst.transmitted);
    }
    return inst;
}

RandomHmmInstance random_hmm_instance(std::uint64_t seed,
                                      const RandomHmmOptions& opts) {
    Rng rng(seed);
    std::size_t M =
        1 + static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(opts.max_m));
    if (M > opts.max_m) M = opts.max_m;
    std::size_t L =
        2 + static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(opts.max_l - 1));
    if (L > opts.max_l) L = opts.max_l;
    std::size_t N = 0;
    do {
        N = 1 + static_cast<std::size_t>(rng.uniform() *
                                         static_cast<double>(opts.max_n));
        if (N > opts.max_n) N = opts.max_n;
    } while (std::pow(static_cast<double>(M * L), static_cast<double>(N)) >
             static_cast<double>(opts.max_search));

    RandomHmmInstance inst;
    std::vector<double> initial = random_stochastic_row(rng, M, false);
    std::vector<double> transition, observation, reduced;
    for (std::size_t i = 0; i < M; ++i) {
        auto row = random_stochastic_row(rng, M, false);
        transition.insert(transition.end(), row.begin(), row.end());
    }
    bool zeros = rng.bernoulli(0.25);
    for (std::size_t ij = 0; ij < M * M; ++ij) {
        auto row = random_stochastic_row(rng, L, zeros);
        observation.insert(observation.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < M; ++i) {
        auto row = random_stochastic_row(rng, L, zeros);
        reduced.insert(reduced.end(), row.begin(), row.end());
    }
    inst.hmm = HmmModel::from(std::move(initial), std::move(transition),
                              std::move(observation), std::move(reduced));
    inst.codebook = random_codebook(rng, L);
    inst.channels = random_eec_channels(rng, inst.codebook.K);

    // Sample states and emissions from the model.
    std::vector<int> path(N);
    auto pick = [&](const double* dist, std::size_t n) {
        double u = rng.uniform();
        double acc = 0.0;
        std::size_t p = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += dist[i];
            if (u < acc) {
                p = i;
                break;
            }
        }
        return p;
    };
    std::vector<int> emitted(N);
    for (std::size_t n = 0; n < N; ++n) {
        std::size_t s;
        if (n == 0) {
            s = pick(inst.hmm.initial.data(), M);
            emitted[n] = static_cast<int>(
                pick(inst.hmm.observation_reduced.data() + s * L, L));
        } else {
            std::size_t pr = static_cast<std::size_t>(path[n - 1]);
            s = pick(inst.hmm.transition.data() + pr * M, M);
            emitted[n] = static_cast<int>(pick(
                inst.hmm.observation.data() + (pr * M + s) * L, L));
        }
        path[n] = static_cast<int>(s);
    }
    inst.true_states = path;
    inst.received =
        transmit_path(rng, inst.codebook, inst.channels, emitted);
    return inst;
}

SuiteResult run_map_suite(int instances, std::uint64_t seed, double tol) {
    SuiteResult res;
    for (int i = 0; i < instances; ++i) {
        RandomInstance inst = random_instance(derive_seed(seed, {1u, (std::uint64_t)i}));
        auto decoded = map_decode(inst.model, inst.codebook, inst.channels,
                                  inst.received);
        auto like = stage_log_likelihoods(inst.channels, inst.received,
                                          inst.codebook);
        double brute = max_sequence_objective(inst.model, like,
                                              inst.received.n);
        double diff = std::abs(decoded.objective - brute);
        // The decoded sequence must also achieve its reported value.
        double achieved =
            sequence_objective(inst.model, like, decoded.sequence);
        diff = std::max(diff, std::abs(achieved - brute));
        res.instances += 1;
        res.max_abs_diff = std::max(res.max_abs_diff, diff);
        if (!(diff <= tol)) res.failures += 1;
    }
    return res;
}

SuiteResult run_mmse_suite(int instances, std::uint64_t seed, double tol) {
    SuiteResult res;
    for (int i = 0; i < instances; ++i) {
        RandomInstance inst = random_instance(derive_seed(seed, {2u, (std::uint64_t)i}));
        auto table = forward_backward(inst.model, inst.codebook, inst.channels,
                                      inst.received);
        auto like = stage_log_likelihoods(inst.channels, inst.received,
                                          inst.codebook);
        auto marg = posterior_marginals(inst.model, like, inst.received.n);
        double diff = 0.0;
        for (std::size_t n = 0; n < table.n; ++n) {
            double row_sum = 0.0;
            for (std::size_t l = 0; l < table.L; ++l) {
                diff = std::max(diff, std::abs(table.at(n, l) -
                                               marg[n * table.L + l]));
                row_sum += table.at(n, l);
            }
            diff = std::max(diff, std::abs(row_sum - 1.0));
        }
        res.instances += 1;
        res.max_abs_diff = std::max(res.max_abs_diff, diff);
        if (!(diff <= tol)) res.failures += 1;
    }
    return res;
}

SuiteResult run_hmm_suite(int instances, std::uint64_t seed, double tol) {
    SuiteResult res;
    for (int i = 0; i < instances; ++i) {
        RandomHmmInstance inst =
            random_hmm_instance(derive_seed(seed, {3u, (std::uint64_t)i}));
        auto est = hmm_map_estimate(inst.hmm, inst.codebook, inst.channels,
                                    inst.received);
        auto like = stage_log_likelihoods(inst.channels, inst.received,
                                          inst.codebook);
        double brute =
            max_hmm_joint_objective(inst.hmm, like, inst.received.n);
        double diff = std::abs(est.objective - brute);
        res.instances += 1;
        res.max_abs_diff = std::max(res.max_abs_diff, diff);
        if (!(diff <= tol)) res.failures += 1;
    }
    return res;
}

} // namespace jscmd::oracle
