#include "jscmd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "jscmd/channel.hpp"
#include "jscmd/errors.hpp"
#include "jscmd/gauss.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/mmse_decoder.hpp"
#include "jscmd/random.hpp"

namespace jscmd {

namespace {

using nlohmann::json;

const std::vector<std::string> kDecoders = {
    "hard", "map",       "map_fast", "mmse",
    "mmse_iid", "hmm_exact", "hmm_mid",  "hmm_cheap"};

bool is_hmm_decoder(const std::string& name) {
    return name.rfind("hmm_", 0) == 0;
}

struct GridPoint {
    std::size_t index = 0;
    std::size_t rho_index = 0;
    double rho = 0.0;
    double p_cross = 0.0;
    double p_erase = 0.0;
    double sigma = 0.0;
    bool awgn = false;
};

std::vector<GridPoint> enumerate_grid(const ExperimentConfig& cfg) {
    std::vector<GridPoint> points;
    if (!cfg.sigma.empty()) {
        for (std::size_t r = 0; r < cfg.rho.size(); ++r)
            for (double s : cfg.sigma) {
                GridPoint pt;
                pt.index = points.size();
                pt.rho_index = r;
                pt.rho = cfg.rho[r];
                pt.sigma = s;
                pt.awgn = true;
                points.push_back(pt);
            }
        return points;
    }
    for (std::size_t r = 0; r < cfg.rho.size(); ++r)
        for (double pe : cfg.p_erase)
            for (double pc : cfg.p_cross) {
                GridPoint pt;
                pt.index = points.size();
                pt.rho_index = r;
                pt.rho = cfg.rho[r];
                pt.p_erase = pe;
                pt.p_cross = pc;
                points.push_back(pt);
            }
    return points;
}

std::vector<double> default_state_means(std::size_t m) {
    std::vector<double> means(m, 0.0);
    if (m > 1)
        for (std::size_t i = 0; i < m; ++i)
            means[i] = -1.5 + 3.0 * static_cast<double>(i) /
                                  static_cast<double>(m - 1);
    return means;
}

// Pooled per-decoder tallies for one grid point.
struct Tally {
    std::size_t symbol_errors = 0;
    std::size_t positions = 0;
    double signal_sq = 0.0;
    double error_sq = 0.0;
    std::size_t infeasible = 0;
    double wall_ms = 0.0;

    void add(std::span<const double> truth, std::span<const double> recon,
             std::span<const int> true_syms, std::span<const int> dec_syms) {
        for (std::size_t i = 0; i < truth.size(); ++i) {
            double e = truth[i] - recon[i];
            signal_sq += truth[i] * truth[i];
            error_sq += e * e;
            if (true_syms[i] != dec_syms[i]) ++symbol_errors;
        }
        positions += truth.size();
    }
};

class StopWatch {
  public:
    explicit StopWatch(Tally& tally) : tally_(tally) {
        start_ = std::chrono::steady_clock::now();
    }
    ~StopWatch() {
        auto stop = std::chrono::steady_clock::now();
        tally_.wall_ms +=
            std::chrono::duration<double, std::milli>(stop - start_).count();
    }

  private:
    Tally& tally_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<double> centroid_map(const MdqCodebook& cb,
                                 std::span<const int> seq) {
    std::vector<double> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        out[i] = cb.centroids[static_cast<std::size_t>(seq[i])];
    return out;
}

std::vector<int> quantize_all(const MdqCodebook& cb,
                              std::span<const double> values) {
    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = cb.quantize(values[i]);
    return out;
}

struct PointContext {
    const ExperimentConfig& cfg;
    const MdqCodebook& cb;
    const std::vector<MarkovSourceModel>& models; // one per rho
    const HmmModel* hmm; // null unless hmm decoders requested
    bool need_standard = false;
    bool need_hmm = false;
};

std::vector<ChannelModel> point_channels(const ExperimentConfig& cfg,
                                         const GridPoint& pt,
                                         std::size_t trial,
                                         std::uint64_t salt) {
    std::vector<ChannelModel> channels;
    for (std::size_t k = 0; k < 2; ++k) {
        std::uint64_t seed = derive_seed(
            trial_channel_seed(cfg.base_seed, pt.index, trial, k), {salt});
        if (pt.awgn)
            channels.push_back(AwgnChannel{pt.sigma, seed});
        else
            channels.push_back(EecChannel{pt.p_erase, pt.p_cross, seed});
    }
    return channels;
}

std::vector<double> hard_values(const MdqCodebook& cb,
                                const ReceivedSequence& recv) {
    auto indices = hard_decision_indices(recv, cb);
    std::vector<double> values(recv.n);
    std::vector<int> tuple(cb.K);
    for (std::size_t n = 0; n < recv.n; ++n) {
        for (std::size_t k = 0; k < cb.K; ++k) tuple[k] = indices[k][n];
        auto v = hard_decode(cb, tuple);
        values[n] = v.value_or(0.0); // total erasure: prior mean
    }
    return values;
}

std::vector<MetricRow> evaluate_point(const PointContext& ctx,
                                      const GridPoint& pt) {
    const ExperimentConfig& cfg = ctx.cfg;
    const MdqCodebook& cb = ctx.cb;
    std::vector<Tally> tallies(cfg.decoders.size());

    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (ctx.need_standard) {
            const MarkovSourceModel& model = ctx.models[pt.rho_index];
            GaussMarkovSource src{
                pt.rho, trial_source_seed(cfg.base_seed, pt.rho_index, t)};
            std::vector<double> chi = generate(src, cfg.n);
            Encoded enc = encode(cb, chi);
            auto channels = point_channels(cfg, pt, t, 0);
            ReceivedSequence recv = transmit_streams(channels, enc, cb);

            for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
                const std::string& name = cfg.decoders[d];
                if (is_hmm_decoder(name)) continue;
                Tally& tally = tallies[d];
                try {
                    if (name == "hard") {
                        StopWatch watch(tally);
                        auto values = hard_values(cb, recv);
                        tally.add(chi, values, enc.central,
                                  quantize_all(cb, values));
                    } else if (name == "map" || name == "map_fast") {
                        MapDecodeResult res = [&] {
                            StopWatch watch(tally);
                            return name == "map"
                                       ? map_decode(model, cb, channels, recv)
                                       : map_decode_fast(model, cb, channels,
                                                         recv);
                        }();
                        tally.add(chi, centroid_map(cb, res.sequence),
                                  enc.central, res.sequence);
                    } else if (name == "mmse") {
                        auto values = [&] {
                            StopWatch watch(tally);
                            auto post =
                                forward_backward(model, cb, channels, recv);
                            return mmse_reconstruct(post, cb);
                        }();
                        tally.add(chi, values, enc.central,
                                  quantize_all(cb, values));
                    } else if (name == "mmse_iid") {
                        auto values = [&] {
                            StopWatch watch(tally);
                            return mmse_decode_iid(cb, channels, recv);
                        }();
                        tally.add(chi, values, enc.central,
                                  quantize_all(cb, values));
                    }
                } catch (const InfeasibleObservation&) {
                    tally.infeasible += 1;
                }
            }
        }

        if (ctx.need_hmm) {
            HmmSample sample = sample_experiment_hmm(
                cfg.hmm, trial_hmm_seed(cfg.base_seed, t), cfg.n);
            Encoded enc = encode(cb, sample.values);
            auto channels = point_channels(cfg, pt, t, 0x484d4dull);
            ReceivedSequence recv = transmit_streams(channels, enc, cb);

            for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
                const std::string& name = cfg.decoders[d];
                if (!is_hmm_decoder(name)) continue;
                Tally& tally = tallies[d];
                try {
                    if (name == "hmm_exact") {
                        HmmMapResult res = [&] {
                            StopWatch watch(tally);
                            return hmm_map_estimate(*ctx.hmm, cb, channels,
                                                    recv);
                        }();
                        tally.add(sample.values,
                                  centroid_map(cb, res.codewords),
                                  sample.states, res.states);
                    } else if (name == "hmm_mid") {
                        auto states = [&] {
                            StopWatch watch(tally);
                            return hmm_estimate_mid(*ctx.hmm, cb, channels,
                                                    recv);
                        }();
                        // Reconstruction from the per-position likelihood
                        // argmax, the codeword this tier works from.
                        auto like =
                            all_stage_log_likelihoods(channels, recv, cb);
                        std::vector<int> xs(recv.n);
                        for (std::size_t n = 0; n < recv.n; ++n) {
                            const double* row = like.data() + n * cb.L;
                            std::size_t best = 0;
                            for (std::size_t c = 1; c < cb.L; ++c)
                                if (row[c] > row[best]) best = c;
                            xs[n] = static_cast<int>(best);
                        }
                        tally.add(sample.values, centroid_map(cb, xs),
                                  sample.states, states);
                    } else if (name == "hmm_cheap") {
                        auto states = [&] {
                            StopWatch watch(tally);
                            return hmm_estimate_cheapest(*ctx.hmm, cb, recv);
                        }();
                        tally.add(sample.values, hard_values(cb, recv),
                                  sample.states, states);
                    }
                } catch (const InfeasibleObservation&) {
                    tally.infeasible += 1;
                }
            }
        }
    }

    std::vector<MetricRow> rows;
    for (std::size_t d = 0; d < cfg.decoders.size(); ++d) {
        const Tally& tally = tallies[d];
        MetricRow row;
        row.rho = pt.rho;
        row.p_cross = pt.awgn ? 0.0 : pt.p_cross;
        row.p_erase = pt.awgn ? 0.0 : pt.p_erase;
        row.sigma = pt.awgn ? pt.sigma : 0.0;
        row.decoder = cfg.decoders[d];
        row.trials = cfg.trials;
        row.n = cfg.n;
        row.seed = cfg.base_seed;
        row.infeasible = tally.infeasible;
        row.wall_ms = cfg.include_timing ? tally.wall_ms : 0.0;
        if (tally.positions > 0) {
            row.ser = static_cast<double>(tally.symbol_errors) /
                      static_cast<double>(tally.positions);
            row.snr_db = tally.error_sq > 0.0
                             ? 10.0 * std::log10(tally.signal_sq /
                                                 tally.error_sq)
                             : std::numeric_limits<double>::infinity();
        } else {
            row.ser = 1.0;
            row.snr_db = 0.0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

const std::vector<std::string>& known_decoders() { return kDecoders; }

void validate_config(const ExperimentConfig& cfg) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (cfg.rho.empty()) throw std::invalid_argument("config: empty rho grid");
    for (double r : cfg.rho)
        if (r < 0.0 || r >= 1.0)
            throw std::invalid_argument("config: rho must be in [0,1)");
    if (cfg.sigma.empty()) {
        if (cfg.p_cross.empty() || cfg.p_erase.empty())
            throw std::invalid_argument("config: empty channel grid");
        for (double p : cfg.p_cross)
            if (!in_unit(p))
                throw std::invalid_argument("config: p_cross out of [0,1]");
        for (double p : cfg.p_erase)
            if (!in_unit(p))
                throw std::invalid_argument("config: p_erase out of [0,1]");
    } else {
        for (double s : cfg.sigma)
            if (!(s > 0.0))
                throw std::invalid_argument("config: sigma must be positive");
    }
    if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (cfg.trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    if (cfg.decoders.empty())
        throw std::invalid_argument("config: no decoders selected");
    for (const auto& name : cfg.decoders)
        if (std::find(kDecoders.begin(), kDecoders.end(), name) ==
            kDecoders.end())
            throw std::invalid_argument("config: unknown decoder '" + name +
                                        "'");
    if (cfg.codebook.l1 < 2 || cfg.codebook.spread < 1)
        throw std::invalid_argument("config: bad codebook parameters");
    if (cfg.hmm.m < 1)
        throw std::invalid_argument("config: hmm needs at least one state");
    if (!cfg.hmm.state_means.empty() &&
        cfg.hmm.state_means.size() != cfg.hmm.m)
        throw std::invalid_argument("config: hmm state_means size");
}

ExperimentConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("rho")) cfg.rho = j["rho"].get<std::vector<double>>();
    if (j.contains("p_cross"))
        cfg.p_cross = j["p_cross"].get<std::vector<double>>();
    if (j.contains("p_erase"))
        cfg.p_erase = j["p_erase"].get<std::vector<double>>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<std::vector<double>>();
    if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("decoders"))
        cfg.decoders = j["decoders"].get<std::vector<std::string>>();
    if (j.contains("base_seed"))
        cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("include_timing"))
        cfg.include_timing = j["include_timing"].get<bool>();
    if (j.contains("codebook")) {
        const json& c = j["codebook"];
        if (c.contains("l1")) cfg.codebook.l1 = c["l1"].get<std::size_t>();
        if (c.contains("spread"))
            cfg.codebook.spread = c["spread"].get<std::size_t>();
        if (c.contains("cell_width"))
            cfg.codebook.cell_width = c["cell_width"].get<double>();
    }
    if (j.contains("hmm")) {
        const json& h = j["hmm"];
        if (h.contains("m")) cfg.hmm.m = h["m"].get<std::size_t>();
        if (h.contains("state_means"))
            cfg.hmm.state_means =
                h["state_means"].get<std::vector<double>>();
        if (h.contains("sigma_obs"))
            cfg.hmm.sigma_obs = h["sigma_obs"].get<double>();
        if (h.contains("stay_prob"))
            cfg.hmm.stay_prob = h["stay_prob"].get<double>();
        if (h.contains("pair_mix"))
            cfg.hmm.pair_mix = h["pair_mix"].get<double>();
    }
    validate_config(cfg);
    return cfg;
}

HmmModel make_experiment_hmm(const HmmExperimentParams& params,
                             const MdqCodebook& cb) {
    std::size_t M = params.m;
    std::size_t L = cb.L;
    std::vector<double> means = params.state_means.empty()
                                    ? default_state_means(M)
                                    : params.state_means;
    std::vector<double> initial(M, 1.0 / static_cast<double>(M));
    std::vector<double> transition(M * M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            transition[i * M + j] =
                (M == 1) ? 1.0
                : (i == j)
                    ? params.stay_prob
                    : (1.0 - params.stay_prob) / static_cast<double>(M - 1);

    auto cell_law = [&](double mu) {
        std::vector<double> row(L);
        for (std::size_t x = 0; x < L; ++x)
            row[x] = norm_cell_prob(
                (cb.boundaries[x] - mu) / params.sigma_obs,
                (cb.boundaries[x + 1] - mu) / params.sigma_obs);
        // Absorb the last-ulp slack so the stochastic check passes clean.
        double sum = 0.0;
        for (double v : row) sum += v;
        for (double& v : row) v /= sum;
        return row;
    };

    std::vector<double> observation;
    observation.reserve(M * M * L);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            double mu = (1.0 - params.pair_mix) * means[j] +
                        params.pair_mix * means[i];
            auto row = cell_law(mu);
            observation.insert(observation.end(), row.begin(), row.end());
        }
    std::vector<double> reduced;
    reduced.reserve(M * L);
    for (std::size_t i = 0; i < M; ++i) {
        auto row = cell_law(means[i]);
        reduced.insert(reduced.end(), row.begin(), row.end());
    }
    return HmmModel::from(std::move(initial), std::move(transition),
                          std::move(observation), std::move(reduced));
}

HmmSample sample_experiment_hmm(const HmmExperimentParams& params,
                                std::uint64_t seed, std::size_t n) {
    std::vector<double> means = params.state_means.empty()
                                    ? default_state_means(params.m)
                                    : params.state_means;
    Rng rng(seed);
    HmmSample sample;
    sample.states.resize(n);
    sample.values.resize(n);
    std::size_t M = params.m;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t state;
        double mu;
        if (i == 0) {
            state = static_cast<std::size_t>(rng.uniform() *
                                             static_cast<double>(M)) %
                    M;
            mu = means[state];
        } else {
            std::size_t prev = static_cast<std::size_t>(sample.states[i - 1]);
            if (M == 1 || rng.bernoulli(params.stay_prob)) {
                state = prev;
            } else {
                std::size_t off = static_cast<std::size_t>(
                                      rng.uniform() *
                                      static_cast<double>(M - 1)) %
                                  (M - 1);
                state = off < prev ? off : off + 1;
            }
            mu = (1.0 - params.pair_mix) * means[state] +
                 params.pair_mix * means[prev];
        }
        sample.states[i] = static_cast<int>(state);
        sample.values[i] = mu + params.sigma_obs * rng.gaussian();
    }
    return sample;
}

std::uint64_t trial_source_seed(std::uint64_t base, std::size_t rho_index,
                                std::size_t trial) {
    return derive_seed(base, {0x5343ull, rho_index, trial});
}

std::uint64_t trial_channel_seed(std::uint64_t base, std::size_t point_index,
                                 std::size_t trial, std::size_t k) {
    return derive_seed(base, {0xC4A7ull, point_index, trial, k});
}

std::uint64_t trial_hmm_seed(std::uint64_t base, std::size_t trial) {
    return derive_seed(base, {0x4A33ull, trial});
}

std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg,
                                      unsigned threads) {
    validate_config(cfg);
    MdqCodebook cb = build_2dsq(cfg.codebook.l1, cfg.codebook.spread,
                                GaussMarkovSource{}, cfg.codebook.cell_width);

    bool need_standard = false, need_hmm = false;
    for (const auto& name : cfg.decoders)
        (is_hmm_decoder(name) ? need_hmm : need_standard) = true;

    std::vector<MarkovSourceModel> models;
    if (need_standard)
        for (double rho : cfg.rho)
            models.push_back(derive_markov_model(GaussMarkovSource{rho},
                                                 cb.boundaries));
    HmmModel hmm;
    if (need_hmm) hmm = make_experiment_hmm(cfg.hmm, cb);
    PointContext full{cfg, cb, models, need_hmm ? &hmm : nullptr,
                      need_standard, need_hmm};

    std::vector<GridPoint> points = enumerate_grid(cfg);
    std::vector<std::vector<MetricRow>> results(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            try {
                results[i] = evaluate_point(full, points[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    unsigned T = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < T; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    std::vector<MetricRow> rows;
    for (auto& part : results)
        for (auto& row : part) rows.push_back(std::move(row));
    return rows;
}

std::string emit_csv(std::span<const MetricRow> rows) {
    std::vector<const MetricRow*> order;
    order.reserve(rows.size());
    for (const auto& row : rows) order.push_back(&row);
    std::stable_sort(order.begin(), order.end(),
                     [](const MetricRow* a, const MetricRow* b) {
                         auto key = [](const MetricRow& r) {
                             return std::make_tuple(r.rho, r.p_erase,
                                                    r.p_cross, r.sigma,
                                                    r.decoder);
                         };
                         return key(*a) < key(*b);
                     });

    std::ostringstream os;
    os << "rho,p_cross,p_erase,sigma,decoder,ser,snr_db,trials,n,seed,"
          "wall_ms\n";
    os << std::fixed << std::setprecision(6);
    for (const MetricRow* row : order) {
        os << row->rho << ',' << row->p_cross << ',' << row->p_erase << ','
           << row->sigma << ',' << row->decoder << ',' << row->ser << ','
           << row->snr_db << ',' << row->trials << ',' << row->n << ','
           << row->seed << ',' << row->wall_ms << '\n';
    }
    return os.str();
}

} // namespace jscmd
