// Acceptance suite: end-to-end checks of the decoder ladder at the
// simulation scale the library is meant for. Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/harness.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/mmse_decoder.hpp"
#include "jscmd/oracles.hpp"
#include "jscmd/random.hpp"
#include "jscmd/source_model.hpp"

namespace {

using namespace jscmd;

unsigned worker_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : std::min(hw, 8u);
}

struct RowKey {
    double rho, p_erase, p_cross;
    bool operator<(const RowKey& o) const {
        return std::tie(rho, p_erase, p_cross) <
               std::tie(o.rho, o.p_erase, o.p_cross);
    }
};

std::map<RowKey, std::map<std::string, MetricRow>> by_point(
    const std::vector<MetricRow>& rows) {
    std::map<RowKey, std::map<std::string, MetricRow>> out;
    for (const auto& row : rows)
        out[{row.rho, row.p_erase, row.p_cross}][row.decoder] = row;
    return out;
}

// --- criterion 1 -----------------------------------------------------------

bool map_oracle_equivalence(std::ostream& log) {
    auto res = oracle::run_map_suite(500, 20260810, 1e-9);
    log << res.instances << " instances, max |diff| = " << res.max_abs_diff;
    return res.ok();
}

// --- criterion 2 -----------------------------------------------------------

bool mmse_oracle_equivalence(std::ostream& log) {
    auto res = oracle::run_mmse_suite(500, 20260811, 1e-9);
    log << res.instances << " instances, max |diff| = " << res.max_abs_diff;
    return res.ok();
}

// --- criterion 3 -----------------------------------------------------------

bool fast_path_equivalence(std::ostream& log) {
    bool ok = true;

    // Monge condition for the Gaussian-Markov models of the experiment.
    auto cb21 = build_2dsq(8, 3, GaussMarkovSource{});
    for (double rho : {0.0, 0.5, 0.9}) {
        auto model = derive_markov_model(GaussMarkovSource{rho},
                                         cb21.boundaries);
        if (!check_monge(model, true).holds) {
            log << "monge violated at rho=" << rho << "; ";
            ok = false;
        }
    }

    // Sequence equality between the exact DP and the matrix-search path.
    Rng rng(314159);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double rho = 0.95 * rng.uniform();
        auto model = derive_markov_model(GaussMarkovSource{rho},
                                         cb21.boundaries);
        GaussMarkovSource src{rho, rng.next_u64()};
        auto chi = generate(src, 40);
        auto enc = encode(cb21, chi);
        std::vector<ChannelModel> channels{
            EecChannel{0.6 * rng.uniform(), 0.01 + 0.3 * rng.uniform(),
                       rng.next_u64()},
            EecChannel{0.6 * rng.uniform(), 0.01 + 0.3 * rng.uniform(),
                       rng.next_u64()}};
        auto recv = transmit_streams(channels, enc, cb21);
        auto slow = map_decode(model, cb21, channels, recv);
        auto fast = map_decode_fast(model, cb21, channels, recv);
        if (slow.sequence != fast.sequence ||
            slow.objective != fast.objective)
            ++mismatches;
    }
    log << "1000 trials, " << mismatches << " mismatches; ";
    ok = ok && mismatches == 0;

    // Entry-evaluation scaling: naive quadruples per doubling of L, the
    // matrix search roughly doubles.
    std::vector<std::size_t> sizes{16, 32, 64};
    std::vector<double> naive_cost, fast_cost;
    for (std::size_t l1 : sizes) {
        auto cb = build_2dsq(l1, 1, GaussMarkovSource{},
                             7.0 / static_cast<double>(l1 - 2));
        auto model = derive_markov_model(GaussMarkovSource{0.9},
                                         cb.boundaries);
        std::uint64_t naive = 0, fast = 0;
        const std::size_t n = 300;
        for (int trial = 0; trial < 5; ++trial) {
            GaussMarkovSource src{0.9,
                                  static_cast<std::uint64_t>(5000 + trial)};
            auto chi = generate(src, n);
            auto enc = encode(cb, chi);
            std::vector<ChannelModel> channels{
                EecChannel{0.1, 0.01, static_cast<std::uint64_t>(trial * 2)},
                EecChannel{0.1, 0.01,
                           static_cast<std::uint64_t>(trial * 2 + 1)}};
            auto recv = transmit_streams(channels, enc, cb);
            naive += map_decode(model, cb, channels, recv).candidate_evals;
            fast +=
                map_decode_fast(model, cb, channels, recv).candidate_evals;
        }
        naive_cost.push_back(static_cast<double>(naive));
        fast_cost.push_back(static_cast<double>(fast));
    }
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        double naive_slope = naive_cost[i + 1] / naive_cost[i];
        double fast_slope = fast_cost[i + 1] / fast_cost[i];
        double ratio = naive_slope / fast_slope;
        log << "L=" << sizes[i] << "->" << sizes[i + 1]
            << ": slope ratio " << ratio << "; ";
        if (ratio < 1.7) ok = false;
    }
    return ok;
}

// --- criterion 4 -----------------------------------------------------------

bool hmm_oracle_equivalence(std::ostream& log) {
    auto res = oracle::run_hmm_suite(200, 20260812, 1e-9);
    log << res.instances << " instances, max |diff| = " << res.max_abs_diff;
    return res.ok();
}

// --- criterion 5 -----------------------------------------------------------

bool map_trend_reproduction(std::ostream& log) {
    ExperimentConfig cfg;
    cfg.rho = {0.0, 0.5, 0.9};
    cfg.p_erase = {0.0, 0.05, 0.1, 0.2};
    cfg.p_cross = {0.001, 0.005, 0.01, 0.05};
    cfg.n = 10000;
    cfg.trials = 20; // 2e5 pooled symbols per grid point
    cfg.decoders = {"hard", "map"};
    cfg.base_seed = 151;
    auto rows = run_experiment(cfg, worker_threads());
    auto table = by_point(rows);

    bool ok = true;
    int points = 0, ordered = 0;
    for (const auto& [key, decs] : table) {
        ++points;
        if (decs.at("map").ser <= decs.at("hard").ser) ++ordered;
    }
    log << ordered << "/" << points << " points with map <= hard; ";
    ok = ok && ordered == points;

    // Gap growth with source memory wherever erasures are significant.
    int gap_points = 0, gap_ordered = 0;
    for (double pe : cfg.p_erase) {
        if (pe < 0.05) continue;
        for (double pc : cfg.p_cross) {
            auto& strong = table.at({0.9, pe, pc});
            auto& weak = table.at({0.0, pe, pc});
            double gap9 = strong.at("hard").ser - strong.at("map").ser;
            double gap0 = weak.at("hard").ser - weak.at("map").ser;
            ++gap_points;
            if (gap9 > gap0) ++gap_ordered;
        }
    }
    log << gap_ordered << "/" << gap_points
        << " gap comparisons favour rho=0.9";
    return ok && gap_ordered == gap_points;
}

// --- criterion 6 -----------------------------------------------------------

bool mmse_trend_reproduction(std::ostream& log) {
    ExperimentConfig cfg;
    cfg.rho = {0.0, 0.5, 0.9};
    cfg.p_erase = {0.05, 0.1, 0.2, 0.3};
    cfg.p_cross = {0.005, 0.02};
    cfg.n = 10000;
    cfg.trials = 20;
    cfg.decoders = {"hard", "mmse", "mmse_iid"};
    cfg.base_seed = 161;
    auto rows = run_experiment(cfg, worker_threads());
    auto table = by_point(rows);

    bool ok = true;
    int ladder_points = 0, ladder_ok = 0;
    double worst_iid_gap = 0.0;
    for (const auto& [key, decs] : table) {
        double full = decs.at("mmse").snr_db;
        double iid = decs.at("mmse_iid").snr_db;
        double hard = decs.at("hard").snr_db;
        if (key.rho > 0.0) {
            ++ladder_points;
            if (full >= iid - 0.05 && iid >= hard - 0.05) ++ladder_ok;
        } else {
            worst_iid_gap = std::max(worst_iid_gap, std::abs(full - iid));
        }
    }
    log << ladder_ok << "/" << ladder_points << " ladder points; ";
    ok = ok && ladder_ok == ladder_points;

    log << "rho=0 max |mmse - iid| = " << worst_iid_gap << " dB; ";
    ok = ok && worst_iid_gap <= 0.02;

    // Large-margin claim at the heaviest erasure setting.
    double min_gain = 1e300;
    for (double pc : cfg.p_cross) {
        auto& decs = table.at({0.9, 0.3, pc});
        min_gain = std::min(min_gain, decs.at("mmse").snr_db -
                                          decs.at("hard").snr_db);
    }
    log << "min mmse-vs-hard gain at p_erase=0.3: " << min_gain << " dB";
    return ok && min_gain >= 3.0;
}

// --- criterion 7 -----------------------------------------------------------

bool determinism(std::ostream& log) {
    ExperimentConfig cfg;
    cfg.rho = {0.0, 0.9};
    cfg.p_erase = {0.1};
    cfg.p_cross = {0.01};
    cfg.n = 500;
    cfg.trials = 3;
    cfg.decoders = {"hard", "map", "map_fast", "mmse", "mmse_iid",
                    "hmm_exact", "hmm_mid", "hmm_cheap"};
    cfg.base_seed = 171;
    auto a = emit_csv(run_experiment(cfg, 1));
    auto b = emit_csv(run_experiment(cfg, 1));
    auto c = emit_csv(run_experiment(cfg, 5));
    bool ok = a == b && a == c;
    log << "csv bytes: rerun " << (a == b ? "equal" : "DIFFER")
        << ", threads=5 " << (a == c ? "equal" : "DIFFER");
    return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool noiseless_round_trip(std::ostream& log) {
    ExperimentConfig cfg;
    cfg.rho = {0.0, 0.5, 0.9};
    cfg.p_erase = {0.0};
    cfg.p_cross = {0.0};
    cfg.n = 4000;
    cfg.trials = 5;
    cfg.decoders = {"map", "mmse"};
    cfg.base_seed = 181;
    auto rows = run_experiment(cfg, worker_threads());

    auto cb = build_2dsq(cfg.codebook.l1, cfg.codebook.spread,
                         GaussMarkovSource{}, cfg.codebook.cell_width);
    bool ok = true;
    double worst = 0.0;
    for (std::size_t r = 0; r < cfg.rho.size(); ++r) {
        double sig = 0.0, err = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            auto chi = generate(GaussMarkovSource{cfg.rho[r],
                                                  trial_source_seed(
                                                      cfg.base_seed, r, t)},
                                cfg.n);
            for (double x : chi) {
                double c = cb.centroids[cb.quantize(x)];
                sig += x * x;
                err += (x - c) * (x - c);
            }
        }
        double quantizer_snr = 10.0 * std::log10(sig / err);
        for (const auto& row : rows) {
            if (row.rho != cfg.rho[r]) continue;
            if (row.ser != 0.0) {
                log << row.decoder << " rho=" << row.rho
                    << " has ser=" << row.ser << "; ";
                ok = false;
            }
            if (row.decoder == "mmse")
                worst = std::max(worst,
                                 std::abs(row.snr_db - quantizer_snr));
        }
    }
    log << "max |mmse snr - quantizer snr| = " << worst << " dB";
    return ok && worst <= 1e-9;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria{
        {1, "MAP oracle equivalence", map_oracle_equivalence},
        {2, "MMSE oracle equivalence", mmse_oracle_equivalence},
        {3, "fast-path equivalence and scaling", fast_path_equivalence},
        {4, "HMM joint-MAP oracle", hmm_oracle_equivalence},
        {5, "MAP-vs-hard trend reproduction", map_trend_reproduction},
        {6, "MMSE ladder trend reproduction", mmse_trend_reproduction},
        {7, "determinism across runs and thread counts", determinism},
        {8, "noiseless round trip", noiseless_round_trip},
    };

    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const auto& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        std::ostringstream detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("[%s] %d. %s (%.1fs): %s\n", ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, secs,
                    detail.str().c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
