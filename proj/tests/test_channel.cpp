#include "jscmd/channel.hpp"

#include <stdexcept>
#include <algorithm>

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "jscmd/oracles.hpp"
#include "jscmd/source_model.hpp"
#include "test_support.hpp"

using namespace jscmd;

TEST_CASE("eec transmit: degenerate probabilities") {
    std::vector<std::uint8_t> bits(200);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = i % 2;

    auto all_erased = transmit(EecChannel{1.0, 0.0, 3}, bits);
    for (auto s : all_erased) CHECK(s == EecSymbol::erased);

    auto intact = transmit(EecChannel{0.0, 0.0, 3}, bits);
    for (std::size_t i = 0; i < bits.size(); ++i)
        CHECK(static_cast<std::uint8_t>(intact[i]) == bits[i]);
}

TEST_CASE("eec transmit: empirical rates match the per-bit law") {
    std::vector<std::uint8_t> bits(1000000, 0);
    auto out = transmit(EecChannel{0.1, 0.01, 77}, bits);
    std::size_t erased = 0, flipped = 0;
    for (auto s : out) {
        if (s == EecSymbol::erased)
            ++erased;
        else if (s == EecSymbol::one)
            ++flipped;
    }
    double erase_frac = static_cast<double>(erased) / 1e6;
    double flip_frac =
        static_cast<double>(flipped) / static_cast<double>(1e6 - erased);
    CHECK(std::abs(erase_frac - 0.1) < 0.002);
    CHECK(std::abs(flip_frac - 0.01) < 0.001);
}

TEST_CASE("eec likelihood: direct substitution") {
    EecChannel ch{0.1, 0.01};
    std::vector<std::uint8_t> sent{1, 0, 1};

    std::vector<EecSymbol> same{EecSymbol::one, EecSymbol::zero,
                                EecSymbol::one};
    CHECK(log_likelihood(ch, same, sent) ==
          doctest::Approx(3.0 * std::log(0.9 * 0.99)).epsilon(1e-14));

    std::vector<EecSymbol> erased(3, EecSymbol::erased);
    CHECK(log_likelihood(ch, erased, sent) ==
          doctest::Approx(3.0 * std::log(0.1)).epsilon(1e-14));

    std::vector<EecSymbol> bad{EecSymbol::one, static_cast<EecSymbol>(7),
                               EecSymbol::one};
    CHECK_THROWS_AS(log_likelihood(ch, bad, sent), std::invalid_argument);
}

TEST_CASE("awgn likelihood: zero-distance case") {
    AwgnChannel ch{1.0};
    std::vector<std::uint8_t> sent{1, 0, 1};
    std::vector<double> exact{1.0, -1.0, 1.0};
    CHECK(log_likelihood(ch, exact, sent) ==
          doctest::Approx(3.0 * std::log(1.0 /
                                         std::sqrt(std::numbers::pi)))
              .epsilon(1e-14));
}

TEST_CASE("eec likelihood normalizes over the observation alphabet") {
    EecChannel ch{0.23, 0.04};
    std::vector<std::uint8_t> sent{1, 0, 1};
    double total = 0.0;
    std::vector<EecSymbol> obs(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                obs[0] = static_cast<EecSymbol>(a);
                obs[1] = static_cast<EecSymbol>(b);
                obs[2] = static_cast<EecSymbol>(c);
                total += std::exp(log_likelihood(ch, obs, sent));
            }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("likelihood tables") {
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    EecChannel ch{0.1, 0.02, 5};

    SUBCASE("all-erased observation carries no information") {
        std::vector<EecSymbol> obs(3, EecSymbol::erased);
        auto table = likelihood_table(ch, obs, cb, 0);
        for (double v : table)
            CHECK(v == doctest::Approx(3.0 * std::log(0.1)).epsilon(1e-14));
    }
    SUBCASE("noiseless observation peaks exactly on the matching cells") {
        int target = 7;
        auto bits = stream_to_bits(std::vector<int>{cb.assignment[target][0]},
                                   3);
        std::vector<EecSymbol> obs(3);
        for (int i = 0; i < 3; ++i) obs[i] = static_cast<EecSymbol>(bits[i]);
        auto table = likelihood_table(ch, obs, cb, 0);
        double top = *std::max_element(table.begin(), table.end());
        for (std::size_t c = 0; c < cb.L; ++c) {
            if (cb.assignment[c][0] == cb.assignment[target][0])
                CHECK(table[c] == top);
            else
                CHECK(table[c] < top);
        }
    }
    SUBCASE("stage sums match independent per-entry evaluation") {
        auto pipe = test_support::run_pipeline(cb, 0.5, 40, 0.2, 0.05, 11);
        auto fused = all_stage_log_likelihoods(pipe.channels, pipe.recv, cb);
        auto direct =
            oracle::stage_log_likelihoods(pipe.channels, pipe.recv, cb);
        REQUIRE(fused.size() == direct.size());
        for (std::size_t i = 0; i < fused.size(); ++i)
            CHECK(fused[i] == direct[i]); // same factors, same order
    }
}

TEST_CASE("awgn transmit: noise statistics and determinism") {
    std::vector<std::uint8_t> bits(100000, 1);
    AwgnChannel ch{0.5, 13};
    auto a = transmit(ch, bits);
    auto b = transmit(ch, bits);
    CHECK(a == b);
    double mean = 0.0, var = 0.0;
    for (double v : a) mean += v;
    mean /= static_cast<double>(a.size());
    for (double v : a) var += (v - mean) * (v - mean);
    var /= static_cast<double>(a.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
    CHECK(var == doctest::Approx(0.25).epsilon(0.03)); // sigma/2
}

TEST_CASE("hard decision view of a received block") {
    auto cb = build_2dsq(8, 3, GaussMarkovSource{});
    ReceivedSequence recv;
    recv.n = 3;
    recv.descriptions.resize(2);
    using S = EecSymbol;
    recv.descriptions[0].bits = 3;
    recv.descriptions[0].symbols = std::vector<S>{
        S::one, S::zero, S::one,      // 5
        S::erased, S::zero, S::zero,  // erased bit
        S::zero, S::zero, S::zero};   // 0
    recv.descriptions[1].bits = 3;
    recv.descriptions[1].symbols = std::vector<S>{
        S::one, S::one, S::one,       // 7
        S::zero, S::one, S::zero,     // 2
        S::erased, S::erased, S::erased};
    auto idx = hard_decision_indices(recv, cb);
    CHECK(idx[0] == std::vector<int>{5, kErasedIndex, 0});
    CHECK(idx[1] == std::vector<int>{7, 2, kErasedIndex});
}
