// First-order Gauss-Markov source and the discrete Markov model of its
// quantized output.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace jscmd {

/// Zero-mean, unit-variance AR(1) source:
///   chi_n = rho * chi_{n-1} + sqrt(1 - rho^2) * w_n,  w_n iid N(0,1),
/// started from its stationary marginal so every chi_n is N(0,1).
struct GaussMarkovSource {
    double rho = 0.0; // correlation coefficient, in [0,1)
    std::uint64_t rng_seed = 0;
};

/// Draw n samples. Deterministic for a given rng_seed.
std::vector<double> generate(const GaussMarkovSource& source, std::size_t n);

/// Prior and transition law of the quantizer output symbol sequence,
/// kept in both linear and log domain. Zero probabilities are clamped to
/// `log_floor` in the log arrays so the trellis keeps a uniform shape.
struct MarkovSourceModel {
    std::size_t L = 0;
    std::vector<double> prior;          // L
    std::vector<double> transition;     // L x L, row = previous symbol
    std::vector<double> log_prior;      // L
    std::vector<double> log_transition; // L x L
    double log_floor = -1e9;

    double trans(std::size_t prev, std::size_t next) const {
        return transition[prev * L + next];
    }
    double log_trans(std::size_t prev, std::size_t next) const {
        return log_transition[prev * L + next];
    }

    /// Build from explicit matrices. Validates that `prior` and every
    /// transition row are probability vectors (sum within 1e-9).
    static MarkovSourceModel from(std::vector<double> prior,
                                  std::vector<double> transition,
                                  double log_floor = -1e9);
};

struct MarkovModelOptions {
    double log_floor = -1e9;
};

/// Integrate the stationary and pairwise Gaussian laws over the quantizer
/// cells. `boundaries` has L+1 entries, strictly increasing, with -inf and
/// +inf at the ends. Rejects L < 2 and non-monotone boundaries.
MarkovSourceModel derive_markov_model(const GaussMarkovSource& source,
                                      const std::vector<double>& boundaries,
                                      const MarkovModelOptions& opts = {});

} // namespace jscmd
