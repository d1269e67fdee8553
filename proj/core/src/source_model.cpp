#include "jscmd/source_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscmd/gauss.hpp"
#include "jscmd/random.hpp"

namespace jscmd {

namespace {

double clamped_log(double p, double floor) {
    if (p <= 0.0) return floor;
    return std::max(std::log(p), floor);
}

void check_probability_vector(const double* v, std::size_t n,
                              const char* what) {
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

std::vector<double> generate(const GaussMarkovSource& source, std::size_t n) {
    if (source.rho < 0.0 || source.rho >= 1.0)
        throw std::invalid_argument("generate: rho must be in [0,1)");
    std::vector<double> out(n);
    if (n == 0) return out;
    Rng rng(source.rng_seed);
    double innovation = std::sqrt(1.0 - source.rho * source.rho);
    out[0] = rng.gaussian();
    for (std::size_t i = 1; i < n; ++i)
        out[i] = source.rho * out[i - 1] + innovation * rng.gaussian();
    return out;
}

MarkovSourceModel MarkovSourceModel::from(std::vector<double> prior,
                                          std::vector<double> transition,
                                          double log_floor) {
    MarkovSourceModel m;
    m.L = prior.size();
    if (m.L == 0) throw std::invalid_argument("MarkovSourceModel: empty prior");
    if (transition.size() != m.L * m.L)
        throw std::invalid_argument("MarkovSourceModel: transition shape");
    check_probability_vector(prior.data(), m.L, "prior");
    for (std::size_t r = 0; r < m.L; ++r)
        check_probability_vector(transition.data() + r * m.L, m.L,
                                 "transition row");
    m.prior = std::move(prior);
    m.transition = std::move(transition);
    m.log_floor = log_floor;
    m.log_prior.resize(m.L);
    m.log_transition.resize(m.L * m.L);
    for (std::size_t i = 0; i < m.L; ++i)
        m.log_prior[i] = clamped_log(m.prior[i], log_floor);
    for (std::size_t i = 0; i < m.L * m.L; ++i)
        m.log_transition[i] = clamped_log(m.transition[i], log_floor);
    return m;
}

MarkovSourceModel derive_markov_model(const GaussMarkovSource& source,
                                      const std::vector<double>& boundaries,
                                      const MarkovModelOptions& opts) {
    if (boundaries.size() < 3)
        throw std::invalid_argument("derive_markov_model: need L >= 2 cells");
    std::size_t L = boundaries.size() - 1;
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
        if (!(boundaries[i] < boundaries[i + 1]))
            throw std::invalid_argument(
                "derive_markov_model: boundaries must be strictly increasing");
    if (!std::isinf(boundaries.front()) || !std::isinf(boundaries.back()))
        throw std::invalid_argument(
            "derive_markov_model: boundaries must cover the real line");
    if (source.rho < 0.0 || source.rho >= 1.0)
        throw std::invalid_argument("derive_markov_model: rho must be in [0,1)");

    std::vector<double> prior(L);
    for (std::size_t l = 0; l < L; ++l)
        prior[l] = norm_cell_prob(boundaries[l], boundaries[l + 1]);

    std::vector<double> transition(L * L);
    if (source.rho == 0.0) {
        // Independent symbols: every row is exactly the prior.
        for (std::size_t prev = 0; prev < L; ++prev)
            for (std::size_t next = 0; next < L; ++next)
                transition[prev * L + next] = prior[next];
    } else {
        for (std::size_t prev = 0; prev < L; ++prev) {
            for (std::size_t next = 0; next < L; ++next) {
                double joint =
                    bvn_rect_prob(boundaries[next], boundaries[next + 1],
                                  boundaries[prev], boundaries[prev + 1],
                                  source.rho);
                transition[prev * L + next] = joint / prior[prev];
            }
        }
    }
    return MarkovSourceModel::from(std::move(prior), std::move(transition),
                                   opts.log_floor);
}

} // namespace jscmd
