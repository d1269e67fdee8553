#include "jscmd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jscmd/random.hpp"

namespace jscmd {

namespace {

void validate(const EecChannel& ch) {
    if (ch.p_erase < 0.0 || ch.p_erase > 1.0 || ch.p_cross < 0.0 ||
        ch.p_cross > 1.0)
        throw std::invalid_argument("EecChannel: probabilities out of range");
}

void validate(const AwgnChannel& ch) {
    if (!(ch.sigma > 0.0))
        throw std::invalid_argument("AwgnChannel: sigma must be positive");
}

std::vector<std::uint8_t> codeword_bits(int index, int bits) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits));
    for (int b = 0; b < bits; ++b)
        out[b] = static_cast<std::uint8_t>((index >> (bits - 1 - b)) & 1);
    return out;
}

struct EecLogTerms {
    double erase, intact, flip;
};

EecLogTerms log_terms(const EecChannel& ch) {
    return {std::log(ch.p_erase),
            std::log((1.0 - ch.p_erase) * (1.0 - ch.p_cross)),
            std::log((1.0 - ch.p_erase) * ch.p_cross)};
}

double codeword_loglik(const EecLogTerms& t,
                       std::span<const EecSymbol> observed,
                       std::span<const std::uint8_t> sent) {
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        switch (observed[i]) {
        case EecSymbol::erased:
            sum += t.erase;
            break;
        case EecSymbol::zero:
        case EecSymbol::one:
            sum += (static_cast<std::uint8_t>(observed[i]) == sent[i])
                       ? t.intact
                       : t.flip;
            break;
        default:
            throw std::invalid_argument(
                "log_likelihood: symbol outside {0,1,$}");
        }
    }
    return sum;
}

double codeword_loglik(double log_norm, double sigma,
                       std::span<const double> observed,
                       std::span<const std::uint8_t> sent) {
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double d = observed[i] - (sent[i] ? 1.0 : -1.0);
        sum += log_norm - d * d / sigma;
    }
    return sum;
}

} // namespace

std::vector<EecSymbol> transmit(const EecChannel& ch,
                                std::span<const std::uint8_t> bits) {
    validate(ch);
    Rng rng(ch.rng_seed);
    double flip_edge = ch.p_erase + (1.0 - ch.p_erase) * ch.p_cross;
    std::vector<EecSymbol> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        double u = rng.uniform();
        if (u < ch.p_erase)
            out[i] = EecSymbol::erased;
        else if (u < flip_edge)
            out[i] = bits[i] ? EecSymbol::zero : EecSymbol::one;
        else
            out[i] = bits[i] ? EecSymbol::one : EecSymbol::zero;
    }
    return out;
}

std::vector<double> transmit(const AwgnChannel& ch,
                             std::span<const std::uint8_t> bits) {
    validate(ch);
    Rng rng(ch.rng_seed);
    double noise_sd = std::sqrt(0.5 * ch.sigma);
    std::vector<double> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        out[i] = (bits[i] ? 1.0 : -1.0) + noise_sd * rng.gaussian();
    return out;
}

double log_likelihood(const EecChannel& ch,
                      std::span<const EecSymbol> observed,
                      std::span<const std::uint8_t> sent) {
    validate(ch);
    if (observed.size() != sent.size())
        throw std::invalid_argument("log_likelihood: length mismatch");
    return codeword_loglik(log_terms(ch), observed, sent);
}

double log_likelihood(const AwgnChannel& ch, std::span<const double> observed,
                      std::span<const std::uint8_t> sent) {
    validate(ch);
    if (observed.size() != sent.size())
        throw std::invalid_argument("log_likelihood: length mismatch");
    double log_norm = -0.5 * std::log(std::numbers::pi * ch.sigma);
    return codeword_loglik(log_norm, ch.sigma, observed, sent);
}

std::size_t ReceivedDescription::positions() const {
    std::size_t len =
        std::visit([](const auto& v) { return v.size(); }, symbols);
    return bits > 0 ? len / static_cast<std::size_t>(bits) : 0;
}

ReceivedSequence transmit_streams(const std::vector<ChannelModel>& channels,
                                  const Encoded& enc, const MdqCodebook& cb) {
    if (channels.size() != cb.K)
        throw std::invalid_argument("transmit_streams: channel count != K");
    ReceivedSequence recv;
    recv.n = enc.central.size();
    recv.descriptions.resize(cb.K);
    for (std::size_t k = 0; k < cb.K; ++k) {
        int bits = cb.bits_per_description[k];
        auto raw = stream_to_bits(enc.streams[k], bits);
        recv.descriptions[k].bits = bits;
        std::visit(
            [&](const auto& ch) {
                recv.descriptions[k].symbols = transmit(ch, raw);
            },
            channels[k]);
    }
    return recv;
}

namespace {

template <typename Channel, typename Symbol>
std::vector<double> table_for(const Channel& ch,
                              std::span<const Symbol> observed,
                              const MdqCodebook& cb, std::size_t k) {
    int bits = cb.bits_per_description[k];
    if (observed.size() != static_cast<std::size_t>(bits))
        throw std::invalid_argument("likelihood_table: codeword length");
    // One evaluation per side codeword, then spread over central cells.
    std::vector<double> side(cb.side_sizes[k]);
    for (std::size_t m = 0; m < side.size(); ++m) {
        auto sent = codeword_bits(static_cast<int>(m), bits);
        side[m] = log_likelihood(ch, observed, sent);
    }
    std::vector<double> table(cb.L);
    for (std::size_t c = 0; c < cb.L; ++c)
        table[c] = side[cb.assignment[c][k]];
    return table;
}

} // namespace

std::vector<double> likelihood_table(const EecChannel& ch,
                                     std::span<const EecSymbol> observed,
                                     const MdqCodebook& cb, std::size_t k) {
    return table_for(ch, observed, cb, k);
}

std::vector<double> likelihood_table(const AwgnChannel& ch,
                                     std::span<const double> observed,
                                     const MdqCodebook& cb, std::size_t k) {
    return table_for(ch, observed, cb, k);
}

std::vector<std::vector<int>> hard_decision_indices(
    const ReceivedSequence& recv, const MdqCodebook& cb) {
    std::vector<std::vector<int>> out(recv.descriptions.size());
    for (std::size_t k = 0; k < recv.descriptions.size(); ++k) {
        const auto& desc = recv.descriptions[k];
        std::size_t B = static_cast<std::size_t>(desc.bits);
        int limit = static_cast<int>(cb.side_sizes[k]);
        out[k].assign(recv.n, kErasedIndex);
        if (std::holds_alternative<std::vector<EecSymbol>>(desc.symbols)) {
            const auto& syms = std::get<std::vector<EecSymbol>>(desc.symbols);
            for (std::size_t n = 0; n < recv.n; ++n) {
                int idx = 0;
                bool erased = false;
                for (std::size_t b = 0; b < B && !erased; ++b) {
                    EecSymbol s = syms[n * B + b];
                    if (s == EecSymbol::erased)
                        erased = true;
                    else
                        idx = (idx << 1) | static_cast<int>(s);
                }
                if (!erased && idx < limit) out[k][n] = idx;
            }
        } else {
            const auto& syms = std::get<std::vector<double>>(desc.symbols);
            for (std::size_t n = 0; n < recv.n; ++n) {
                int idx = 0;
                for (std::size_t b = 0; b < B; ++b)
                    idx = (idx << 1) | (syms[n * B + b] >= 0.0 ? 1 : 0);
                if (idx < limit) out[k][n] = idx;
            }
        }
    }
    return out;
}

std::vector<double> all_stage_log_likelihoods(
    const std::vector<ChannelModel>& channels, const ReceivedSequence& recv,
    const MdqCodebook& cb) {
    if (channels.size() != cb.K || recv.descriptions.size() != cb.K)
        throw std::invalid_argument(
            "all_stage_log_likelihoods: description count mismatch");
    std::vector<double> like(recv.n * cb.L, 0.0);
    std::vector<double> side;
    std::vector<std::vector<std::uint8_t>> sent;
    for (std::size_t k = 0; k < cb.K; ++k) {
        const auto& desc = recv.descriptions[k];
        if (desc.positions() != recv.n)
            throw std::invalid_argument(
                "all_stage_log_likelihoods: stream length mismatch");
        std::size_t B = static_cast<std::size_t>(desc.bits);
        side.resize(cb.side_sizes[k]);
        sent.resize(cb.side_sizes[k]);
        for (std::size_t m = 0; m < sent.size(); ++m)
            sent[m] = codeword_bits(static_cast<int>(m), desc.bits);
        if (std::holds_alternative<EecChannel>(channels[k])) {
            const auto& ch = std::get<EecChannel>(channels[k]);
            validate(ch);
            EecLogTerms terms = log_terms(ch);
            const auto& syms = std::get<std::vector<EecSymbol>>(desc.symbols);
            for (std::size_t n = 0; n < recv.n; ++n) {
                std::span<const EecSymbol> obs(syms.data() + n * B, B);
                for (std::size_t m = 0; m < side.size(); ++m)
                    side[m] = codeword_loglik(terms, obs, sent[m]);
                double* row = like.data() + n * cb.L;
                for (std::size_t c = 0; c < cb.L; ++c)
                    row[c] += side[cb.assignment[c][k]];
            }
        } else {
            const auto& ch = std::get<AwgnChannel>(channels[k]);
            validate(ch);
            double log_norm = -0.5 * std::log(std::numbers::pi * ch.sigma);
            const auto& syms = std::get<std::vector<double>>(desc.symbols);
            for (std::size_t n = 0; n < recv.n; ++n) {
                std::span<const double> obs(syms.data() + n * B, B);
                for (std::size_t m = 0; m < side.size(); ++m)
                    side[m] = codeword_loglik(log_norm, ch.sigma, obs, sent[m]);
                double* row = like.data() + n * cb.L;
                for (std::size_t c = 0; c < cb.L; ++c)
                    row[c] += side[cb.assignment[c][k]];
            }
        }
    }
    return like;
}

} // namespace jscmd
