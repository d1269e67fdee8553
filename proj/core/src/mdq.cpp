#include "jscmd/mdq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscmd/gauss.hpp"

namespace jscmd {

std::uint64_t MdqCodebook::tuple_key(std::span<const int> tuple) const {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < K; ++k)
        key = key * side_sizes[k] + static_cast<std::uint64_t>(tuple[k]);
    return key;
}

MdqCodebook MdqCodebook::create(
    std::size_t K, std::vector<std::size_t> side_sizes,
    std::vector<double> boundaries, std::vector<double> centroids,
    std::vector<std::vector<double>> side_centroids,
    std::vector<std::vector<int>> assignment) {
    MdqCodebook cb;
    cb.K = K;
    cb.L = assignment.size();
    if (K == 0 || side_sizes.size() != K)
        throw std::invalid_argument("MdqCodebook: bad description count");
    if (cb.L == 0 || boundaries.size() != cb.L + 1 ||
        centroids.size() != cb.L || side_centroids.size() != K)
        throw std::invalid_argument("MdqCodebook: shape mismatch");
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
        if (!(boundaries[i] < boundaries[i + 1]))
            throw std::invalid_argument("MdqCodebook: boundaries not sorted");

    double product_bits = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (side_sizes[k] < 1 || side_centroids[k].size() != side_sizes[k])
            throw std::invalid_argument("MdqCodebook: side codebook shape");
        cb.bits_per_description.push_back(static_cast<int>(
            std::ceil(std::log2(static_cast<double>(side_sizes[k])))));
        product_bits += std::log2(static_cast<double>(side_sizes[k]));
    }
    if (std::log2(static_cast<double>(cb.L)) > product_bits + 1e-12)
        throw std::invalid_argument("MdqCodebook: L exceeds prod L_k");

    cb.side_sizes = std::move(side_sizes);
    cb.boundaries = std::move(boundaries);
    cb.centroids = std::move(centroids);
    cb.side_centroids = std::move(side_centroids);
    cb.assignment = std::move(assignment);

    for (std::size_t c = 0; c < cb.L; ++c) {
        const auto& tuple = cb.assignment[c];
        if (tuple.size() != K)
            throw std::invalid_argument("MdqCodebook: assignment tuple size");
        for (std::size_t k = 0; k < K; ++k)
            if (tuple[k] < 0 ||
                static_cast<std::size_t>(tuple[k]) >= cb.side_sizes[k])
                throw std::invalid_argument(
                    "MdqCodebook: side index out of range");
        auto [it, inserted] =
            cb.inverse_.emplace(cb.tuple_key(tuple), static_cast<int>(c));
        if (!inserted)
            throw std::invalid_argument(
                "MdqCodebook: assignment tuples not injective");
    }
    return cb;
}

std::optional<int> MdqCodebook::invert(std::span<const int> tuple) const {
    auto it = inverse_.find(tuple_key(tuple));
    if (it == inverse_.end()) return std::nullopt;
    return it->second;
}

double MdqCodebook::redundancy_rate() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k)
        sum += std::log2(static_cast<double>(side_sizes[k]));
    return 1.0 - std::log2(static_cast<double>(L)) / sum;
}

int MdqCodebook::quantize(double x) const {
    // boundaries[0] = -inf, so upper_bound lands at least at index 1.
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
    return static_cast<int>(it - boundaries.begin()) - 1;
}

Encoded encode(const MdqCodebook& cb, std::span<const double> samples) {
    Encoded enc;
    enc.central.resize(samples.size());
    enc.streams.assign(cb.K, std::vector<int>(samples.size()));
    for (std::size_t n = 0; n < samples.size(); ++n) {
        int cell = cb.quantize(samples[n]);
        enc.central[n] = cell;
        for (std::size_t k = 0; k < cb.K; ++k)
            enc.streams[k][n] = cb.assignment[cell][k];
    }
    return enc;
}

std::optional<double> hard_decode(const MdqCodebook& cb,
                                  std::span<const int> side_indices) {
    std::size_t received = 0;
    for (int idx : side_indices)
        if (idx != kErasedIndex) ++received;
    if (received == 0) return std::nullopt;

    if (received == cb.K) {
        if (auto cell = cb.invert(side_indices))
            return cb.centroids[*cell];
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < cb.K; ++k)
        if (side_indices[k] != kErasedIndex)
            sum += cb.side_centroids[k][side_indices[k]];
    return sum / static_cast<double>(received);
}

MdqCodebook build_2dsq(std::size_t l1, std::size_t spread,
                       const GaussMarkovSource& /*source*/,
                       double cell_width) {
    if (l1 < 2) throw std::invalid_argument("build_2dsq: L1 must be >= 2");
    if (spread < 1 || spread > l1)
        throw std::invalid_argument(
            "build_2dsq: diagonal pattern does not fit the L1 x L1 matrix");

    // Cells live on diagonals j - i in 0..spread-1, enumerated along the
    // main diagonal direction so the central index is monotone in the
    // source value.
    std::vector<std::pair<int, int>> cells;
    for (std::size_t i = 0; i < l1; ++i)
        for (std::size_t d = 0; d < spread; ++d)
            if (i + d < l1)
                cells.emplace_back(static_cast<int>(i),
                                   static_cast<int>(i + d));
    std::sort(cells.begin(), cells.end(), [](auto a, auto b) {
        if (a.first + a.second != b.first + b.second)
            return a.first + a.second < b.first + b.second;
        return a.first < b.first;
    });
    std::size_t L = cells.size();
    std::vector<std::vector<int>> assignment;
    assignment.reserve(L);
    for (auto [i, j] : cells) assignment.push_back({i, j});

    std::vector<double> boundaries(L + 1);
    boundaries.front() = -std::numeric_limits<double>::infinity();
    boundaries.back() = std::numeric_limits<double>::infinity();
    double w = cell_width;
    if (w <= 0.0)
        w = L > 2 ? 7.0 / static_cast<double>(L - 2) : 1.0;
    double first = -0.5 * static_cast<double>(L - 2) * w;
    for (std::size_t j = 1; j < L; ++j)
        boundaries[j] = first + static_cast<double>(j - 1) * w;

    std::vector<double> centroids(L);
    for (std::size_t c = 0; c < L; ++c)
        centroids[c] = norm_cell_mean(boundaries[c], boundaries[c + 1]);

    // Side centroid = conditional mean over the union of central cells
    // mapping to that side index.
    std::vector<std::vector<double>> side_centroids(
        2, std::vector<double>(l1, 0.0));
    for (std::size_t k = 0; k < 2; ++k) {
        std::vector<double> mass(l1, 0.0), moment(l1, 0.0);
        for (std::size_t c = 0; c < L; ++c) {
            int m = assignment[c][k];
            mass[m] += norm_cell_prob(boundaries[c], boundaries[c + 1]);
            moment[m] +=
                norm_pdf(boundaries[c]) - norm_pdf(boundaries[c + 1]);
        }
        for (std::size_t m = 0; m < l1; ++m)
            side_centroids[k][m] = mass[m] > 0.0 ? moment[m] / mass[m] : 0.0;
    }

    return MdqCodebook::create(2, {l1, l1}, std::move(boundaries),
                               std::move(centroids), std::move(side_centroids),
                               std::move(assignment));
}

std::vector<std::uint8_t> stream_to_bits(std::span<const int> stream,
                                         int bits) {
    std::vector<std::uint8_t> out;
    out.reserve(stream.size() * static_cast<std::size_t>(bits));
    for (int idx : stream)
        for (int b = bits - 1; b >= 0; --b)
            out.push_back(static_cast<std::uint8_t>((idx >> b) & 1));
    return out;
}

int bits_to_index(std::span<const std::uint8_t> bits) {
    int idx = 0;
    for (std::uint8_t b : bits) idx = (idx << 1) | (b & 1);
    return idx;
}

} // namespace jscmd
