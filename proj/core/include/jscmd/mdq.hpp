// Fixed-rate K-description scalar quantizer: central cells, index
// assignment, bit mapping, and hard-decision decoding.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "jscmd/source_model.hpp"

namespace jscmd {

/// Side index value marking an erased (unusable) description.
inline constexpr int kErasedIndex = -1;

class MdqCodebook {
  public:
    std::size_t L = 0; // central codebook size
    std::size_t K = 0; // description count
    std::vector<std::size_t> side_sizes;             // K entries
    std::vector<double> boundaries;                  // L+1, -inf ... +inf
    std::vector<double> centroids;                   // L central cell means
    std::vector<std::vector<double>> side_centroids; // per k: L_k means
    std::vector<std::vector<int>> assignment;        // per cell: K-tuple
    std::vector<int> bits_per_description;           // ceil(log2 L_k)

    /// Validates invariants: tuple injectivity, L <= prod L_k, shapes.
    static MdqCodebook create(std::size_t K,
                              std::vector<std::size_t> side_sizes,
                              std::vector<double> boundaries,
                              std::vector<double> centroids,
                              std::vector<std::vector<double>> side_centroids,
                              std::vector<std::vector<int>> assignment);

    int side_index(std::size_t cell, std::size_t k) const {
        return assignment[cell][k];
    }

    /// Central cell for a complete tuple of side indices, if the tuple is
    /// part of the assignment.
    std::optional<int> invert(std::span<const int> tuple) const;

    /// 1 - log2(L) / sum_k log2(L_k).
    double redundancy_rate() const;

    /// Central cell containing x; cells are half-open [b_l, b_{l+1}).
    int quantize(double x) const;

  private:
    std::unordered_map<std::uint64_t, int> inverse_;
    std::uint64_t tuple_key(std::span<const int> tuple) const;
};

/// Central indices plus the K side-index streams for a sample block.
struct Encoded {
    std::vector<int> central;               // N
    std::vector<std::vector<int>> streams;  // K x N
};

Encoded encode(const MdqCodebook& cb, std::span<const double> samples);

/// Symbol-wise decoding from whichever side indices arrived
/// (kErasedIndex marks a missing description). A complete valid tuple
/// inverts to the central centroid; otherwise the received side centroids
/// are averaged. Empty reception returns nullopt (total erasure).
std::optional<double> hard_decode(const MdqCodebook& cb,
                                  std::span<const int> side_indices);

/// Two-description staircase quantizer with uniform central cells.
/// `spread` is how many diagonals of the L1 x L1 assignment matrix are
/// filled (offsets 0..spread-1), giving L = spread*L1 - spread*(spread-1)/2
/// central cells. cell_width <= 0 picks the default width that spans
/// [-3.5, 3.5] with the L-2 interior cells.
MdqCodebook build_2dsq(std::size_t l1, std::size_t spread,
                       const GaussMarkovSource& source,
                       double cell_width = 0.0);

/// MSB-first fixed-length bit mapping of a side-index stream.
std::vector<std::uint8_t> stream_to_bits(std::span<const int> stream,
                                         int bits);
/// Inverse of stream_to_bits for one codeword.
int bits_to_index(std::span<const std::uint8_t> bits);

} // namespace jscmd
