// JSON round-tripping for codebooks and HMM models, so a run's exact
// tables can be stored alongside its results.
#pragma once

#include <string>

#include "jscmd/hmm_estimator.hpp"
#include "jscmd/mdq.hpp"

namespace jscmd {

/// Fields: L, K, side_sizes, boundaries, centroids, side_centroids,
/// assignment, bits_per_description. Non-finite boundary endpoints are
/// written as the strings "inf" / "-inf".
std::string codebook_to_json(const MdqCodebook& cb);
MdqCodebook codebook_from_json(const std::string& text);

/// Fields: M, L, initial, transition, observation (M x M rows over x),
/// observation_reduced.
std::string hmm_to_json(const HmmModel& hmm);
HmmModel hmm_from_json(const std::string& text);

} // namespace jscmd
