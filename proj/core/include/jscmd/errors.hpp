#pragma once

#include <stdexcept>
#include <string>

namespace jscmd {

/// Thrown when an observed sequence has zero probability under the model
/// (every candidate path ruled out at some position).
class InfeasibleObservation : public std::runtime_error {
  public:
    explicit InfeasibleObservation(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace jscmd
