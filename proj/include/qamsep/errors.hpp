// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qamsep {

// Rejection sampling (or another randomized draw) exhausted its retry budget.
struct GenerationFailure : std::runtime_error {
  explicit GenerationFailure(const std::string& what) : std::runtime_error(what) {}
};

// Input data cannot support the requested operation (rank deficiency, too few samples).
struct DegenerateData : std::runtime_error {
  explicit DegenerateData(const std::string& what) : std::runtime_error(what) {}
};

// A separation result is unusable (zero matched gain, empty assignment).
struct DegenerateSeparation : std::runtime_error {
  explicit DegenerateSeparation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qamsep
