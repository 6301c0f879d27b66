#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "osid/decomposition.hpp"
#include "osid/scalar_calculus.hpp"

namespace osid {

// Smooth compactly supported bump: height * exp(1 - 1/(1 - t^2)) for
// t = |x - center| / radius < 1, zero outside. All derivatives vanish at the
// support boundary; the peak equals height at the center.
struct BumpSpec {
  int level = 0;  // 1-based
  std::array<double, 2> center{};
  double radius = 0;
  double height = 0;
  int dim = 1;

  double value(std::span<const double> x) const;
  // One-dimensional profile in the normalized radial coordinate t.
  double profile(double t) const;
  nlohmann::json to_json() const;
};

// Samples whose value lies in the interior of the level's scalar set: an
// open subset of the level's membership set even when that set is not open.
std::vector<uint8_t> open_core(const LevelSets& ls, int level, std::span<const double> values);

// Euclidean distance from each sample to the nearest zero sample or box
// face (everything off the box counts as complement).
std::vector<double> distance_to_complement(std::span<const uint8_t> mask,
                                           const SampledDomain& grid);

struct InscribedBall {
  size_t center_sample = 0;
  double radius = 0;
};

// Deepest sample of the mask with radius = distance-to-complement minus one
// mesh width; nothing when the usable radius falls below 2h.
std::optional<InscribedBall> inscribe_ball(std::span<const uint8_t> mask,
                                           const SampledDomain& grid);

struct MinorantResult {
  std::vector<BumpSpec> bumps;
  std::vector<int> skipped_levels;  // no ball of radius >= 2h in the core
  double sup_residual = 0;          // sup over samples of f - sum of bumps
  double mean_residual = 0;
  size_t samples_checked = 0;
  int levels_requested = 0;
  int levels_computed = 0;
  Rat vmax;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Places one bump of height a_j inside the open core of each level on a box
// grid (dimension 1 or 2) and verifies the domination chain
// sum_j B_j <= S_N <= f exactly at every sample. vmax defaults to
// 11/10 * max sampled f (1 when f vanishes identically).
MinorantResult minorize(const SampledDomain& box, const FunctionAst& fn,
                        const CoefficientSequence& seq, int levels,
                        const std::optional<Rat>& vmax_override = std::nullopt, int workers = 1);

}  // namespace osid
