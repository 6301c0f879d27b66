#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osid/coefficients.hpp"
#include "osid/interval_set.hpp"

namespace osid {

// Trace of the greedy threshold recursion at a single value v >= 0:
//   s_0 = 0;  b_n = [v > a_n + s_{n-1}] (strict);  s_n = s_{n-1} + a_n * b_n.
struct ExpansionTrace {
  Rat v;
  std::vector<uint8_t> bits;      // b_1..b_N
  std::vector<Rat> partial_sums;  // s_1..s_N
  std::vector<Rat> errors;        // e_n = v - s_n
};

ExpansionTrace expand_point(const Rat& v, std::span<const Rat> coeffs);
ExpansionTrace expand_point(const Rat& v, const CoefficientSequence& seq, int levels);

// Step function on [0, vmax]. Piece i covers (breakpoints[i-1], breakpoints[i]]
// with the first piece [0, breakpoints[0]]; breakpoints.back() == vmax.
// attach_low[i] records that breakpoints[i] itself belongs to piece i.
struct PiecewiseConstantProfile {
  std::vector<Rat> breakpoints;
  std::vector<Rat> values;
  std::vector<uint8_t> attach_low;

  size_t pieces() const { return values.size(); }
  const Rat& value_at(const Rat& v) const;  // v in [0, vmax]
  const Rat& tail_value() const { return values.back(); }
};

struct LevelSets {
  std::vector<RationalIntervalSet> levels;  // U_1..U_N truncated to [0, vmax]
  PiecewiseConstantProfile profile;         // scalar partial sum after all levels
  Rat vmax;
  int requested_levels = 0;
  int computed_levels = 0;  // < requested after a precision stop
  std::vector<std::string> notes;
};

inline constexpr size_t kDefaultPieceCap = 1'000'000;

// Lifts the recursion from points to subsets of [0, vmax]: each level's
// member set U_n = {v : v > a_n + s_{n-1}(v)} computed piece by piece with
// exact endpoints, then the profile gains a_n on U_n. Requires an
// exactly-rational sequence. Levels whose coefficient drops below
// 2^-64 * vmax stop the computation early with a note.
LevelSets level_sets(const CoefficientSequence& seq, int levels, const Rat& vmax,
                     size_t piece_cap = kDefaultPieceCap);

// Per-level upper bounds for the trailing error e_n valid for every
// v in [0, m]:
//   e_n <= max(a_n, max_{k<n}(a_k - sum_{j=k+1..n} a_j), m - sum_{j<=n} a_j),
// obtained by unrolling e_n <= max(a_n, e_{n-1} - a_n). Vanishes as n grows
// whenever the a_j vanish and their series diverges.
std::vector<Rat> uniform_error_bounds(std::span<const Rat> coeffs, const Rat& m);

struct OpennessAuditReport {
  struct Level {
    int index = 0;  // 1-based
    RationalIntervalSet set;
    bool open = false;
    std::vector<Rat> witnesses;
  };
  std::vector<Level> levels;
  std::optional<int> first_non_open;
  Rat vmax;
  Rat tail_value;  // profile value on the piece reaching vmax
  int requested_levels = 0;
  size_t cross_validation_samples = 0;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Per-level openness verdicts with witnesses, cross-validated against the
// pointwise recursion on at least `samples` exact rational values (every
// breakpoint, every piece midpoint, plus seeded uniform draws). A mismatch
// throws CrossValidationMismatch.
OpennessAuditReport audit(const CoefficientSequence& seq, int levels, const Rat& vmax,
                          uint64_t seed = 0, size_t samples = 10'000,
                          size_t piece_cap = kDefaultPieceCap);

}  // namespace osid
