#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "osid/coefficients.hpp"
#include "osid/domain.hpp"
#include "osid/expr.hpp"
#include "osid/rational.hpp"

namespace osid {

// Bit-packed membership masks, one row of bits per level.
class MaskSet {
 public:
  MaskSet() = default;
  MaskSet(int levels, size_t nsamples);

  int levels() const { return levels_; }
  size_t samples() const { return nsamples_; }
  bool get(int level0, size_t sample) const;
  void set(int level0, size_t sample);
  void flip(int level0, size_t sample);
  size_t count(int level0) const;  // popcount of one level row

  std::span<const uint64_t> row(int level0) const;
  uint64_t* mutable_row(int level0);
  size_t words_per_level() const { return words_per_level_; }

 private:
  int levels_ = 0;
  size_t nsamples_ = 0;
  size_t words_per_level_ = 0;
  std::vector<uint64_t> words_;
};

// Greedy expansion of a sampled function: per-sample membership bits for
// every level, exact per-level sup errors, and derived aggregates. The
// recursion runs in exact rational arithmetic on the exact binary-rational
// value of each double sample; output is bit-identical for any worker count.
struct Decomposition {
  SampledDomain domain;
  std::string fn_text;  // pretty-printed expression, "" for embedded values
  CoefficientSequence seq;
  int levels = 0;
  std::vector<Rat> coeffs;     // a_1..a_N
  std::vector<double> values;  // f at samples
  MaskSet masks;

  std::vector<Rat> sup_error;      // per level, exact over samples
  std::vector<double> mean_error;  // per level, derived from exact counts
  std::vector<size_t> members;     // per level, samples in G_n
  // Samples whose value sits within one ulp of some firing threshold; double
  // rounding of f could flip their bits, so they are reported, not trusted.
  size_t boundary_fragile = 0;
  Rat max_value;   // max f over samples (exact)
  Rat mean_value;  // exact mean of f over samples
};

// fn may be null only when the domain embeds its own values (finite metric
// spaces). Negative values raise NegativeValue.
Decomposition decompose(const SampledDomain& domain, const FunctionAst* fn,
                        const CoefficientSequence& seq, int levels, int workers = 1);

inline const std::vector<Rat>& default_eps_list() {
  static const std::vector<Rat> eps = {rat(1, 10), rat(1, 100), rat(1, 1000)};
  return eps;
}

struct ErrorReport {
  struct Row {
    int level;
    double sup_error;
    double mean_error;
    double frac_in_g;
  };
  std::vector<Row> rows;
  struct NEps {
    Rat eps;
    std::optional<int> level;  // least level with sup error <= eps
  };
  std::vector<NEps> n_eps;

  void write_csv(std::ostream& out) const;  // level,sup_error,mean_error,frac_in_G
  nlohmann::json n_eps_json() const;
};

ErrorReport error_report(const Decomposition& dec,
                         std::span<const Rat> eps_list = default_eps_list());

struct Violation {
  size_t sample;
  int level;  // 1-based
  std::string kind;
  std::string detail;
};

// Exact audit of the stored masks against the sampled values:
//   (a) partial sums nondecreasing across levels,
//   (b) S_n <= f, strict where f > 0,
//   (c) f - S_n <= a_{n+1} wherever bit n+1 is off (including n = 0),
//   (d) trailing error within the per-level uniform bound for M = max f.
// Empty on a correct decomposition; any single flipped bit trips (b) or (c).
std::vector<Violation> verify_invariants(const Decomposition& dec, size_t max_violations = 128,
                                         int workers = 1);

// Binary PGM (P5, maxval 255) of one level's mask; 2D grids only.
void write_mask_pgm(const Decomposition& dec, int level, std::ostream& out);

}  // namespace osid
