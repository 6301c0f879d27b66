#pragma once

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <vector>

#include "osid/decomposition.hpp"
#include "osid/rational.hpp"

namespace osid {

// The textbook staircase underapproximation at refinement level n:
//   phi_n(v) = min(2^-n * floor(2^n * v), 2^n).
// The cap uses the value 2^n so v - phi_n(v) <= 2^-n holds whenever v <= 2^n.
// Exact for double inputs as long as floor(2^n * v) stays below 2^53.
double dyadic_value(double v, int n);
Rat dyadic_value_exact(const Rat& v, int n);

struct ComparisonReport {
  struct Entry {
    int level;
    double sup_error;
  };
  std::vector<Entry> greedy;
  std::vector<Entry> dyadic;
  // Conventions recorded in the report: which cap phi_n uses, and the
  // structural contrast between the two families of pieces.
  std::string cap_note;
  std::string structure_note;

  void write_csv(std::ostream& out) const;  // level,greedy_sup_error,dyadic_sup_error
  nlohmann::json to_json() const;
};

// Side-by-side sup-error curves over the decomposition's samples. Dyadic
// errors are computed exactly on the binary-rational sample values.
ComparisonReport compare(const Decomposition& dec, std::span<const int> dyadic_levels);

}  // namespace osid
