#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osid/rational.hpp"

namespace osid {

// One interval inside [0, +inf). An absent hi means unbounded above.
struct Interval {
  Rat lo;
  std::optional<Rat> hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool degenerate() const { return hi && lo == *hi; }
  bool valid() const;  // lo < hi, or a degenerate point with both ends closed
  bool contains(const Rat& v) const;
  std::string str() const;  // "(1/2..1/1]", "[0/1..inf)"
};

// Finite union of pairwise disjoint intervals with exact rational endpoints,
// kept sorted and with touching compatible neighbors merged.
class RationalIntervalSet {
 public:
  RationalIntervalSet() = default;

  // Normalizes an arbitrary collection: sorts, merges overlap and touching.
  static RationalIntervalSet of(std::vector<Interval> parts);

  // Appends an interval that starts at or after the current upper end;
  // merges with the tail when they touch with compatible flags.
  void append(Interval iv);

  bool contains(const Rat& v) const;
  bool empty() const { return parts_.empty(); }
  size_t size() const { return parts_.size(); }
  const std::vector<Interval>& parts() const { return parts_; }

  // Interior in the subspace topology of [0, ambient_hi] ([0, +inf) when
  // ambient_hi is absent): closed endpoints at the subspace boundary
  // survive, every other closed endpoint opens, degenerate points vanish.
  RationalIntervalSet interior(const std::optional<Rat>& ambient_hi = std::nullopt) const;

  std::vector<std::string> part_strings() const;
  std::string str() const;  // parts joined with " u "

  bool operator==(const RationalIntervalSet& other) const;

 private:
  std::vector<Interval> parts_;
};

struct OpennessVerdict {
  bool open = true;
  std::vector<Rat> witnesses;  // offending closed endpoints, ascending
};

// Openness in the subspace topology of [0, ambient_hi] (default [0, +inf)).
// A closed endpoint at 0 or at ambient_hi is a subspace boundary and never
// offends; every other closed endpoint is returned as a witness.
OpennessVerdict check_openness(const RationalIntervalSet& u,
                               const std::optional<Rat>& ambient_hi = std::nullopt);

}  // namespace osid
