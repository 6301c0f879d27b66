#pragma once

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

#include "osid/errors.hpp"
#include "osid/rational.hpp"

namespace osid {

// Positive coefficient sequences (a_j). The built-in families are positive,
// vanishing and have divergent partial sums by construction; explicit
// prefixes inherit those guarantees from their declared continuation.
enum class Family { Harmonic, Power, ScaledHarmonic, ExplicitPrefix };

enum class TailFamily { Harmonic, ScaledHarmonic, Power, Geometric, None };

struct Continuation {
  TailFamily family = TailFamily::None;
  Rat param;  // scale c, exponent p, or geometric ratio r; unused for Harmonic/None
};

class CoefficientSequence {
 public:
  CoefficientSequence() = default;  // harmonic

  static CoefficientSequence harmonic();                        // a_j = 1/j
  static CoefficientSequence power(const Rat& p);               // a_j = j^-p, 0 < p <= 1
  static CoefficientSequence scaled_harmonic(const Rat& c);     // a_j = c/j, c > 0
  // Finite positive prefix followed by the declared tail. A Geometric tail
  // continues from the last prefix term; a None tail leaves the sequence
  // undefined past the prefix.
  static CoefficientSequence explicit_prefix(std::vector<Rat> prefix, Continuation tail);

  Family family() const { return family_; }
  const Continuation& continuation() const { return tail_; }
  const std::vector<Rat>& prefix() const { return prefix_; }

  // 1-based term. Throws ConfigError past horizon() for None continuations.
  Rat value(int j) const;
  std::vector<Rat> values(int count) const;

  // True when every term is an exact rational (everything except Power with
  // a non-integer exponent, whose terms are rational enclosure midpoints).
  bool exact_rational() const;
  // Per-term absolute enclosure error: 0 when exact, else < 2^-64.
  Rat term_error() const;

  // Largest defined index; INT_MAX unless the continuation is None.
  int horizon() const;

  nlohmann::json descriptor() const;
  static CoefficientSequence from_descriptor(const nlohmann::json& j);

  // CLI micro-syntax: "harmonic", "power:p=1/2", "scaled-harmonic:c=1/2",
  // "explicit:1,1/2,1/3:harmonic", "explicit:1,1/2:geometric:r=1/2",
  // "explicit:1,1/2:none", or "@path/to/descriptor.json".
  static CoefficientSequence parse(const std::string& spec);

  std::string display() const;

 private:
  Family family_ = Family::Harmonic;
  Rat param_;                 // p or c
  std::vector<Rat> prefix_;   // ExplicitPrefix only
  Continuation tail_;         // ExplicitPrefix only
};

struct ValidationReport {
  enum class Verdict { ProvenByFamily, HeuristicPass, Fail };
  Verdict verdict = Verdict::Fail;
  int horizon = 0;            // terms actually examined
  bool positive = false;
  bool trending_to_zero = false;
  Rat first_term;
  Rat last_term;
  Rat partial_sum;            // over the examined horizon
  Rat second_half_growth;     // partial_sum minus the half-horizon partial sum
  std::vector<std::string> issues;

  static std::string verdict_name(Verdict v);
  nlohmann::json to_json() const;
};

// Report-valued hypothesis check over a finite horizon: positivity, a
// decreasing trend toward zero, partial-sum growth, and whether the declared
// family certifies divergence of the full series.
ValidationReport validate(const CoefficientSequence& seq, int horizon);

}  // namespace osid
