#pragma once

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "osid/decomposition.hpp"
#include "osid/interval_set.hpp"
#include "osid/scalar_calculus.hpp"

namespace osid {

enum class ScMode { Lsc, Usc };

struct SemicontinuityVerdict {
  enum class Method { ExactScalar, SampledHeuristic };
  enum class Outcome { Holds, Fails, Inconclusive };
  ScMode mode = ScMode::Lsc;
  Method method = Method::ExactScalar;
  Outcome outcome = Outcome::Inconclusive;
  std::vector<Rat> scalar_witnesses;
};

// Definitive scalar-side verdict: the indicator of f^{-1}(U) is lower
// semicontinuous for every continuous f exactly when U is relatively open;
// otherwise the offending closed endpoints come back as witnesses.
SemicontinuityVerdict scalar_lsc_verdict(const RationalIntervalSet& u,
                                         const std::optional<Rat>& ambient_hi = std::nullopt);

// Multi-scale discrete semicontinuity defects on a grid. The lsc defect at x
// is g(x) - min{g(y) : 0 < d(x,y) <= r}; usc uses max symmetrically. Radii
// are {r, 2r, 4r}. A sample is "persistent" when its defect at the smallest
// radius exceeds the threshold on both the working mesh and a once-refined
// mesh (half mesh, half radius). Heuristic only; flags within ~radius of a
// jump stay uncertain by construction.
struct DefectField {
  std::vector<double> radii;
  std::vector<std::vector<double>> defect;  // [radius][sample], working mesh
  std::vector<size_t> persistent;           // ascending sample indices
  double threshold = 0;
};

using GridFunction = std::function<double(double, double)>;

DefectField sampled_defect(const SampledDomain& grid, const GridFunction& g, ScMode mode,
                           double radius, double threshold = 1e-9);

// Monotone-convergence harness over a decomposition's error curves: exact
// pointwise monotonicity of e_n, sup-curve monotonicity, N(eps) table, and
// which prefix of levels has certified-open scalar sets (so the partial sums
// are certified lower semicontinuous and f - S_n upper semicontinuous).
struct DiniReport {
  bool pointwise_monotone = true;
  size_t pointwise_violations = 0;
  bool sup_monotone = true;
  std::vector<ErrorReport::NEps> n_eps;
  std::vector<int> usc_certified_levels;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

DiniReport dini_harness(const Decomposition& dec,
                        std::span<const Rat> eps_list = default_eps_list(),
                        const OpennessAuditReport* openness = nullptr);

}  // namespace osid
