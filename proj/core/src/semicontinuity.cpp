#include "osid/semicontinuity.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace osid {

SemicontinuityVerdict scalar_lsc_verdict(const RationalIntervalSet& u,
                                         const std::optional<Rat>& ambient_hi) {
  OpennessVerdict open = check_openness(u, ambient_hi);
  SemicontinuityVerdict v;
  v.mode = ScMode::Lsc;
  v.method = SemicontinuityVerdict::Method::ExactScalar;
  v.outcome = open.open ? SemicontinuityVerdict::Outcome::Holds
                        : SemicontinuityVerdict::Outcome::Fails;
  v.scalar_witnesses = std::move(open.witnesses);
  return v;
}

namespace {

// Neighborhood extreme of g over samples y != x with d(x, y) <= radius.
// Grid-only; offsets precomputed once per radius.
struct NeighborStencil {
  std::vector<std::pair<int, int>> offsets;  // (dix, diy)
  NeighborStencil(const SampledDomain& grid, double radius) {
    const double hx = grid.mesh(0);
    const double hy = grid.dim() == 2 ? grid.mesh(1) : 1.0;
    const int kx = static_cast<int>(radius / hx + 1e-9);
    const int ky = grid.dim() == 2 ? static_cast<int>(radius / hy + 1e-9) : 0;
    const double r2 = radius * radius * (1 + 1e-12);
    for (int dy = -ky; dy <= ky; ++dy)
      for (int dx = -kx; dx <= kx; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const double d2 = dx * hx * dx * hx + dy * hy * dy * hy;
        if (d2 <= r2) offsets.emplace_back(dx, dy);
      }
  }
};

double defect_at(const SampledDomain& grid, const std::vector<double>& samples,
                 const NeighborStencil& stencil, ScMode mode, size_t i) {
  const int nx = grid.npoints(0);
  const int ny = grid.dim() == 2 ? grid.npoints(1) : 1;
  const int ix = static_cast<int>(i % static_cast<size_t>(nx));
  const int iy = static_cast<int>(i / static_cast<size_t>(nx));
  bool any = false;
  double extreme = 0;
  for (const auto& [dx, dy] : stencil.offsets) {
    const int jx = ix + dx;
    const int jy = iy + dy;
    if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
    const double gy = samples[static_cast<size_t>(jy) * nx + jx];
    if (!any) {
      extreme = gy;
      any = true;
    } else {
      extreme = mode == ScMode::Lsc ? std::min(extreme, gy) : std::max(extreme, gy);
    }
  }
  if (!any) return 0;
  const double gx = samples[i];
  return mode == ScMode::Lsc ? gx - extreme : extreme - gx;
}

std::vector<double> evaluate_on_grid(const SampledDomain& grid, const GridFunction& g) {
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const std::array<double, 2> p = grid.point(i);
    out[i] = g(p[0], p[1]);
  }
  return out;
}

SampledDomain refine_once(const SampledDomain& grid) {
  if (grid.kind() == SampledDomain::Kind::Grid1d)
    return SampledDomain::grid1d(grid.lo(0), grid.hi(0), 2 * grid.npoints(0) - 1);
  return SampledDomain::grid2d(grid.lo(0), grid.hi(0), 2 * grid.npoints(0) - 1,
                               2 * grid.npoints(1) - 1);
}

}  // namespace

DefectField sampled_defect(const SampledDomain& grid, const GridFunction& g, ScMode mode,
                           double radius, double threshold) {
  if (!grid.is_grid()) throw ConfigError("sampled_defect needs a grid domain");
  const double h = grid.max_mesh();
  if (radius < h * (1 - 1e-12))
    throw RadiusBelowMesh("defect radius " + std::to_string(radius) + " is below the mesh " +
                          std::to_string(h));

  DefectField field;
  field.threshold = threshold;
  field.radii = {radius, 2 * radius, 4 * radius};
  const std::vector<double> samples = evaluate_on_grid(grid, g);
  for (double r : field.radii) {
    NeighborStencil stencil(grid, r);
    std::vector<double> d(grid.size());
    constexpr size_t block = 4096;
    const size_t nblocks = (grid.size() + block - 1) / block;
    detail::run_blocks(nblocks, 1, [&](size_t b) {
      const size_t begin = b * block;
      const size_t end = std::min(begin + block, grid.size());
      for (size_t i = begin; i < end; ++i) d[i] = defect_at(grid, samples, stencil, mode, i);
    });
    field.defect.push_back(std::move(d));
  }

  // Persistence: survive refinement at half mesh / half radius.
  std::vector<size_t> candidates;
  for (size_t i = 0; i < grid.size(); ++i)
    if (field.defect[0][i] > threshold) candidates.push_back(i);
  if (!candidates.empty()) {
    const SampledDomain fine = refine_once(grid);
    const std::vector<double> fine_samples = evaluate_on_grid(fine, g);
    const double fine_radius = std::max(fine.max_mesh(), radius / 2);
    NeighborStencil stencil(fine, fine_radius);
    for (size_t i : candidates) {
      // Every working sample is a refined sample at doubled indices.
      const int nx = grid.npoints(0);
      const size_t ix = i % static_cast<size_t>(nx);
      const size_t iy = i / static_cast<size_t>(nx);
      const size_t fine_i = 2 * iy * static_cast<size_t>(fine.npoints(0)) + 2 * ix;
      if (defect_at(fine, fine_samples, stencil, mode, fine_i) > threshold)
        field.persistent.push_back(i);
    }
  }
  return field;
}

nlohmann::json DiniReport::to_json() const {
  nlohmann::json eps = nlohmann::json::object();
  for (const ErrorReport::NEps& e : n_eps)
    eps[rat_str(e.eps)] = e.level ? nlohmann::json(*e.level) : nlohmann::json();
  return nlohmann::json{
      {"monotone", pointwise_monotone},
      {"pointwise_violations", pointwise_violations},
      {"sup_monotone", sup_monotone},
      {"N_eps", eps},
      {"usc_certified_levels", usc_certified_levels},
      {"notes", notes},
  };
}

DiniReport dini_harness(const Decomposition& dec, std::span<const Rat> eps_list,
                        const OpennessAuditReport* openness) {
  if (dec.levels < 2) throw ConfigError("dini_harness needs at least 2 levels");
  DiniReport rep;

  // Pointwise monotonicity is exact: e_n - e_{n+1} = a_{n+1} * bit, so a
  // violation at a sample requires a negative coefficient; count those bits.
  for (int lv = 0; lv < dec.levels; ++lv)
    if (dec.coeffs[lv] < 0) rep.pointwise_violations += dec.members[lv];
  rep.pointwise_monotone = rep.pointwise_violations == 0;
  if (!rep.pointwise_monotone)
    throw MonotonicityViolation("pointwise error increased at " +
                                std::to_string(rep.pointwise_violations) + " sample-levels");

  for (int lv = 1; lv < dec.levels; ++lv) {
    if (dec.sup_error[lv] > dec.sup_error[lv - 1]) {
      rep.sup_monotone = false;
      throw MonotonicityViolation("sup error curve increased at level " + std::to_string(lv + 1));
    }
  }

  for (const Rat& eps : eps_list) {
    std::optional<int> hit;
    for (int lv = 0; lv < dec.levels; ++lv) {
      if (dec.sup_error[lv] <= eps) {
        hit = lv + 1;
        break;
      }
    }
    rep.n_eps.push_back({eps, hit});
  }

  if (dec.domain.kind() == SampledDomain::Kind::FiniteMetric) {
    for (int n = 1; n <= dec.levels; ++n) rep.usc_certified_levels.push_back(n);
    rep.notes.push_back(
        "finite metric space: every subset is open, so every partial sum is "
        "lower semicontinuous and every f - S_n upper semicontinuous");
  } else if (openness) {
    int certified = openness->first_non_open ? *openness->first_non_open - 1
                                             : static_cast<int>(openness->levels.size());
    for (int n = 1; n <= std::min(certified, dec.levels); ++n)
      rep.usc_certified_levels.push_back(n);
    if (openness->first_non_open && *openness->first_non_open <= dec.levels) {
      rep.notes.push_back("scalar level set at level " +
                          std::to_string(*openness->first_non_open) +
                          " is not relatively open: the upper-semicontinuity hypothesis of the "
                          "monotone-convergence route is not certified from there on; the "
                          "per-level uniform error bound still certifies uniform convergence");
    }
    if (static_cast<int>(openness->levels.size()) < dec.levels)
      rep.notes.push_back("openness audited for " + std::to_string(openness->levels.size()) +
                          " of " + std::to_string(dec.levels) + " levels");
  } else {
    rep.notes.push_back(
        "no openness audit supplied (sequence not exactly rational?); "
        "semicontinuity of the partial sums not certified");
  }
  return rep;
}

}  // namespace osid
