#include "osid/minorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace osid {

double BumpSpec::profile(double t) const {
  const double t2 = t * t;
  if (t2 >= 1) return 0;
  return height * std::exp(1 - 1 / (1 - t2));
}

double BumpSpec::value(std::span<const double> x) const {
  double d2 = 0;
  for (int k = 0; k < dim; ++k) {
    const double d = x[k] - center[k];
    d2 += d * d;
  }
  const double t2 = d2 / (radius * radius);
  if (t2 >= 1) return 0;
  return height * std::exp(1 - 1 / (1 - t2));
}

nlohmann::json BumpSpec::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (int k = 0; k < dim; ++k) c.push_back(center[k]);
  return nlohmann::json{
      {"level", level}, {"center", c}, {"radius", radius}, {"height", height}};
}

std::vector<uint8_t> open_core(const LevelSets& ls, int level, std::span<const double> values) {
  if (level < 1 || level > ls.computed_levels)
    throw ConfigError("open_core level " + std::to_string(level) + " out of range");
  const RationalIntervalSet interior = ls.levels[level - 1].interior(ls.vmax);
  std::vector<uint8_t> mask(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i)
    mask[i] = interior.contains(rat_from_double(values[i])) ? 1 : 0;
  return mask;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One pass of the lower-envelope-of-parabolas squared distance transform
// along a line with uniform spacing h. f holds squared distances on input.
void edt_1d(std::span<const double> f, double h, std::span<double> out,
            std::vector<int>& hull, std::vector<double>& cross) {
  const int n = static_cast<int>(f.size());
  hull.assign(n, 0);
  cross.assign(n + 1, 0.0);
  int k = 0;
  hull[0] = 0;
  cross[0] = -kInf;
  cross[1] = kInf;
  auto meet = [&](int p, int q) {
    // Intersection abscissa (in index units) of parabolas rooted at p, q.
    return ((f[q] - f[p]) / (h * h) + static_cast<double>(q) * q - static_cast<double>(p) * p) /
           (2.0 * (q - p));
  };
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[hull[k]] == kInf) {
      hull[k] = q;
      continue;
    }
    double s = meet(hull[k], q);
    while (k > 0 && s <= cross[k]) {
      --k;
      s = meet(hull[k], q);
    }
    ++k;
    hull[k] = q;
    cross[k] = s;
    cross[k + 1] = kInf;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    if (f[hull[0]] == kInf) {
      out[q] = kInf;
      continue;
    }
    while (cross[j + 1] < q) ++j;
    const double dx = (q - hull[j]) * h;
    out[q] = dx * dx + f[hull[j]];
  }
}

}  // namespace

std::vector<double> distance_to_complement(std::span<const uint8_t> mask,
                                           const SampledDomain& grid) {
  if (!grid.is_grid()) throw ConfigError("distance transform needs a grid domain");
  if (mask.size() != grid.size()) throw ConfigError("mask size does not match grid");
  const int nx = grid.npoints(0);
  const int ny = grid.dim() == 2 ? grid.npoints(1) : 1;
  const double hx = grid.mesh(0);
  const double hy = grid.dim() == 2 ? grid.mesh(1) : 0;

  // Squared distance to the nearest zero sample.
  std::vector<double> sq(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) sq[i] = mask[i] ? kInf : 0.0;
  std::vector<double> tmp(std::max(nx, ny));
  std::vector<double> line(std::max(nx, ny));
  std::vector<int> hull;
  std::vector<double> cross;
  for (int iy = 0; iy < ny; ++iy) {
    std::span<double> row(sq.data() + static_cast<size_t>(iy) * nx, nx);
    edt_1d(row, hx, std::span<double>(tmp.data(), nx), hull, cross);
    std::copy_n(tmp.begin(), nx, row.begin());
  }
  if (ny > 1) {
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) line[iy] = sq[static_cast<size_t>(iy) * nx + ix];
      edt_1d(std::span<const double>(line.data(), ny), hy, std::span<double>(tmp.data(), ny), hull,
             cross);
      for (int iy = 0; iy < ny; ++iy) sq[static_cast<size_t>(iy) * nx + ix] = tmp[iy];
    }
  }

  // Combine with the distance to the box faces (off-box is complement).
  const double lo_x = grid.lo(0).get_d();
  const double hi_x = grid.hi(0).get_d();
  const double lo_y = grid.dim() == 2 ? grid.lo(1).get_d() : 0;
  const double hi_y = grid.dim() == 2 ? grid.hi(1).get_d() : 0;
  std::vector<double> out(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) {
      out[i] = 0;
      continue;
    }
    const std::array<double, 2> p = grid.point(i);
    double face = std::min(p[0] - lo_x, hi_x - p[0]);
    if (grid.dim() == 2) face = std::min({face, p[1] - lo_y, hi_y - p[1]});
    out[i] = std::min(sq[i] == kInf ? kInf : std::sqrt(sq[i]), face);
  }
  return out;
}

std::optional<InscribedBall> inscribe_ball(std::span<const uint8_t> mask,
                                           const SampledDomain& grid) {
  const std::vector<double> dist = distance_to_complement(mask, grid);
  size_t best = 0;
  double best_dist = -1;
  for (size_t i = 0; i < dist.size(); ++i) {
    if (mask[i] && dist[i] > best_dist) {
      best_dist = dist[i];
      best = i;
    }
  }
  if (best_dist < 0) return std::nullopt;
  const double h = grid.max_mesh();
  const double radius = best_dist - h;  // safety margin of one mesh width
  if (radius < 2 * h) return std::nullopt;
  return InscribedBall{best, radius};
}

nlohmann::json MinorantResult::to_json() const {
  nlohmann::json bump_list = nlohmann::json::array();
  for (const BumpSpec& b : bumps) bump_list.push_back(b.to_json());
  return nlohmann::json{
      {"bumps", bump_list},
      {"skipped_levels", skipped_levels},
      {"residual", nlohmann::json{{"sup", sup_residual},
                                  {"mean", mean_residual},
                                  {"samples", samples_checked}}},
      {"levels_requested", levels_requested},
      {"levels_computed", levels_computed},
      {"vmax", rat_str(vmax)},
      {"notes", notes},
  };
}

MinorantResult minorize(const SampledDomain& box, const FunctionAst& fn,
                        const CoefficientSequence& seq, int levels,
                        const std::optional<Rat>& vmax_override, int workers) {
  if (!box.is_grid()) throw ConfigError("minorize needs a box grid domain (dimension 1 or 2)");
  Decomposition dec = decompose(box, &fn, seq, levels, workers);

  MinorantResult result;
  result.levels_requested = levels;
  Rat vmax = vmax_override ? *vmax_override : Rat(dec.max_value * rat(11, 10));
  if (vmax <= 0) {
    vmax = 1;
    result.notes.push_back("function vanishes on every sample; using vmax = 1");
  }
  result.vmax = vmax;

  LevelSets ls = level_sets(seq, levels, vmax);
  result.levels_computed = ls.computed_levels;
  for (const std::string& note : ls.notes) result.notes.push_back(note);

  for (int j = 1; j <= ls.computed_levels; ++j) {
    const std::vector<uint8_t> core = open_core(ls, j, dec.values);
    const std::optional<InscribedBall> ball = inscribe_ball(core, box);
    if (!ball) {
      result.skipped_levels.push_back(j);
      continue;
    }
    BumpSpec bump;
    bump.level = j;
    bump.dim = box.dim();
    const std::array<double, 2> c = box.point(ball->center_sample);
    bump.center = c;
    bump.radius = ball->radius;
    // Height rounds down so it never exceeds the exact coefficient.
    double height = dec.coeffs[j - 1].get_d();
    while (rat_from_double(height) > dec.coeffs[j - 1]) height = std::nextafter(height, 0.0);
    bump.height = height;
    result.bumps.push_back(bump);
  }

  // Domination chain, exact at every sample: sum_j B_j <= S_N <= f. Bumps
  // evaluate in double; their exact binary-rational values are what gets
  // summed and compared.
  const size_t n = box.size();
  constexpr size_t block = 1024;
  const size_t nblocks = (n + block - 1) / block;
  std::vector<Rat> block_residual_sum(nblocks, Rat(0));
  std::vector<Rat> block_residual_sup(nblocks, Rat(0));
  detail::run_blocks(nblocks, workers, [&](size_t b) {
    const size_t begin = b * block;
    const size_t end = std::min(begin + block, n);
    Rat sum_local = 0;
    Rat sup_local = 0;
    for (size_t i = begin; i < end; ++i) {
      const std::array<double, 2> p = box.point(i);
      Rat bump_sum = 0;
      for (const BumpSpec& bump : result.bumps) {
        const double value = bump.value(std::span<const double>(p.data(), box.dim()));
        if (value > 0) bump_sum += rat_from_double(value);
      }
      Rat s_n = 0;
      for (int lv = 0; lv < dec.levels; ++lv)
        if (dec.masks.get(lv, i)) s_n += dec.coeffs[lv];
      const Rat v = rat_from_double(dec.values[i]);
      if (bump_sum > s_n || s_n > v)
        throw DominationViolation("domination chain broken at sample " + std::to_string(i) +
                                  ": sum of bumps " + rat_str(bump_sum) + ", partial sum " +
                                  rat_str(s_n) + ", value " + rat_str(v));
      const Rat residual = v - bump_sum;
      sum_local += residual;
      if (residual > sup_local) sup_local = residual;
    }
    block_residual_sum[b] = std::move(sum_local);
    block_residual_sup[b] = std::move(sup_local);
  });
  Rat total = 0;
  Rat sup = 0;
  for (size_t b = 0; b < nblocks; ++b) {
    total += block_residual_sum[b];
    if (block_residual_sup[b] > sup) sup = block_residual_sup[b];
  }
  result.sup_residual = sup.get_d();
  result.mean_residual = Rat(total / static_cast<long>(n)).get_d();
  result.samples_checked = n;
  return result;
}

}  // namespace osid
