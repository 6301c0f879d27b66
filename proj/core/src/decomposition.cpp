#include "osid/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "osid/scalar_calculus.hpp"
#include "parallel.hpp"

namespace osid {

namespace {
// Block width for worker scheduling; a multiple of 64 so no two blocks share
// a mask word.
constexpr size_t kBlock = 1024;
}  // namespace

MaskSet::MaskSet(int levels, size_t nsamples)
    : levels_(levels),
      nsamples_(nsamples),
      words_per_level_((nsamples + 63) / 64),
      words_(static_cast<size_t>(levels) * words_per_level_, 0) {}

bool MaskSet::get(int level0, size_t sample) const {
  return (words_[level0 * words_per_level_ + sample / 64] >> (sample % 64)) & 1u;
}

void MaskSet::set(int level0, size_t sample) {
  words_[level0 * words_per_level_ + sample / 64] |= uint64_t{1} << (sample % 64);
}

void MaskSet::flip(int level0, size_t sample) {
  words_[level0 * words_per_level_ + sample / 64] ^= uint64_t{1} << (sample % 64);
}

size_t MaskSet::count(int level0) const {
  size_t total = 0;
  for (size_t w = 0; w < words_per_level_; ++w)
    total += std::popcount(words_[level0 * words_per_level_ + w]);
  return total;
}

std::span<const uint64_t> MaskSet::row(int level0) const {
  return {words_.data() + level0 * words_per_level_, words_per_level_};
}

uint64_t* MaskSet::mutable_row(int level0) { return words_.data() + level0 * words_per_level_; }

Decomposition decompose(const SampledDomain& domain, const FunctionAst* fn,
                        const CoefficientSequence& seq, int levels, int workers) {
  if (levels < 1) throw ConfigError("decompose requires at least one level");
  if (workers < 1) throw ConfigError("decompose requires at least one worker");
  if (seq.horizon() < levels)
    throw ConfigError("sequence defines only " + std::to_string(seq.horizon()) + " terms, " +
                      std::to_string(levels) + " levels requested");

  Decomposition dec;
  dec.domain = domain;
  dec.seq = seq;
  dec.levels = levels;
  dec.coeffs = seq.values(levels);

  const size_t n = domain.size();
  dec.values.resize(n);
  if (domain.has_embedded_values()) {
    dec.values = domain.embedded_values();
    for (size_t i = 0; i < n; ++i)
      if (dec.values[i] < 0 || !std::isfinite(dec.values[i]))
        throw NegativeValue({static_cast<double>(i)}, dec.values[i]);
  } else {
    if (!fn) throw ConfigError("grid domains need a function expression");
    dec.fn_text = fn->str();
    for (size_t i = 0; i < n; ++i) {
      const std::array<double, 2> p = domain.point(i);
      dec.values[i] = fn->evaluate(std::span<const double>(p.data(), domain.dim()));
    }
  }

  dec.masks = MaskSet(levels, n);
  const size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<Rat>> block_sup(nblocks);
  std::vector<size_t> block_fragile(nblocks, 0);

  detail::run_blocks(nblocks, workers, [&](size_t b) {
    const size_t begin = b * kBlock;
    const size_t end = std::min(begin + kBlock, n);
    std::vector<Rat> sup(levels, Rat(0));
    size_t fragile = 0;
    Rat e, d, ulp;
    for (size_t i = begin; i < end; ++i) {
      e = rat_from_double(dec.values[i]);
      ulp = rat_ulp(dec.values[i]);
      bool any_fragile = false;
      for (int lv = 0; lv < levels; ++lv) {
        // Fires iff e_{n-1} > a_n; d = e_{n-1} - a_n is the new error when
        // it does. Fragile when |d| <= one ulp of the sampled value
        // (sign == 0 means exactly on the threshold).
        d = e - dec.coeffs[lv];
        const int sign = sgn(d);
        if (!any_fragile && (sign == 0 || (sign > 0 ? d <= ulp : -d <= ulp)))
          any_fragile = true;
        if (sign > 0) {
          dec.masks.set(lv, i);
          swap(e, d);
        }
        if (e > sup[lv]) sup[lv] = e;
      }
      if (any_fragile) ++fragile;
    }
    block_sup[b] = std::move(sup);
    block_fragile[b] = fragile;
  });

  dec.sup_error.assign(levels, Rat(0));
  for (size_t b = 0; b < nblocks; ++b) {
    for (int lv = 0; lv < levels; ++lv)
      if (block_sup[b][lv] > dec.sup_error[lv]) dec.sup_error[lv] = block_sup[b][lv];
    dec.boundary_fragile += block_fragile[b];
  }

  dec.members.resize(levels);
  for (int lv = 0; lv < levels; ++lv) dec.members[lv] = dec.masks.count(lv);

  // Exact aggregates. Sample values are binary rationals, so the running sum
  // stays cheap; mean error per level follows from the member counts:
  //   mean e_n = mean f - sum_{j<=n} a_j * |G_j| / n_samples.
  Rat sum = 0;
  double vmax_d = 0;
  for (size_t i = 0; i < n; ++i) {
    sum += rat_from_double(dec.values[i]);
    if (dec.values[i] > vmax_d) vmax_d = dec.values[i];
  }
  dec.max_value = rat_from_double(vmax_d);
  dec.mean_value = sum / static_cast<long>(n);
  dec.mean_error.resize(levels);
  Rat acc = 0;
  for (int lv = 0; lv < levels; ++lv) {
    acc += dec.coeffs[lv] * static_cast<long>(dec.members[lv]);
    dec.mean_error[lv] = Rat(dec.mean_value - acc / static_cast<long>(n)).get_d();
  }
  return dec;
}

void ErrorReport::write_csv(std::ostream& out) const {
  out << "level,sup_error,mean_error,frac_in_G\n";
  char buf[128];
  for (const Row& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.level, r.sup_error, r.mean_error,
                  r.frac_in_g);
    out << buf;
  }
}

nlohmann::json ErrorReport::n_eps_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const NEps& e : n_eps)
    j[rat_str(e.eps)] = e.level ? nlohmann::json(*e.level) : nlohmann::json();
  return j;
}

ErrorReport error_report(const Decomposition& dec, std::span<const Rat> eps_list) {
  ErrorReport rep;
  const size_t n = dec.domain.size();
  rep.rows.reserve(dec.levels);
  for (int lv = 0; lv < dec.levels; ++lv)
    rep.rows.push_back({lv + 1, dec.sup_error[lv].get_d(), dec.mean_error[lv],
                        static_cast<double>(dec.members[lv]) / static_cast<double>(n)});
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
  return rep;
}

std::vector<Violation> verify_invariants(const Decomposition& dec, size_t max_violations,
                                         int workers) {
  const size_t n = dec.domain.size();
  const std::vector<Rat> bounds = uniform_error_bounds(dec.coeffs, dec.max_value);
  const size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<Violation>> per_block(nblocks);

  detail::run_blocks(nblocks, workers, [&](size_t b) {
    const size_t begin = b * kBlock;
    const size_t end = std::min(begin + kBlock, n);
    std::vector<Violation>& out = per_block[b];
    Rat e, prev;
    for (size_t i = begin; i < end && out.size() < max_violations; ++i) {
      const Rat v = rat_from_double(dec.values[i]);
      const int v_sign = sgn(v);
      e = v;
      for (int lv = 0; lv < dec.levels && out.size() < max_violations; ++lv) {
        const bool bit = dec.masks.get(lv, i);
        if (!bit && e > dec.coeffs[lv]) {
          out.push_back({i, lv + 1, "off_set_bound",
                         "f - S_" + std::to_string(lv) + " = " + rat_str(e) + " > a_" +
                             std::to_string(lv + 1) + " = " + rat_str(dec.coeffs[lv])});
        }
        prev = e;
        if (bit) e -= dec.coeffs[lv];
        if (e > prev)
          out.push_back({i, lv + 1, "monotonicity", "partial sum decreased"});
        const int e_sign = sgn(e);
        if (e_sign < 0) {
          out.push_back({i, lv + 1, "underapproximation",
                         "S exceeds f by " + rat_str(Rat(-e))});
        } else if (e_sign == 0 && v_sign > 0) {
          out.push_back({i, lv + 1, "strict_underapproximation", "S equals f > 0"});
        }
        if (e > bounds[lv]) {
          out.push_back({i, lv + 1, "uniform_bound",
                         "error " + rat_str(e) + " > bound " + rat_str(bounds[lv])});
        }
      }
    }
  });

  std::vector<Violation> all;
  for (std::vector<Violation>& blk : per_block) {
    for (Violation& v : blk) {
      if (all.size() >= max_violations) return all;
      all.push_back(std::move(v));
    }
  }
  return all;
}

void write_mask_pgm(const Decomposition& dec, int level, std::ostream& out) {
  if (dec.domain.kind() != SampledDomain::Kind::Grid2d)
    throw ConfigError("PGM mask export is defined for 2D grids only");
  if (level < 1 || level > dec.levels)
    throw ConfigError("mask level " + std::to_string(level) + " out of range");
  const int nx = dec.domain.npoints(0);
  const int ny = dec.domain.npoints(1);
  out << "P5\n" << nx << " " << ny << "\n255\n";
  std::vector<unsigned char> row(nx);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix)
      row[ix] = dec.masks.get(level - 1, static_cast<size_t>(iy) * nx + ix) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), nx);
  }
}

}  // namespace osid
