#include "osid/scalar_calculus.hpp"

#include <algorithm>
#include <random>

#include "osid/errors.hpp"

namespace osid {

ExpansionTrace expand_point(const Rat& v, std::span<const Rat> coeffs) {
  if (v < 0) throw ConfigError("expand_point requires v >= 0");
  ExpansionTrace t;
  t.v = v;
  t.bits.reserve(coeffs.size());
  t.partial_sums.reserve(coeffs.size());
  t.errors.reserve(coeffs.size());
  Rat s = 0;
  Rat e = v;
  for (const Rat& a : coeffs) {
    // v > a + s  <=>  e > a
    const bool fire = e > a;
    if (fire) {
      s += a;
      e -= a;
    }
    t.bits.push_back(fire ? 1 : 0);
    t.partial_sums.push_back(s);
    t.errors.push_back(e);
  }
  return t;
}

ExpansionTrace expand_point(const Rat& v, const CoefficientSequence& seq, int levels) {
  if (levels < 1) throw ConfigError("expand_point requires at least one level");
  std::vector<Rat> coeffs = seq.values(levels);
  return expand_point(v, coeffs);
}

const Rat& PiecewiseConstantProfile::value_at(const Rat& v) const {
  if (v < 0 || v > breakpoints.back())
    throw ConfigError("profile evaluated outside [0, vmax]");
  // First breakpoint >= v owns v (pieces are right-closed).
  size_t lo = 0, hi = breakpoints.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (breakpoints[mid] < v)
      lo = mid + 1;
    else
      hi = mid;
  }
  return values[lo];
}

LevelSets level_sets(const CoefficientSequence& seq, int levels, const Rat& vmax,
                     size_t piece_cap) {
  if (levels < 1) throw ConfigError("level_sets requires at least one level");
  if (vmax <= 0) throw ConfigError("level_sets requires vmax > 0");
  if (!seq.exact_rational())
    throw InexactSequence("level_sets requires an exactly-rational coefficient sequence");
  if (seq.horizon() < levels)
    throw ConfigError("sequence defines only " + std::to_string(seq.horizon()) + " terms, " +
                      std::to_string(levels) + " levels requested");

  const Rat degenerate_floor = vmax * rat(mpz_class(1), mpz_class(1) << 64);

  LevelSets out;
  out.vmax = vmax;
  out.requested_levels = levels;
  out.profile.breakpoints = {vmax};
  out.profile.values = {Rat(0)};
  out.profile.attach_low = {1};

  for (int n = 1; n <= levels; ++n) {
    const Rat a = seq.value(n);
    if (a < degenerate_floor) {
      out.notes.push_back("stopped before level " + std::to_string(n) + ": coefficient " +
                          rat_str(a) + " is below 2^-64 * vmax (precision guard)");
      break;
    }
    PiecewiseConstantProfile& prof = out.profile;
    PiecewiseConstantProfile next;
    next.breakpoints.reserve(prof.pieces() + 8);
    next.values.reserve(prof.pieces() + 8);
    RationalIntervalSet u;

    Rat lo = 0;  // lower bound of the current piece
    for (size_t i = 0; i < prof.pieces(); ++i) {
      const Rat& hi = prof.breakpoints[i];
      const Rat& c = prof.values[i];
      const Rat threshold = a + c;
      if (threshold >= hi) {
        // No member in this piece.
        next.breakpoints.push_back(hi);
        next.values.push_back(c);
      } else if (threshold <= lo) {
        // Whole piece fires.
        u.append({lo, hi, false, true});
        next.breakpoints.push_back(hi);
        next.values.push_back(c + a);
      } else {
        // Split at the threshold; (threshold, hi] fires.
        u.append({threshold, hi, false, true});
        next.breakpoints.push_back(threshold);
        next.values.push_back(c);
        next.breakpoints.push_back(hi);
        next.values.push_back(c + a);
      }
      lo = hi;
    }
    next.attach_low.assign(next.pieces(), 1);
    if (next.pieces() > piece_cap) throw PieceBudgetExceeded(next.pieces(), piece_cap);
    out.profile = std::move(next);
    out.levels.push_back(std::move(u));
    out.computed_levels = n;
  }
  if (out.computed_levels == 0)
    throw ConfigError("no level computed: first coefficient already below the precision guard");
  return out;
}

std::vector<Rat> uniform_error_bounds(std::span<const Rat> coeffs, const Rat& m) {
  std::vector<Rat> bounds;
  bounds.reserve(coeffs.size());
  Rat partial = 0;          // sum_{j<=n} a_j
  Rat running_max;          // max_{k<n} (a_k + sum_{j<=k} a_j)
  bool have_running = false;
  for (const Rat& a : coeffs) {
    const Rat partial_next = partial + a;
    Rat b = a;
    if (have_running) b = std::max(b, Rat(running_max - partial_next));
    b = std::max(b, Rat(m - partial_next));
    bounds.push_back(b);
    const Rat cand = a + partial_next;
    if (!have_running || cand > running_max) running_max = cand;
    have_running = true;
    partial = partial_next;
  }
  return bounds;
}

nlohmann::json OpennessAuditReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const Level& l : levels) {
    nlohmann::json witnesses = nlohmann::json::array();
    for (const Rat& w : l.witnesses) witnesses.push_back(rat_str(w));
    lv.push_back(nlohmann::json{{"index", l.index},
                                {"intervals", l.set.part_strings()},
                                {"open", l.open},
                                {"witnesses", witnesses}});
  }
  nlohmann::json j{
      {"levels", lv},
      {"first_non_open", first_non_open ? nlohmann::json(*first_non_open) : nlohmann::json()},
      {"vmax", rat_str(vmax)},
      {"tail_value", rat_str(tail_value)},
      {"requested_levels", requested_levels},
      {"cross_validation", nlohmann::json{{"samples", cross_validation_samples}, {"mismatches", 0}}},
      {"notes", notes},
  };
  return j;
}

OpennessAuditReport audit(const CoefficientSequence& seq, int levels, const Rat& vmax,
                          uint64_t seed, size_t samples, size_t piece_cap) {
  LevelSets ls = level_sets(seq, levels, vmax, piece_cap);

  OpennessAuditReport rep;
  rep.vmax = vmax;
  rep.requested_levels = levels;
  rep.tail_value = ls.profile.tail_value();
  rep.notes = ls.notes;
  for (int n = 1; n <= ls.computed_levels; ++n) {
    OpennessVerdict v = check_openness(ls.levels[n - 1], vmax);
    if (!v.open && !rep.first_non_open) rep.first_non_open = n;
    rep.levels.push_back({n, ls.levels[n - 1], v.open, std::move(v.witnesses)});
  }

  // Cross-validate set membership against the pointwise recursion on the
  // structurally interesting values (breakpoints, piece midpoints) plus
  // seeded uniform rationals.
  std::vector<Rat> probe;
  probe.push_back(Rat(0));
  Rat prev = 0;
  for (const Rat& b : ls.profile.breakpoints) {
    probe.push_back((prev + b) / 2);
    probe.push_back(b);
    prev = b;
  }
  std::mt19937_64 rng(seed);
  const mpz_class scale = mpz_class(1) << 32;
  while (probe.size() < samples) {
    mpz_class num(static_cast<unsigned long>(rng() & 0xffffffffull));
    probe.push_back(rat(num * vmax.get_num(), scale * vmax.get_den()));
  }

  std::vector<Rat> coeffs = seq.values(ls.computed_levels);
  for (const Rat& v : probe) {
    ExpansionTrace t = expand_point(v, coeffs);
    for (int n = 1; n <= ls.computed_levels; ++n) {
      const bool member = ls.levels[n - 1].contains(v);
      if (member != static_cast<bool>(t.bits[n - 1]))
        throw CrossValidationMismatch("level " + std::to_string(n) + " at v = " + rat_str(v) +
                                      ": set says " + (member ? "in" : "out") +
                                      ", recursion says " + (t.bits[n - 1] ? "in" : "out"));
    }
  }
  rep.cross_validation_samples = probe.size();
  return rep;
}

}  // namespace osid
