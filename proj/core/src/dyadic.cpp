#include "osid/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace osid {

double dyadic_value(double v, int n) {
  if (v < 0 || !std::isfinite(v)) throw ConfigError("dyadic_value requires finite v >= 0");
  if (n < 0) throw ConfigError("dyadic_value requires n >= 0");
  const double cap = std::ldexp(1.0, n);
  if (v >= cap) return cap;
  // v < 2^n keeps 2^n * v < 2^(2n); exact for the n used at desk scale.
  return std::ldexp(std::floor(std::ldexp(v, n)), -n);
}

Rat dyadic_value_exact(const Rat& v, int n) {
  if (v < 0) throw ConfigError("dyadic_value requires v >= 0");
  if (n < 0) throw ConfigError("dyadic_value requires n >= 0");
  const mpz_class pow2 = mpz_class(1) << n;
  if (v >= pow2) return Rat(pow2);
  const Rat scaled = v * pow2;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  return rat(fl, pow2);
}

void ComparisonReport::write_csv(std::ostream& out) const {
  out << "level,greedy_sup_error,dyadic_sup_error\n";
  std::map<int, std::pair<const double*, const double*>> rows;
  for (const Entry& e : greedy) rows[e.level].first = &e.sup_error;
  for (const Entry& e : dyadic) rows[e.level].second = &e.sup_error;
  char buf[128];
  for (const auto& [level, pair] : rows) {
    out << level << ",";
    if (pair.first) {
      std::snprintf(buf, sizeof buf, "%.17g", *pair.first);
      out << buf;
    }
    out << ",";
    if (pair.second) {
      std::snprintf(buf, sizeof buf, "%.17g", *pair.second);
      out << buf;
    }
    out << "\n";
  }
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (const Entry& e : greedy) g.push_back({{"level", e.level}, {"sup_error", e.sup_error}});
  nlohmann::json d = nlohmann::json::array();
  for (const Entry& e : dyadic) d.push_back({{"level", e.level}, {"sup_error", e.sup_error}});
  return nlohmann::json{{"greedy", g},
                        {"dyadic", d},
                        {"cap_note", cap_note},
                        {"structure_note", structure_note}};
}

ComparisonReport compare(const Decomposition& dec, std::span<const int> dyadic_levels) {
  ComparisonReport rep;
  rep.cap_note = "phi_n(v) = min(2^-n * floor(2^n * v), 2^n); cap value 2^n";
  rep.structure_note =
      "dyadic pieces are preimages of half-open intervals; greedy pieces are "
      "preimages of the audited level sets";
  for (int lv = 0; lv < dec.levels; ++lv)
    rep.greedy.push_back({lv + 1, dec.sup_error[lv].get_d()});
  for (int n : dyadic_levels) {
    Rat sup = 0;
    for (double value : dec.values) {
      const Rat v = rat_from_double(value);
      const Rat err = v - dyadic_value_exact(v, n);
      if (err > sup) sup = err;
    }
    rep.dyadic.push_back({n, sup.get_d()});
  }
  return rep;
}

}  // namespace osid
