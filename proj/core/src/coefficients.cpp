#include "osid/coefficients.hpp"

#include <mpfr.h>

#include <algorithm>
#include <fstream>

namespace osid {

namespace {

const Rat& term_enclosure_error() {
  // 2^-64; Power terms are computed at 192-bit precision, far inside this.
  static const Rat eps = rat(mpz_class(1), mpz_class(1) << 64);
  return eps;
}

// j^-p at 192-bit precision, returned as the exact rational value of the
// rounded result. |result - j^-p| < 2^-64 absolutely since j^-p <= 1.
Rat power_term(unsigned long j, const Rat& p) {
  mpfr_t base, expo, out;
  mpfr_init2(base, 192);
  mpfr_init2(expo, 192);
  mpfr_init2(out, 192);
  mpfr_set_ui(base, j, MPFR_RNDN);
  mpfr_set_q(expo, Rat(-p).get_mpq_t(), MPFR_RNDN);
  mpfr_pow(out, base, expo, MPFR_RNDN);
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, out);
  Rat result(q);
  mpq_clear(q);
  mpfr_clears(base, expo, out, nullptr);
  return result;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Harmonic: return "harmonic";
    case Family::Power: return "power";
    case Family::ScaledHarmonic: return "scaled-harmonic";
    case Family::ExplicitPrefix: return "explicit-prefix";
  }
  return "?";
}

std::string tail_name(TailFamily f) {
  switch (f) {
    case TailFamily::Harmonic: return "harmonic";
    case TailFamily::ScaledHarmonic: return "scaled-harmonic";
    case TailFamily::Power: return "power";
    case TailFamily::Geometric: return "geometric";
    case TailFamily::None: return "none";
  }
  return "?";
}

}  // namespace

CoefficientSequence CoefficientSequence::harmonic() {
  CoefficientSequence s;
  s.family_ = Family::Harmonic;
  return s;
}

CoefficientSequence CoefficientSequence::power(const Rat& p) {
  if (p <= 0) throw IllegalFamilyParam("power family needs p > 0 (terms must vanish)");
  if (p > 1) throw IllegalFamilyParam("power family needs p <= 1 (series must diverge)");
  CoefficientSequence s;
  s.family_ = Family::Power;
  s.param_ = p;
  return s;
}

CoefficientSequence CoefficientSequence::scaled_harmonic(const Rat& c) {
  if (c <= 0) throw IllegalFamilyParam("scaled-harmonic family needs c > 0");
  CoefficientSequence s;
  s.family_ = Family::ScaledHarmonic;
  s.param_ = c;
  return s;
}

CoefficientSequence CoefficientSequence::explicit_prefix(std::vector<Rat> prefix,
                                                         Continuation tail) {
  for (const Rat& a : prefix)
    if (a <= 0) throw IllegalFamilyParam("explicit prefix terms must be positive");
  switch (tail.family) {
    case TailFamily::ScaledHarmonic:
      if (tail.param <= 0) throw IllegalFamilyParam("scaled-harmonic continuation needs c > 0");
      break;
    case TailFamily::Power:
      if (tail.param <= 0 || tail.param > 1)
        throw IllegalFamilyParam("power continuation needs 0 < p <= 1");
      break;
    case TailFamily::Geometric:
      if (tail.param <= 0) throw IllegalFamilyParam("geometric continuation needs ratio r > 0");
      if (prefix.empty())
        throw IllegalFamilyParam("geometric continuation needs a nonempty prefix to continue");
      break;
    case TailFamily::Harmonic:
    case TailFamily::None:
      break;
  }
  CoefficientSequence s;
  s.family_ = Family::ExplicitPrefix;
  s.prefix_ = std::move(prefix);
  s.tail_ = std::move(tail);
  return s;
}

Rat CoefficientSequence::value(int j) const {
  if (j < 1) throw ConfigError("coefficient index starts at 1");
  switch (family_) {
    case Family::Harmonic:
      return rat(1, j);
    case Family::ScaledHarmonic:
      return param_ / j;
    case Family::Power:
      if (param_ == 1) return rat(1, j);
      return power_term(static_cast<unsigned long>(j), param_);
    case Family::ExplicitPrefix: {
      if (j <= static_cast<int>(prefix_.size())) return prefix_[j - 1];
      switch (tail_.family) {
        case TailFamily::Harmonic:
          return rat(1, j);
        case TailFamily::ScaledHarmonic:
          return tail_.param / j;
        case TailFamily::Power:
          if (tail_.param == 1) return rat(1, j);
          return power_term(static_cast<unsigned long>(j), tail_.param);
        case TailFamily::Geometric: {
          Rat t = prefix_.back();
          int k = j - static_cast<int>(prefix_.size());
          mpz_class rn = tail_.param.get_num();
          mpz_class rd = tail_.param.get_den();
          mpz_class pn, pd;
          mpz_pow_ui(pn.get_mpz_t(), rn.get_mpz_t(), k);
          mpz_pow_ui(pd.get_mpz_t(), rd.get_mpz_t(), k);
          return t * rat(pn, pd);
        }
        case TailFamily::None:
          throw ConfigError("coefficient " + std::to_string(j) +
                            " is undefined: explicit prefix of length " +
                            std::to_string(prefix_.size()) + " has no continuation");
      }
      break;
    }
  }
  throw ConfigError("unreachable coefficient family");
}

std::vector<Rat> CoefficientSequence::values(int count) const {
  if (count < 0) throw ConfigError("negative coefficient count");
  std::vector<Rat> out;
  out.reserve(count);
  for (int j = 1; j <= count; ++j) out.push_back(value(j));
  return out;
}

bool CoefficientSequence::exact_rational() const {
  auto exact_power = [](const Rat& p) { return p == 1; };
  switch (family_) {
    case Family::Harmonic:
    case Family::ScaledHarmonic:
      return true;
    case Family::Power:
      return exact_power(param_);
    case Family::ExplicitPrefix:
      return tail_.family != TailFamily::Power || exact_power(tail_.param);
  }
  return false;
}

Rat CoefficientSequence::term_error() const {
  return exact_rational() ? Rat(0) : term_enclosure_error();
}

int CoefficientSequence::horizon() const {
  if (family_ == Family::ExplicitPrefix && tail_.family == TailFamily::None)
    return static_cast<int>(prefix_.size());
  return std::numeric_limits<int>::max();
}

nlohmann::json CoefficientSequence::descriptor() const {
  nlohmann::json params = nlohmann::json::object();
  switch (family_) {
    case Family::Harmonic:
      break;
    case Family::Power:
      params["p"] = rat_str(param_);
      if (!exact_rational()) params["precision"] = rat_str(term_enclosure_error());
      break;
    case Family::ScaledHarmonic:
      params["c"] = rat_str(param_);
      break;
    case Family::ExplicitPrefix: {
      nlohmann::json pre = nlohmann::json::array();
      for (const Rat& a : prefix_) pre.push_back(rat_str(a));
      params["prefix"] = pre;
      nlohmann::json cont;
      cont["family"] = tail_name(tail_.family);
      if (tail_.family == TailFamily::ScaledHarmonic) cont["c"] = rat_str(tail_.param);
      if (tail_.family == TailFamily::Power) cont["p"] = rat_str(tail_.param);
      if (tail_.family == TailFamily::Geometric) cont["r"] = rat_str(tail_.param);
      params["continuation"] = cont;
      break;
    }
  }
  return nlohmann::json{{"family", family_name(family_)}, {"params", params}};
}

CoefficientSequence CoefficientSequence::from_descriptor(const nlohmann::json& j) {
  const std::string fam = j.at("family").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto param = [&](const nlohmann::json& src, const char* key) {
    return rat_parse(src.at(key).get<std::string>());
  };
  if (fam == "harmonic") return harmonic();
  if (fam == "power") return power(param(params, "p"));
  if (fam == "scaled-harmonic") return scaled_harmonic(param(params, "c"));
  if (fam == "explicit-prefix") {
    std::vector<Rat> prefix;
    for (const auto& t : params.at("prefix")) prefix.push_back(rat_parse(t.get<std::string>()));
    const nlohmann::json cont = params.at("continuation");
    const std::string tf = cont.at("family").get<std::string>();
    Continuation tail;
    if (tf == "harmonic") {
      tail.family = TailFamily::Harmonic;
    } else if (tf == "scaled-harmonic") {
      tail = {TailFamily::ScaledHarmonic, param(cont, "c")};
    } else if (tf == "power") {
      tail = {TailFamily::Power, param(cont, "p")};
    } else if (tf == "geometric") {
      tail = {TailFamily::Geometric, param(cont, "r")};
    } else if (tf == "none") {
      tail.family = TailFamily::None;
    } else {
      throw ConfigError("unknown continuation family '" + tf + "'");
    }
    return explicit_prefix(std::move(prefix), tail);
  }
  throw ConfigError("unknown coefficient family '" + fam + "'");
}

CoefficientSequence CoefficientSequence::parse(const std::string& spec) {
  if (spec.empty()) throw ConfigError("empty coefficient spec");
  if (spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw ConfigError("cannot read coefficient descriptor " + spec.substr(1));
    nlohmann::json j;
    in >> j;
    return from_descriptor(j);
  }
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
      size_t pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  auto keyed = [&](const std::string& part, const std::string& key) {
    if (part.rfind(key + "=", 0) != 0)
      throw ConfigError("expected '" + key + "=<rational>' in coefficient spec, got '" + part + "'");
    return rat_parse(part.substr(key.size() + 1));
  };
  std::vector<std::string> parts = split(spec, ':');
  const std::string& head = parts[0];
  if (head == "harmonic") {
    if (parts.size() != 1) throw ConfigError("harmonic takes no parameters");
    return harmonic();
  }
  if (head == "power") {
    if (parts.size() != 2) throw ConfigError("usage: power:p=<rational>");
    return power(keyed(parts[1], "p"));
  }
  if (head == "scaled-harmonic") {
    if (parts.size() != 2) throw ConfigError("usage: scaled-harmonic:c=<rational>");
    return scaled_harmonic(keyed(parts[1], "c"));
  }
  if (head == "explicit" || head == "explicit-prefix") {
    if (parts.size() < 3)
      throw ConfigError("usage: explicit:<r1>,<r2>,...:<continuation>[:<param>]");
    std::vector<Rat> prefix;
    for (const std::string& t : split(parts[1], ',')) prefix.push_back(rat_parse(t));
    const std::string& tf = parts[2];
    Continuation tail;
    if (tf == "harmonic") {
      tail.family = TailFamily::Harmonic;
      if (parts.size() != 3) throw ConfigError("harmonic continuation takes no parameter");
    } else if (tf == "none") {
      tail.family = TailFamily::None;
      if (parts.size() != 3) throw ConfigError("none continuation takes no parameter");
    } else if (tf == "scaled-harmonic") {
      if (parts.size() != 4) throw ConfigError("usage: ...:scaled-harmonic:c=<rational>");
      tail = {TailFamily::ScaledHarmonic, keyed(parts[3], "c")};
    } else if (tf == "power") {
      if (parts.size() != 4) throw ConfigError("usage: ...:power:p=<rational>");
      tail = {TailFamily::Power, keyed(parts[3], "p")};
    } else if (tf == "geometric") {
      if (parts.size() != 4) throw ConfigError("usage: ...:geometric:r=<rational>");
      tail = {TailFamily::Geometric, keyed(parts[3], "r")};
    } else {
      throw ConfigError("unknown continuation family '" + tf + "'");
    }
    return explicit_prefix(std::move(prefix), tail);
  }
  throw ConfigError("unknown coefficient family '" + head + "'");
}

std::string CoefficientSequence::display() const {
  switch (family_) {
    case Family::Harmonic:
      return "harmonic";
    case Family::Power:
      return "power(p=" + rat_str(param_) + ")";
    case Family::ScaledHarmonic:
      return "scaled-harmonic(c=" + rat_str(param_) + ")";
    case Family::ExplicitPrefix:
      return "explicit-prefix(" + std::to_string(prefix_.size()) + " terms, " +
             tail_name(tail_.family) + " tail)";
  }
  return "?";
}

std::string ValidationReport::verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ProvenByFamily: return "proven-by-family";
    case Verdict::HeuristicPass: return "heuristic-pass";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

nlohmann::json ValidationReport::to_json() const {
  return nlohmann::json{
      {"verdict", verdict_name(verdict)},
      {"horizon", horizon},
      {"positive", positive},
      {"trending_to_zero", trending_to_zero},
      {"first_term", rat_str(first_term)},
      {"last_term", rat_str(last_term)},
      {"partial_sum", rat_str(partial_sum)},
      {"second_half_growth", rat_str(second_half_growth)},
      {"issues", issues},
  };
}

ValidationReport validate(const CoefficientSequence& seq, int horizon) {
  if (horizon < 1) throw ConfigError("validation horizon must be >= 1");
  ValidationReport rep;
  rep.horizon = std::min(horizon, seq.horizon());
  if (rep.horizon < horizon)
    rep.issues.push_back("horizon truncated to prefix length " + std::to_string(rep.horizon) +
                         " (no declared continuation)");

  std::vector<Rat> a = seq.values(rep.horizon);
  rep.first_term = a.front();
  rep.last_term = a.back();
  rep.positive = std::all_of(a.begin(), a.end(), [](const Rat& t) { return t > 0; });
  if (!rep.positive) rep.issues.push_back("nonpositive term inside the horizon");

  Rat sum = 0;
  Rat half_sum = 0;
  for (int j = 0; j < rep.horizon; ++j) {
    sum += a[j];
    if (j < rep.horizon / 2) half_sum = sum;
  }
  rep.partial_sum = sum;
  rep.second_half_growth = sum - half_sum;

  // Trend: the tail quarter should sit strictly below the head quarter.
  if (rep.horizon >= 4) {
    int q = rep.horizon / 4;
    Rat head_max = a[0];
    for (int j = 0; j < q; ++j) head_max = std::max(head_max, a[j]);
    Rat tail_max = a[rep.horizon - 1];
    for (int j = rep.horizon - q; j < rep.horizon; ++j) tail_max = std::max(tail_max, a[j]);
    rep.trending_to_zero = tail_max < head_max;
  } else {
    rep.trending_to_zero = a.back() <= a.front();
  }

  // Divergence/vanishing certificate from the declared family.
  enum class Cert { Diverges, Converges, NotVanishing, Unknown };
  Cert cert = Cert::Diverges;
  if (seq.family() == Family::ExplicitPrefix) {
    switch (seq.continuation().family) {
      case TailFamily::Harmonic:
      case TailFamily::ScaledHarmonic:
      case TailFamily::Power:
        cert = Cert::Diverges;
        break;
      case TailFamily::Geometric:
        cert = seq.continuation().param < 1 ? Cert::Converges : Cert::NotVanishing;
        break;
      case TailFamily::None:
        cert = Cert::Unknown;
        break;
    }
  }

  if (!rep.positive) {
    rep.verdict = ValidationReport::Verdict::Fail;
  } else if (cert == Cert::Converges) {
    rep.verdict = ValidationReport::Verdict::Fail;
    rep.issues.push_back("convergent continuation: geometric tail with ratio < 1");
  } else if (cert == Cert::NotVanishing) {
    rep.verdict = ValidationReport::Verdict::Fail;
    rep.issues.push_back("continuation does not vanish: geometric tail with ratio >= 1");
  } else if (cert == Cert::Diverges) {
    rep.verdict = ValidationReport::Verdict::ProvenByFamily;
  } else if (rep.trending_to_zero) {
    rep.verdict = ValidationReport::Verdict::HeuristicPass;
    rep.issues.push_back("divergence undecidable without a declared continuation");
  } else {
    rep.verdict = ValidationReport::Verdict::Fail;
    rep.issues.push_back("no decreasing trend toward zero over the horizon");
  }
  return rep;
}

}  // namespace osid
