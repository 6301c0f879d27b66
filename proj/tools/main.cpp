// Batch front end: decompose / audit / compare / smooth / validate-seq.
// Artifacts (JSON, CSV, PGM) are byte-identical for a fixed config and seed
// regardless of --workers; timing goes to stderr only.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "osid/coefficients.hpp"
#include "osid/decomposition.hpp"
#include "osid/domain.hpp"
#include "osid/dyadic.hpp"
#include "osid/expr.hpp"
#include "osid/minorant.hpp"
#include "osid/scalar_calculus.hpp"
#include "osid/semicontinuity.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;
constexpr int kExitNegative = 4;

struct Options {
  std::string fn;
  std::string domain;
  std::string coeffs;
  int levels = 200;
  std::string vmax;
  std::string out_json;
  std::string out_csv;
  std::string masks;
  std::string mask_dir = ".";
  int workers = 1;
  uint64_t seed = 0;
  int horizon = 100;
  std::string dyadic_levels = "1..12";
  size_t audit_samples = 10'000;
};

nlohmann::json meta_block(const std::string& subcommand, const nlohmann::json& config) {
  return nlohmann::json{{"tool", "osid"},
                        {"version", kVersion},
                        {"subcommand", subcommand},
                        {"config", config}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw osid::ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<int> parse_level_list(const std::string& spec) {
  std::vector<int> out;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t comma = spec.find(',', start);
    std::string item = spec.substr(start, comma == std::string::npos ? comma : comma - start);
    if (item.empty()) throw osid::ConfigError("empty entry in level list '" + spec + "'");
    size_t dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        if (hi < lo) throw osid::ConfigError("descending range in '" + item + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const osid::ConfigError&) {
      throw;
    } catch (...) {
      throw osid::ConfigError("malformed level list entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct DecomposeInputs {
  osid::SampledDomain domain;
  std::optional<osid::FunctionAst> fn;
  osid::CoefficientSequence seq;
};

DecomposeInputs resolve_inputs(const Options& opt) {
  if (opt.domain.empty()) throw osid::ConfigError("--domain is required");
  if (opt.coeffs.empty()) throw osid::ConfigError("--coeffs is required");
  DecomposeInputs in{osid::SampledDomain::parse(opt.domain), std::nullopt,
                     osid::CoefficientSequence::parse(opt.coeffs)};
  if (in.domain.has_embedded_values()) {
    if (!opt.fn.empty())
      throw osid::ConfigError("finite metric domains take values from the file; drop --fn");
  } else {
    if (opt.fn.empty()) throw osid::ConfigError("--fn is required for grid domains");
    in.fn = osid::parse_function(opt.fn, in.domain.dim());
  }
  return in;
}

nlohmann::json config_echo(const Options& opt, const osid::CoefficientSequence& seq,
                           bool with_fn = true) {
  nlohmann::json cfg{{"coeffs", seq.descriptor()}, {"levels", opt.levels}, {"seed", opt.seed}};
  if (!opt.domain.empty()) cfg["domain"] = opt.domain;
  if (with_fn && !opt.fn.empty()) cfg["fn"] = opt.fn;
  if (!opt.vmax.empty()) cfg["vmax"] = opt.vmax;
  return cfg;
}

int run_decompose(const Options& opt) {
  DecomposeInputs in = resolve_inputs(opt);
  osid::Decomposition dec = osid::decompose(
      in.domain, in.fn ? &*in.fn : nullptr, in.seq, opt.levels, opt.workers);
  osid::ErrorReport errors = osid::error_report(dec);
  std::vector<osid::Violation> violations = osid::verify_invariants(dec, 128, opt.workers);

  // Scalar openness audit feeds the convergence harness when the sequence is
  // exactly rational; vmax covers the sampled range with a 10% margin.
  std::optional<osid::OpennessAuditReport> openness;
  if (in.seq.exact_rational() && in.domain.is_grid()) {
    osid::Rat vmax = opt.vmax.empty() ? osid::Rat(dec.max_value * osid::rat(11, 10))
                                      : osid::rat_parse(opt.vmax);
    if (vmax <= 0) vmax = 1;
    openness = osid::audit(in.seq, opt.levels, vmax, opt.seed, opt.audit_samples);
  }
  osid::DiniReport dini =
      osid::dini_harness(dec, osid::default_eps_list(), openness ? &*openness : nullptr);

  nlohmann::json summary{
      {"meta", meta_block("decompose", config_echo(opt, in.seq, !opt.fn.empty()))},
      {"domain", in.domain.descriptor_json()},
      {"sequence", in.seq.descriptor()},
      {"levels", dec.levels},
      {"fn", dec.fn_text},
      {"max_value", osid::rat_str(dec.max_value)},
      {"N_eps", errors.n_eps_json()},
      {"boundary_fragile_samples", dec.boundary_fragile},
      {"dini", dini.to_json()},
  };
  if (openness) {
    summary["openness"] = nlohmann::json{
        {"audited", true},
        {"first_non_open", openness->first_non_open ? nlohmann::json(*openness->first_non_open)
                                                    : nlohmann::json()}};
  } else {
    summary["openness"] = nlohmann::json{{"audited", false}};
  }
  nlohmann::json vio = nlohmann::json::array();
  for (const osid::Violation& v : violations)
    vio.push_back(nlohmann::json{
        {"sample", v.sample}, {"level", v.level}, {"kind", v.kind}, {"detail", v.detail}});
  summary["violations"] = nlohmann::json{{"count", violations.size()}, {"examples", vio}};

  write_json(opt.out_json, summary);
  if (!opt.out_csv.empty()) {
    std::ofstream csv(opt.out_csv, std::ios::binary);
    if (!csv) throw osid::ConfigError("cannot write " + opt.out_csv);
    errors.write_csv(csv);
  }
  if (!opt.masks.empty()) {
    for (int level : parse_level_list(opt.masks)) {
      const std::string path = opt.mask_dir + "/mask_L" + std::to_string(level) + ".pgm";
      std::ofstream pgm(path, std::ios::binary);
      if (!pgm) throw osid::ConfigError("cannot write " + path);
      osid::write_mask_pgm(dec, level, pgm);
    }
  }
  if (!violations.empty()) {
    std::cerr << "invariant violations: " << violations.size() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int run_audit(const Options& opt) {
  if (opt.coeffs.empty()) throw osid::ConfigError("--coeffs is required");
  osid::CoefficientSequence seq = osid::CoefficientSequence::parse(opt.coeffs);
  const osid::Rat vmax = opt.vmax.empty() ? osid::Rat(10) : osid::rat_parse(opt.vmax);
  osid::OpennessAuditReport report =
      osid::audit(seq, opt.levels, vmax, opt.seed, opt.audit_samples);
  nlohmann::json j = report.to_json();
  j["meta"] = meta_block("audit", config_echo(opt, seq, false));
  write_json(opt.out_json, j);
  return kExitOk;
}

int run_compare(const Options& opt) {
  DecomposeInputs in = resolve_inputs(opt);
  const std::vector<int> dyadic_levels = parse_level_list(opt.dyadic_levels);
  osid::Decomposition dec = osid::decompose(
      in.domain, in.fn ? &*in.fn : nullptr, in.seq, opt.levels, opt.workers);
  osid::ComparisonReport report = osid::compare(dec, dyadic_levels);

  nlohmann::json j = report.to_json();
  nlohmann::json cfg = config_echo(opt, in.seq, !opt.fn.empty());
  cfg["dyadic_levels"] = opt.dyadic_levels;
  j["meta"] = meta_block("compare", cfg);
  write_json(opt.out_json, j);
  if (!opt.out_csv.empty()) {
    std::ofstream csv(opt.out_csv, std::ios::binary);
    if (!csv) throw osid::ConfigError("cannot write " + opt.out_csv);
    report.write_csv(csv);
  }
  return kExitOk;
}

int run_smooth(const Options& opt) {
  DecomposeInputs in = resolve_inputs(opt);
  if (!in.fn) throw osid::ConfigError("smooth needs a function expression on a box grid");
  std::optional<osid::Rat> vmax;
  if (!opt.vmax.empty()) vmax = osid::rat_parse(opt.vmax);
  osid::MinorantResult result =
      osid::minorize(in.domain, *in.fn, in.seq, opt.levels, vmax, opt.workers);
  nlohmann::json j = result.to_json();
  j["meta"] = meta_block("smooth", config_echo(opt, in.seq));
  write_json(opt.out_json, j);
  return kExitOk;
}

int run_validate_seq(const Options& opt) {
  if (opt.coeffs.empty()) throw osid::ConfigError("--coeffs is required");
  osid::CoefficientSequence seq = osid::CoefficientSequence::parse(opt.coeffs);
  osid::ValidationReport report = osid::validate(seq, opt.horizon);
  nlohmann::json j = report.to_json();
  nlohmann::json cfg{{"coeffs", seq.descriptor()}, {"horizon", opt.horizon}};
  j["meta"] = meta_block("validate-seq", cfg);
  write_json(opt.out_json, j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy open-set indicator decomposition of nonnegative continuous functions"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool with_levels = true) {
    sub->add_option("--coeffs", opt.coeffs,
                    "coefficient sequence (harmonic, power:p=..., scaled-harmonic:c=..., "
                    "explicit:..., @file.json)");
    if (with_levels) sub->add_option("--levels", opt.levels, "number of levels");
    sub->add_option("--out-json", opt.out_json, "JSON artifact path (stdout when absent)");
    sub->add_option("--seed", opt.seed, "seed for sampled checks");
    sub->add_option("--workers", opt.workers, "worker threads (outputs are identical for any count)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* decompose = app.add_subcommand("decompose", "expand f over a sampled domain");
  add_common(decompose);
  decompose->add_option("--fn", opt.fn, "function expression over x1..xd");
  decompose->add_option("--domain", opt.domain, "grid1d:lo:hi:n | grid2d:lo:hi:nxm | finite:path");
  decompose->add_option("--vmax", opt.vmax, "scalar range cap override (rational)");
  decompose->add_option("--out-csv", opt.out_csv, "error curve CSV path");
  decompose->add_option("--masks", opt.masks, "mask levels to export as PGM (e.g. 1,2,5 or 1..8)");
  decompose->add_option("--mask-dir", opt.mask_dir, "directory for mask_L<n>.pgm files");

  CLI::App* audit = app.add_subcommand("audit", "openness audit of the scalar level sets");
  add_common(audit);
  audit->add_option("--vmax", opt.vmax, "scalar range cap (rational, default 10)");
  audit->add_option("--samples", opt.audit_samples, "cross-validation sample count");

  CLI::App* compare = app.add_subcommand("compare", "greedy vs dyadic sup-error curves");
  add_common(compare);
  compare->add_option("--fn", opt.fn, "function expression over x1..xd");
  compare->add_option("--domain", opt.domain, "domain descriptor");
  compare->add_option("--dyadic-levels", opt.dyadic_levels, "dyadic levels (e.g. 1..12)");
  compare->add_option("--out-csv", opt.out_csv, "comparison CSV path");

  CLI::App* smooth = app.add_subcommand("smooth", "smooth minorant bumps inside open cores");
  add_common(smooth);
  smooth->add_option("--fn", opt.fn, "function expression over x1..xd");
  smooth->add_option("--domain", opt.domain, "box grid descriptor");
  smooth->add_option("--vmax", opt.vmax, "scalar range cap override (rational)");

  CLI::App* validate = app.add_subcommand("validate-seq", "hypothesis check for a sequence");
  add_common(validate, false);
  validate->add_option("--horizon", opt.horizon, "terms to examine")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (decompose->parsed()) code = run_decompose(opt);
    else if (audit->parsed()) code = run_audit(opt);
    else if (compare->parsed()) code = run_compare(opt);
    else if (smooth->parsed()) code = run_smooth(opt);
    else code = run_validate_seq(opt);
  } catch (const osid::NegativeValue& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitNegative;
  } catch (const osid::CrossValidationMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitViolation;
  } catch (const osid::MonotonicityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitViolation;
  } catch (const osid::DominationViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitViolation;
  } catch (const osid::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kExitConfig;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  std::cerr << "wall_ms=" << elapsed.count() << " workers=" << opt.workers << "\n";
  return code;
}
