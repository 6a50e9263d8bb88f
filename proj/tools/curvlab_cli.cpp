// curvlab command line front end.
//
// Subcommands:
//   model       build a model-space tensor file and print its scalars
//   check       run a named curvature condition on a tensor file
//   identities  run every identity applicable to a tensor's dimension
//   minimize    extremize a frame functional, optionally against the oracle
//   scan        run an implication-harness family
//
// Exit codes: 0 holds-strict/success, 2 holds-weak, 3 fails, 4 oracle
// disagreement, 5 harness violation, 1 error/usage.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/model_spaces.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/tensor_io.hpp"
#include "curvlab/verifiers.hpp"
#include "curvlab/version.hpp"

namespace {

using curvlab::CurvatureTensor;
using curvlab::SearchConfig;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWeak = 2;
constexpr int kExitFails = 3;
constexpr int kExitOracleDisagree = 4;
constexpr int kExitHarnessViolation = 5;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CURVLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw curvlab::InvalidInput("CURVLAB_SEED is not an unsigned integer");
    }
  }
  return 1;
}

struct CommonFlags {
  int restarts = SearchConfig{}.restarts;
  int max_iter = SearchConfig{}.max_iterations;
  double step_size = SearchConfig{}.step_size;
  double grad_tol = SearchConfig{}.gradient_tolerance;
  std::optional<std::uint64_t> seed;

  SearchConfig to_config() const {
    SearchConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iterations = max_iter;
    cfg.step_size = step_size;
    cfg.gradient_tolerance = grad_tol;
    cfg.seed = seed ? *seed : default_seed();
    return cfg;
  }
};

void add_search_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--restarts", flags.restarts, "random restarts (default 64)");
  cmd->add_option("--max-iter", flags.max_iter,
                  "max descent iterations per restart (default 2000)");
  cmd->add_option("--step-size", flags.step_size, "initial step (default 0.05)");
  cmd->add_option("--grad-tol", flags.grad_tol,
                  "gradient stopping tolerance (default 1e-9)");
  cmd->add_option("--seed", flags.seed,
                  "master seed (default: CURVLAB_SEED or 1)");
}

ordered_json config_json(const SearchConfig& cfg) {
  ordered_json j;
  j["restarts"] = cfg.restarts;
  j["max_iterations"] = cfg.max_iterations;
  j["step_size"] = cfg.step_size;
  j["gradient_tolerance"] = cfg.gradient_tolerance;
  j["seed"] = cfg.seed;
  return j;
}

ordered_json frame_json(const curvlab::Frame& f) {
  ordered_json rows = ordered_json::array();
  if (f.empty()) return rows;
  for (int a = 0; a < f.count(); ++a) {
    ordered_json row = ordered_json::array();
    for (double x : f.vec(a)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Reports are JSON: a deterministic "body" (reproducible from digest, seed
// and config) next to a volatile timing field.
class Report {
public:
  Report(const std::string& command) {
    body_["tool"] = "curvlab";
    body_["version"] = curvlab::kVersion;
    body_["command"] = command;
    start_ = std::chrono::steady_clock::now();
  }

  ordered_json& body() { return body_; }

  int finish(int exit_code) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    ordered_json top;
    body_["exit_code"] = exit_code;
    top["body"] = body_;
    top["timing_ms"] =
        std::chrono::duration<double, std::milli>(elapsed).count();
    std::cout << top.dump(2) << "\n";
    return exit_code;
  }

private:
  ordered_json body_;
  std::chrono::steady_clock::time_point start_;
};

std::map<std::string, std::string> parse_params(
    const std::vector<std::string>& kvs) {
  std::map<std::string, std::string> out;
  for (const auto& kv : kvs) {
    const auto pos = kv.find('=');
    if (pos == std::string::npos || pos == 0)
      throw curvlab::InvalidInput("model parameters must look like key=value: " +
                                  kv);
    out[kv.substr(0, pos)] = kv.substr(pos + 1);
  }
  return out;
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw curvlab::InvalidInput("missing model parameter " + key);
  return std::stoi(it->second);
}

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return std::stod(it->second);
}

int run_model(const std::string& name, const std::vector<std::string>& kvs,
              const std::string& out_path, const std::string& format) {
  Report report("model");
  const auto params = parse_params(kvs);

  CurvatureTensor tensor = [&]() -> CurvatureTensor {
    if (name == "sphere")
      return curvlab::constant_curvature(param_int(params, "n"),
                                         param_double(params, "kappa", 1.0));
    if (name == "flat") return curvlab::flat(param_int(params, "n"));
    if (name == "fubini-study")
      return curvlab::fubini_study(param_int(params, "m")).tensor;
    if (name == "sphere-cross-circle")
      return curvlab::sphere_cross_circle(param_int(params, "n"));
    if (name == "product") {
      auto ita = params.find("a");
      auto itb = params.find("b");
      if (ita == params.end() || itb == params.end())
        throw curvlab::InvalidInput("product needs a=<file> and b=<file>");
      return curvlab::direct_sum(curvlab::load_tensor(ita->second),
                                 curvlab::load_tensor(itb->second));
    }
    throw curvlab::InvalidInput(
        "unknown model " + name +
        " (expected sphere, flat, fubini-study, sphere-cross-circle, product)");
  }();

  const auto scal = curvlab::curvature_scalars(tensor);
  report.body()["model"] = name;
  report.body()["params"] = params;
  report.body()["dim"] = tensor.dim();
  report.body()["scalar"] = scal.scalar;
  report.body()["normalized_scalar"] = scal.normalized_scalar;
  report.body()["min_ricci_eigenvalue"] = scal.min_ricci_eigenvalue();

  if (!out_path.empty()) {
    const auto fmt = format == "dense" ? curvlab::TensorFileFormat::Dense
                                       : curvlab::TensorFileFormat::Sparse;
    curvlab::save_tensor(tensor, out_path, fmt);
    report.body()["out"] = out_path;
    report.body()["format"] = format;
    report.body()["output_digest"] = curvlab::file_digest(out_path);
  }
  std::cerr << "dim " << tensor.dim() << "  S " << scal.scalar << "  S0 "
            << scal.normalized_scalar << "\n";
  return report.finish(kExitOk);
}

curvlab::ConditionKind parse_condition(const std::string& name) {
  using CK = curvlab::ConditionKind;
  static const std::map<std::string, CK> table = {
      {"main", CK::MainCondition},
      {"condition", CK::MainCondition},  // with --gamma: the gamma family
      {"main-weak", CK::MainConditionWeak},
      {"pic", CK::Pic},
      {"nonneg-isotropic", CK::NonnegIsotropic},
      {"quarter-sectional", CK::QuarterSectional},
      {"quarter-flag", CK::QuarterFlag},
      {"yau-lower", CK::YauLower},
      {"yau-upper", CK::YauUpper},
      {"biorthogonal-4d", CK::Biorthogonal4d},
  };
  auto it = table.find(name);
  if (it == table.end())
    throw curvlab::InvalidInput("unknown condition " + name);
  return it->second;
}

int run_check(const std::string& tensor_path, const std::string& condition,
              const CommonFlags& flags, std::optional<double> gamma) {
  Report report("check");
  const SearchConfig cfg = flags.to_config();
  report.body()["input"] = tensor_path;
  report.body()["input_digest"] = curvlab::file_digest(tensor_path);
  report.body()["config"] = config_json(cfg);

  const CurvatureTensor tensor = curvlab::load_tensor(tensor_path);
  const auto kind = parse_condition(condition);
  const auto rep = curvlab::check_condition(tensor, kind, cfg, gamma);

  ordered_json res;
  res["condition"] = curvlab::to_string(rep.condition);
  if (gamma) res["gamma"] = *gamma;
  res["verdict"] = curvlab::to_string(rep.verdict);
  res["extremal_value"] = rep.extremal_value;
  res["threshold"] = rep.threshold;
  res["margin"] = rep.margin;
  res["strictness_tol"] = rep.strictness_tol;
  res["extremal_frame"] = frame_json(rep.extremal_frame);
  if (rep.condition == curvlab::ConditionKind::QuarterFlag)
    res["theta"] = rep.theta;
  ordered_json constants;
  constants["s0"] = rep.constants.s0;
  if (rep.constants.has_gamma) constants["gamma_n"] = rep.constants.gamma_n;
  if (rep.constants.has_eta) constants["eta_n"] = rep.constants.eta_n;
  res["constants"] = std::move(constants);
  if (rep.s0_nonpositive) res["s0_nonpositive"] = true;
  report.body()["result"] = std::move(res);

  int code = kExitFails;
  if (rep.verdict == curvlab::Verdict::HoldsStrict) code = kExitOk;
  if (rep.verdict == curvlab::Verdict::HoldsWeak) code = kExitWeak;
  return report.finish(code);
}

int run_identities(const std::string& tensor_path, const CommonFlags& flags,
                   std::optional<double> extra_gamma) {
  Report report("identities");
  const SearchConfig cfg = flags.to_config();
  report.body()["input"] = tensor_path;
  report.body()["input_digest"] = curvlab::file_digest(tensor_path);
  report.body()["seed"] = cfg.seed;

  const CurvatureTensor tensor = curvlab::load_tensor(tensor_path);
  const int n = tensor.dim();
  if (n < 4)
    throw curvlab::InvalidDimension("the identity suite needs dimension >= 4");

  const curvlab::Frame random_frame =
      curvlab::Frame::random(n, 4, curvlab::child_seed(cfg.seed, 17));

  struct Row {
    std::string name;
    double residual;
    double bound;
    std::string note;
  };
  std::vector<Row> rows;
  auto push = [&](const std::string& name, const curvlab::IdentityReport& rep,
                  double bound) {
    rows.push_back({name, rep.residual, bound, ""});
  };

  push("quadruple-a-sum", curvlab::check_quadruple_a_identity(tensor), 1e-9);
  push("quadruple-b-sum", curvlab::check_quadruple_b_identity(tensor), 1e-9);
  std::vector<double> gammas = {0.0, 0.5, 1.9};
  if (extra_gamma) gammas.push_back(*extra_gamma);
  for (double g : gammas)
    push("scalar-gamma(" + std::to_string(g) + ")",
         curvlab::check_scalar_identity(tensor, g), 1e-9);
  push("rotated-frame-decomposition",
       curvlab::check_rotated_frame_decomposition(tensor, random_frame), 1e-10);
  if (n == 4) {
    push("four-dim-trace",
         curvlab::check_four_dim_trace_identity(tensor, random_frame), 1e-10);
  } else {
    rows.push_back({"four-dim-trace", 0.0, 0.0, "skipped: dimension != 4"});
  }
  if (n >= 5 && n <= 7) {
    push("dim-specific-yau-lower",
         curvlab::check_dim_specific_decomposition(tensor, n,
                                                   curvlab::YauSide::Lower),
         1e-9);
    push("dim-specific-yau-upper",
         curvlab::check_dim_specific_decomposition(tensor, n,
                                                   curvlab::YauSide::Upper),
         1e-9);
  }

  bool all_pass = true;
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json rj;
    rj["identity"] = row.name;
    if (!row.note.empty()) {
      rj["note"] = row.note;
    } else {
      rj["residual"] = row.residual;
      rj["bound"] = row.bound;
      const bool ok = row.residual < row.bound;
      rj["pass"] = ok;
      all_pass = all_pass && ok;
    }
    rows_json.push_back(std::move(rj));
  }
  report.body()["identities"] = std::move(rows_json);
  report.body()["all_pass"] = all_pass;
  return report.finish(all_pass ? kExitOk : kExitFails);
}

int run_minimize(const std::string& tensor_path, const std::string& functional,
                 double gamma, std::int64_t oracle_samples,
                 const CommonFlags& flags) {
  Report report("minimize");
  const SearchConfig cfg = flags.to_config();
  report.body()["input"] = tensor_path;
  report.body()["input_digest"] = curvlab::file_digest(tensor_path);
  report.body()["config"] = config_json(cfg);

  const CurvatureTensor tensor = curvlab::load_tensor(tensor_path);

  bool maximize = false;
  curvlab::FrameFunctional f = curvlab::FrameFunctional::condition(gamma);
  if (functional == "a-sum") {
    f = curvlab::FrameFunctional::a_sum();
  } else if (functional == "b-sum") {
    f = curvlab::FrameFunctional::b_sum();
  } else if (functional == "b-sum-max") {
    f = curvlab::FrameFunctional::b_sum();
    maximize = true;
  } else if (functional == "condition") {
    f = curvlab::FrameFunctional::condition(gamma);
  } else if (functional == "isotropic") {
    f = curvlab::FrameFunctional::isotropic();
  } else if (functional == "sectional-min") {
    f = curvlab::FrameFunctional::sectional();
  } else if (functional == "sectional-max") {
    f = curvlab::FrameFunctional::sectional();
    maximize = true;
  } else if (functional == "flag-pinching") {
    f = curvlab::FrameFunctional::flag_pinching();
  } else {
    throw curvlab::InvalidInput(
        "unknown functional " + functional +
        " (expected a-sum, b-sum, b-sum-max, condition, isotropic, "
        "sectional-min, sectional-max, flag-pinching)");
  }

  curvlab::MinimizationResult res;
  if (f.kind == curvlab::FrameFunctional::Kind::Sectional) {
    res = curvlab::minimize_sectional(tensor, maximize, cfg);
  } else if (f.kind == curvlab::FrameFunctional::Kind::FlagPinching) {
    res = curvlab::min_flag_pinching(tensor, cfg);
  } else {
    res = curvlab::extremize_over_four_frames(tensor, f, cfg, maximize);
  }

  ordered_json opt;
  opt["functional"] = functional;
  if (f.kind == curvlab::FrameFunctional::Kind::Condition)
    opt["gamma"] = gamma;
  opt["maximize"] = maximize;
  opt["value"] = res.value;
  opt["iterations"] = res.iterations;
  opt["restarts_used"] = res.restarts_used;
  opt["converged"] = res.converged;
  opt["gradient_norm"] = res.gradient_norm;
  opt["frame"] = frame_json(res.frame);
  if (f.has_angle()) opt["theta"] = res.theta;
  report.body()["optimizer"] = std::move(opt);

  int code = kExitOk;
  if (oracle_samples > 0) {
    const double oracle = curvlab::brute_force_extremum(
        tensor, f, oracle_samples, cfg.seed, !maximize);
    report.body()["oracle"] = ordered_json{{"samples", oracle_samples},
                                           {"value", oracle}};
    // The optimizer may not end up worse than sampling.
    const bool agree = maximize ? res.value >= oracle - 1e-6
                                : res.value <= oracle + 1e-6;
    report.body()["oracle_agreement"] = agree;
    if (!agree) code = kExitOracleDisagree;
  }
  return report.finish(code);
}

int run_scan(const std::string& family_name, int trials,
             const CommonFlags& flags) {
  Report report("scan");
  SearchConfig cfg = flags.to_config();

  using HF = curvlab::HarnessFamily;
  static const std::map<std::string, HF> table = {
      {"lemma-quarter", HF::LemmaQuarter},
      {"prop-main", HF::PropMain},
      {"prop-yau-lower", HF::PropYauLower},
      {"prop-yau-upper", HF::PropYauUpper},
  };
  auto it = table.find(family_name);
  if (it == table.end())
    throw curvlab::InvalidInput("unknown family " + family_name);

  const auto summary =
      curvlab::implication_harness(it->second, trials, cfg.seed, cfg);

  report.body()["family"] = curvlab::to_string(summary.family);
  report.body()["trials"] = summary.trials;
  report.body()["seed"] = summary.seed;
  report.body()["config"] = config_json(cfg);
  report.body()["hypothesis_satisfied"] = summary.hypothesis_satisfied;
  report.body()["violations"] = summary.violations;
  ordered_json recs = ordered_json::array();
  for (const auto& rec : summary.trial_records) {
    ordered_json rj;
    rj["trial"] = rec.index;
    rj["dim"] = rec.dim;
    rj["cp_base"] = rec.cp_base;
    rj["mix"] = rec.mix;
    rj["hypothesis_margin"] = rec.hypothesis_margin;
    rj["conclusion_margin"] = rec.conclusion_margin;
    rj["hypothesis_satisfied"] = rec.hypothesis_satisfied;
    rj["violation"] = rec.violation;
    recs.push_back(std::move(rj));
  }
  report.body()["trial_records"] = std::move(recs);
  return report.finish(summary.violations == 0 ? kExitOk
                                               : kExitHarnessViolation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: algebraic curvature conditions over orthonormal frames"};
  app.require_subcommand(1);

  // model
  auto* model = app.add_subcommand("model", "build a model-space tensor");
  std::string model_name;
  std::vector<std::string> model_params;
  std::string model_out;
  std::string model_format = "sparse";
  model->add_option("name", model_name,
                    "sphere | flat | fubini-study | sphere-cross-circle | product")
      ->required();
  model->add_option("params", model_params, "key=value parameters");
  model->add_option("--out", model_out, "output tensor file");
  model->add_option("--format", model_format, "dense | sparse (default sparse)")
      ->check(CLI::IsMember({"dense", "sparse"}));

  // check
  auto* check = app.add_subcommand("check", "check a curvature condition");
  std::string check_tensor;
  std::string check_condition_name;
  CommonFlags check_flags;
  std::optional<double> check_gamma;
  check->add_option("tensor", check_tensor, "tensor file")->required();
  check->add_option("--condition", check_condition_name,
                    "main | main-weak | condition | pic | nonneg-isotropic | "
                    "quarter-sectional | quarter-flag | yau-lower | yau-upper | "
                    "biorthogonal-4d")
      ->required();
  check->add_option("--gamma", check_gamma,
                    "gamma for the condition family (default 0.5)");
  add_search_flags(check, check_flags);

  // identities
  auto* identities =
      app.add_subcommand("identities", "run the identity suite on a tensor");
  std::string id_tensor;
  CommonFlags id_flags;
  std::optional<double> id_gamma;
  identities->add_option("tensor", id_tensor, "tensor file")->required();
  identities->add_option("--gamma", id_gamma,
                         "additional gamma for the scalar identity");
  add_search_flags(identities, id_flags);

  // minimize
  auto* minimize =
      app.add_subcommand("minimize", "extremize a frame functional");
  std::string min_tensor;
  std::string min_functional;
  double min_gamma = 0.5;
  std::int64_t min_oracle = 0;
  CommonFlags min_flags;
  minimize->add_option("tensor", min_tensor, "tensor file")->required();
  minimize->add_option("--functional", min_functional,
                       "a-sum | b-sum | b-sum-max | condition | isotropic | "
                       "sectional-min | sectional-max | flag-pinching")
      ->required();
  minimize->add_option("--gamma", min_gamma, "gamma for condition (default 0.5)");
  minimize->add_option("--oracle", min_oracle,
                       "also run the sampling oracle with this many samples");
  add_search_flags(minimize, min_flags);

  // scan
  auto* scan = app.add_subcommand("scan", "run an implication-harness family");
  std::string scan_family;
  int scan_trials = 100;
  CommonFlags scan_flags;
  scan->add_option("--family", scan_family,
                   "lemma-quarter | prop-main | prop-yau-lower | prop-yau-upper")
      ->required();
  scan->add_option("--trials", scan_trials, "number of trials (default 100)");
  add_search_flags(scan, scan_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (model->parsed())
      return run_model(model_name, model_params, model_out, model_format);
    if (check->parsed())
      return run_check(check_tensor, check_condition_name, check_flags,
                       check_gamma);
    if (identities->parsed())
      return run_identities(id_tensor, id_flags, id_gamma);
    if (minimize->parsed())
      return run_minimize(min_tensor, min_functional, min_gamma, min_oracle,
                          min_flags);
    if (scan->parsed()) return run_scan(scan_family, scan_trials, scan_flags);
  } catch (const curvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
