#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "curvlab/curvature_tensor.hpp"
#include "curvlab/tensor_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string stdout_text;
  json report;  // parsed stdout when it is JSON
  bool has_report = false;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "curvlab_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CmdResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto out_path = work_dir() / ("out_" + std::to_string(counter++) + ".txt");
  std::string cmd = env + " " + std::string(CURVLAB_CLI_PATH) + " " + args +
                    " > " + out_path.string() + " 2> " + out_path.string() +
                    ".err";
  const int rc = std::system(cmd.c_str());
  CmdResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  res.stdout_text = buf.str();
  if (!res.stdout_text.empty() && res.stdout_text.front() == '{') {
    res.report = json::parse(res.stdout_text, nullptr, false);
    res.has_report = !res.report.is_discarded();
  }
  return res;
}

std::string tensor_file(const std::string& name, const std::string& model_args) {
  const auto path = work_dir() / name;
  auto res = run_cli("model " + model_args + " --out " + path.string());
  REQUIRE(res.exit_code == 0);
  return path.string();
}

}  // namespace

TEST_CASE("model subcommand writes loadable files and prints scalars") {
  const auto path = work_dir() / "cp2.json";
  auto res = run_cli("model fubini-study m=2 --out " + path.string());
  CHECK(res.exit_code == 0);
  REQUIRE(res.has_report);
  CHECK(res.report["body"]["dim"] == 4);
  CHECK(res.report["body"]["normalized_scalar"].get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));
  auto loaded = curvlab::load_tensor(path);
  CHECK(loaded.dim() == 4);

  auto sphere = run_cli("model sphere n=5 kappa=1");
  CHECK(sphere.exit_code == 0);
  CHECK(sphere.report["body"]["normalized_scalar"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));

  auto unknown = run_cli("model torus n=4");
  CHECK(unknown.exit_code == 1);
  auto badparam = run_cli("model sphere kappa=1");
  CHECK(badparam.exit_code == 1);
}

TEST_CASE("model product concatenates dimensions") {
  const auto a = tensor_file("s2a.json", "sphere n=2 kappa=1");
  const auto b = tensor_file("s2b.json", "sphere n=2 kappa=1");
  const auto out = (work_dir() / "s2xs2.json").string();
  auto res = run_cli("model product a=" + a + " b=" + b + " --out " + out);
  CHECK(res.exit_code == 0);
  CHECK(res.report["body"]["dim"] == 4);
}

TEST_CASE("check exit codes encode the verdict") {
  const auto cp2 = tensor_file("cp2_check.json", "fubini-study m=2");
  auto weak = run_cli("check " + cp2 + " --condition main --seed 5");
  CHECK(weak.exit_code == 2);
  CHECK(std::abs(weak.report["body"]["result"]["extremal_value"].get<double>()) <
        1e-6);

  const auto sphere6 = tensor_file("s6.json", "sphere n=6 kappa=1");
  auto strict = run_cli("check " + sphere6 + " --condition pic --seed 5 --restarts 16");
  CHECK(strict.exit_code == 0);
  CHECK(strict.report["body"]["result"]["extremal_value"].get<double>() ==
        doctest::Approx(4.0).epsilon(1e-8));

  const auto a = tensor_file("w1.json", "sphere n=2 kappa=1");
  const auto b = tensor_file("w2.json", "sphere n=2 kappa=1");
  const auto prod = (work_dir() / "s2s2.json").string();
  run_cli("model product a=" + a + " b=" + b + " --out " + prod);
  auto fails = run_cli("check " + prod + " --condition main-weak --seed 5");
  CHECK(fails.exit_code == 3);
  CHECK(fails.report["body"]["result"]["extremal_value"].get<double>() ==
        doctest::Approx(-1.0).epsilon(1e-6));

  auto oops = run_cli("check /no/such/file.json --condition main");
  CHECK(oops.exit_code == 1);
  auto badcond = run_cli("check " + cp2 + " --condition bogus");
  CHECK(badcond.exit_code == 1);
}

TEST_CASE("check rejects invariant-violating tensor files") {
  const auto path = work_dir() / "broken.json";
  std::ofstream(path) << R"({"dim":4,"format":"sparse",
    "entries":[[1,2,3,4,1.0]]})";
  auto res = run_cli("check " + path.string() + " --condition main");
  CHECK(res.exit_code == 1);
}

TEST_CASE("identities subcommand") {
  // Random n=5 tensor via the library, saved to a file.
  const auto path = work_dir() / "rand5.json";
  curvlab::save_tensor(curvlab::random_curvature_tensor(5, 99, 1.0), path,
                       curvlab::TensorFileFormat::Sparse);
  auto res = run_cli("identities " + path.string() + " --seed 3");
  CHECK(res.exit_code == 0);
  REQUIRE(res.has_report);
  bool saw_skip_notice = false;
  bool saw_dim_specific = false;
  for (const auto& row : res.report["body"]["identities"]) {
    if (row["identity"] == "four-dim-trace" && row.contains("note"))
      saw_skip_notice = true;
    if (row["identity"] == "dim-specific-yau-lower") saw_dim_specific = true;
  }
  CHECK(saw_skip_notice);
  CHECK(saw_dim_specific);

  const auto flat = tensor_file("flat4.json", "flat n=4");
  auto zres = run_cli("identities " + flat + " --seed 3");
  CHECK(zres.exit_code == 0);
  for (const auto& row : zres.report["body"]["identities"])
    if (row.contains("residual")) CHECK(row["residual"].get<double>() == 0.0);
}

TEST_CASE("minimize with the oracle cross-check") {
  const auto cp2 = tensor_file("cp2_min.json", "fubini-study m=2");
  auto res = run_cli("minimize " + cp2 +
                     " --functional sectional-min --oracle 1000000 --seed 4");
  CHECK(res.exit_code == 0);
  const double opt = res.report["body"]["optimizer"]["value"].get<double>();
  const double oracle = res.report["body"]["oracle"]["value"].get<double>();
  CHECK(opt == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(opt - oracle) < 1e-4);

  const auto s31 = tensor_file("s3s1.json", "sphere-cross-circle n=4");
  auto cond = run_cli("minimize " + s31 +
                      " --functional condition --gamma 0.5 --seed 4");
  CHECK(cond.exit_code == 0);
  CHECK(cond.report["body"]["optimizer"]["value"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-6));

  const auto flat5 = tensor_file("flat5.json", "flat n=5");
  auto fres = run_cli("minimize " + flat5 + " --functional isotropic --seed 4");
  CHECK(fres.exit_code == 0);
  CHECK(fres.report["body"]["optimizer"]["value"].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scan determinism and exit code") {
  auto a = run_cli(
      "scan --family prop-main --trials 4 --seed 7 --restarts 8 --max-iter 600");
  CHECK(a.exit_code == 0);
  CHECK(a.report["body"]["violations"] == 0);
  auto b = run_cli(
      "scan --family prop-main --trials 4 --seed 7 --restarts 8 --max-iter 600");
  CHECK(a.report["body"].dump() == b.report["body"].dump());

  auto lemma = run_cli(
      "scan --family lemma-quarter --trials 4 --seed 8 --restarts 8 --max-iter 600");
  CHECK(lemma.exit_code == 0);
}

TEST_CASE("CURVLAB_SEED provides the default seed") {
  const auto flat4 = tensor_file("flat4b.json", "flat n=4");
  auto res = run_cli("minimize " + flat4 + " --functional a-sum --restarts 2",
                     "CURVLAB_SEED=99");
  CHECK(res.exit_code == 0);
  CHECK(res.report["body"]["config"]["seed"] == 99);
}

TEST_CASE("reports carry digest, seed and config; timing sits outside the body") {
  const auto cp2 = tensor_file("cp2_rep.json", "fubini-study m=2");
  auto res = run_cli("check " + cp2 + " --condition main --seed 12 --restarts 8");
  REQUIRE(res.has_report);
  const auto& body = res.report["body"];
  CHECK(body.contains("input_digest"));
  CHECK(body["config"].contains("seed"));
  CHECK(res.report.contains("timing_ms"));
  CHECK(!body.contains("timing_ms"));

  auto res2 = run_cli("check " + cp2 + " --condition main --seed 12 --restarts 8");
  CHECK(body.dump() == res2.report["body"].dump());
}
