#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqobs/output.hpp"
#include "eqobs/scenario.hpp"

using namespace eqobs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("eqobs_test_" + name);
  fs::remove_all(d);
  return d;
}

std::vector<TrajectoryRecord> short_run() {
  ScenarioConfig cfg;
  cfg.duration = 0.5;
  cfg.log_every = 50;
  return run_scenario(cfg);
}

}  // namespace

TEST_CASE("csv header") {
  const auto h = csv_header(3, 3);
  REQUIRE(h.size() == 1 + 2 * (9 + 3) + 10);
  CHECK(h[0] == "t");
  CHECK(h[1] == "true_P_00");
  CHECK(h[9] == "true_P_22");
  CHECK(h[10] == "true_V_0");
  CHECK(h[13] == "est_P_00");
  CHECK(h[22] == "est_V_0");
  CHECK(h[25] == "lyapunov");
  CHECK(h.back() == "A_inv_norm");
}

TEST_CASE("one record gives one data row") {
  ScenarioConfig cfg;
  cfg.duration = 0.0;
  const auto rec = run_scenario(cfg);
  const auto dir = scratch_dir("one_row");
  fs::create_directories(dir);
  write_csv(rec, dir / "t.csv");
  const auto text = slurp(dir / "t.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const auto table = read_csv(dir / "t.csv");
  CHECK(table.header == csv_header(3, 3));
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == 0.0);
  CHECK(table.rows[0][25] == doctest::Approx(3.5));
  fs::remove_all(dir);
}

TEST_CASE("csv values round-trip exactly") {
  const auto rec = short_run();
  const auto dir = scratch_dir("roundtrip");
  fs::create_directories(dir);
  write_csv(rec, dir / "t.csv");
  const auto table = read_csv(dir / "t.csv");
  REQUIRE(table.rows.size() == rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    CHECK(table.rows[k][0] == rec[k].t);
    CHECK(table.rows[k][1] == rec[k].true_P(0, 0));
    CHECK(table.rows[k][3] == rec[k].true_P(0, 2));
    CHECK(table.rows[k][25] == rec[k].lyapunov);
    CHECK(table.rows[k][26] == rec[k].lyapunov_rate);
    CHECK(table.rows[k].back() == rec[k].A_inv_norm);
  }
  fs::remove_all(dir);
}

TEST_CASE("artifacts are deterministic") {
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  emit_outputs(short_run(), a, "abc");
  emit_outputs(short_run(), b, "abc");
  for (const char* f : {"trajectory.csv", "trajectory.svg", "lyapunov.svg", "summary.json"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("svg content") {
  const auto dir = scratch_dir("svg");
  emit_outputs(short_run(), dir);
  const auto traj = slurp(dir / "trajectory.svg");
  CHECK(traj.rfind("<svg", 0) == 0);
  CHECK(traj.find("stroke=\"blue\"") != std::string::npos);
  CHECK(traj.find("stroke=\"red\"") != std::string::npos);
  CHECK(traj.find("<polygon") != std::string::npos);
  CHECK(traj.find("<circle") != std::string::npos);
  CHECK(traj.find("</svg>") != std::string::npos);
  const auto lyap = slurp(dir / "lyapunov.svg");
  CHECK(lyap.find("<polyline") != std::string::npos);
  CHECK(lyap.find("log10 L") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("summary json") {
  const auto rec = short_run();
  const auto dir = scratch_dir("summary");
  emit_outputs(rec, dir, "0123456789abcdef");
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  const auto s = summarize(rec);
  CHECK(j.at("records").get<std::size_t>() == rec.size());
  CHECK(j.at("initial_lyapunov").get<double>() == s.initial_lyapunov);
  CHECK(j.at("final_lyapunov").get<double>() == s.final_lyapunov);
  CHECK(j.at("config_hash") == "0123456789abcdef");
  for (const char* k : {"final_err_A_norm", "final_err_a_norm", "max_lyapunov_rate",
                        "max_constraint_residual", "max_lift_deviation", "log_lyapunov_slope"}) {
    CHECK(j.contains(k));
  }
  fs::remove_all(dir);
}

TEST_CASE("write failures") {
  CHECK_THROWS_AS(emit_outputs({}, scratch_dir("empty")), Error);
  const auto file = fs::temp_directory_path() / "eqobs_test_not_a_dir";
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(emit_outputs(short_run(), file / "sub"), Error);
  fs::remove(file);
  CHECK_THROWS_AS(read_csv("/nonexistent/eqobs.csv"), Error);
}
