#include <catch2/catch_amalgamated.hpp>

#include "rhlab/scan.hpp"

using namespace rhlab;

namespace {

ScanConfig smoke_config() {
  ScanConfig cfg;
  ModelGridEntry a1;
  a1.kind = ModelKind::A1;
  a1.m = {3};
  a1.r = {M_PI / 6.0, M_PI / 4.0, M_PI / 3.0};
  cfg.models = {a1};
  cfg.k_grid = {1.0};
  return cfg;
}

}  // namespace

TEST_CASE("config parsing reports the offending field path") {
  const auto parse = [](const char* text) { return parse_config(json::parse(text)); };

  try {
    parse(R"({"k_grid": [1.0]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "models");
  }

  try {
    parse(R"({"models": [{"kind": "A7", "m": [3], "r": [0.5]}], "k_grid": [1.0]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "models[0].kind");
  }

  try {
    parse(R"({"models": [{"kind": "A1", "m": [3], "r": [0.5]}], "k_grid": [1.0, 0.0]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "k_grid[1]");
  }

  try {
    parse(R"({"models": [{"kind": "A2", "m": [3], "r": [0.5]}], "k_grid": [1.0]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "models[0].n");
  }

  try {
    parse(R"({"models": [{"kind": "A1", "m": [3], "r": [0.001]}], "k_grid": [1.0]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "models[0].r[0]");
  }

  try {
    parse(R"({"models": [{"kind": "A1", "m": [3], "r": [0.5]}],
              "k_grid": [1.0], "output": {"format": "xml"}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(ex.path() == "output.format");
  }
}

TEST_CASE("three-radius sphere scan at k = 1") {
  const ScanResult res = run_scan(smoke_config());
  REQUIRE(res.rows.size() == 3);

  // Radii keep their configured order; only the pi/4 row satisfies the skew
  // condition, and it is the claimed branch, so no discrepancy anywhere.
  CHECK(*res.rows[0].r == M_PI / 6.0);
  CHECK(*res.rows[1].r == M_PI / 4.0);
  CHECK(*res.rows[2].r == M_PI / 3.0);

  CHECK(*res.rows[1].skew <= 1e-10);
  CHECK(std::abs(*res.rows[1].sym - 4.0) <= 1e-9);
  CHECK(res.rows[1].branch_annotation.find("sphere-pi/4-k1") != std::string::npos);
  CHECK_FALSE(res.rows[1].discrepancy);

  for (int i : {0, 2}) {
    CHECK(*res.rows[i].skew > 1e-9);
    CHECK(res.rows[i].branch_annotation.find("skew-branch:none") != std::string::npos);
    CHECK_FALSE(res.rows[i].discrepancy);
  }

  // Type (A) rows carry matching predictions.
  for (const auto& row : res.rows) {
    REQUIRE(row.predictor_match.has_value());
    CHECK(*row.predictor_match);
  }
}

TEST_CASE("empty model list yields a header-only CSV") {
  ScanConfig cfg;
  cfg.k_grid = {1.0};
  const ScanResult res = run_scan(cfg);
  CHECK(res.rows.empty());
  CHECK(emit_csv(res) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("row count is models x k and rows are model-major, k ascending") {
  ScanConfig cfg = smoke_config();
  cfg.k_grid = {2.0, -1.0, 1.0};
  const ScanResult res = run_scan(cfg);
  REQUIRE(res.rows.size() == 9);
  for (int m = 0; m < 3; ++m) {
    CHECK(res.rows[3 * m + 0].k == -1.0);
    CHECK(res.rows[3 * m + 1].k == 1.0);
    CHECK(res.rows[3 * m + 2].k == 2.0);
    for (int j = 0; j < 3; ++j) {
      CHECK(*res.rows[3 * m + j].r == *res.rows[3 * m].r);
    }
  }
}

TEST_CASE("tube rows on the claimed branch carry the discrepancy flag") {
  ScanConfig cfg;
  ModelGridEntry a2;
  a2.kind = ModelKind::A2;
  a2.m = {3};
  a2.n = {1};
  a2.arccot = {2.0};
  cfg.models = {a2};
  cfg.k_grid = {2.0};
  const ScanResult res = run_scan(cfg);
  REQUIRE(res.rows.size() == 1);
  const ScanRow& row = res.rows.front();
  CHECK(std::abs(*row.skew - 0.625) <= 1e-9);
  CHECK(row.branch_annotation.find("tube-cot-r=k") != std::string::npos);
  CHECK(row.branch_annotation.find("claimed-but-nonzero") != std::string::npos);
  CHECK(row.discrepancy);
}

TEST_CASE("unclaimed skew zeros are flagged too") {
  // A sphere with cot r = 2 at k = 2 satisfies the skew condition directly
  // but lies on no admitted branch.
  ScanConfig cfg;
  ModelGridEntry a1;
  a1.kind = ModelKind::A1;
  a1.m = {3};
  a1.arccot = {2.0};
  cfg.models = {a1};
  cfg.k_grid = {2.0};
  const ScanResult res = run_scan(cfg);
  REQUIRE(res.rows.size() == 1);
  CHECK(*res.rows[0].skew <= 1e-9);
  CHECK(res.rows[0].branch_annotation.find("skew-zero-unclaimed") != std::string::npos);
  CHECK(res.rows[0].discrepancy);
}

TEST_CASE("model construction failures become row-level errors") {
  ScanConfig cfg;
  ModelGridEntry bad;
  bad.kind = ModelKind::A2;
  bad.m = {3};
  bad.n = {5};  // out of range for m = 3
  bad.r = {0.7};
  ModelGridEntry good;
  good.kind = ModelKind::A1;
  good.m = {3};
  good.r = {0.7};
  cfg.models = {bad, good};
  cfg.k_grid = {1.0};
  const ScanResult res = run_scan(cfg);
  REQUIRE(res.rows.size() == 2);
  CHECK_FALSE(res.rows[0].error.empty());
  CHECK_FALSE(res.rows[0].sym.has_value());
  CHECK(res.rows[0].branch_annotation.rfind("error:", 0) == 0);
  CHECK(res.rows[1].error.empty());
  CHECK(res.rows[1].sym.has_value());

  // Error rows keep the CSV shape intact.
  const std::string csv = emit_csv(res);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("CSV header and value formatting") {
  CHECK(std::string(kCsvHeader) ==
        "kind,r,n,m,alpha,beta,k,sym_residual,skew_residual,vanish_residual,"
        "pred_sym,pred_skew,pred_vanish,predictor_match,branch_annotation,"
        "discrepancy_flag");
  ScanConfig cfg;
  ModelGridEntry a2;
  a2.kind = ModelKind::A2;
  a2.m = {3};
  a2.n = {1};
  a2.arccot = {2.0};
  cfg.models = {a2};
  cfg.k_grid = {2.0};
  const std::string csv = emit_csv(run_scan(cfg));
  CHECK(csv.find("A2,") == std::string(kCsvHeader).size() + 1);
  CHECK(csv.back() == '\n');

  // The skew field round-trips through its 17-digit representation.
  const std::string row = csv.substr(csv.find('\n') + 1);
  std::vector<std::string> fields;
  std::stringstream ss(row);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  REQUIRE(fields.size() >= 16);
  CHECK(std::abs(std::stod(fields[8]) - 0.625) <= 1e-9);
}

TEST_CASE("JSON round-trip reproduces the result exactly") {
  ScanConfig cfg = smoke_config();
  ModelGridEntry nh;
  nh.kind = ModelKind::NonHopf;
  nh.m = {3};
  nh.alpha = {1.0};
  nh.beta = {1.0};
  nh.du = {{{2.0, true}}};
  ModelGridEntry bad;
  bad.kind = ModelKind::A2;
  bad.m = {3};
  bad.n = {9};
  bad.r = {0.7};
  cfg.models.push_back(nh);
  cfg.models.push_back(bad);
  cfg.k_grid = {1.0, -2.0};

  const ScanResult res = run_scan(cfg);
  const ScanResult back = parse_result(emit_json(res));
  CHECK(back == res);
}

TEST_CASE("embedded traces appear when requested") {
  ScanConfig cfg = smoke_config();
  cfg.k_grid = {2.0};
  const json j = emit_json(run_scan(cfg), true);
  REQUIRE(!j["rows"].empty());
  const auto& row = j["rows"].front();
  REQUIRE(row.contains("traces"));
  CHECK(row["traces"].contains("skew"));
  CHECK(row["traces"].contains("sym"));
  CHECK(row["traces"]["skew"].contains("candidates"));
}

TEST_CASE("repeated and parallel scans agree byte for byte") {
  ScanConfig cfg = smoke_config();
  ModelGridEntry nh;
  nh.kind = ModelKind::NonHopf;
  nh.m = {3, 4};
  nh.alpha = {1.0, 2.0};
  nh.beta = {1.0};
  nh.du = {{{2.0, true}}};
  cfg.models.push_back(nh);  // m = 4 entries fail to build: error rows included
  cfg.k_grid = {1.0, 2.0, -0.5};

  const std::string a = emit_csv(run_scan(cfg));
  const std::string b = emit_csv(run_scan(cfg));
  const std::string c = emit_csv(run_scan(cfg, 4));
  CHECK(a == b);
  CHECK(a == c);
  CHECK(run_scan(cfg) == run_scan(cfg, 3));
}

TEST_CASE("emit_report validates the format") {
  const ScanResult res;
  CHECK_THROWS_AS(emit_report(res, "xml"), ConfigError);
  CHECK(emit_report(res, "csv") == std::string(kCsvHeader) + "\n");
  const json parsed = json::parse(emit_report(res, "json"));
  CHECK(parsed.contains("rows"));
}

TEST_CASE("write_report surfaces IO failures with the path") {
  CHECK_THROWS_AS(write_report("x", "/nonexistent-dir/report.csv"), IoError);
}
