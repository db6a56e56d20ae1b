#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rhlab/case_analysis.hpp"

namespace rhlab {

using json = nlohmann::ordered_json;

/// Configuration or schema problem; carries the path of the offending field.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& path)
      : std::runtime_error("cannot write output file: " + path) {}
};

/// One model-grid entry of a scan config. Radii are given as explicit values
/// and/or as arccot(v) of listed values, never as a linspace, so exact branch
/// points (pi/4, arccot k) can be hit exactly.
struct ModelGridEntry {
  ModelKind kind = ModelKind::A1;
  std::vector<double> r;
  std::vector<double> arccot;
  std::vector<int> n;
  std::vector<int> m;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<std::vector<std::pair<double, int>>> planes;  // HopfGeneric
  std::vector<std::vector<DuMode>> du;                      // NonHopf
};

struct ScanConfig {
  std::vector<ModelGridEntry> models;
  std::vector<double> k_grid;
  double identity_tol = 1e-10;
  /// Residuals accumulate through two operator products, so the zero-decision
  /// threshold is kept one order looser than the identity checks.
  double residual_zero_tol = 1e-9;
  double r_min = kDefaultRadiusGuard;
  std::string format = "csv";
  std::string output_path;  // empty = stdout
  bool include_traces = false;
  std::uint64_t seed = 0;
};

/// One grid cell: a model evaluated at one k. Optional fields stay empty when
/// they do not apply to the row's kind (or when the model failed to build, in
/// which case `error` holds the reason and the residual fields are empty).
struct ScanRow {
  ModelKind kind = ModelKind::A1;
  std::optional<double> r;
  std::optional<int> n;
  int m = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  double k = 0.0;
  std::optional<double> sym, skew, vanish;
  std::optional<double> pred_sym, pred_skew, pred_vanish;
  std::optional<bool> predictor_match;
  std::string branch_annotation;
  bool discrepancy = false;
  std::string error;

  bool operator==(const ScanRow&) const = default;
};

struct ScanResult {
  std::vector<ScanRow> rows;

  bool operator==(const ScanResult&) const = default;
};

namespace detail {

inline ModelKind kind_from_string(const std::string& s, const std::string& path) {
  if (s == "A1") return ModelKind::A1;
  if (s == "A2") return ModelKind::A2;
  if (s == "HopfGeneric") return ModelKind::HopfGeneric;
  if (s == "NonHopf") return ModelKind::NonHopf;
  throw ConfigError(path, "unknown model kind '" + s + "'");
}

template <typename T>
inline T get_field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key, "wrong type");
  }
}

template <typename T>
inline T get_field_or(const json& j, const std::string& path, const char* key,
                      T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + key, "wrong type");
  }
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string sanitize_csv(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

}  // namespace detail

inline ScanConfig parse_config(const json& j) {
  ScanConfig cfg;
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");

  if (!j.contains("models") || !j.at("models").is_array()) {
    throw ConfigError("models", "required array of model grid entries");
  }
  int idx = 0;
  for (const auto& jm : j.at("models")) {
    const std::string path = "models[" + std::to_string(idx) + "]";
    ModelGridEntry e;
    e.kind = detail::kind_from_string(
        detail::get_field<std::string>(jm, path, "kind"), path + ".kind");
    e.m = detail::get_field<std::vector<int>>(jm, path, "m");
    e.r = detail::get_field_or<std::vector<double>>(jm, path, "r", {});
    e.arccot = detail::get_field_or<std::vector<double>>(jm, path, "arccot", {});
    e.n = detail::get_field_or<std::vector<int>>(jm, path, "n", {});
    e.alpha = detail::get_field_or<std::vector<double>>(jm, path, "alpha", {});
    e.beta = detail::get_field_or<std::vector<double>>(jm, path, "beta", {});

    if (jm.contains("planes")) {
      int pi = 0;
      for (const auto& alt : jm.at("planes")) {
        const std::string ppath = path + ".planes[" + std::to_string(pi++) + "]";
        std::vector<std::pair<double, int>> spectrum;
        if (!alt.is_array()) throw ConfigError(ppath, "expected array of {lambda, mult}");
        for (const auto& mode : alt) {
          spectrum.emplace_back(detail::get_field<double>(mode, ppath, "lambda"),
                                detail::get_field_or<int>(mode, ppath, "mult", 1));
        }
        e.planes.push_back(std::move(spectrum));
      }
    }
    if (jm.contains("du")) {
      int di = 0;
      for (const auto& alt : jm.at("du")) {
        const std::string dpath = path + ".du[" + std::to_string(di++) + "]";
        std::vector<DuMode> modes;
        if (!alt.is_array()) throw ConfigError(dpath, "expected array of {lambda, paired}");
        for (const auto& mode : alt) {
          modes.push_back(DuMode{detail::get_field<double>(mode, dpath, "lambda"),
                                 detail::get_field_or<bool>(mode, dpath, "paired", true)});
        }
        e.du.push_back(std::move(modes));
      }
    }

    switch (e.kind) {
      case ModelKind::A1:
      case ModelKind::A2:
        if (e.r.empty() && e.arccot.empty()) {
          throw ConfigError(path, "needs 'r' and/or 'arccot' radii");
        }
        if (e.kind == ModelKind::A2 && e.n.empty()) {
          throw ConfigError(path + ".n", "required for A2 entries");
        }
        break;
      case ModelKind::HopfGeneric:
        if (e.alpha.empty()) throw ConfigError(path + ".alpha", "required");
        if (e.planes.empty()) throw ConfigError(path + ".planes", "required");
        break;
      case ModelKind::NonHopf:
        if (e.alpha.empty()) throw ConfigError(path + ".alpha", "required");
        if (e.beta.empty()) throw ConfigError(path + ".beta", "required");
        if (e.du.empty()) throw ConfigError(path + ".du", "required");
        break;
    }
    cfg.models.push_back(std::move(e));
    ++idx;
  }

  cfg.k_grid = detail::get_field<std::vector<double>>(j, "$", "k_grid");
  for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
    if (std::abs(cfg.k_grid[i]) < 0.01) {
      throw ConfigError("k_grid[" + std::to_string(i) + "]",
                        "|k| >= 0.01 required (k = 0 excluded)");
    }
  }

  if (j.contains("tolerances")) {
    const auto& jt = j.at("tolerances");
    cfg.identity_tol =
        detail::get_field_or<double>(jt, "tolerances", "identity_tol", cfg.identity_tol);
    cfg.residual_zero_tol = detail::get_field_or<double>(
        jt, "tolerances", "residual_zero_tol", cfg.residual_zero_tol);
  }
  cfg.r_min = detail::get_field_or<double>(j, "$", "r_min", cfg.r_min);
  if (j.contains("output")) {
    const auto& jo = j.at("output");
    cfg.format = detail::get_field_or<std::string>(jo, "output", "format", cfg.format);
    cfg.output_path =
        detail::get_field_or<std::string>(jo, "output", "path", cfg.output_path);
  }
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("output.format", "must be 'csv' or 'json'");
  }
  cfg.include_traces = detail::get_field_or<bool>(j, "$", "include_traces", false);
  cfg.seed = detail::get_field_or<std::uint64_t>(j, "$", "seed", 0);

  // Radii must respect the pole guard so curvature entries stay bounded.
  for (std::size_t e = 0; e < cfg.models.size(); ++e) {
    for (std::size_t i = 0; i < cfg.models[e].r.size(); ++i) {
      const double r = cfg.models[e].r[i];
      if (!(r > cfg.r_min && r < M_PI_2 - cfg.r_min)) {
        throw ConfigError("models[" + std::to_string(e) + "].r[" + std::to_string(i) + "]",
                          "radius outside (r_min, pi/2 - r_min)");
      }
    }
  }
  return cfg;
}

inline ScanConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("$", std::string("invalid JSON: ") + ex.what());
  }
  return parse_config(j);
}

namespace detail {

struct BuiltModel {
  ModelKind kind = ModelKind::A1;
  std::optional<double> r;
  std::optional<int> n;
  int m = 0;
  std::optional<HypersurfaceModel> model;
  std::string error;
};

/// Expands the grid entry in its documented nested order:
/// A1: m, then radius; A2: m, n, radius; HopfGeneric: m, alpha, planes;
/// NonHopf: m, alpha, beta, du. Radii run through 'r' first, then 'arccot'.
inline void enumerate_models(const ModelGridEntry& e, double r_min,
                             std::vector<BuiltModel>& out) {
  const auto radii = [&]() {
    std::vector<double> rs = e.r;
    for (double v : e.arccot) rs.push_back(std::atan2(1.0, v));
    return rs;
  }();

  const auto emit = [&](ModelKind kind, std::optional<double> r, std::optional<int> n,
                        int m, auto&& build) {
    BuiltModel bm;
    bm.kind = kind;
    bm.r = r;
    bm.n = n;
    bm.m = m;
    try {
      bm.model = build();
    } catch (const std::exception& ex) {
      bm.error = ex.what();
    }
    out.push_back(std::move(bm));
  };

  switch (e.kind) {
    case ModelKind::A1:
      for (int m : e.m)
        for (double r : radii)
          emit(e.kind, r, std::nullopt, m, [&] { return geodesic_sphere(r, m, r_min); });
      break;
    case ModelKind::A2:
      for (int m : e.m)
        for (int n : e.n)
          for (double r : radii)
            emit(e.kind, r, n, m, [&] { return tube_a2(r, n, m, r_min); });
      break;
    case ModelKind::HopfGeneric:
      for (int m : e.m)
        for (double alpha : e.alpha)
          for (const auto& planes : e.planes)
            emit(e.kind, std::nullopt, std::nullopt, m,
                 [&] { return hopf_model(m, alpha, planes); });
      break;
    case ModelKind::NonHopf:
      for (int m : e.m)
        for (double alpha : e.alpha)
          for (double beta : e.beta)
            for (const auto& modes : e.du)
              emit(e.kind, std::nullopt, std::nullopt, m,
                   [&] { return nonhopf_model(m, alpha, beta, modes); });
      break;
  }
}

/// Solution families admitted by the skew-condition parameter branches:
/// the sphere of radius pi/4 at k = 1, and for k^2 >= 4 tubes whose radius
/// satisfies cot r = k or cot r = -1/k.
inline std::string claimed_branch(const ScanRow& row) {
  constexpr double eps = 1e-9;
  if (row.kind == ModelKind::A1 && row.r && std::abs(row.k - 1.0) <= 1e-12 &&
      std::abs(*row.r - M_PI / 4.0) <= eps) {
    return "sphere-pi/4-k1";
  }
  if (row.kind == ModelKind::A2 && row.r && row.k * row.k >= 4.0 - 1e-12) {
    const double c = cot(*row.r);
    if (std::abs(c - row.k) <= eps) return "tube-cot-r=k";
    if (std::abs(c + 1.0 / row.k) <= eps) return "tube-cot-r=-1/k";
  }
  return "";
}

inline void annotate(ScanRow& row, double residual_zero_tol) {
  if (!row.error.empty()) {
    row.branch_annotation = "error:" + sanitize_csv(row.error);
    row.discrepancy = false;
    return;
  }
  const std::string branch = claimed_branch(row);
  const bool claimed = !branch.empty();
  const bool zero = row.skew && *row.skew <= residual_zero_tol;

  std::string ann = "skew-branch:" + (claimed ? branch : std::string("none"));
  if (zero && claimed) {
    ann += ";skew-zero-confirmed";
  } else if (zero) {
    ann += ";skew-zero-unclaimed";
  } else if (claimed) {
    ann += ";claimed-but-nonzero";
  } else {
    ann += ";skew-nonzero";
  }

  if (row.kind != ModelKind::NonHopf) {
    // The symmetric condition admits no Hopf solution at all; record the
    // row's standing with respect to that.
    ann += (row.sym && *row.sym > residual_zero_tol) ? ";sym-nonzero"
                                                     : ";sym-ZERO-unexpected";
  } else if (row.alpha) {
    const double ka = row.k * (*row.alpha);
    if (std::abs(ka + 1.0) <= 1e-12) ann += ";scope:k-alpha=-1";
    if (std::abs(ka - 1.0) <= 1e-12) ann += ";scope:k-alpha=1";
  }

  row.branch_annotation = ann;
  row.discrepancy = (claimed && !zero) || (!claimed && zero);
}

inline ScanRow evaluate_cell(const BuiltModel& bm, double k, double identity_tol,
                             double residual_zero_tol) {
  ScanRow row;
  row.kind = bm.kind;
  row.r = bm.r;
  row.n = bm.n;
  row.m = bm.m;
  row.k = k;
  if (!bm.model) {
    row.error = bm.error;
    annotate(row, residual_zero_tol);
    return row;
  }
  const HypersurfaceModel& mod = *bm.model;
  row.alpha = mod.params.alpha;
  row.beta = mod.params.beta;

  try {
    TorsionFamily tf(mod, k);
    const ResidualReport rep = condition_residuals(tf);
    row.sym = rep.sym_residual;
    row.skew = rep.skew_residual;
    row.vanish = rep.vanish_residual;
    if (classify_type_a(mod, identity_tol).first) {
      const ResidualPrediction pred = typeA_residual_predictor(tf, identity_tol);
      row.pred_sym = pred.sym;
      row.pred_skew = pred.skew;
      row.pred_vanish = pred.vanish;
      constexpr double match_tol = 1e-10;
      row.predictor_match = std::abs(pred.sym - *row.sym) <= match_tol &&
                            std::abs(pred.skew - *row.skew) <= match_tol &&
                            std::abs(pred.vanish - *row.vanish) <= match_tol;
    }
  } catch (const std::exception& ex) {
    row.error = ex.what();
  }
  annotate(row, residual_zero_tol);
  return row;
}

}  // namespace detail

/// Evaluates every grid cell. Rows are ordered model-major (entries in config
/// order, each expanded in its documented nested order) with k ascending
/// inside each model. Cells are independent; with threads > 1 they are
/// evaluated concurrently into preallocated slots, so the result is identical
/// to a serial run.
inline ScanResult run_scan(const ScanConfig& cfg, unsigned threads = 1) {
  std::vector<detail::BuiltModel> models;
  for (const auto& entry : cfg.models) {
    detail::enumerate_models(entry, cfg.r_min, models);
  }
  std::vector<double> ks = cfg.k_grid;
  std::sort(ks.begin(), ks.end());

  ScanResult result;
  result.rows.resize(models.size() * ks.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t cell = begin; cell < end; ++cell) {
      const std::size_t mi = cell / ks.size();
      const std::size_t kj = cell % ks.size();
      result.rows[cell] = detail::evaluate_cell(models[mi], ks[kj], cfg.identity_tol,
                                                cfg.residual_zero_tol);
    }
  };

  const std::size_t total = result.rows.size();
  if (threads <= 1 || total < 2) {
    work(0, total);
  } else {
    const unsigned nt = std::min<std::size_t>(threads, total);
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return result;
}

inline const char* kCsvHeader =
    "kind,r,n,m,alpha,beta,k,sym_residual,skew_residual,vanish_residual,"
    "pred_sym,pred_skew,pred_vanish,predictor_match,branch_annotation,"
    "discrepancy_flag";

/// CSV report: fixed header, floating values at 17 significant digits,
/// empty cells for fields that do not apply to a row.
inline std::string emit_csv(const ScanResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  const auto opt = [](const std::optional<double>& v) {
    return v ? detail::fmt17(*v) : std::string();
  };
  for (const auto& row : result.rows) {
    out += to_string(row.kind);
    out += ',';
    out += opt(row.r);
    out += ',';
    out += row.n ? std::to_string(*row.n) : std::string();
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += opt(row.alpha);
    out += ',';
    out += opt(row.beta);
    out += ',';
    out += detail::fmt17(row.k);
    out += ',';
    out += opt(row.sym);
    out += ',';
    out += opt(row.skew);
    out += ',';
    out += opt(row.vanish);
    out += ',';
    out += opt(row.pred_sym);
    out += ',';
    out += opt(row.pred_skew);
    out += ',';
    out += opt(row.pred_vanish);
    out += ',';
    out += row.predictor_match ? (*row.predictor_match ? "1" : "0") : "";
    out += ',';
    out += detail::sanitize_csv(row.branch_annotation);
    out += ',';
    out += row.discrepancy ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline json row_to_json(const ScanRow& row, bool include_traces = false) {
  json j;
  j["kind"] = to_string(row.kind);
  if (row.r) j["r"] = *row.r;
  if (row.n) j["n"] = *row.n;
  j["m"] = row.m;
  if (row.alpha) j["alpha"] = *row.alpha;
  if (row.beta) j["beta"] = *row.beta;
  j["k"] = row.k;
  if (row.sym) j["sym_residual"] = *row.sym;
  if (row.skew) j["skew_residual"] = *row.skew;
  if (row.vanish) j["vanish_residual"] = *row.vanish;
  if (row.pred_sym) j["pred_sym"] = *row.pred_sym;
  if (row.pred_skew) j["pred_skew"] = *row.pred_skew;
  if (row.pred_vanish) j["pred_vanish"] = *row.pred_vanish;
  if (row.predictor_match) j["predictor_match"] = *row.predictor_match;
  j["branch_annotation"] = row.branch_annotation;
  j["discrepancy_flag"] = row.discrepancy;
  if (!row.error.empty()) j["error"] = row.error;
  if (include_traces && row.error.empty() && row.alpha) {
    json traces;
    if (row.kind != ModelKind::NonHopf) {
      traces["skew"] = to_json(hopf_skew_trace(row.k));
      traces["sym"] = to_json(hopf_symmetric_trace(*row.alpha, row.k));
    } else if (row.beta) {
      traces["skew"] = to_json(nonhopf_skew_trace(row.k, *row.alpha, *row.beta));
      traces["sym"] = to_json(nonhopf_symmetric_trace(row.k, *row.beta));
    }
    j["traces"] = traces;
  }
  return j;
}

inline json emit_json(const ScanResult& result, bool include_traces = false) {
  json j;
  j["rows"] = json::array();
  for (const auto& row : result.rows) {
    j["rows"].push_back(row_to_json(row, include_traces));
  }
  return j;
}

/// Inverse of emit_json over the row fields (embedded traces are report-only
/// and ignored here).
inline ScanResult parse_result(const json& j) {
  ScanResult result;
  for (const auto& jr : j.at("rows")) {
    ScanRow row;
    row.kind = detail::kind_from_string(jr.at("kind").get<std::string>(), "rows[].kind");
    if (jr.contains("r")) row.r = jr.at("r").get<double>();
    if (jr.contains("n")) row.n = jr.at("n").get<int>();
    row.m = jr.at("m").get<int>();
    if (jr.contains("alpha")) row.alpha = jr.at("alpha").get<double>();
    if (jr.contains("beta")) row.beta = jr.at("beta").get<double>();
    row.k = jr.at("k").get<double>();
    if (jr.contains("sym_residual")) row.sym = jr.at("sym_residual").get<double>();
    if (jr.contains("skew_residual")) row.skew = jr.at("skew_residual").get<double>();
    if (jr.contains("vanish_residual")) row.vanish = jr.at("vanish_residual").get<double>();
    if (jr.contains("pred_sym")) row.pred_sym = jr.at("pred_sym").get<double>();
    if (jr.contains("pred_skew")) row.pred_skew = jr.at("pred_skew").get<double>();
    if (jr.contains("pred_vanish")) row.pred_vanish = jr.at("pred_vanish").get<double>();
    if (jr.contains("predictor_match"))
      row.predictor_match = jr.at("predictor_match").get<bool>();
    row.branch_annotation = jr.at("branch_annotation").get<std::string>();
    row.discrepancy = jr.at("discrepancy_flag").get<bool>();
    if (jr.contains("error")) row.error = jr.at("error").get<std::string>();
    result.rows.push_back(std::move(row));
  }
  return result;
}

/// Serializes the result in the requested format ("csv" or "json").
inline std::string emit_report(const ScanResult& result, const std::string& format,
                               bool include_traces = false) {
  if (format == "csv") return emit_csv(result);
  if (format == "json") return emit_json(result, include_traces).dump(2) + "\n";
  throw ConfigError("output.format", "must be 'csv' or 'json'");
}

/// Writes the report to `path`, or to stdout when `path` is empty.
inline void write_report(const std::string& report, const std::string& path) {
  if (path.empty()) {
    std::fwrite(report.data(), 1, report.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  out.write(report.data(), static_cast<std::streamsize>(report.size()));
  if (!out) throw IoError(path);
}

}  // namespace rhlab
