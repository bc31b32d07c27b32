#pragma once

// Scenario execution: builds the ambient and initial surface for every
// epsilon row, runs the flow, evaluates diagnostics, distances and checks,
// and writes CSV / JSON / gnuplot reports.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "imcf/ambient.hpp"
#include "imcf/checks.hpp"
#include "imcf/comparison.hpp"
#include "imcf/errors.hpp"
#include "imcf/imcf.hpp"
#include "imcf/mass.hpp"
#include "imcf/scenario.hpp"
#include "imcf/surface.hpp"

namespace imcf {

inline constexpr int kReportSchemaVersion = 1;

/// CSV columns, in output order.
inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "scenario_id", "epsilon", "t",       "area",      "m_H",       "I_gradH",    "I_pinch",
      "I_R",         "I_Rc",    "I_K12",   "I_H2",      "I_A2",      "I_prod",     "Hbar2",
      "hat_g1",      "g1_g2",   "g2_g3",   "g3_model",  "hat_model", "chi",        "diam",
      "class_pass",  "compat_pass", "pinch_pass", "c_alpha", "gauss_dev", "status"};
  return cols;
}

/// Numeric per-sample columns (everything between "t" and the flags, plus the two trailing metrics).
inline const std::vector<std::string>& sample_fields() {
  static const std::vector<std::string> f{"area",  "m_H",    "I_gradH", "I_pinch",  "I_R",       "I_Rc",
                                          "I_K12", "I_H2",   "I_A2",    "I_prod",   "Hbar2",     "hat_g1",
                                          "g1_g2", "g2_g3",  "g3_model", "hat_model", "chi",     "diam",
                                          "gauss_dev"};
  return f;
}

struct SampleRow {
  double t = 0.0;
  std::vector<double> values;  // aligned with sample_fields()
};

enum class RowStatus { ok, validation_error, solver_error };

inline const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::validation_error: return "validation_error";
    case RowStatus::solver_error: return "solver_error";
  }
  return "?";
}

struct RowResult {
  double epsilon = 0.0;
  RowStatus status = RowStatus::ok;
  std::string message;
  std::vector<SampleRow> samples;
  std::optional<ClassReport> class_report;
  std::optional<CompatReport> compat_report;
  std::optional<int> pinch_violations;
  double pinch_worst = 0.0;
  std::optional<double> geroch_max_decrease;
  double m_H_T = std::numeric_limits<double>::quiet_NaN();
  std::optional<MassFit> m_inf;
  double c_alpha = std::numeric_limits<double>::quiet_NaN();
  double r0 = 0.0;
  std::vector<double> hat_model_series;  // cumulative over all snapshots
  [[nodiscard]] bool class_pass() const { return class_report && class_report->pass(); }
  [[nodiscard]] bool compat_pass() const { return compat_report && compat_report->pass(); }
  [[nodiscard]] bool pinch_pass() const { return pinch_violations && *pinch_violations == 0; }
};

struct ReportTable {
  Scenario scenario;
  std::vector<RowResult> rows;
  [[nodiscard]] bool any_failed() const {
    for (const RowResult& r : rows) {
      if (r.status != RowStatus::ok) return true;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Row construction

/// Quintic smootherstep ramp from 0 at lo to 1 at hi.
inline double ramp(double s, double lo, double hi) {
  const double x = std::clamp((s - lo) / (hi - lo), 0.0, 1.0);
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

inline double graph_shape(const std::string& formula, double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  if (formula == "p1") return c;
  if (formula == "p2") return 1.5 * c * c - 0.5;
  if (formula == "sin2cos2") return s * s * std::cos(2.0 * phi);
  throw ArgumentError("unknown graph formula '" + formula + "'");
}

/// Mass-aspect ambient m(s) = base + eps * ramp(s) sampled densely for PCHIP.
inline AmbientProfile ramp_profile(double base, double eps, double lo, double hi, double s_min, double s_max) {
  const int n = 801;
  std::vector<double> s(n), m(n);
  for (int i = 0; i < n; ++i) {
    s[i] = s_min + (s_max - s_min) * i / (n - 1);
    m[i] = base + eps * ramp(s[i], lo, hi);
  }
  return AmbientProfile::mass_aspect(s, m);
}

struct RowSetup {
  AmbientProfile profile;
  std::string formula;
  double amplitude = 0.0;
};

inline RowSetup row_setup(const Scenario& sc, double eps) {
  const double s0 = sc.surface.radius;
  const double s_far = 2.0 * s0 * std::exp(0.5 * sc.T) + 2.0;
  if (sc.profile) {
    const ProfileSpec& p = *sc.profile;
    RowSetup r{AmbientProfile::hyperbolic(), sc.surface.formula,
               sc.surface.kind == "graph" ? sc.surface.amplitude : 0.0};
    if (p.kind == "adss") r.profile = AmbientProfile::adss(p.mass);
    if (p.kind == "mass_aspect") r.profile = AmbientProfile::mass_aspect(p.s, p.m);
    if (p.kind == "tabulated") r.profile = AmbientProfile::tabulated(p.r, p.lambda);
    return r;
  }
  const FamilySpec& f = *sc.family;
  const double s_far_f = std::max(s_far, 2.0 * f.bump_hi);
  if (f.kind == "pmt_combined") {
    RowSetup r{eps > 0.0 ? ramp_profile(0.0, eps, f.bump_lo, f.bump_hi, 0.25 * s0, s_far_f)
                         : AmbientProfile::hyperbolic(),
               f.formula, f.ellipsoid_ratio * eps};
    return r;
  }
  if (f.kind == "rpi_mass_aspect") {
    const double s_min = std::max(0.5 * s0, 1.02 * AmbientProfile::horizon_radius(sc.mass));
    RowSetup r{eps > 0.0 ? ramp_profile(sc.mass, eps, f.bump_lo, f.bump_hi, s_min, s_far_f)
                         : AmbientProfile::adss(sc.mass),
               sc.surface.formula, sc.surface.kind == "graph" ? sc.surface.amplitude : 0.0};
    return r;
  }
  // ellipsoid: exact model ambient, graph amplitude epsilon.
  RowSetup r{sc.mode == Mode::RPI ? AmbientProfile::adss(sc.mass) : AmbientProfile::hyperbolic(), f.formula, eps};
  return r;
}

inline GraphSurface initial_surface(const Scenario& sc, const RowSetup& setup, GridPtr grid) {
  const double s0 = sc.surface.radius;
  if (setup.amplitude == 0.0) return make_round(setup.profile, s0, grid);
  const std::string formula = setup.formula;
  const double a = setup.amplitude;
  return make_graph(setup.profile, grid,
                    [=](double th, double ph) { return s0 * (1.0 + a * graph_shape(formula, th, ph)); });
}

inline RowStatus classify(const Error& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ParamError*>(&e) ||
      dynamic_cast<const ProfileError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const WindowError*>(&e)) {
    return RowStatus::validation_error;
  }
  return RowStatus::solver_error;
}

struct RowOptions {
  bool distances = true;  // skip for check-only runs
  bool samples = true;
};

/// Runs one epsilon row. Never throws; failures are recorded in the row.
inline RowResult run_row(const Scenario& sc, double eps, const RowOptions& opt = {}) {
  RowResult row;
  row.epsilon = eps;
  try {
    const RowSetup setup = row_setup(sc, eps);
    const GridPtr grid = make_grid(sc.ntheta, sc.nphi);
    const GraphSurface s0 = initial_surface(sc, setup, grid);
    FlowOptions fo;
    fo.snapshot_every = sc.snapshot_every;
    fo.track_normal = sc.checks.pinch;
    const FlowTrack track = run(setup.profile, s0, sc.T, sc.dt, fo);
    const MassDiagnostics d = diagnostics(track);
    row.r0 = track.bounds.r0;
    row.m_H_T = d.m_H.back();
    try {
      row.m_inf = mass_at_infinity(d.t, d.m_H);
    } catch (const Error&) {
      row.m_inf.reset();
    }
    row.c_alpha = c_alpha_distance_to_round(track.geometries.front(), row.r0);

    if (sc.checks.class_check) {
      DeclaredClass dc{sc.declared.H0, sc.declared.H1, sc.declared.A1, sc.declared.I0, sc.declared.r0};
      row.class_report = check_class_membership(track, dc);
    }
    if (sc.checks.compat) {
      const double b = sc.compat.b.value_or(sc.T);
      const double a = sc.compat.a.value_or(0.5 * b);
      const double ts = sc.compat.t_star.value_or(0.5 * b);
      row.compat_report =
          check_coordinate_compatibility(track, a, b, ts, DeclaredCompat{sc.compat.C1, sc.compat.C2, sc.compat.C3});
    }
    if (sc.checks.pinch) {
      // About twenty evenly spaced snapshots: each check interpolates the
      // initial metric at every label, which costs far more than a flow step.
      std::vector<std::size_t> idx;
      const std::size_t every = std::max<std::size_t>(1, (track.size() - 1) / 20);
      for (std::size_t k = 0; k < track.size(); k += every) idx.push_back(k);
      if (idx.back() != track.size() - 1) idx.push_back(track.size() - 1);
      const PinchReport pr = pinch_bounds_check(track, 1e-9, idx);
      row.pinch_violations = pr.total();
      row.pinch_worst = std::min(pr.worst_lower, pr.worst_upper);
    }
    if (sc.checks.geroch) row.geroch_max_decrease = max_mass_decrease(d.m_H);

    std::vector<std::vector<double>> dist(5, std::vector<double>(track.size(), 0.0));
    if (opt.distances) {
      const bool rpi = sc.mode == Mode::RPI;
      MetricParams mp;
      mp.m = rpi ? sc.mass : 0.0;
      const ProductMetricGrid hat = assemble(track, MetricLabel::hat, mp);
      const ProductMetricGrid g1 = assemble(track, MetricLabel::g1, mp);
      const ProductMetricGrid g2 = assemble(track, MetricLabel::g2, mp);
      const ProductMetricGrid g3 = assemble(track, rpi ? MetricLabel::g3_rpi : MetricLabel::g3_pmt, mp);
      const ProductMetricGrid model =
          assemble(track, rpi ? MetricLabel::adss_model : MetricLabel::hyperbolic_model, mp);
      dist[0] = l2_distance_series(hat, g1, model, track);
      dist[1] = l2_distance_series(g1, g2, model, track);
      dist[2] = l2_distance_series(g2, g3, model, track);
      dist[3] = l2_distance_series(g3, model, model, track);
      dist[4] = l2_distance_series(hat, model, model, track);
      row.hat_model_series = dist[4];
    }
    if (opt.samples) {
      for (double t : sc.t_samples) {
        const std::size_t k = track.index_of(t);
        const SurfaceGeometry& g = track.geometries[k];
        SampleRow sr;
        sr.t = track.times[k];
        sr.values = {d.area[k],   d.m_H[k],    d.I_gradH[k], d.I_pinch[k],  d.I_R[k],   d.I_Rc[k],
                     d.I_K12[k],  d.I_H2[k],   d.I_A2[k],    d.I_prod[k],   d.Hbar2[k], dist[0][k],
                     dist[1][k],  dist[2][k],  dist[3][k],   dist[4][k],    d.chi[k],   intrinsic_diameter(g),
                     gauss_deviation(g, row.r0, track.times[k] - track.times.front())};
        row.samples.push_back(std::move(sr));
      }
    }
  } catch (const Error& e) {
    row.status = classify(e);
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = RowStatus::solver_error;
    row.message = e.what();
  }
  return row;
}

/// Runs every epsilon row, up to `workers` rows at a time. Rows are
/// independent and each is computed single-threaded, so the result does not
/// depend on the worker count.
inline ReportTable run_sequence(const Scenario& sc, int workers = 1, const RowOptions& opt = {},
                                const std::function<void(const RowResult&)>& on_row = {}) {
  ReportTable table;
  table.scenario = sc;
  const std::vector<double> eps = sc.epsilons();
  table.rows.resize(eps.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < eps.size(); i = next++) table.rows[i] = run_row(sc, eps[i], opt);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(eps.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (on_row) {
    for (const RowResult& r : table.rows) on_row(r);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Output

/// 12 significant digits; nan for missing values.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline std::string to_csv(const ReportTable& table) {
  std::ostringstream os;
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  const auto flag = [](bool enabled, bool pass) -> std::string { return enabled ? (pass ? "1" : "0") : "na"; };
  for (const RowResult& r : table.rows) {
    const std::string status =
        r.status == RowStatus::ok ? "ok" : std::string(to_string(r.status)) + ": " + r.message;
    const std::size_t n = table.scenario.t_samples.size();
    for (std::size_t k = 0; k < n; ++k) {
      const bool have = k < r.samples.size();
      const double t = have ? r.samples[k].t : table.scenario.t_samples[k];
      os << csv_quote(table.scenario.id) << "," << format_number(r.epsilon) << "," << format_number(t);
      for (std::size_t f = 0; f + 1 < sample_fields().size(); ++f) {
        os << "," << format_number(have ? r.samples[k].values[f] : std::nan(""));
      }
      os << "," << flag(r.class_report.has_value(), r.class_pass());
      os << "," << flag(r.compat_report.has_value(), r.compat_pass());
      os << "," << flag(r.pinch_violations.has_value(), r.pinch_pass());
      os << "," << format_number(r.c_alpha);
      os << "," << format_number(have ? r.samples[k].values.back() : std::nan(""));
      os << "," << csv_quote(status) << "\n";
    }
  }
  return os.str();
}

namespace detail {
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json to_json(const ReportTable& table) {
  using detail::number_or_null;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = to_json(table.scenario);
  j["columns"] = report_columns();
  json rows = json::array();
  for (const RowResult& r : table.rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["status"] = to_string(r.status);
    row["message"] = r.message;
    row["r0"] = number_or_null(r.r0);
    row["m_H_T"] = number_or_null(r.m_H_T);
    row["m_inf"] = r.m_inf ? json{{"value", r.m_inf->m_inf}, {"c", r.m_inf->c}, {"rms", r.m_inf->rms}}
                           : json(nullptr);
    row["c_alpha"] = number_or_null(r.c_alpha);
    if (r.class_report) {
      const ClassReport& c = *r.class_report;
      row["class"] = {{"pass", c.pass()},
                      {"H_min", c.H_min},
                      {"H_max", c.H_max},
                      {"max_A", c.max_A},
                      {"r0", c.r0},
                      {"r0_ok", c.r0_ok},
                      {"m_H0", c.m_H0},
                      {"mass_nonnegative", c.mass_nonnegative},
                      {"bounds_ok", c.bounds_ok},
                      {"I0_declared", c.I0 ? json(*c.I0) : json(nullptr)},
                      {"r_floor_ok", c.r_floor_ok},
                      {"min_R", c.min_R}};
    } else {
      row["class"] = nullptr;
    }
    if (r.compat_report) {
      const CompatReport& c = *r.compat_report;
      row["compat"] = {{"pass", c.pass()}, {"C1", c.C1},       {"C2", c.C2},        {"C3", c.C3},
                       {"ricci_w12", c.ricci_w12}, {"t", c.t}, {"r_min", c.r_min}, {"r_max", c.r_max},
                       {"grad_f", c.grad_f}};
    } else {
      row["compat"] = nullptr;
    }
    row["pinch"] = r.pinch_violations
                       ? json{{"pass", r.pinch_pass()}, {"violations", *r.pinch_violations}, {"worst", r.pinch_worst}}
                       : json(nullptr);
    row["geroch_max_decrease"] = r.geroch_max_decrease ? json(*r.geroch_max_decrease) : json(nullptr);
    json samples = json::array();
    for (const SampleRow& s : r.samples) {
      json sj;
      sj["t"] = s.t;
      for (std::size_t f = 0; f < sample_fields().size(); ++f) sj[sample_fields()[f]] = number_or_null(s.values[f]);
      samples.push_back(sj);
    }
    row["samples"] = samples;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

/// Structural validation of a report document against the current schema.
/// Returns the list of problems (empty when valid).
inline std::vector<std::string> validate_report_json(const json& j) {
  std::vector<std::string> bad;
  const auto need = [&](const json& o, const char* key, json::value_t type, const std::string& where) {
    if (!o.is_object() || !o.contains(key)) {
      bad.push_back(where + ": missing '" + key + "'");
      return false;
    }
    const json& v = o.at(key);
    const bool ok = type == json::value_t::number_float      ? v.is_number()
                    : type == json::value_t::number_unsigned ? v.is_number_integer()
                                                             : v.type() == type;
    if (!ok) bad.push_back(where + ": '" + key + "' has the wrong type");
    return ok;
  };
  if (!j.is_object()) return {"document is not an object"};
  if (need(j, "schema_version", json::value_t::number_unsigned, "root") &&
      j.at("schema_version").get<int>() != kReportSchemaVersion) {
    bad.emplace_back("root: unsupported schema_version");
  }
  if (need(j, "scenario", json::value_t::object, "root")) {
    try {
      (void)parse_scenario(j.at("scenario"));
    } catch (const Error& e) {
      bad.push_back(std::string("scenario: ") + e.what());
    }
  }
  if (need(j, "columns", json::value_t::array, "root") &&
      j.at("columns").get<std::vector<std::string>>() != report_columns()) {
    bad.emplace_back("root: column list differs from this version");
  }
  if (!need(j, "rows", json::value_t::array, "root")) return bad;
  for (std::size_t i = 0; i < j.at("rows").size(); ++i) {
    const json& r = j.at("rows")[i];
    const std::string w = "rows[" + std::to_string(i) + "]";
    need(r, "epsilon", json::value_t::number_float, w);
    if (need(r, "status", json::value_t::string, w)) {
      const auto s = r.at("status").get<std::string>();
      if (s != "ok" && s != "validation_error" && s != "solver_error") bad.push_back(w + ": unknown status");
    }
    for (const char* k : {"class", "compat", "pinch", "m_inf", "m_H_T", "c_alpha", "geroch_max_decrease"}) {
      if (!r.contains(k)) bad.push_back(w + ": missing '" + k + "'");
    }
    if (!need(r, "samples", json::value_t::array, w)) continue;
    for (std::size_t k = 0; k < r.at("samples").size(); ++k) {
      const json& s = r.at("samples")[k];
      const std::string ws = w + ".samples[" + std::to_string(k) + "]";
      need(s, "t", json::value_t::number_float, ws);
      for (const std::string& f : sample_fields()) {
        if (!s.contains(f) || !(s.at(f).is_number() || s.at(f).is_null())) bad.push_back(ws + ": bad '" + f + "'");
      }
    }
  }
  return bad;
}

/// gnuplot script drawing m_H and l2(hat, model) against t, one curve per epsilon.
inline std::string to_gnuplot(const ReportTable& table, const std::string& csv_name) {
  std::ostringstream os;
  const auto& cols = report_columns();
  const auto col = [&](const std::string& name) {
    return std::to_string(std::find(cols.begin(), cols.end(), name) - cols.begin() + 1);
  };
  os << "# usage: gnuplot " << table.scenario.id << ".gp\n";
  os << "set datafile separator ','\n";
  os << "set datafile missing 'nan'\n";
  os << "set terminal pngcairo size 1200,500\n";
  os << "set output '" << table.scenario.id << ".png'\n";
  os << "set multiplot layout 1,2\n";
  os << "set key left top\n";
  os << "csv = '" << csv_name << "'\n";
  std::string eps_list;
  for (const RowResult& r : table.rows) eps_list += (eps_list.empty() ? "" : " ") + format_number(r.epsilon);
  os << "eps = '" << eps_list << "'\n";
  for (const std::string& field : {std::string("m_H"), std::string("hat_model")}) {
    os << "set xlabel 't'\nset ylabel '" << field << "'\n";
    os << "plot for [e in eps] csv every ::1 using " << col("t") << ":(strcol(" << col("epsilon")
       << ") eq e ? $" << col(field) << " : 1/0) with linespoints title 'eps = '.e\n";
  }
  os << "unset multiplot\n";
  return os.str();
}

/// Writes the requested formats into dir as <id>.csv, <id>.json, <id>.gp.
/// Returns the written paths.
inline std::vector<std::string> emit(const ReportTable& table, const std::vector<std::string>& formats,
                                     const std::string& dir) {
  if (table.rows.empty()) throw ArgumentError("emit: empty report");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  const auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write to '" + path + "' failed");
    written.push_back(path);
  };
  const std::string csv_name = table.scenario.id + ".csv";
  for (const std::string& f : formats) {
    if (f == "csv") {
      write(csv_name, to_csv(table));
    } else if (f == "json") {
      write(table.scenario.id + ".json", to_json(table).dump(2) + "\n");
    } else if (f == "plot") {
      write(table.scenario.id + ".gp", to_gnuplot(table, csv_name));
    } else {
      throw ArgumentError("emit: unknown format '" + f + "'");
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Closed-form reference values

struct OracleRow {
  std::string model;
  double m = 0.0, r0 = 0.0, t = 0.0;
  double s = 0.0, H = 0.0, m_H = 0.0, I_H2 = 0.0, I_Rc = 0.0, I_K12 = 0.0, Hbar2 = 0.0;
};

/// Round coordinate-sphere flows in hyperbolic space and AdS-Schwarzschild.
inline std::vector<OracleRow> oracle_table(double m = 1.0, double r0_adss = 2.0, double r0_hyp = 1.0) {
  std::vector<OracleRow> rows;
  const double pi = std::numbers::pi;
  for (int model = 0; model < 2; ++model) {
    const double mm = model == 0 ? 0.0 : m;
    const double r0 = model == 0 ? r0_hyp : r0_adss;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      OracleRow o;
      o.model = model == 0 ? "hyperbolic" : "adss";
      o.m = mm;
      o.r0 = r0;
      o.t = t;
      o.s = r0 * std::exp(0.5 * t);
      o.H = 2.0 * std::sqrt(1.0 + o.s * o.s - 2.0 * mm / o.s) / o.s;
      o.m_H = mm;
      o.I_H2 = 16.0 * pi * (1.0 - 2.0 / r0 * mm * std::exp(-0.5 * t));
      o.I_Rc = -8.0 * pi / r0 * mm * std::exp(-0.5 * t);
      o.I_K12 = -o.I_Rc;
      o.Hbar2 = model_mean_curvature_sq(t, r0, mm);
      rows.push_back(o);
    }
  }
  return rows;
}

}  // namespace imcf
