// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "imcf/harness.hpp"

using namespace imcf;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %s (%.0fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
  std::fflush(stdout);
}

// Observed order from two errors; errors below the floor count as converged.
double order(double coarse, double fine, double ratio = 2.0, double floor = 1e-13) {
  if (coarse <= floor) return std::numeric_limits<double>::infinity();
  return std::log(coarse / std::max(fine, floor)) / std::log(ratio);
}

FlowTrack flow(const AmbientProfile& p, const GraphSurface& s0, double T, double dt, int every = 10) {
  FlowOptions opt;
  opt.snapshot_every = every;
  opt.track_normal = false;
  return run(p, s0, T, dt, opt);
}

double max_res22(const FlowTrack& tr) {
  const GerochResidual r = geroch_identity_residual(tr);
  return *std::max_element(r.res22.begin(), r.res22.end());
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3g", x);
  return s;
}

std::size_t field(const std::string& name) {
  const auto& f = sample_fields();
  return static_cast<std::size_t>(std::find(f.begin(), f.end(), name) - f.begin());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double shape(double th, double ph) {
  return std::exp(0.2 * std::cos(th)) * (1.0 + 0.05 * std::sin(th) * std::sin(th) * std::cos(2 * ph));
}

}  // namespace

int main() {
  const auto hyp = AmbientProfile::hyperbolic();
  const double m = 1.0, r0 = 2.0;
  const auto adss = AmbientProfile::adss(m);
  const GridPtr grid = make_grid(64, 128);

  // Shared model flows at the default resolution.
  const FlowTrack hyp_round = flow(hyp, make_round(hyp, 1.0, grid), 2.0, 1e-3);
  const FlowTrack adss_round = flow(adss, make_round(adss, r0, grid), 2.0, 1e-3);

  criterion(1, "exact round flow", [&] {
    double rel = 0.0;
    for (std::size_t k = 0; k < hyp_round.size(); ++k) {
      const double s = std::exp(0.5 * hyp_round.times[k]);
      rel = std::max(rel, (hyp_round.surfaces[k].u.array() - s).abs().maxCoeff() / s);
    }
    // The round flow is integrated exactly; orders come from self-convergence
    // on a perturbed sphere.
    const auto s0 = [](int nt) { return make_graph(AmbientProfile::hyperbolic(), make_grid(nt, 2 * nt), shape); };
    std::vector<Field> u;
    for (double dt : {0.01, 0.005, 0.0025}) u.push_back(flow(hyp, s0(16), 0.4, dt, 1).surfaces.back().u);
    const double p_dt = order((u[0] - u[1]).cwiseAbs().maxCoeff(), (u[1] - u[2]).cwiseAbs().maxCoeff());
    std::vector<double> area;
    for (int nt : {8, 16, 64}) area.push_back(flow(hyp, s0(nt), 0.4, 1e-3).geometries.back().area());
    const double p_h = order(std::abs(area[0] - area[2]), std::abs(area[1] - area[2]), 2.0, 1e-12 * area[2]);
    return Outcome{rel <= 1e-4 && p_dt >= 1.0 && p_h >= 1.9,
                   fmt("max rel err %.2e; order dt %.2f, order h %.2f", rel, p_dt, p_h)};
  });

  criterion(2, "Hawking mass rigidity", [&] {
    double hyp_max = 0.0, adss_dev = 0.0;
    for (const SurfaceGeometry& g : hyp_round.geometries) hyp_max = std::max(hyp_max, std::abs(hawking_mass(g)));
    for (const SurfaceGeometry& g : adss_round.geometries) adss_dev = std::max(adss_dev, std::abs(hawking_mass(g) - m));
    return Outcome{hyp_max <= 1e-6 && adss_dev <= 1e-3 * m,
                   fmt("hyperbolic max |m_H| %.2e; AdSS max |m_H - m| %.2e", hyp_max, adss_dev)};
  });

  criterion(3, "mass derivative identity", [&] {
    const Scenario sc = load_scenario(std::string(IMCF_SCENARIO_DIR) + "/mass_aspect_round.json");
    const RowSetup setup = row_setup(sc, 0.1);
    const auto ma = [&](double dt) {
      return flow(setup.profile, initial_surface(sc, setup, grid), sc.T, dt);
    };
    const double floor = 1e-10;
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<std::string, std::function<FlowTrack(double)>>> cases{
        {"hyperbolic", [&](double dt) { return dt == 1e-3 ? hyp_round : flow(hyp, make_round(hyp, 1.0, grid), 2.0, dt); }},
        {"AdSS", [&](double dt) { return dt == 1e-3 ? adss_round : flow(adss, make_round(adss, r0, grid), 2.0, dt); }},
        {"mass-aspect", ma}};
    for (const auto& [name, make] : cases) {
      const double coarse = max_res22(make(1e-3));
      const double fine = max_res22(make(5e-4));
      const bool halves = coarse <= floor || fine <= 0.5 * coarse;
      ok = ok && coarse <= 5e-3 && halves;
      detail += fmt("%s%s %.2e -> %.2e", detail.empty() ? "" : "; ", name.c_str(), coarse, fine);
    }
    return Outcome{ok, detail};
  });

  criterion(4, "AdSS closed forms", [&] {
    double worst = 0.0;
    for (double t : {0.0, 1.0, 2.0}) {
      const SnapshotIntegrals s = snapshot_integrals(adss_round.geometries[adss_round.index_of(t)]);
      const double e = std::exp(-0.5 * t);
      worst = std::max(worst, std::abs(s.I_Rc / (-8.0 * kPi * m * e / r0) - 1.0));
      worst = std::max(worst, std::abs(s.I_K12 / (8.0 * kPi * m * e / r0) - 1.0));
      worst = std::max(worst, std::abs(s.I_H2 / (16.0 * kPi * (1.0 - 2.0 * m * e / r0)) - 1.0));
    }
    return Outcome{worst <= 1e-2, fmt("m = 1, r0 = 2: max relative deviation %.2e", worst)};
  });

  // The shipped scenario suite at its own settings.
  std::map<std::string, ReportTable> suite;
  std::map<std::string, double> runtime;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(IMCF_SCENARIO_DIR)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    const Scenario sc = load_scenario(f.string());
    const auto t0 = std::chrono::steady_clock::now();
    suite.emplace(sc.id, run_sequence(sc, 1));
    runtime[sc.id] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("     scenario %-18s %zu rows, %.0fs\n", sc.id.c_str(), sc.epsilons().size(), runtime[sc.id]);
    std::fflush(stdout);
  }

  criterion(5, "Geroch monotonicity", [&] {
    double worst = 0.0;
    int rows = 0, skipped = 0;
    bool ok = true;
    for (const auto& [id, table] : suite) {
      for (const RowResult& r : table.rows) {
        if (r.status != RowStatus::ok) {
          ok = false;
          continue;
        }
        if (r.class_report && !r.class_report->r_floor_ok) {
          ++skipped;
          continue;
        }
        if (!r.geroch_max_decrease) continue;
        ++rows;
        worst = std::max(worst, *r.geroch_max_decrease);
      }
    }
    return Outcome{ok && rows > 0 && worst <= 1e-8,
                   fmt("%d rows, max per-step decrease %.2e (%d rows skipped: R < -6)", rows, worst, skipped)};
  });

  criterion(6, "Gauss-Bonnet", [&] {
    double round = 0.0, ell = 0.0;
    for (const SurfaceGeometry& g : hyp_round.geometries) round = std::max(round, std::abs(euler_characteristic(g) - 2.0));
    for (const SurfaceGeometry& g : adss_round.geometries) round = std::max(round, std::abs(euler_characteristic(g) - 2.0));
    const Scenario sc = load_scenario(std::string(IMCF_SCENARIO_DIR) + "/ellipsoid_h3.json");
    const RowSetup setup = row_setup(sc, 0.05);
    ell = std::abs(euler_characteristic(geometry(setup.profile, initial_surface(sc, setup, grid))) - 2.0);
    for (const RowResult& r : suite.at("ellipsoid_h3").rows) {
      for (const SampleRow& s : r.samples) ell = std::max(ell, std::abs(s.values[field("chi")] - 2.0));
    }
    return Outcome{round <= 1e-6 && ell <= 1e-3, fmt("round %.2e; ellipsoidal %.2e", round, ell)};
  });

  criterion(7, "weak Ricci pairing", [&] {
    const TestFunction one{[](double, double, double) { return 1.0; }, [](double, double, double) { return 0.0; }};
    const PairingResult p = weak_ricci_pairing(hyp_round, one, 0.0, 1.0);
    const double closed = -16.0 * kPi * (std::exp(1.0) - 1.0);
    const double rel = p.residual() / std::abs(p.lhs);
    return Outcome{rel <= 1e-2, fmt("lhs %.6f (closed form %.6f), |lhs - rhs| / |lhs| %.2e", p.lhs, closed, rel)};
  });

  const auto sweep = [&](const ReportTable& t, bool positive_only) {
    std::map<std::string, std::vector<double>> cols;
    for (const RowResult& r : t.rows) {
      if (positive_only && r.epsilon == 0.0) continue;
      cols["m_H_T"].push_back(r.m_H_T);
      cols["hat_model"].push_back(r.hat_model_series.empty() ? NAN : r.hat_model_series.back());
      cols["gauss_dev"].push_back(r.samples.empty() ? NAN : r.samples.back().values[field("gauss_dev")]);
      cols["c_alpha"].push_back(r.c_alpha);
    }
    return cols;
  };
  const auto zero_row = [](const ReportTable& t) -> const RowResult* {
    for (const RowResult& r : t.rows) {
      if (r.epsilon == 0.0) return &r;
    }
    return nullptr;
  };

  criterion(8, "PMT sweep", [&] {
    const ReportTable& t = suite.at("pmt_sweep");
    if (t.any_failed()) return Outcome{false, "a row failed"};
    auto cols = sweep(t, true);
    bool ok = true;
    std::string detail;
    for (const char* c : {"m_H_T", "hat_model", "gauss_dev", "c_alpha"}) {
      ok = ok && strictly_decreasing(cols[c]);
      detail += fmt("%s [%s]; ", c, join(cols[c]).c_str());
    }
    const RowResult* z = zero_row(t);
    const double floor = z ? z->hat_model_series.back() : NAN;
    const double sec = runtime.at("pmt_sweep");
    ok = ok && z && floor <= 1e-5 && sec <= 300.0;
    return Outcome{ok, detail + fmt("eps = 0 l2 %.2e; runtime %.0fs", floor, sec)};
  });

  criterion(9, "RPI sweep", [&] {
    const ReportTable& t = suite.at("rpi_sweep");
    if (t.any_failed()) return Outcome{false, "a row failed"};
    const auto cols = sweep(t, false);
    const RowResult* z = zero_row(t);
    const double floor = z ? z->hat_model_series.back() : NAN;
    const bool ok = strictly_decreasing(cols.at("hat_model")) && z && floor <= 1e-5;
    return Outcome{ok, fmt("l2(hat, AdSS) [%s]; eps = 0 %.2e", join(cols.at("hat_model")).c_str(), floor)};
  });

  criterion(10, "pinch bounds", [&] {
    int rows = 0, violations = 0;
    double worst = 0.0;
    for (const auto& [id, table] : suite) {
      for (const RowResult& r : table.rows) {
        if (!r.pinch_violations) continue;
        ++rows;
        violations += *r.pinch_violations;
        worst = std::min(worst, r.pinch_worst);
      }
    }
    return Outcome{rows > 0 && violations == 0,
                   fmt("%d rows, %d violating nodes, worst slack %.2e", rows, violations, worst)};
  });

  criterion(11, "coordinate compatibility", [&] {
    const RowResult& r = suite.at("hyperbolic_long").rows.front();
    if (!r.compat_report) return Outcome{false, "no compat report: " + r.message};
    const CompatReport& c = *r.compat_report;
    Scenario coarse = load_scenario(std::string(IMCF_SCENARIO_DIR) + "/hyperbolic_long.json");
    coarse.ntheta = 32;
    coarse.nphi = 64;
    RowOptions opt;
    opt.distances = false;
    opt.samples = false;
    const RowResult rc = run_row(coarse, 0.0, opt);
    if (!rc.compat_report) return Outcome{false, "coarse run failed: " + rc.message};
    const double w = c.ricci_w12, wc = rc.compat_report->ricci_w12;
    const double drift = std::abs(w - wc) / w;
    const bool ok = c.C1 >= 0.4 && c.C2 <= 0.8 && c.C3 <= 1e-10 && std::isfinite(w) && drift <= 1e-2;
    return Outcome{ok, fmt("C1 %.4f, C2 %.4f, C3 %.1e; W12 %.6f (32x64: %.6f, drift %.1e)", c.C1, c.C2, c.C3, w,
                           wc, drift)};
  });

  criterion(12, "determinism", [&] {
    const fs::path dir = fs::temp_directory_path() / "imcf_acceptance_determinism";
    fs::remove_all(dir);
    const std::string scenario = std::string(IMCF_SCENARIO_DIR) + "/ellipsoid_h3.json";
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / std::to_string(k);
      const std::string cmd = std::string(IMCF_LAB_EXE) + " run " + scenario + " --out " + out.string() +
                              " --format csv --quiet --workers " + std::to_string(k + 1);
      const int rc = std::system(cmd.c_str());
      if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) return Outcome{false, "imcf-lab run failed: " + cmd};
      csv[k] = slurp(out / "ellipsoid_h3.csv");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    return Outcome{same, fmt("ellipsoid_h3 CSV, %zu bytes, %s", csv[0].size(), same ? "identical" : "differs")};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
