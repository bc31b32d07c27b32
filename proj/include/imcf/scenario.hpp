#pragma once

// Scenario files: one JSON document per experiment. Unknown keys are errors.
//
//   {
//     "id": "pmt_sweep",
//     "mode": "PMT",                      // or "RPI" (then "mass" is required)
//     "mass": 0.5,
//     "profile": {"kind": "hyperbolic"},  // or a "family" block, not both
//     "family": {"kind": "pmt_combined", "epsilons": [0.1, 0.05, 0]},
//     "surface": {"kind": "round", "radius": 1.0},
//     "T": 2.0, "dt": 1e-3, "grid": [64, 128], "snapshot_every": 10,
//     "t_samples": [0, 0.5, 1, 1.5, 2],
//     "checks": {"class": true, "compat": true, "pinch": true, "geroch": true},
//     "compat": {"a": 1, "b": 2, "t_star": 1},
//     "declared": {"H0": 1.0, "H1": 3.0, "A1": 2.0, "I0": 0.1},
//     "output": {"dir": "out", "formats": ["csv", "json", "plot"]}
//   }

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "imcf/errors.hpp"

namespace imcf {

using nlohmann::json;

enum class Mode { PMT, RPI };

struct ProfileSpec {
  std::string kind = "hyperbolic";  // hyperbolic | adss | mass_aspect | tabulated
  double mass = 0.0;                // adss
  std::vector<double> s, m;         // mass_aspect samples
  std::vector<double> r, lambda;    // tabulated samples
};

struct FamilySpec {
  std::string kind;  // pmt_combined | rpi_mass_aspect | ellipsoid
  std::vector<double> epsilons;
  double bump_lo = 1.2, bump_hi = 2.2;  // support of the mass-aspect ramp (area radius)
  double ellipsoid_ratio = 0.5;         // pmt_combined: graph amplitude / epsilon
  std::string formula = "p2";
};

struct SurfaceSpec {
  std::string kind = "round";  // round | graph
  double radius = 1.0;         // area radius of the base sphere
  std::string formula = "p2";  // p1 | p2 | sin2cos2
  double amplitude = 0.0;
};

struct CheckToggles {
  bool class_check = true, compat = true, pinch = true, geroch = true;
};

struct CompatWindow {
  std::optional<double> a, b, t_star;
  std::optional<double> C1, C2, C3;  // declared constants, checked when given
};

struct DeclaredBounds {
  std::optional<double> H0, H1, A1, I0, r0;
};

struct Scenario {
  std::string id;
  Mode mode = Mode::PMT;
  double mass = 0.0;
  std::optional<ProfileSpec> profile;
  std::optional<FamilySpec> family;
  SurfaceSpec surface;
  double T = 2.0;
  double dt = 1e-3;
  int ntheta = 64, nphi = 128;
  int snapshot_every = 10;
  std::vector<double> t_samples;
  CheckToggles checks;
  CompatWindow compat;
  DeclaredBounds declared;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json", "plot"};

  /// epsilon of each row; a single 0 for fixed-profile scenarios.
  [[nodiscard]] std::vector<double> epsilons() const {
    return family ? family->epsilons : std::vector<double>{0.0};
  }
  [[nodiscard]] double snapshot_spacing() const { return dt * snapshot_every; }
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw ParseError("unknown key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
    }
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError("key '" + (where.empty() ? "" : where + ".") + key + "' has the wrong type");
  }
}

template <class T>
void get_opt(const json& obj, const char* key, const std::string& where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

template <class T>
void get_opt(const json& obj, const char* key, const std::string& where, std::optional<T>& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline bool on_grid(double t, double h) {
  const double k = t / h;
  return std::abs(k - std::round(k)) < 1e-6;
}

}  // namespace detail

/// Validates the invariants of a parsed scenario and fills derived defaults.
/// Collects every violation before throwing.
inline void validate_scenario(Scenario& sc) {
  std::vector<std::string> bad;
  if (sc.id.empty()) bad.emplace_back("id must be nonempty");
  if (sc.profile.has_value() == sc.family.has_value()) {
    bad.emplace_back("exactly one of 'profile' and 'family' is required");
  }
  if (sc.mode == Mode::RPI && !(sc.mass > 0.0)) bad.emplace_back("RPI mode needs mass > 0");
  if (!(sc.T > 0.0)) bad.emplace_back("T must be positive");
  if (!(sc.dt > 0.0)) bad.emplace_back("dt must be positive");
  if (!detail::power_of_two(sc.ntheta) || !detail::power_of_two(sc.nphi) || sc.ntheta < 8) {
    bad.emplace_back("grid sizes must be powers of two with ntheta >= 8");
  }
  if (sc.snapshot_every < 1) bad.emplace_back("snapshot_every must be >= 1");
  if (sc.dt > 0.0 && sc.T > 0.0 && sc.snapshot_every >= 1) {
    const double n = sc.T / sc.dt;
    if (std::abs(n - std::round(n)) > 1e-6) {
      bad.emplace_back("dt must divide T");
    } else if (static_cast<long>(std::llround(n)) % sc.snapshot_every != 0) {
      bad.emplace_back("snapshot_every must divide the step count T / dt");
    }
  }
  if (!(sc.surface.radius > 0.0)) bad.emplace_back("surface.radius must be positive");
  if (sc.surface.kind != "round" && sc.surface.kind != "graph") {
    bad.emplace_back("surface.kind must be 'round' or 'graph'");
  }
  for (const std::string* f : {&sc.surface.formula, sc.family ? &sc.family->formula : &sc.surface.formula}) {
    if (*f != "p1" && *f != "p2" && *f != "sin2cos2") bad.emplace_back("unknown graph formula '" + *f + "'");
  }
  if (sc.family) {
    const FamilySpec& f = *sc.family;
    if (f.kind != "pmt_combined" && f.kind != "rpi_mass_aspect" && f.kind != "ellipsoid") {
      bad.emplace_back("unknown family kind '" + f.kind + "'");
    }
    if (f.kind == "rpi_mass_aspect" && sc.mode != Mode::RPI) bad.emplace_back("rpi_mass_aspect needs mode RPI");
    if (f.kind == "pmt_combined" && sc.mode != Mode::PMT) bad.emplace_back("pmt_combined needs mode PMT");
    if (f.epsilons.empty()) bad.emplace_back("family.epsilons must be nonempty");
    for (std::size_t i = 0; i < f.epsilons.size(); ++i) {
      if (!(f.epsilons[i] >= 0.0)) bad.emplace_back("family.epsilons must be nonnegative");
      if (i > 0 && !(f.epsilons[i] < f.epsilons[i - 1])) {
        bad.emplace_back("family.epsilons must be strictly decreasing");
        break;
      }
    }
    if (!(f.bump_lo > 0.0 && f.bump_hi > f.bump_lo)) bad.emplace_back("family.bump must satisfy 0 < lo < hi");
    if (!(f.ellipsoid_ratio >= 0.0)) bad.emplace_back("family.ellipsoid_ratio must be nonnegative");
  }
  if (sc.profile) {
    const ProfileSpec& p = *sc.profile;
    if (p.kind == "adss" && !(p.mass > 0.0)) bad.emplace_back("profile.mass must be positive for adss");
    if (p.kind == "mass_aspect" && (p.s.size() < 2 || p.s.size() != p.m.size())) {
      bad.emplace_back("profile.s and profile.m must have equal length >= 2");
    }
    if (p.kind == "tabulated" && (p.r.size() < 4 || p.r.size() != p.lambda.size())) {
      bad.emplace_back("profile.r and profile.lambda must have equal length >= 4");
    }
    if (p.kind != "hyperbolic" && p.kind != "adss" && p.kind != "mass_aspect" && p.kind != "tabulated") {
      bad.emplace_back("unknown profile kind '" + p.kind + "'");
    }
  }
  if (sc.t_samples.empty() && sc.T > 0.0) {
    sc.t_samples = {0.0, 0.25 * sc.T, 0.5 * sc.T, 0.75 * sc.T, sc.T};
  }
  const double h = sc.snapshot_spacing();
  for (std::size_t i = 0; i < sc.t_samples.size(); ++i) {
    const double t = sc.t_samples[i];
    if (t < 0.0 || t > sc.T + 1e-12 || (h > 0.0 && !detail::on_grid(t, h))) {
      bad.emplace_back("t_samples entry " + std::to_string(t) + " is not a snapshot time in [0, T]");
    }
    if (i > 0 && !(t > sc.t_samples[i - 1])) bad.emplace_back("t_samples must be increasing");
  }
  for (const std::string& f : sc.formats) {
    if (f != "csv" && f != "json" && f != "plot") bad.emplace_back("unknown output format '" + f + "'");
  }
  if (!bad.empty()) {
    std::string msg = "invalid scenario '" + sc.id + "':";
    for (const std::string& b : bad) msg += "\n  - " + b;
    throw ValidationError(msg);
  }
}

inline Scenario parse_scenario(const json& doc) {
  using detail::get;
  using detail::get_opt;
  detail::reject_unknown(doc, "", {"id", "mode", "mass", "profile", "family", "surface", "T", "dt", "grid",
                                   "snapshot_every", "t_samples", "checks", "compat", "declared", "output"});
  Scenario sc;
  if (!doc.contains("id")) throw ParseError("missing key 'id'");
  sc.id = get<std::string>(doc, "id", "");
  if (doc.contains("mode")) {
    const auto mode = get<std::string>(doc, "mode", "");
    if (mode == "PMT") {
      sc.mode = Mode::PMT;
    } else if (mode == "RPI") {
      sc.mode = Mode::RPI;
    } else {
      throw ParseError("key 'mode': unknown value '" + mode + "'");
    }
  }
  get_opt(doc, "mass", "", sc.mass);
  if (doc.contains("profile")) {
    const json& p = doc.at("profile");
    detail::reject_unknown(p, "profile", {"kind", "mass", "s", "m", "r", "lambda"});
    ProfileSpec ps;
    get_opt(p, "kind", "profile", ps.kind);
    if (ps.kind != "hyperbolic" && ps.kind != "adss" && ps.kind != "mass_aspect" && ps.kind != "tabulated") {
      throw ParseError("key 'profile.kind': unknown profile kind '" + ps.kind + "'");
    }
    get_opt(p, "mass", "profile", ps.mass);
    get_opt(p, "s", "profile", ps.s);
    get_opt(p, "m", "profile", ps.m);
    get_opt(p, "r", "profile", ps.r);
    get_opt(p, "lambda", "profile", ps.lambda);
    sc.profile = ps;
  }
  if (doc.contains("family")) {
    const json& f = doc.at("family");
    detail::reject_unknown(f, "family", {"kind", "epsilons", "bump", "ellipsoid_ratio", "formula"});
    FamilySpec fs;
    if (!f.contains("kind")) throw ParseError("missing key 'family.kind'");
    fs.kind = get<std::string>(f, "kind", "family");
    if (fs.kind != "pmt_combined" && fs.kind != "rpi_mass_aspect" && fs.kind != "ellipsoid") {
      throw ParseError("key 'family.kind': unknown family kind '" + fs.kind + "'");
    }
    if (!f.contains("epsilons")) throw ParseError("missing key 'family.epsilons'");
    fs.epsilons = get<std::vector<double>>(f, "epsilons", "family");
    if (f.contains("bump")) {
      const auto b = get<std::vector<double>>(f, "bump", "family");
      if (b.size() != 2) throw ParseError("key 'family.bump' must hold two numbers");
      fs.bump_lo = b[0];
      fs.bump_hi = b[1];
    }
    get_opt(f, "ellipsoid_ratio", "family", fs.ellipsoid_ratio);
    get_opt(f, "formula", "family", fs.formula);
    sc.family = fs;
  }
  if (doc.contains("surface")) {
    const json& s = doc.at("surface");
    detail::reject_unknown(s, "surface", {"kind", "radius", "formula", "amplitude"});
    get_opt(s, "kind", "surface", sc.surface.kind);
    get_opt(s, "radius", "surface", sc.surface.radius);
    get_opt(s, "formula", "surface", sc.surface.formula);
    get_opt(s, "amplitude", "surface", sc.surface.amplitude);
  }
  get_opt(doc, "T", "", sc.T);
  get_opt(doc, "dt", "", sc.dt);
  if (doc.contains("grid")) {
    const auto g = get<std::vector<int>>(doc, "grid", "");
    if (g.size() != 2) throw ParseError("key 'grid' must hold [ntheta, nphi]");
    sc.ntheta = g[0];
    sc.nphi = g[1];
  }
  get_opt(doc, "snapshot_every", "", sc.snapshot_every);
  get_opt(doc, "t_samples", "", sc.t_samples);
  if (doc.contains("checks")) {
    const json& c = doc.at("checks");
    detail::reject_unknown(c, "checks", {"class", "compat", "pinch", "geroch"});
    get_opt(c, "class", "checks", sc.checks.class_check);
    get_opt(c, "compat", "checks", sc.checks.compat);
    get_opt(c, "pinch", "checks", sc.checks.pinch);
    get_opt(c, "geroch", "checks", sc.checks.geroch);
  }
  if (doc.contains("compat")) {
    const json& c = doc.at("compat");
    detail::reject_unknown(c, "compat", {"a", "b", "t_star", "C1", "C2", "C3"});
    get_opt(c, "a", "compat", sc.compat.a);
    get_opt(c, "b", "compat", sc.compat.b);
    get_opt(c, "t_star", "compat", sc.compat.t_star);
    get_opt(c, "C1", "compat", sc.compat.C1);
    get_opt(c, "C2", "compat", sc.compat.C2);
    get_opt(c, "C3", "compat", sc.compat.C3);
  }
  if (doc.contains("declared")) {
    const json& d = doc.at("declared");
    detail::reject_unknown(d, "declared", {"H0", "H1", "A1", "I0", "r0"});
    get_opt(d, "H0", "declared", sc.declared.H0);
    get_opt(d, "H1", "declared", sc.declared.H1);
    get_opt(d, "A1", "declared", sc.declared.A1);
    get_opt(d, "I0", "declared", sc.declared.I0);
    get_opt(d, "r0", "declared", sc.declared.r0);
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    detail::reject_unknown(o, "output", {"dir", "formats"});
    get_opt(o, "dir", "output", sc.out_dir);
    get_opt(o, "formats", "output", sc.formats);
  }
  validate_scenario(sc);
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line number for the message.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  return parse_scenario(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

/// The scenario with every default filled in, in file syntax.
inline json to_json(const Scenario& sc) {
  json j;
  j["id"] = sc.id;
  j["mode"] = sc.mode == Mode::PMT ? "PMT" : "RPI";
  if (sc.mode == Mode::RPI) j["mass"] = sc.mass;
  if (sc.profile) {
    const ProfileSpec& p = *sc.profile;
    json pj{{"kind", p.kind}};
    if (p.kind == "adss") pj["mass"] = p.mass;
    if (p.kind == "mass_aspect") pj["s"] = p.s, pj["m"] = p.m;
    if (p.kind == "tabulated") pj["r"] = p.r, pj["lambda"] = p.lambda;
    j["profile"] = pj;
  }
  if (sc.family) {
    const FamilySpec& f = *sc.family;
    j["family"] = {{"kind", f.kind},
                   {"epsilons", f.epsilons},
                   {"bump", {f.bump_lo, f.bump_hi}},
                   {"ellipsoid_ratio", f.ellipsoid_ratio},
                   {"formula", f.formula}};
  }
  j["surface"] = {{"kind", sc.surface.kind},
                  {"radius", sc.surface.radius},
                  {"formula", sc.surface.formula},
                  {"amplitude", sc.surface.amplitude}};
  j["T"] = sc.T;
  j["dt"] = sc.dt;
  j["grid"] = {sc.ntheta, sc.nphi};
  j["snapshot_every"] = sc.snapshot_every;
  j["t_samples"] = sc.t_samples;
  j["checks"] = {{"class", sc.checks.class_check},
                 {"compat", sc.checks.compat},
                 {"pinch", sc.checks.pinch},
                 {"geroch", sc.checks.geroch}};
  json c = json::object();
  const auto put = [](json& o, const char* k, const std::optional<double>& v) {
    if (v) o[k] = *v;
  };
  put(c, "a", sc.compat.a);
  put(c, "b", sc.compat.b);
  put(c, "t_star", sc.compat.t_star);
  put(c, "C1", sc.compat.C1);
  put(c, "C2", sc.compat.C2);
  put(c, "C3", sc.compat.C3);
  j["compat"] = c;
  json d = json::object();
  put(d, "H0", sc.declared.H0);
  put(d, "H1", sc.declared.H1);
  put(d, "A1", sc.declared.A1);
  put(d, "I0", sc.declared.I0);
  put(d, "r0", sc.declared.r0);
  j["declared"] = d;
  j["output"] = {{"dir", sc.out_dir}, {"formats", sc.formats}};
  return j;
}

}  // namespace imcf
