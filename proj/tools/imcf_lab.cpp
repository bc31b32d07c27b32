// imcf-lab: run scenario files, check hypotheses, print reference values.
//
// Exit codes: 0 success, 1 validation failure, 2 solver failure, 3 IO failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "imcf/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSolver = 2;
constexpr int kIo = 3;

struct Overrides {
  std::string out;
  std::vector<std::string> formats;
  std::string grid;
  double dt = 0.0;
};

void apply(imcf::Scenario& sc, const Overrides& o) {
  if (!o.out.empty()) sc.out_dir = o.out;
  if (!o.formats.empty()) sc.formats = o.formats;
  if (!o.grid.empty()) {
    const auto x = o.grid.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument("no x");
      std::size_t used = 0;
      sc.ntheta = std::stoi(o.grid.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("trailing");
      sc.nphi = std::stoi(o.grid.substr(x + 1), &used);
      if (used != o.grid.size() - x - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw imcf::ValidationError("--seed-grid expects NTHETAxNPHI, got '" + o.grid + "'");
    }
  }
  if (o.dt > 0.0) sc.dt = o.dt;
  imcf::validate_scenario(sc);
}

void print_row(const imcf::RowResult& r) {
  std::printf("eps=%-10s %-16s", imcf::format_number(r.epsilon).c_str(), imcf::to_string(r.status));
  if (r.status != imcf::RowStatus::ok) {
    std::printf(" %s\n", r.message.c_str());
    return;
  }
  std::printf(" m_H(T)=%s", imcf::format_number(r.m_H_T).c_str());
  if (!r.hat_model_series.empty()) {
    std::printf(" l2(hat,model)=%s", imcf::format_number(r.hat_model_series.back()).c_str());
  }
  if (r.class_report) std::printf(" class=%s", r.class_pass() ? "pass" : "fail");
  if (r.compat_report) std::printf(" compat=%s", r.compat_pass() ? "pass" : "fail");
  if (r.pinch_violations) std::printf(" pinch=%d", *r.pinch_violations);
  std::printf("\n");
}

int row_exit_code(const imcf::ReportTable& t) {
  int code = kOk;
  for (const auto& r : t.rows) {
    if (r.status == imcf::RowStatus::solver_error) code = kSolver;
    if (r.status == imcf::RowStatus::validation_error && code == kOk) code = kValidation;
  }
  return code;
}

int cmd_run(const std::string& path, const Overrides& o, int workers, bool quiet) {
  imcf::Scenario sc = imcf::load_scenario(path);
  apply(sc, o);
  const imcf::ReportTable table = imcf::run_sequence(sc, workers);
  if (!quiet) {
    for (const auto& r : table.rows) print_row(r);
  }
  const auto files = imcf::emit(table, sc.formats, sc.out_dir);
  if (!quiet) {
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
  }
  return row_exit_code(table);
}

int cmd_verify(const std::string& path, const Overrides& o, int workers, bool quiet) {
  imcf::Scenario sc = imcf::load_scenario(path);
  apply(sc, o);
  imcf::RowOptions opt;
  opt.distances = false;
  opt.samples = false;
  const imcf::ReportTable table = imcf::run_sequence(sc, workers, opt);
  bool all = true;
  for (const auto& r : table.rows) {
    if (!quiet) print_row(r);
    if (r.status != imcf::RowStatus::ok) continue;
    const auto line = [&](const char* name, bool pass) {
      all = all && pass;
      if (!quiet) std::printf("  %-7s %s\n", name, pass ? "PASS" : "FAIL");
    };
    if (r.class_report) line("class", r.class_pass());
    if (r.compat_report) line("compat", r.compat_pass());
    if (r.pinch_violations) line("pinch", r.pinch_pass());
    if (r.geroch_max_decrease) line("geroch", *r.geroch_max_decrease <= 1e-8);
  }
  const int code = row_exit_code(table);
  if (code != kOk) return code;
  return all ? kOk : kValidation;
}

int cmd_oracle() {
  std::printf("%-10s %5s %5s %5s %14s %14s %14s %14s %14s %14s %14s\n", "model", "m", "r0", "t", "s", "H", "m_H",
              "I_H2", "I_Rc", "I_K12", "Hbar2");
  for (const auto& o : imcf::oracle_table()) {
    std::printf("%-10s %5g %5g %5g %14.10g %14.10g %14.10g %14.10g %14.10g %14.10g %14.10g\n", o.model.c_str(), o.m,
                o.r0, o.t, o.s, o.H, o.m_H, o.I_H2, o.I_Rc, o.I_K12, o.Hbar2);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse mean curvature flow laboratory"};
  app.require_subcommand(1);

  Overrides o;
  int workers = 1;
  bool quiet = false;
  std::string path;

  auto* run = app.add_subcommand("run", "Run a scenario and write reports");
  run->add_option("scenario", path, "Scenario file (JSON)")->required();
  run->add_option("--out", o.out, "Output directory");
  run->add_option("--format", o.formats, "Comma-separated formats: csv,json,plot")->delimiter(',');
  run->add_option("--workers", workers, "Rows computed concurrently")->check(CLI::PositiveNumber);
  run->add_option("--seed-grid", o.grid, "Grid override NTHETAxNPHI");
  run->add_option("--dt", o.dt, "Time step override")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress output");

  auto* verify = app.add_subcommand("verify", "Run only the hypothesis checks");
  verify->add_option("scenario", path, "Scenario file (JSON)")->required();
  verify->add_option("--workers", workers, "Rows computed concurrently")->check(CLI::PositiveNumber);
  verify->add_option("--seed-grid", o.grid, "Grid override NTHETAxNPHI");
  verify->add_option("--dt", o.dt, "Time step override")->check(CLI::PositiveNumber);
  verify->add_flag("--quiet", quiet, "No progress output");

  app.add_subcommand("oracle", "Print closed-form reference values for round model flows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(path, o, workers, quiet);
    if (*verify) return cmd_verify(path, o, workers, quiet);
    return cmd_oracle();
  } catch (const imcf::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const imcf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kValidation;
  } catch (const imcf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const imcf::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  }
}
