#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "symmorse.h"

namespace fs = std::filesystem;

namespace {

struct Args {
  std::string problem;
  std::string theorem;
  std::string side;
  double T = 0;
  int nodes = 0;
  double lambda_max = 0;
  int threads = 0;
  std::string out = ".";
  std::string format = "json";
  bool convergence = false;
  bool no_timings = false;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--problem", a.problem, "problem file, or the name of a built-in problem")->required();
  cmd->add_option("--side", a.side, "override the declared side")->check(CLI::IsMember({"line", "plus", "minus"}));
  cmd->add_option("--T", a.T, "truncation time")->check(CLI::PositiveNumber);
  cmd->add_option("--nodes", a.nodes, "finite element nodes (odd count keeps t = 0 on the mesh)")
      ->check(CLI::Range(16, 100000000));
  cmd->add_option("--lambda-max", a.lambda_max, "upper end of the spectral parameter sweep")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", a.threads, "worker threads")->check(CLI::Range(1, 1024));
  cmd->add_option("--out", a.out, "directory for report.json and side files")->capture_default_str();
  cmd->add_option("--format", a.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_flag("--convergence", a.convergence, "rerun with T and nodes doubled and compare the integers");
  cmd->add_flag("--no-timings", a.no_timings, "omit the timings section, making reports byte-reproducible");
}

int open_problem(const std::string& spec, symmorse_problem** out) {
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) return symmorse_problem_load(spec.c_str(), out);
  for (std::size_t i = 0; i < symmorse_builtin_count(); ++i) {
    if (spec == symmorse_builtin_name(i)) return symmorse_problem_builtin(spec.c_str(), out);
  }
  std::cerr << "error: '" << spec << "' is neither a readable file nor a built-in problem\n";
  return SYMMORSE_ERR_ARGUMENT;
}

int write_artifacts(const symmorse_result* r, const Args& a) {
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) {
    std::cerr << "error: cannot create " << a.out << ": " << ec.message() << "\n";
    return SYMMORSE_ERR_ARGUMENT;
  }
  for (std::size_t i = 0; i < symmorse_result_artifact_count(r); ++i) {
    const std::string name = symmorse_result_artifact_name(r, i);
    if (name == "report.csv" && a.format != "csv") continue;
    std::ofstream f(fs::path(a.out) / name, std::ios::binary);
    f << symmorse_result_artifact_data(r, i);
    if (!f) {
      std::cerr << "error: cannot write " << (fs::path(a.out) / name).string() << "\n";
      return SYMMORSE_ERR_ARGUMENT;
    }
  }
  return SYMMORSE_OK;
}

int run(const std::string& command, const Args& a) {
  symmorse_options o;
  symmorse_options_init(&o);
  o.T = a.T;
  o.nodes = a.nodes;
  o.lambda_max = a.lambda_max;
  o.threads = a.threads;
  o.convergence = a.convergence ? 1 : 0;
  o.timings = a.no_timings ? 0 : 1;
  static const std::map<std::string, int> sides = {
      {"line", SYMMORSE_SIDE_LINE}, {"plus", SYMMORSE_SIDE_PLUS}, {"minus", SYMMORSE_SIDE_MINUS}};
  if (!a.side.empty()) o.side = sides.at(a.side);
  if (const char* seed = std::getenv("SYMMORSE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(seed, &end, 0);
    if (!*seed || *end) {
      std::cerr << "error: SYMMORSE_SEED must be an integer, got '" << seed << "'\n";
      return SYMMORSE_ERR_ARGUMENT;
    }
    o.has_seed = 1;
    o.seed = static_cast<std::uint64_t>(v);
  }

  symmorse_problem* problem = nullptr;
  int status = open_problem(a.problem, &problem);
  if (status != SYMMORSE_OK) {
    if (status != SYMMORSE_ERR_ARGUMENT || *symmorse_last_error()) std::cerr << "error: " << symmorse_last_error() << "\n";
    return status;
  }

  symmorse_result* result = nullptr;
  if (command == "check") {
    status = symmorse_check(problem, &o, &result);
  } else if (command == "indices") {
    status = symmorse_indices(problem, &o, &result);
  } else if (command == "verify") {
    status = symmorse_verify(problem, a.theorem.c_str(), &o, &result);
  } else {
    status = symmorse_sweep(problem, &o, &result);
  }
  const std::string error = symmorse_last_error();
  symmorse_problem_free(problem);

  if (result) {
    std::cout << (a.format == "csv" ? symmorse_result_csv(result) : symmorse_result_json(result));
    const int written = write_artifacts(result, a);
    symmorse_result_free(result);
    if (written != SYMMORSE_OK && status == SYMMORSE_OK) status = written;
  }
  if (status != SYMMORSE_OK && !error.empty()) std::cerr << "error: " << error << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse, Maslov and spectral-flow indices of linear Hamiltonian systems"};
  app.set_version_flag("--version", std::string(symmorse_version()));
  app.require_subcommand(1);

  Args a;
  auto* check = app.add_subcommand("check", "hyperbolicity, coefficient conditions, thresholds");
  auto* indices = app.add_subcommand("indices", "Morse index, geometric index and correction for the declared side");
  auto* verify = app.add_subcommand("verify", "check an index theorem on the problem");
  auto* sweep = app.add_subcommand("sweep", "spectral parameter sweep with CSV tables and SVG plots");
  auto* list = app.add_subcommand("list", "print the built-in problem names");
  for (auto* cmd : {check, indices, verify, sweep}) add_common(cmd, a);
  verify->add_option("--theorem", a.theorem, "which identity to check")
      ->required()
      ->check(CLI::IsMember({"B", "C", "D", "dirichlet"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SYMMORSE_ERR_ARGUMENT;
  }

  if (list->parsed()) {
    for (std::size_t i = 0; i < symmorse_builtin_count(); ++i) std::cout << symmorse_builtin_name(i) << "\n";
    return 0;
  }
  for (auto* cmd : {check, indices, verify, sweep}) {
    if (cmd->parsed()) return run(cmd->get_name(), a);
  }
  return SYMMORSE_ERR_ARGUMENT;
}
