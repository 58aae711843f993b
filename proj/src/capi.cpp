#include "symmorse.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symmorse/error.hpp"
#include "symmorse/index_algebra.hpp"
#include "symmorse/maslov.hpp"
#include "symmorse/problem.hpp"
#include "symmorse/report.hpp"

struct symmorse_problem {
  symmorse::ProblemSpec spec;
};

struct symmorse_result {
  std::string json;
  std::string csv;
  bool certified = true;
  int residual = 0;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

using namespace symmorse;

thread_local std::string last_error;
thread_local int last_line = 0;
thread_local int last_column = 0;

void clear_error() {
  last_error.clear();
  last_line = 0;
  last_column = 0;
}

int set_error(int code, const std::string& what) {
  last_error = what;
  return code;
}

// Runs `body`, mapping exceptions onto status codes.
template <class F>
int guarded(F&& body) {
  clear_error();
  try {
    return body();
  } catch (const ParseError& e) {
    last_line = e.line();
    last_column = e.column();
    return set_error(SYMMORSE_ERR_PARSE, e.what());
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::invalid_argument:
        return set_error(SYMMORSE_ERR_ARGUMENT, e.what());
      case ErrorKind::parse:
        return set_error(SYMMORSE_ERR_PARSE, e.what());
      case ErrorKind::validation:
        return set_error(SYMMORSE_ERR_VALIDATION, e.what());
      case ErrorKind::numeric:
        return set_error(SYMMORSE_ERR_NUMERIC, e.what());
    }
    return set_error(SYMMORSE_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SYMMORSE_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SYMMORSE_ERR_NUMERIC, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<Side> side_of(int side) {
  switch (side) {
    case SYMMORSE_SIDE_DEFAULT:
      return std::nullopt;
    case SYMMORSE_SIDE_LINE:
      return Side::line;
    case SYMMORSE_SIDE_PLUS:
      return Side::plus;
    case SYMMORSE_SIDE_MINUS:
      return Side::minus;
  }
  throw ArgumentError("unknown side " + std::to_string(side));
}

struct Prepared {
  CoefficientSystem sys;
  RunConfig cfg;
  BoundarySpec boundary;
  ReportContext ctx;
  bool convergence = false;
};

Prepared prepare(const symmorse_problem* problem, const symmorse_options* options, const char* command) {
  if (!problem) throw ArgumentError("problem handle is null");
  symmorse_options o;
  symmorse_options_init(&o);
  if (options) o = *options;
  Prepared p;
  p.cfg = run_config(problem->spec);
  if (o.T > 0) p.cfg.T = o.T;
  if (o.nodes > 0) p.cfg.nodes = o.nodes;
  if (o.lambda_max > 0) p.cfg.lambda_max = o.lambda_max;
  if (o.threads > 0) p.cfg.threads = o.threads;
  if (o.has_seed) p.cfg.seed = o.seed;
  if (p.cfg.nodes < 16) throw ArgumentError("nodes must be at least 16");
  p.sys = build_system(problem->spec, p.cfg.tol);
  p.boundary = boundary_of(problem->spec, side_of(o.side));
  p.convergence = o.convergence != 0;
  p.ctx.command = command;
  p.ctx.problem_text = serialize_problem(problem->spec);
  p.ctx.config = p.cfg;
  p.ctx.timings = o.timings != 0;
  return p;
}

int status_of(const IndexReport& r, bool identity, int uncertified) {
  if (identity && r.residual != 0) return SYMMORSE_ERR_RESIDUAL;
  if (!r.certified) return set_error(uncertified, "run not certified: " + [&] {
                        for (const auto& f : r.flags)
                          if (!f.ok) return f.name + (f.detail.empty() ? "" : " (" + f.detail + ")");
                        return std::string("unknown check");
                      }());
  return SYMMORSE_OK;
}

int finish_report(const IndexReport& r, const Prepared& p, const ConvergenceCheck* conv, bool identity,
                  int uncertified, symmorse_result** out) {
  auto res = std::make_unique<symmorse_result>();
  res->json = report_json(r, p.ctx, conv);
  res->csv = report_csv(r);
  res->certified = r.certified;
  res->residual = r.residual;
  res->artifacts.emplace_back("report.json", res->json);
  res->artifacts.emplace_back("report.csv", res->csv);
  int status = status_of(r, identity, uncertified);
  if (status == SYMMORSE_OK && conv && !conv->stable) {
    std::string what = "integers changed when T and nodes were doubled:";
    for (const auto& d : conv->differences) what += " " + d + ";";
    status = set_error(SYMMORSE_ERR_NUMERIC, what);
  }
  if (status == SYMMORSE_ERR_RESIDUAL) {
    set_error(status, "identity fails: lhs " + std::to_string(r.lhs) + ", rhs " + std::to_string(r.rhs));
  }
  if (out) *out = res.release();
  return status;
}

Mat frame_matrix(int n, const double* data) {
  if (!data) throw ArgumentError("frame pointer is null");
  return Eigen::Map<const Mat>(data, 2 * n, n);
}

int load_text(const std::string& text, symmorse_problem** out) {
  if (!out) throw ArgumentError("output pointer is null");
  auto p = std::make_unique<symmorse_problem>();
  p->spec = parse_problem(text);
  *out = p.release();
  return SYMMORSE_OK;
}

}  // namespace

extern "C" {

void symmorse_options_init(symmorse_options* o) {
  if (!o) return;
  o->T = 0;
  o->nodes = 0;
  o->lambda_max = 0;
  o->threads = 0;
  o->has_seed = 0;
  o->seed = 0;
  o->side = SYMMORSE_SIDE_DEFAULT;
  o->convergence = 0;
  o->timings = 1;
}

const char* symmorse_version(void) { return symmorse::version(); }
const char* symmorse_last_error(void) { return last_error.c_str(); }
int symmorse_last_error_line(void) { return last_line; }
int symmorse_last_error_column(void) { return last_column; }

int symmorse_problem_parse(const char* text, symmorse_problem** out) {
  return guarded([&] {
    if (!text) throw ArgumentError("text is null");
    return load_text(text, out);
  });
}

int symmorse_problem_load(const char* path, symmorse_problem** out) {
  return guarded([&] {
    if (!path) throw ArgumentError("path is null");
    std::ifstream in(path);
    if (!in) throw ArgumentError(std::string("cannot open ") + path);
    std::ostringstream s;
    s << in.rdbuf();
    return load_text(s.str(), out);
  });
}

int symmorse_problem_builtin(const char* name, symmorse_problem** out) {
  return guarded([&] {
    if (!name) throw ArgumentError("name is null");
    return load_text(builtin_problem(name), out);
  });
}

size_t symmorse_builtin_count(void) { return builtin_names().size(); }

const char* symmorse_builtin_name(size_t index) {
  const auto& names = builtin_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

const char* symmorse_problem_name(const symmorse_problem* problem) {
  return problem ? problem->spec.name.c_str() : nullptr;
}

int symmorse_problem_serialize(const symmorse_problem* problem, char** text) {
  return guarded([&] {
    if (!problem || !text) throw ArgumentError("null argument");
    *text = dup(serialize_problem(problem->spec));
    return SYMMORSE_OK;
  });
}

void symmorse_problem_free(symmorse_problem* problem) { delete problem; }
void symmorse_string_free(char* text) { std::free(text); }

int symmorse_check(const symmorse_problem* problem, const symmorse_options* options, symmorse_result** out) {
  return guarded([&] {
    Prepared p = prepare(problem, options, "check");
    std::optional<LagrangianFrame> l0;
    if (problem->spec.l0) l0 = LagrangianFrame(*problem->spec.l0);
    const IndexReport r = check_problem(p.sys, l0, p.cfg);
    return finish_report(r, p, nullptr, false, SYMMORSE_ERR_VALIDATION, out);
  });
}

int symmorse_indices(const symmorse_problem* problem, const symmorse_options* options, symmorse_result** out) {
  return guarded([&] {
    Prepared p = prepare(problem, options, "indices");
    auto run = [&](const RunConfig& cfg) { return compute_indices(p.sys, p.boundary, cfg); };
    if (p.convergence) {
      const ConvergenceCheck c = check_convergence(run, p.cfg);
      return finish_report(c.base, p, &c, true, SYMMORSE_ERR_NUMERIC, out);
    }
    return finish_report(run(p.cfg), p, nullptr, true, SYMMORSE_ERR_NUMERIC, out);
  });
}

int symmorse_verify(const symmorse_problem* problem, const char* theorem, const symmorse_options* options,
                    symmorse_result** out) {
  return guarded([&] {
    if (!theorem) throw ArgumentError("theorem is null");
    const std::string th = theorem;
    Prepared p = prepare(problem, options, "verify");
    std::function<IndexReport(const RunConfig&)> run;
    if (th == "C") {
      if (p.boundary.side != Side::line) throw ArgumentError("theorem C is a whole-line statement; use --side line");
      run = [&](const RunConfig& cfg) { return verify_theorem_C(p.sys, cfg); };
    } else if (th == "D" || th == "dirichlet") {
      if (p.boundary.side == Side::line) throw ArgumentError("theorem " + th + " needs --side plus or minus");
      const LagrangianFrame l0 = *p.boundary.l0;
      const Side side = p.boundary.side;
      if (th == "D") {
        run = [&, l0, side](const RunConfig& cfg) { return verify_theorem_D(p.sys, l0, side, cfg); };
      } else {
        run = [&, l0, side](const RunConfig& cfg) { return verify_dirichlet_difference(p.sys, l0, side, cfg); };
      }
    } else if (th == "B") {
      run = [&](const RunConfig& cfg) { return verify_theorem_B(p.sys, p.boundary, cfg); };
    } else {
      throw ArgumentError("unknown theorem '" + th + "' (expected B, C, D or dirichlet)");
    }
    if (p.convergence) {
      const ConvergenceCheck c = check_convergence(run, p.cfg);
      return finish_report(c.base, p, &c, true, SYMMORSE_ERR_NUMERIC, out);
    }
    return finish_report(run(p.cfg), p, nullptr, true, SYMMORSE_ERR_NUMERIC, out);
  });
}

int symmorse_sweep(const symmorse_problem* problem, const symmorse_options* options, symmorse_result** out) {
  return guarded([&] {
    Prepared p = prepare(problem, options, "sweep");
    const SweepResult s = sweep(p.sys, p.boundary, p.cfg);
    auto res = std::make_unique<symmorse_result>();
    res->json = sweep_json(s, p.ctx);
    res->csv = sweep_lambda_csv(s);
    res->certified = s.certified;
    res->artifacts.emplace_back("report.json", res->json);
    res->artifacts.emplace_back("sweep_lambda.csv", res->csv);
    res->artifacts.emplace_back("sweep_angles.csv", sweep_angle_csv(s));
    res->artifacts.emplace_back("morse_staircase.svg", staircase_svg(s));
    res->artifacts.emplace_back("bundle_angles.svg", angles_svg(s));
    if (out) *out = res.release();
    if (!s.certified) return set_error(SYMMORSE_ERR_NUMERIC, "sweep not certified: " + s.trace.note);
    return static_cast<int>(SYMMORSE_OK);
  });
}

const char* symmorse_result_json(const symmorse_result* r) { return r ? r->json.c_str() : nullptr; }
const char* symmorse_result_csv(const symmorse_result* r) { return r ? r->csv.c_str() : nullptr; }
int symmorse_result_certified(const symmorse_result* r) { return r && r->certified ? 1 : 0; }
int symmorse_result_residual(const symmorse_result* r) { return r ? r->residual : 0; }

size_t symmorse_result_artifact_count(const symmorse_result* r) { return r ? r->artifacts.size() : 0; }

const char* symmorse_result_artifact_name(const symmorse_result* r, size_t index) {
  return r && index < r->artifacts.size() ? r->artifacts[index].first.c_str() : nullptr;
}

const char* symmorse_result_artifact_data(const symmorse_result* r, size_t index) {
  return r && index < r->artifacts.size() ? r->artifacts[index].second.c_str() : nullptr;
}

void symmorse_result_free(symmorse_result* r) { delete r; }

int symmorse_triple_index(int n, const double* alpha, const double* beta, const double* kappa, int* out) {
  return guarded([&] {
    if (n < 1 || !out) throw ArgumentError("invalid arguments");
    *out = triple_index(LagrangianFrame(frame_matrix(n, alpha)), LagrangianFrame(frame_matrix(n, beta)),
                        LagrangianFrame(frame_matrix(n, kappa)));
    return SYMMORSE_OK;
  });
}

int symmorse_hormander_index(int n, const double* l0, const double* l1, const double* v0, const double* v1,
                             int* out) {
  return guarded([&] {
    if (n < 1 || !out) throw ArgumentError("invalid arguments");
    *out = hormander_index(LagrangianFrame(frame_matrix(n, l0)), LagrangianFrame(frame_matrix(n, l1)),
                           LagrangianFrame(frame_matrix(n, v0)), LagrangianFrame(frame_matrix(n, v1)));
    return SYMMORSE_OK;
  });
}

int symmorse_maslov_index(int n, size_t samples, const double* t, const double* path1, const double* path2,
                          int* index, int* certified) {
  return guarded([&] {
    if (n < 1 || samples < 2 || !t || !index) throw ArgumentError("invalid arguments");
    if (!path1 || !path2) throw ArgumentError("path pointer is null");
    LagrangianPath a, b;
    const std::size_t stride = static_cast<std::size_t>(2 * n * n);
    for (std::size_t k = 0; k < samples; ++k) {
      a.t.push_back(t[k]);
      b.t.push_back(t[k]);
      a.frames.emplace_back(frame_matrix(n, path1 + k * stride));
      b.frames.emplace_back(frame_matrix(n, path2 + k * stride));
    }
    const MaslovResult m = maslov_pair(a, b);
    *index = m.index;
    if (certified) *certified = m.certified ? 1 : 0;
    if (!m.certified) return set_error(SYMMORSE_ERR_NUMERIC, "Maslov index not certified: " + m.note);
    return static_cast<int>(SYMMORSE_OK);
  });
}

}  // extern "C"
