#include "symmorse/problem.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "symmorse/error.hpp"
#include "symmorse/expr.hpp"
#include "symmorse/symplectic.hpp"

namespace symmorse {

namespace {

struct TolField {
  const char* name;
  double Tolerances::*member;
};

const TolField tol_fields[] = {
    {"rank_tol", &Tolerances::rank_tol},
    {"iso_tol", &Tolerances::iso_tol},
    {"int_tol", &Tolerances::int_tol},
    {"cond_max", &Tolerances::cond_max},
    {"decomp_tol", &Tolerances::decomp_tol},
    {"eig_zero_tol", &Tolerances::eig_zero_tol},
    {"hyp_tol", &Tolerances::hyp_tol},
    {"limit_tol", &Tolerances::limit_tol},
    {"margin_min", &Tolerances::margin_min},
    {"seg_angle_max", &Tolerances::seg_angle_max},
    {"bundle_tol", &Tolerances::bundle_tol},
    {"rk4_step_factor", &Tolerances::rk4_step_factor},
    {"fem_zero_rel", &Tolerances::fem_zero_rel},
};

bool known_tolerance(const std::string& name) {
  for (const auto& f : tol_fields)
    if (name == f.name) return true;
  return false;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// A value with its position in the file, so nested parsers can report exact columns.
struct Located {
  std::string text;
  int line = 0;
  int column = 0;
  int key_column = 0;
};

// Splits at `sep`, keeping columns; entries are trimmed.
std::vector<Located> split(const Located& v, char sep) {
  std::vector<Located> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.text.size(); ++i) {
    if (i == v.text.size() || v.text[i] == sep) {
      const std::string raw = v.text.substr(start, i - start);
      const auto lead = raw.find_first_not_of(" \t");
      Located e;
      e.line = v.line;
      e.column = v.column + static_cast<int>(start + (lead == std::string::npos ? raw.size() : lead));
      e.text = trim(raw);
      out.push_back(e);
      start = i + 1;
    }
  }
  return out;
}

[[noreturn]] void fail_at(const Located& v, const std::string& what) { throw ParseError(what, v.line, v.column); }

double parse_number(const Located& v) {
  const std::string& s = v.text;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) fail_at(v, "expected a number, got '" + s + "'");
  return x;
}

int parse_int(const Located& v) {
  const double x = parse_number(v);
  if (x != static_cast<double>(static_cast<long>(x)) || std::abs(x) > 1e9) fail_at(v, "expected an integer");
  return static_cast<int>(x);
}

bool parse_bool(const Located& v) {
  if (v.text == "true" || v.text == "yes" || v.text == "1") return true;
  if (v.text == "false" || v.text == "no" || v.text == "0") return false;
  fail_at(v, "expected true or false");
}

Side parse_side(const Located& v) {
  if (v.text == "line") return Side::line;
  if (v.text == "plus") return Side::plus;
  if (v.text == "minus") return Side::minus;
  fail_at(v, "side must be line, plus or minus");
}

std::vector<std::vector<Located>> parse_rows(const Located& v) {
  std::vector<std::vector<Located>> rows;
  for (const auto& row : split(v, ';')) {
    rows.push_back(split(row, ','));
    for (const auto& e : rows.back())
      if (e.text.empty()) fail_at(e, "empty matrix entry");
  }
  return rows;
}

std::vector<std::vector<std::string>> parse_expression_matrix(const Located& v) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : parse_rows(v)) {
    out.emplace_back();
    for (const auto& e : row) {
      Expression::parse(e.text, e.line, e.column);  // syntax check with file positions
      out.back().push_back(e.text);
    }
  }
  return out;
}

Mat parse_numeric_matrix(const Located& v) {
  const auto rows = parse_rows(v);
  const std::size_t cols = rows.front().size();
  Mat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail_at(rows[i].front(), "rows of different length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_number(rows[i][j]);
  }
  return m;
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

std::string matrix_text(const std::vector<std::vector<std::string>>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) out += ", ";
      out += m[i][j];
    }
  }
  return out;
}

std::string matrix_text(const Mat& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += num(m(i, j));
    }
  }
  return out;
}

void check_square(const std::vector<std::vector<std::string>>& m, int n, const char* which) {
  bool ok = static_cast<int>(m.size()) == n;
  for (const auto& row : m) ok = ok && static_cast<int>(row.size()) == n;
  if (!ok) throw ValidationError(std::string(which) + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

MatrixFunction compile(const std::vector<std::vector<std::string>>& m, int n) {
  std::vector<Expression> e;
  for (const auto& row : m)
    for (const auto& s : row) e.push_back(Expression::parse(s));
  return [e, n](double t) {
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = e[i * n + j](t);
    return out;
  };
}

const std::map<std::string, std::string>& catalog() {
  static const std::map<std::string, std::string> c = {
      {"poschl-teller-1",
       "[problem]\nname = poschl-teller-1\nn = 1\n\n[coefficients]\nP = 1\nQ = 0\nR = 1 - 2*sech(t)^2\n\n"
       "[constants]\nC1 = 1\nC2 = 0\nC3 = 1\n\n[boundary]\nL0 = 0; 1\n"},
      {"poschl-teller-2",
       "[problem]\nname = poschl-teller-2\nn = 1\n\n[coefficients]\nP = 1\nQ = 0\nR = 1 - 6*sech(t)^2\n\n"
       "[constants]\nC1 = 1\nC2 = 0\nC3 = 5\n\n[boundary]\nL0 = 0; 1\n"},
      {"scalar-case-1",
       "[problem]\nname = scalar-case-1\nn = 1\n\n[coefficients]\nP = 1\nQ = 0.3*tanh(t)\nR = 1\n\n"
       "[constants]\nC1 = 1\nC2 = 0.3\nC3 = 1\n\n[boundary]\nL0 = 0; 1\n"},
      {"scalar-case-2",
       "[problem]\nname = scalar-case-2\nn = 1\n\n[coefficients]\nP = 1\nQ = 2*tanh(t)\nR = 1\n\n"
       "[constants]\nC1 = 1\nC2 = 2\nC3 = 1\n\n[boundary]\nL0 = 0; 1\n"},
      {"coupled-2",
       "[problem]\nname = coupled-2\nn = 2\n\n[coefficients]\nP = 1, 0; 0, 1\n"
       "Q = 0, 0.5*tanh(t); -0.5*tanh(t), 0\n"
       "R = 1 - 4*sech(t)^2, 0.5*sech(t)^2; 0.5*sech(t)^2, 2 - 4*sech(t)^2\n\n"
       "[constants]\nC1 = 1\nC2 = 0.5\nC3 = 3.25\n\n[boundary]\nL0 = 0, 0; 0, 0; 1, 0; 0, 1\n"},
  };
  return c;
}

}  // namespace

bool ProblemSpec::operator==(const ProblemSpec& o) const {
  const bool l0_equal = l0.has_value() == o.l0.has_value() && (!l0 || (l0->rows() == o.l0->rows() &&
                                                                       l0->cols() == o.l0->cols() && *l0 == *o.l0));
  return name == o.name && n == o.n && P == o.P && Q == o.Q && R == o.R && C1 == o.C1 && C2 == o.C2 && C3 == o.C3 &&
         f2_declared == o.f2_declared && side == o.side && l0_equal && T == o.T && nodes == o.nodes &&
         lambda_max == o.lambda_max && threads == o.threads && tau_spacing == o.tau_spacing &&
         sweep_points == o.sweep_points && tolerances == o.tolerances;
}

ProblemSpec parse_problem(const std::string& text) {
  ProblemSpec spec;
  std::map<std::string, Located> values;  // "section.key"
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = hash == std::string::npos ? raw : raw.substr(0, hash);
    const std::string s = trim(content);
    if (s.empty()) continue;
    const int indent = static_cast<int>(content.find_first_not_of(" \t")) + 1;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("section header must end with ']'", line, indent + static_cast<int>(s.size()) - 1);
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known = {"problem", "coefficients", "constants", "boundary", "numerics",
                                                  "tolerances"};
      if (!known.count(section)) throw ParseError("unknown section '" + section + "'", line, indent);
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, indent);
    if (section.empty()) throw ParseError("key outside of any section", line, indent);
    const std::string key = trim(content.substr(0, eq));
    if (key.empty()) throw ParseError("missing key", line, indent);
    const std::string after = content.substr(eq + 1);
    const auto lead = after.find_first_not_of(" \t");
    Located v;
    v.line = line;
    v.column = static_cast<int>(eq) + 2 + static_cast<int>(lead == std::string::npos ? after.size() : lead);
    v.text = trim(after);
    v.key_column = indent;
    if (v.text.empty()) throw ParseError("missing value for '" + key + "'", line, v.column);
    const std::string full = section + "." + key;
    if (values.count(full)) throw ParseError("duplicate key '" + key + "'", line, indent);
    values[full] = v;
  }

  auto take = [&](const std::string& full) -> std::optional<Located> {
    auto it = values.find(full);
    if (it == values.end()) return std::nullopt;
    Located v = it->second;
    values.erase(it);
    return v;
  };
  auto need = [&](const std::string& full) {
    auto v = take(full);
    if (!v) throw ValidationError("missing required key '" + full + "'");
    return *v;
  };

  spec.name = need("problem.name").text;
  const Located nv = need("problem.n");
  spec.n = parse_int(nv);
  if (spec.n < 1) fail_at(nv, "n must be positive");
  if (auto v = take("problem.side")) spec.side = parse_side(*v);
  if (auto v = take("problem.f2")) spec.f2_declared = parse_bool(*v);

  spec.P = parse_expression_matrix(need("coefficients.P"));
  spec.Q = parse_expression_matrix(need("coefficients.Q"));
  spec.R = parse_expression_matrix(need("coefficients.R"));
  check_square(spec.P, spec.n, "P");
  check_square(spec.Q, spec.n, "Q");
  check_square(spec.R, spec.n, "R");

  spec.C1 = parse_number(need("constants.C1"));
  spec.C2 = parse_number(need("constants.C2"));
  spec.C3 = parse_number(need("constants.C3"));
  if (!(spec.C1 > 0) || !(spec.C2 >= 0) || !(spec.C3 >= 0)) {
    throw ValidationError("constants must satisfy C1 > 0, C2 >= 0, C3 >= 0");
  }

  if (auto v = take("boundary.L0")) {
    const Mat m = parse_numeric_matrix(*v);
    if (m.rows() != 2 * spec.n || m.cols() != spec.n) {
      throw ValidationError("L0 must be a " + std::to_string(2 * spec.n) + "x" + std::to_string(spec.n) + " frame");
    }
    LagrangianFrame check(m);  // rank and isotropy
    spec.l0 = m;
  }
  if (spec.side != Side::line && !spec.l0) throw ValidationError("half-line problems need [boundary] L0");

  if (auto v = take("numerics.T")) spec.T = parse_number(*v);
  if (auto v = take("numerics.nodes")) spec.nodes = parse_int(*v);
  if (auto v = take("numerics.lambda_max")) spec.lambda_max = parse_number(*v);
  if (auto v = take("numerics.threads")) spec.threads = parse_int(*v);
  if (auto v = take("numerics.tau_spacing")) spec.tau_spacing = parse_number(*v);
  if (auto v = take("numerics.sweep_points")) spec.sweep_points = parse_int(*v);
  if (spec.T && !(*spec.T > 0)) throw ValidationError("T must be positive");
  if (spec.nodes && *spec.nodes < 16) throw ValidationError("nodes must be at least 16");
  if (spec.threads && *spec.threads < 1) throw ValidationError("threads must be at least 1");
  if (spec.tau_spacing && !(*spec.tau_spacing > 0)) throw ValidationError("tau_spacing must be positive");
  if (spec.sweep_points && *spec.sweep_points < 2) throw ValidationError("sweep_points must be at least 2");

  for (auto it = values.begin(); it != values.end();) {
    if (it->first.rfind("tolerances.", 0) == 0) {
      const std::string name = it->first.substr(11);
      if (!known_tolerance(name)) fail_at(it->second, "unknown tolerance '" + name + "'");
      const double x = parse_number(it->second);
      if (!(x > 0)) fail_at(it->second, "tolerances must be positive");
      spec.tolerances[name] = x;
      it = values.erase(it);
    } else {
      ++it;
    }
  }
  if (!values.empty()) {
    const auto& [full, v] = *values.begin();
    throw ParseError("unknown key '" + full.substr(full.find('.') + 1) + "'", v.line, v.key_column);
  }
  return spec;
}

std::string serialize_problem(const ProblemSpec& s) {
  std::ostringstream out;
  out << "[problem]\nname = " << s.name << "\nn = " << s.n << "\nside = " << side_name(s.side)
      << "\nf2 = " << (s.f2_declared ? "true" : "false") << "\n\n";
  out << "[coefficients]\nP = " << matrix_text(s.P) << "\nQ = " << matrix_text(s.Q) << "\nR = " << matrix_text(s.R)
      << "\n\n";
  out << "[constants]\nC1 = " << num(s.C1) << "\nC2 = " << num(s.C2) << "\nC3 = " << num(s.C3) << "\n";
  if (s.l0) out << "\n[boundary]\nL0 = " << matrix_text(*s.l0) << "\n";
  std::ostringstream numerics;
  if (s.T) numerics << "T = " << num(*s.T) << "\n";
  if (s.nodes) numerics << "nodes = " << *s.nodes << "\n";
  if (s.lambda_max) numerics << "lambda_max = " << num(*s.lambda_max) << "\n";
  if (s.threads) numerics << "threads = " << *s.threads << "\n";
  if (s.tau_spacing) numerics << "tau_spacing = " << num(*s.tau_spacing) << "\n";
  if (s.sweep_points) numerics << "sweep_points = " << *s.sweep_points << "\n";
  if (!numerics.str().empty()) out << "\n[numerics]\n" << numerics.str();
  if (!s.tolerances.empty()) {
    out << "\n[tolerances]\n";
    for (const auto& [k, v] : s.tolerances) out << k << " = " << num(v) << "\n";
  }
  return out.str();
}

CoefficientSystem build_system(const ProblemSpec& spec, const Tolerances& tol) {
  check_square(spec.P, spec.n, "P");
  check_square(spec.Q, spec.n, "Q");
  check_square(spec.R, spec.n, "R");
  return make_system(spec.name, spec.n, compile(spec.P, spec.n), compile(spec.Q, spec.n), compile(spec.R, spec.n),
                     spec.C1, spec.C2, spec.C3, spec.f2_declared, tol);
}

Tolerances apply_tolerances(const ProblemSpec& spec, Tolerances tol) {
  for (const auto& [name, value] : spec.tolerances) {
    bool found = false;
    for (const auto& f : tol_fields) {
      if (name == f.name) {
        tol.*(f.member) = value;
        found = true;
      }
    }
    if (!found) throw ValidationError("unknown tolerance '" + name + "'");
  }
  return tol;
}

RunConfig run_config(const ProblemSpec& spec, RunConfig base) {
  if (spec.T) base.T = *spec.T;
  if (spec.nodes) base.nodes = *spec.nodes;
  if (spec.lambda_max) base.lambda_max = *spec.lambda_max;
  if (spec.threads) base.threads = *spec.threads;
  if (spec.tau_spacing) base.tau_spacing = *spec.tau_spacing;
  if (spec.sweep_points) base.sweep_points = *spec.sweep_points;
  base.tol = apply_tolerances(spec, base.tol);
  return base;
}

BoundarySpec boundary_of(const ProblemSpec& spec, std::optional<Side> override_side) {
  BoundarySpec b;
  b.side = override_side.value_or(spec.side);
  if (b.side != Side::line) {
    if (!spec.l0) throw ArgumentError("half-line runs need an L0 frame in the problem");
    b.l0 = LagrangianFrame(*spec.l0);
  }
  return b;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog()) out.push_back(k);
    return out;
  }();
  return names;
}

std::string builtin_problem(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) throw ArgumentError("no built-in problem named '" + name + "'");
  return it->second;
}

}  // namespace symmorse
