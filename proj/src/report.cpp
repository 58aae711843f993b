#include "symmorse/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace symmorse {

namespace {

using json = nlohmann::ordered_json;

json tolerances_json(const Tolerances& t) {
  return json{{"rank_tol", t.rank_tol},       {"iso_tol", t.iso_tol},
              {"int_tol", t.int_tol},         {"cond_max", t.cond_max},
              {"decomp_tol", t.decomp_tol},   {"eig_zero_tol", t.eig_zero_tol},
              {"hyp_tol", t.hyp_tol},         {"limit_tol", t.limit_tol},
              {"margin_min", t.margin_min},   {"seg_angle_max", t.seg_angle_max},
              {"bundle_tol", t.bundle_tol},   {"rk4_step_factor", t.rk4_step_factor},
              {"fem_zero_rel", t.fem_zero_rel}};
}

json header(const ReportContext& ctx) {
  const RunConfig& c = ctx.config;
  json j;
  j["schema"] = "symmorse-report/1";
  j["command"] = ctx.command;
  j["environment"] = {{"version", version()}, {"compiler", __VERSION__}, {"threads", c.threads}, {"seed", c.seed}};
  j["config"] = {{"T", c.T},
                 {"nodes", c.nodes},
                 {"lambda_max", c.lambda_max},
                 {"tau_spacing", c.tau_spacing},
                 {"sweep_points", c.sweep_points}};
  j["tolerances"] = tolerances_json(c.tol);
  j["problem"] = ctx.problem_text;
  return j;
}

json body(const IndexReport& r, bool indices) {
  json j;
  j["problem"] = r.problem;
  j["check"] = r.check;
  j["side"] = r.side;
  if (indices) {
    j["morse"] = r.morse;
    j["nullity"] = r.nullity;
    j["geo"] = r.geo;
    j["correction"] = r.correction;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
  }
  j["certified"] = r.certified;
  json flags = json::array();
  for (const auto& f : r.flags) flags.push_back({{"name", f.name}, {"ok", f.ok}, {"detail", f.detail}});
  j["flags"] = flags;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(nullptr);
  j["metrics"] = metrics;
  json integers = json::object();
  for (const auto& [k, v] : r.integers) integers[k] = v;
  j["integers"] = integers;
  j["notes"] = r.notes;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Minimal SVG line chart; each series is a polyline in data coordinates.
struct Series {
  std::vector<double> x, y;
  std::string color;
};

std::string chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  const std::vector<Series>& series) {
  const double W = 640, H = 400, L = 60, R = 20, Tm = 36, B = 48;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        x0 = x1 = s.x[i];
        y0 = y1 = s.y[i];
        first = false;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - Tm - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << Tm << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << num(std::round(xv * 1000) / 1000) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << num(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"12\">" << xlabel << "</text>\n";
  o << "<text x=\"14\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
    << "transform=\"rotate(-90 14 " << H / 2 << ")\">" << ylabel << "</text>\n";
  for (const auto& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

const char* version() { return "0.1.0"; }

std::string report_json(const IndexReport& report, const ReportContext& ctx, const ConvergenceCheck* convergence) {
  json j = header(ctx);
  j["report"] = body(report, ctx.command != "check");
  if (convergence) {
    j["convergence"] = {{"stable", convergence->stable},
                        {"differences", convergence->differences},
                        {"doubled", body(convergence->doubled, true)}};
  }
  if (ctx.timings) {
    json t = {{"seconds", report.seconds}};
    if (convergence) t["doubled_seconds"] = convergence->doubled.seconds;
    j["timings"] = t;
  }
  return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& s, const ReportContext& ctx) {
  json j = header(ctx);
  const SpectralFlowTrace& tr = s.trace;
  json crossings = json::array();
  for (const auto& c : tr.crossings) crossings.push_back({{"lambda", c.lambda}, {"dim", c.dim}});
  j["sweep"] = {{"problem", s.problem},
                {"side", s.side},
                {"lambda_max", s.lambda_max},
                {"certified", s.certified},
                {"sf", tr.sf},
                {"sf_partition", tr.sf_partition},
                {"crossing_sum", tr.crossing_sum},
                {"start_nullity", tr.start_nullity},
                {"monotone", tr.monotone},
                {"end_positive", tr.end_positive},
                {"note", tr.note},
                {"crossings", crossings},
                {"lambdas", tr.lambdas},
                {"morse_counts", tr.morse_counts},
                {"nullities", tr.nullities},
                {"angle_pair", s.angle_pair},
                {"tau_samples", s.tau.size()}};
  if (ctx.timings) j["timings"] = {{"seconds", s.seconds}};
  return j.dump(2) + "\n";
}

std::string report_csv(const IndexReport& r) {
  std::ostringstream o;
  o << "kind,name,value\n";
  o << "field,problem," << csv_field(r.problem) << "\n";
  o << "field,check," << r.check << "\n";
  o << "field,side," << r.side << "\n";
  o << "field,certified," << (r.certified ? 1 : 0) << "\n";
  for (const auto& [k, v] : r.integers) o << "integer," << csv_field(k) << ',' << v << "\n";
  for (const auto& [k, v] : r.metrics) o << "metric," << csv_field(k) << ',' << num(v) << "\n";
  for (const auto& f : r.flags) o << "flag," << csv_field(f.name) << ',' << (f.ok ? 1 : 0) << "\n";
  return o.str();
}

std::string sweep_lambda_csv(const SweepResult& s) {
  std::ostringstream o;
  o << "lambda,morse,nullity\n";
  for (std::size_t i = 0; i < s.trace.lambdas.size(); ++i) {
    o << num(s.trace.lambdas[i]) << ',' << s.trace.morse_counts[i] << ',' << s.trace.nullities[i] << "\n";
  }
  return o.str();
}

std::string sweep_angle_csv(const SweepResult& s) {
  std::ostringstream o;
  o << "tau";
  const std::size_t k = s.angles.empty() ? 0 : static_cast<std::size_t>(s.angles.front().size());
  for (std::size_t j = 0; j < k; ++j) o << ",angle_" << j + 1;
  o << "\n";
  for (std::size_t i = 0; i < s.tau.size(); ++i) {
    o << num(s.tau[i]);
    for (std::size_t j = 0; j < k; ++j) o << ',' << num(s.angles[i](static_cast<Eigen::Index>(j)));
    o << "\n";
  }
  return o.str();
}

std::string staircase_svg(const SweepResult& s) {
  Series st;
  st.color = "#1f5fa8";
  const auto& l = s.trace.lambdas;
  const auto& m = s.trace.morse_counts;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i > 0) {
      st.x.push_back(l[i]);
      st.y.push_back(m[i - 1]);
    }
    st.x.push_back(l[i]);
    st.y.push_back(m[i]);
  }
  return chart(s.problem + " (" + s.side + "): Morse count", "lambda", "negative eigenvalues", {st});
}

std::string angles_svg(const SweepResult& s) {
  static const char* colors[] = {"#1f5fa8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50"};
  std::vector<Series> series;
  const std::size_t k = s.angles.empty() ? 0 : static_cast<std::size_t>(s.angles.front().size());
  for (std::size_t j = 0; j < k; ++j) {
    Series a;
    a.color = colors[j % 6];
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
      a.x.push_back(s.tau[i]);
      a.y.push_back(s.angles[i](static_cast<Eigen::Index>(j)));
    }
    series.push_back(std::move(a));
  }
  return chart(s.problem + ": principal angles " + s.angle_pair, "tau", "angle (rad)", series);
}

}  // namespace symmorse
