#include "symmorse/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "symmorse/error.hpp"
#include "symmorse/index_algebra.hpp"
#include "symmorse/parallel.hpp"

namespace symmorse {

void LagrangianPath::validate(const Tolerances& tol) const {
  if (t.size() != frames.size()) throw ValidationError("path: sample count mismatch");
  if (t.empty()) throw ValidationError("path: no samples");
  const int dim = frames.front().n();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) throw ValidationError("path: non-finite parameter");
    if (frames[i].n() != dim) throw ValidationError("path: frames of different dimension");
    if (i == 0) continue;
    if (!(t[i] > t[i - 1])) throw ValidationError("path: parameters must be strictly increasing");
    const double g = subspace_gap(frames[i - 1], frames[i]);
    if (g > tol.seg_angle_max) {
      std::ostringstream msg;
      msg << "path: samples at t=" << t[i - 1] << " and t=" << t[i] << " are too far apart (gap " << g
          << "), refine the path";
      throw ValidationError(msg.str());
    }
  }
}

LagrangianPath LagrangianPath::reversed() const {
  LagrangianPath out;
  for (std::size_t i = t.size(); i-- > 0;) {
    out.t.push_back(-t[i]);
    out.frames.push_back(frames[i]);
  }
  return out;
}

LagrangianPath LagrangianPath::transformed(const Mat& symplectic) const {
  LagrangianPath out;
  out.t = t;
  out.frames.reserve(frames.size());
  for (const auto& f : frames) out.frames.push_back(apply(symplectic, f));
  return out;
}

LagrangianPath LagrangianPath::slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= t.size()) throw ArgumentError("path slice out of range");
  LagrangianPath out;
  out.t.assign(t.begin() + first, t.begin() + last + 1);
  out.frames.assign(frames.begin() + first, frames.begin() + last + 1);
  return out;
}

LagrangianPath constant_path(const LagrangianFrame& frame, const std::vector<double>& t) {
  LagrangianPath out;
  out.t = t;
  out.frames.assign(t.size(), frame);
  return out;
}

namespace {

struct PairRun {
  MaslovResult result;
  std::vector<std::size_t> failed;  // first sample index of each uncertified segment
};

class ChartTable {
 public:
  ChartTable(const LagrangianPath& p1, const LagrangianPath& p2) : p1_(p1), p2_(p2) {}

  std::size_t add(LagrangianFrame chart) {
    charts_.push_back(std::move(chart));
    margins_.emplace_back(p1_.size(), -1.0);
    return charts_.size() - 1;
  }
  std::size_t count() const { return charts_.size(); }
  const LagrangianFrame& chart(std::size_t c) const { return charts_[c]; }

  double margin(std::size_t c, std::size_t j) {
    double& m = margins_[c][j];
    if (m < 0) {
      m = std::min(transversality_margin(charts_[c], p1_.frames[j]), transversality_margin(charts_[c], p2_.frames[j]));
    }
    return m;
  }

 private:
  const LagrangianPath& p1_;
  const LagrangianPath& p2_;
  std::vector<LagrangianFrame> charts_;
  std::vector<std::vector<double>> margins_;
};

PairRun run_pair(const LagrangianPath& p1, const LagrangianPath& p2, const MaslovOptions& opt) {
  const Tolerances& tol = opt.tol;
  p1.validate(tol);
  p2.validate(tol);
  if (p1.n() != p2.n()) throw ArgumentError("maslov: paths of different dimension");
  if (p1.size() != p2.size()) throw ArgumentError("maslov: paths must share the parameter grid");
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const double scale = std::max(1.0, std::abs(p1.t[i]));
    if (std::abs(p1.t[i] - p2.t[i]) > 1e-12 * scale) {
      throw ArgumentError("maslov: paths must share the parameter grid");
    }
  }

  PairRun run;
  const std::size_t count = p1.size();
  if (count < 2) return run;
  const int n = p1.n();

  // A sample's chart margin must dominate the distance to its neighbours, so the
  // chart stays transversal along the interpolated path as well.
  std::vector<double> threshold(count, tol.margin_min);
  for (std::size_t j = 0; j + 1 < count; ++j) {
    const double g = std::max(subspace_gap(p1.frames[j], p1.frames[j + 1]), subspace_gap(p2.frames[j], p2.frames[j + 1]));
    threshold[j] = std::max(threshold[j], g);
    threshold[j + 1] = std::max(threshold[j + 1], g);
  }

  std::mt19937_64 rng(opt.seed);
  ChartTable table(p1, p2);
  table.add(dirichlet_frame(n));
  table.add(neumann_frame(n));
  for (int k = 0; k < opt.random_charts; ++k) table.add(graph_frame(random_symmetric(rng, n, 1.0)));

  auto reach = [&](std::size_t c, std::size_t start) {
    if (table.margin(c, start) < threshold[start]) return start;
    std::size_t k = start;
    while (k + 1 < count && table.margin(c, k + 1) >= threshold[k + 1]) ++k;
    return k;
  };

  std::vector<std::size_t> seg_start;
  std::vector<std::size_t> seg_end;
  std::vector<std::size_t> seg_chart;
  std::vector<bool> seg_ok;
  std::size_t i = 0;
  while (i + 1 < count) {
    std::size_t best = 0;
    std::size_t best_k = i;
    for (std::size_t c = 0; c < table.count(); ++c) {
      const std::size_t k = reach(c, i);
      if (k > best_k) {
        best_k = k;
        best = c;
      }
    }
    for (int round = 0; best_k == i && round < opt.extra_rounds; ++round) {
      const double scale = std::pow(2.0, (round % 5) - 2);
      const std::size_t c = table.add(graph_frame(random_symmetric(rng, n, scale)));
      const std::size_t k = reach(c, i);
      if (k > best_k) {
        best_k = k;
        best = c;
      }
    }
    bool ok = true;
    if (best_k == i) {
      // No certified chart: keep the one with the largest margin on [i, i+1].
      ok = false;
      double top = -1.0;
      for (std::size_t c = 0; c < table.count(); ++c) {
        const double m = std::min(table.margin(c, i), table.margin(c, i + 1));
        if (m > top) {
          top = m;
          best = c;
        }
      }
      best_k = i + 1;
    }
    seg_start.push_back(i);
    seg_end.push_back(best_k);
    seg_chart.push_back(best);
    seg_ok.push_back(ok);
    i = best_k;
  }

  const std::size_t segs = seg_start.size();
  std::vector<int> contribution(segs, 0);
  parallel_for(segs, opt.threads, [&](std::size_t s) {
    const LagrangianFrame& chart = table.chart(seg_chart[s]);
    const std::size_t lo = seg_start[s];
    const std::size_t hi = seg_end[s];
    contribution[s] = triple_index(p2.frames[hi], p1.frames[hi], chart, tol) -
                      triple_index(p2.frames[lo], p1.frames[lo], chart, tol);
  });

  for (std::size_t s = 0; s < segs; ++s) {
    MaslovSegment seg;
    seg.t_lo = p1.t[seg_start[s]];
    seg.t_hi = p1.t[seg_end[s]];
    seg.chart = table.chart(seg_chart[s]).basis();
    seg.contribution = contribution[s];
    double m = 1.0;
    for (std::size_t j = seg_start[s]; j <= seg_end[s]; ++j) m = std::min(m, table.margin(seg_chart[s], j));
    seg.min_margin = m;
    run.result.index += contribution[s];
    run.result.segments.push_back(std::move(seg));
    if (!seg_ok[s]) {
      run.result.certified = false;
      run.failed.push_back(seg_start[s]);
    }
  }
  if (!run.result.certified) {
    std::ostringstream msg;
    msg << "no certified transversal chart on " << run.failed.size() << " segment(s), first at t="
        << p1.t[run.failed.front()];
    run.result.note = msg.str();
  }
  return run;
}

}  // namespace

MaslovResult maslov_pair(const LagrangianPath& path1, const LagrangianPath& path2, const MaslovOptions& opt) {
  return run_pair(path1, path2, opt).result;
}

MaslovResult maslov_fixed(const LagrangianFrame& l0, const LagrangianPath& path, const MaslovOptions& opt) {
  return run_pair(constant_path(l0, path.t), path, opt).result;
}

MaslovResult maslov_pair_adaptive(const FrameFunction& f1, const FrameFunction& f2, double a, double b,
                                  int initial_samples, const MaslovOptions& opt, int max_depth) {
  if (!(b > a)) throw ArgumentError("maslov: empty parameter interval");
  if (initial_samples < 2) initial_samples = 2;
  std::map<double, std::pair<LagrangianFrame, LagrangianFrame>> samples;
  auto sample = [&](double t) {
    if (samples.find(t) == samples.end()) samples.emplace(t, std::make_pair(f1(t), f2(t)));
  };
  for (int k = 0; k < initial_samples; ++k) {
    sample(k + 1 == initial_samples ? b : a + (b - a) * k / (initial_samples - 1));
  }
  const double min_step = (b - a) / (initial_samples - 1) * std::ldexp(1.0, -max_depth);

  // Close the angular gaps first.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<double> mids;
    for (auto it = samples.begin(); std::next(it) != samples.end(); ++it) {
      auto nx = std::next(it);
      const double g = std::max(subspace_gap(it->second.first, nx->second.first),
                                subspace_gap(it->second.second, nx->second.second));
      if (g > 0.5 * opt.tol.seg_angle_max && nx->first - it->first > min_step) mids.push_back(0.5 * (it->first + nx->first));
    }
    for (double t : mids) sample(t);
    changed = !mids.empty();
  }

  for (int depth = 0;; ++depth) {
    LagrangianPath p1;
    LagrangianPath p2;
    for (const auto& [t, fr] : samples) {
      p1.t.push_back(t);
      p1.frames.push_back(fr.first);
      p2.t.push_back(t);
      p2.frames.push_back(fr.second);
    }
    PairRun run = run_pair(p1, p2, opt);
    if (run.result.certified || depth >= max_depth) return run.result;
    bool refined = false;
    for (std::size_t j : run.failed) {
      const double lo = p1.t[j > 0 ? j - 1 : j];
      const double mid = p1.t[j];
      const double hi = p1.t[std::min(j + 1, p1.size() - 1)];
      if (mid - lo > min_step) {
        sample(0.5 * (lo + mid));
        refined = true;
      }
      if (hi - mid > min_step) {
        sample(0.5 * (mid + hi));
        refined = true;
      }
    }
    if (!refined) return run.result;
  }
}

}  // namespace symmorse
