#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "stlplan/errors.hpp"
#include "stlplan/stl.hpp"

namespace stlplan::stl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIdxTol = 1e-6;  // index-space tolerance for window edges

// Range-min/max queries over a fixed array, O(1) after O(m log m) build.
class SparseTable {
public:
  SparseTable(const std::vector<double>& vals, bool take_min) : min_(take_min) {
    const std::size_t m = vals.size();
    levels_.push_back(vals);
    for (std::size_t len = 2; len <= m; len *= 2) {
      const std::vector<double>& prev = levels_.back();
      std::vector<double> cur(m - len + 1);
      for (std::size_t i = 0; i + len <= m; ++i)
        cur[i] = pick(prev[i], prev[i + len / 2]);
      levels_.push_back(std::move(cur));
    }
  }

  double query(std::size_t lo, std::size_t hi) const {  // inclusive, lo <= hi
    const std::size_t len = hi - lo + 1;
    std::size_t lvl = 0;
    while ((std::size_t{2} << lvl) <= len) ++lvl;
    return pick(levels_[lvl][lo], levels_[lvl][hi + 1 - (std::size_t{1} << lvl)]);
  }

private:
  double pick(double a, double b) const { return min_ ? std::min(a, b) : std::max(a, b); }
  bool min_;
  std::vector<std::vector<double>> levels_;
};

// Quantitative semantics over the sampled trace. Cheap nodes are evaluated
// as whole vectors (with range queries for the temporal windows); Until is
// evaluated on demand per index, since a full per-index sweep is quadratic in
// the window width.
class Evaluator {
public:
  Evaluator(const Trace& tr, const RegionMap& regions) : tr_(tr), regions_(regions) {}

  double value_at(const Formula* f, std::size_t i) {
    switch (f->kind) {
      case Kind::True:
        return kInf;
      case Kind::Pred:
      case Kind::NegPred:
        return vector_of(f)[i];
      case Kind::Not:
        return -value_at(f->children[0].get(), i);
      case Kind::And:
      case Kind::Or: {
        const bool is_and = f->kind == Kind::And;
        double v = is_and ? kInf : -kInf;
        for (const auto& c : f->children) {
          const double cv = value_at(c.get(), i);
          v = is_and ? std::min(v, cv) : std::max(v, cv);
        }
        return v;
      }
      case Kind::Always:
      case Kind::Eventually: {
        const bool is_always = f->kind == Kind::Always;
        auto [lo, hi] = window(i, f->interval);
        if (lo > hi) return is_always ? kInf : -kInf;
        return rmq(f->children[0].get(), is_always)
            .query(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
      }
      case Kind::Until: {
        auto key = std::make_pair(f, i);
        if (auto it = until_memo_.find(key); it != until_memo_.end()) return it->second;
        auto [lo, hi] = window(i, f->interval);
        double best = -kInf;
        if (lo <= hi) {
          double prefix = kInf;
          for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i); j <= hi; ++j) {
            prefix = std::min(prefix, value_at(f->children[0].get(), static_cast<std::size_t>(j)));
            if (j >= lo)
              best = std::max(best,
                              std::min(value_at(f->children[1].get(), static_cast<std::size_t>(j)),
                                       prefix));
          }
        }
        until_memo_.emplace(key, best);
        return best;
      }
    }
    throw input_error("unreachable formula kind");
  }

private:
  const std::vector<double>& vector_of(const Formula* f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    const std::size_t m = tr_.count();
    std::vector<double> out;
    switch (f->kind) {
      case Kind::Pred:
      case Kind::NegPred: {
        auto rit = regions_.find(f->region);
        if (rit == regions_.end()) throw input_error("unknown region '" + f->region + "'");
        out.resize(m);
        geometry::batch_margins(rit->second, tr_.points.data(), m, out.data());
        if (f->kind == Kind::NegPred)
          for (double& v : out) v = -v;
        break;
      }
      default: {
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = value_at(f, i);
        break;
      }
    }
    return memo_.emplace(f, std::move(out)).first->second;
  }

  // Sample indices covered by (t_i + [a,b]) intersected with the trace span.
  std::pair<std::ptrdiff_t, std::ptrdiff_t> window(std::size_t i, const TimeInterval& iv) const {
    const double fi = static_cast<double>(i);
    auto lo = static_cast<std::ptrdiff_t>(std::ceil(fi + iv.a / tr_.dt - kIdxTol));
    auto hi = static_cast<std::ptrdiff_t>(std::floor(fi + iv.b / tr_.dt + kIdxTol));
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(tr_.count()) - 1);
    return {lo, hi};
  }

  const SparseTable& rmq(const Formula* child, bool take_min) {
    const auto key = std::make_pair(child, take_min);
    auto it = tables_.find(key);
    if (it == tables_.end())
      it = tables_.emplace(key, SparseTable(vector_of(child), take_min)).first;
    return it->second;
  }

  const Trace& tr_;
  const RegionMap& regions_;
  std::map<const Formula*, std::vector<double>> memo_;
  std::map<std::pair<const Formula*, bool>, SparseTable> tables_;
  std::map<std::pair<const Formula*, std::size_t>, double> until_memo_;
};

}  // namespace

double sampled_robustness(const FormulaPtr& f, const Trace& trace, const RegionMap& regions,
                          double t) {
  if (!f) throw input_error("null formula");
  if (trace.dim == 0 || trace.count() == 0 || !(trace.dt > 0.0))
    throw input_error("trace must be non-empty with positive sampling step");
  const double horizon = formula_horizon(*f);
  const double tol = trace.dt * kIdxTol;
  if (t < trace.t0 - tol || t + horizon > trace.end_time() + tol)
    throw input_error("trace too short: it must cover the formula horizon from the start time");
  const double rel = (t - trace.t0) / trace.dt;
  const auto idx = static_cast<std::ptrdiff_t>(std::llround(rel));
  if (std::abs(rel - static_cast<double>(idx)) > kIdxTol)
    throw input_error("start time must lie on the trace sampling grid");
  Evaluator ev(trace, regions);
  return ev.value_at(f.get(), static_cast<std::size_t>(std::max<std::ptrdiff_t>(idx, 0)));
}

}  // namespace stlplan::stl
