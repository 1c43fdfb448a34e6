#include "soi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "soi/errors.hpp"

namespace soi {
namespace {

struct Best {
  double value = -1.0;
  double at = 0.0;
};

Best sup_on_grid(const std::function<double(double)>& f, const Interval& K, int n,
                 const std::vector<double>& hints, int zoom_steps) {
  std::vector<double> nodes;
  nodes.reserve(n + hints.size());
  const double mid = 0.5 * (K.lo + K.hi), half = 0.5 * K.length();
  if (n <= 1 || half == 0.0) {
    nodes.push_back(mid);
  } else {
    for (int i = 0; i < n; ++i)
      nodes.push_back(mid - half * std::cos(std::numbers::pi * i / (n - 1)));
    nodes.front() = K.lo;
    nodes.back() = K.hi;
  }
  for (double h : hints)
    if (K.contains(h)) nodes.push_back(h);
  std::sort(nodes.begin(), nodes.end());

  Best best;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = std::abs(f(nodes[i]));
    if (std::isnan(v)) throw NumericalError("grid_sup: f is undefined at " + std::to_string(nodes[i]), v);
    if (v > best.value) {
      best = {v, nodes[i]};
      best_i = i;
    }
  }
  double h = 0.0;
  if (best_i > 0) h = std::max(h, nodes[best_i] - nodes[best_i - 1]);
  if (best_i + 1 < nodes.size()) h = std::max(h, nodes[best_i + 1] - nodes[best_i]);
  const double stop = 1e-15 * std::max(1.0, std::abs(best.at));
  for (int step = 0; step < zoom_steps && h > stop; ++step) {
    Best local = best;
    for (int j = -4; j <= 4; ++j) {
      if (j == 0) continue;
      const double t = best.at + 0.25 * h * j;
      if (!K.contains(t)) continue;
      const double v = std::abs(f(t));
      if (v > local.value) local = {v, t};
    }
    best = local;
    h *= 0.5;
  }
  return best;
}

}  // namespace

GridSup grid_sup(const std::function<double(double)>& f, const Interval& K,
                 const std::vector<double>& hints, const GridOptions& options) {
  if (K.empty()) throw DomainError("grid_sup: empty interval");
  const Best coarse = sup_on_grid(f, K, options.nodes, hints, options.zoom_steps);
  GridSup out{coarse.value, coarse.at, coarse.value, false};
  if (options.cross_check) {
    const Best fine = sup_on_grid(f, K, options.nodes * options.refine_factor, hints,
                                  options.zoom_steps);
    out.fine_value = fine.value;
    const double scale = std::max(fine.value, coarse.value);
    if (std::abs(fine.value - coarse.value) > options.tol * scale) out.disagreement = true;
    if (fine.value > coarse.value) {
      out.value = fine.value;
      out.argmax = fine.at;
    }
  }
  return out;
}

}  // namespace soi
