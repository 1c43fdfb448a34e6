#pragma once

#include <functional>
#include <vector>

#include "soi/testfn.hpp"

namespace soi {

struct GridOptions {
  int nodes = 257;         // Chebyshev-Lobatto points on K
  int refine_factor = 4;   // node multiplier of the cross-check grid
  int zoom_steps = 60;     // bisection steps of the local zoom at the argmax
  double tol = 1e-6;       // relative disagreement that flags a result
  bool cross_check = true;
};

struct GridSup {
  double value = 0.0;   // sup |f| found
  double argmax = 0.0;
  double fine_value = 0.0;  // the cross-check grid's sup (== value if skipped)
  bool disagreement = false;
};

/// sup of |f| over the closed interval K from a Chebyshev-Lobatto grid plus
/// caller-supplied nodes (kernel centers and the like), followed by a local
/// zoom around the best node. With cross_check the whole procedure is
/// repeated on a grid refine_factor times denser and the two must agree.
GridSup grid_sup(const std::function<double(double)>& f, const Interval& K,
                 const std::vector<double>& hints = {}, const GridOptions& options = {});

}  // namespace soi
