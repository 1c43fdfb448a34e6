#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soi/grid.hpp"
#include "soi/index_set.hpp"
#include "soi/symbolic_net.hpp"

namespace soi {

enum class Mode { symbolic, sampled };

/// H and eps0 with |x_eps| <= H |y_eps| for every eps in A_{<= eps0}.
struct Witness {
  double H = 1.0;
  IndexPoint eps0 = SpecialPoint{1.0};
  double gauge0 = 1.0;
};

/// One term of a negation certificate: |x| = lhs > rhs = H |y| at `point`.
struct CounterTerm {
  int k = 0;  // position along the probe (or its extension)
  IndexPoint point = SpecialPoint{1.0};
  double gauge = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double log_margin = 0.0;  // log(lhs / rhs)
};

struct Counterexample {
  double H = 1.0;
  std::vector<CounterTerm> terms;  // strictly decreasing in the index order
  bool extrapolated = false;       // found beyond the supplied probe
};

struct Verdict {
  bool holds = false;
  bool indeterminate = false;
  Mode mode = Mode::symbolic;
  std::optional<Witness> witness;
  std::optional<Counterexample> counterexample;
  std::string note;
  bool decided() const { return !indeterminate; }
};

/// A net of reals indexed by the points of an index set.
using SampledNet = std::function<double(const IndexPoint&)>;

/// The net eps -> x(gauge(eps)).
SampledNet lift(const SymbolicNet& x, std::shared_ptr<const IndexSet> S);

// ------------------------------------------------------------ symbolic

/// Exact decision on the symbolic fragment, with a certified gauge threshold.
struct SymbolicDecision {
  bool holds = false;
  double H = 1.0;
  /// Every gauge u <= 2^-threshold_octaves satisfies |x(u)| <= H |y(u)|.
  /// Infinite when holds but no threshold above 2^-1000 could be certified.
  double threshold_octaves = 0.0;
};

/// x = O(y) iff the leading order of x does not exceed that of y. The
/// threshold comes from a monotonicity argument on H|y| -+ x: past a
/// computable gauge its negative terms shrink relative to the leading one, so
/// one inequality at that gauge covers every smaller one.
SymbolicDecision decide_symbolic(const SymbolicNet& x, const SymbolicNet& y);

/// Verdict in the special index set; witness eps0 is the certified gauge,
/// counterexamples run along z_k = 2^-k.
Verdict bigo_symbolic(const SymbolicNet& x, const SymbolicNet& y);

struct AnchorOptions {
  int resamples = 16;  // re-verification points drawn from A_{<= eps0}
  std::uint64_t seed = 1;
};

/// O_{a,A} for gauge nets: realizes eps0 in A_{<=a} and re-verifies the
/// witness on points sampled below it.
Verdict bigo_anchored(const SymbolicNet& x, const SymbolicNet& y, const IndexSet& S,
                      const FilterClass& A, const IndexPoint& a,
                      const AnchorOptions& options = {});

/// Whether |x| <= H |y| at the gauge exp(log_u), computed in log space.
bool bounded_at(const SymbolicNet& x, const SymbolicNet& y, double H, double log_u);

// ------------------------------------------------------------- sampled

struct PointwiseOptions {
  double H_max = 1e6;          // H runs over the decades 1, 10, ..., H_max
  int extend_to = 1000;        // deepest probe index used beyond the probe
  double converge_ratio = 0.7;   // increment ratio at or below: bounded
  double growth_ratio = 0.85;    // increment ratio at or above: growing
  double flat_increment = 0.1;   // last increment of log|x/y| below this: bounded
};

/// Sampled O_{a,A} along a probe tending to the empty set. Searches H over
/// decades and eps0 over the probe; whether a bounded tail keeps growing is
/// judged from a few points below the probe, and growth is certified by
/// violations found on an extension of the probe.
Verdict bigo_pointwise(const SampledNet& x, const SampledNet& y, const IndexSet& S,
                       const FilterClass& A, const IndexPoint& a,
                       const NullSequence& probe, const PointwiseOptions& options = {});

// --------------------------------------------------------- class-quantified

/// Throws PreconditionError unless J is non-empty and closed under refine.
void check_refine_closed(const std::vector<FilterClass>& J, const IndexSet& S);

struct OJOptions {
  int anchors = 3;  // sampled anchors per class, besides the representative
  int resamples = 16;  // witness re-verification points per anchored verdict
  std::uint64_t seed = 1;
};

/// O_J: some A in J such that O_{a,A} holds for every (sampled) a in A.
Verdict bigo_OJ(const SymbolicNet& x, const SymbolicNet& y,
                const std::vector<FilterClass>& J, const IndexSet& S,
                const OJOptions& options = {});

// ------------------------------------------------------------- uniform

/// A net of functions on K: (t, eps) -> x_eps(t).
using UniformNet = std::function<double(double, const IndexPoint&)>;
/// Extra grid nodes for a given eps (kernel centers, support edges).
using GridHints = std::function<std::vector<double>(const IndexPoint&)>;

/// O^K: one (H, eps0) for all t in K. Reduces to the pointwise engine on
/// eps -> sup_K |x_eps|; a grid cross-check disagreement makes the verdict
/// indeterminate.
Verdict bigo_uniform(const UniformNet& x, const SymbolicNet& y, const Interval& K,
                     const IndexSet& S, const FilterClass& A, const IndexPoint& a,
                     const NullSequence& probe, const GridHints& hints = {},
                     const GridOptions& grid = {}, const PointwiseOptions& options = {});

}  // namespace soi
