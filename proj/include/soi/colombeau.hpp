#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "soi/bigo.hpp"
#include "soi/repnet.hpp"

namespace soi {

/// A yes/no answer that may be left open.
struct Decision {
  bool value = false;
  bool indeterminate = false;
  std::string note;
};

/// K_m = [-m, m] intersected with the domain and shrunk by 1/(m+2), for
/// m = 1..count; empty members are skipped.
std::vector<Interval> exhaustion(const Domain& omega, int count = 2);

/// Anchor of the probes: a member of `A` (the whole carrier by default) moved
/// to gauge 1/2.
IndexPoint probe_anchor(const IndexSet& S, const std::optional<FilterClass>& A = {});

// ------------------------------------------------------------ moderateness

struct ModerateOptions {
  int alpha_max = 3;
  int k_min = 8;
  int k_max = 20;
  int exhaustion = 2;
  double slope_tol = 0.25;
  /// Full instance: probes run through A_q.
  int q = 0;
  GridOptions grid;
};

struct SlopeRow {
  int k = 0;
  double gauge = 0.0;
  double sup = 0.0;
};

/// One (K, alpha) probe: the symbolic exponent E (sup ~ u^-E, -infinity when
/// the sup vanishes eventually) against the fitted slope of log sup over
/// log u.
struct ModerateProbe {
  Interval K;
  int alpha = 0;
  double symbolic_exponent = 0.0;
  double slope = 0.0;  // NaN when the sampled sups vanish
  int N = 0;
  bool agree = false;
  std::vector<SlopeRow> rows;
};

struct ModerateReport {
  bool moderate = false;
  bool indeterminate = false;
  std::vector<ModerateProbe> probes;
  std::string note;
  /// Largest N over the exhaustion at derivative order alpha.
  int N(int alpha = 0) const;
};

/// Two tracks: the gauge powers of the atoms of d^alpha u (symbolic) and a
/// least-squares slope over gauges 2^-k, k_min <= k <= k_max (numeric). The
/// tracks must agree within slope_tol, otherwise the report is indeterminate.
ModerateReport is_moderate(const RepNet& u, const IndexSet& S,
                           const ModerateOptions& options = {});

/// CSV with header K_lo,K_hi,alpha,k,gauge,sup,slope and one row per probe
/// point.
void write_csv(std::ostream& out, const ModerateReport& report);

/// Full instance: the moderateness test written as "some N and some q with
/// sup = O(u^-N) for every profile in A_q" and as "some N with
/// sup = O(u^-N) for every profile in A_N", each decided on sampled profiles.
struct FullForm {
  bool moderate = false;
  bool indeterminate = false;
  int N = -1;
  int q = -1;
};

struct FullFormsOptions {
  int q_max = 4;
  int n_max = 6;     // largest N tried by the (N, q) form
  int alpha_max = 1;
  int profiles = 3;  // sampled profiles per class
  int exhaustion = 2;
  int probe_length = 40;
  std::uint64_t seed = 1;
  GridOptions grid;
  PointwiseOptions pointwise;
};

struct FullFormsReport {
  FullForm exists_N_q;
  FullForm N_equals_q;
  bool identical() const {
    return exists_N_q.moderate == N_equals_q.moderate &&
           exists_N_q.indeterminate == N_equals_q.indeterminate &&
           exists_N_q.N == N_equals_q.N;
  }
};

/// Throws KindMismatch unless S is the full instance.
FullFormsReport full_moderate_forms(const RepNet& u, const IndexSet& S,
                                    const FullFormsOptions& options = {});

// ------------------------------------------------------------ negligibility

struct NegligibleOptions {
  int m_max = 4;
  int exhaustion = 2;
  int probe_length = 40;
  bool derivative_check = true;
  GridOptions grid;
  PointwiseOptions pointwise;
  ModerateOptions moderate;
};

struct NegligibleReport {
  bool negligible = false;
  bool indeterminate = false;
  /// Largest symbolic exponent over the exhaustion.
  double symbolic_exponent = 0.0;
  /// First (K, m) with sup_K |u_eps| = O(u^m) failing, and its verdict with
  /// the counterexample along the probe.
  int failing_m = -1;
  Interval failing_K;
  Verdict verdict;
  /// Whether sup_K |du_eps/dx| also tends to 0 (both tracks), when checked.
  std::optional<bool> derivatives_decay;
  std::string note;
};

/// sup_K |u_eps| = O(u^m) for every m <= m_max and K of the exhaustion, by the
/// gauge powers of the atoms and by the pointwise engine on the sup net; the
/// two must agree. Throws PreconditionError unless is_moderate holds.
NegligibleReport is_negligible(const RepNet& u, const IndexSet& S,
                               const NegligibleOptions& options = {});

/// The mean value form of a derivative at x with step h:
/// |u'(x) - (u(x+h) - u(x)) / h| <= h/2 sup_[x, x+h] |u''|.
struct InterpolationCheck {
  double residual = 0.0;
  double bound = 0.0;
  double rounding = 0.0;  // allowance for the difference quotient
  bool holds() const { return residual <= bound + rounding; }
};

InterpolationCheck interpolation_identity(const RepNet& u, double x, double h,
                                          const IndexPoint& eps, const IndexSet& S);

/// u - v negligible; an identically zero difference answers at once.
Decision gen_equal(const RepNet& u, const RepNet& v, const IndexSet& S,
                   const NegligibleOptions& options = {});

// ------------------------------------------------------------ point values

using Predicate = std::function<bool(const IndexPoint&)>;

struct ForallOptions {
  int probe_length = 40;
  int tail = 20;
  int anchors = 2;  // sampled anchors per class besides the representative
  std::uint64_t seed = 1;
};

/// "P holds for eps small enough": some class A of J such that for every
/// sampled anchor a in A, P holds on the last `tail` points of the probe
/// below a. False when every class has an anchor whose tail refutes P
/// throughout; otherwise (mixed tails) indeterminate. J defaults to the first
/// three classes of the filter base.
Decision forall_small(const Predicate& P, const IndexSet& S,
                      const std::vector<FilterClass>& J = {},
                      const ForallOptions& options = {});

/// A generalized point: a net of reals in the host domain, moderate, and
/// compactly supported when K is set.
struct GenPoint {
  SampledNet rep;
  std::optional<SymbolicNet> closed_form;
  Domain host;
  int N = 0;
  std::optional<Interval> K;
  bool compact() const { return K.has_value(); }
};

/// From a closed form in the gauge. Rejects (DomainError) nets that leave
/// the domain for small eps. K, when given, must be certified by
/// forall_small; otherwise it is inferred when x converges to c inside the
/// domain: K = [c - d, c + d] with d half the distance from c to the boundary
/// (at most 1).
GenPoint make_gen_point(const SymbolicNet& x, const Domain& omega, const IndexSet& S,
                        std::optional<Interval> K = {});

/// An element of the generalized numbers: a moderate net with exponent N.
struct GenNumber {
  SampledNet rep;
  int N = 0;
};

struct EvalOptions {
  int m_max = 4;
  int perturbation_power = 10;
  int probe_length = 40;
  PointwiseOptions pointwise;
};

struct PointValue {
  GenNumber value;
  /// The value net moves negligibly when the point moves by u^perturbation_power.
  Decision well_defined;
};

/// eps -> u_eps(x_eps). Throws PreconditionError unless x is compactly
/// supported, UnsupportedError for the trivial instance.
PointValue eval_at(const RepNet& u, const GenPoint& x, const IndexSet& S,
                   const EvalOptions& options = {});

/// x = O(u^m) along the probe for every m <= m_max.
Decision is_zero(const GenNumber& x, const IndexSet& S, int m_max = 4,
                 int probe_length = 40, const PointwiseOptions& pointwise = {});

/// value ~ C u^e over gauges 2^-k, k_min <= k <= k_max: e is the least-squares
/// slope, snapped to a multiple of 1/4 when within 0.05, and C is read off at
/// the smallest gauge.
struct Leading {
  double exponent = 0.0;
  double coefficient = 0.0;
  std::vector<SlopeRow> rows;  // sup holds the value itself
};

Leading leading_behavior(const GenNumber& x, const IndexSet& S, int k_min = 8,
                         int k_max = 20);

struct ZeroTestOptions {
  int m_max = 4;
  int exhaustion = 2;
  int probe_length = 40;
  GridOptions grid;
  PointwiseOptions pointwise;
  NegligibleOptions negligible;
};

struct ZeroTestReport {
  bool zero = false;
  bool indeterminate = false;
  /// For a nonzero verdict: x_eps = argmax over K of |u_eps|, with the value
  /// net's failing verdict.
  std::optional<GenPoint> witness;
  Verdict value_verdict;
  bool agrees_with_negligible = false;
  std::string note;
};

/// Decides u = 0 through its point values at x_eps = argmax_K |u_eps| over
/// the exhaustion, and cross-checks the answer with is_negligible.
ZeroTestReport zero_test_by_points(const RepNet& u, const IndexSet& S,
                                   const ZeroTestOptions& options = {});

// ------------------------------------------------------------ text form

/// Parses RepNet expressions:
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := number | 'x' ['^' integer] | 'u' ['^' rational]
///           | 'delta()' | 'heaviside()' | 'dH()' | 'smooth(' expr ')'
///           | 'scale-embed(' integer ')' | 'D(' expr ')' | '(' expr ')'
///           | '-' factor
/// delta() and heaviside() use the unit-mass bump make_Aq(0); dH() is the
/// derivative of heaviside(); scale-embed(q) is the delta embedding of
/// make_Aq(q); D takes the x-derivative. Throws ParseError.
RepNet parse_repnet(const std::string& text, const Domain& domain = {});

}  // namespace soi
