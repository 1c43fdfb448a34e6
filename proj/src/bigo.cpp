#include "soi/bigo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soi/errors.hpp"

namespace soi {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kMaxOctaves = 1000.0;  // deepest gauge 2^-1000 still a normal double
constexpr int kProbeLength = 41;        // z_k = 2^-k, k = 0..40
constexpr std::size_t kMinCertificateTerms = 5;

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Sum of |c_i / c_0| u^(p_i - p_0) L^(k_i - k_0) over the terms of w with
// negative coefficient, at u = 2^-s. The leading coefficient c_0 is positive.
double negative_part(const SymbolicNet& w, double s) {
  const auto& t = w.terms();
  const double log_u = -s * kLn2, log_L = std::log(s * kLn2);
  double d = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i].coeff < 0.0)
      d += std::abs(t[i].coeff / t[0].coeff) *
           std::exp(to_double(t[i].power - t[0].power) * log_u +
                    (t[i].log_power - t[0].log_power) * log_L);
  return d;
}

// Octave count past which u^dp L^dk is non-increasing as u decreases.
double monotone_from(const Rational& dp, int dk) {
  if (dk <= 0 || dp <= Rational(0)) return 0.0;
  return dk / (to_double(dp) * kLn2);
}

double monotone_from(const SymbolicNet& w) {
  double s = 0.0;
  const auto& t = w.terms();
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i].coeff < 0.0)
      s = std::max(s, monotone_from(t[i].power - t[0].power, t[i].log_power - t[0].log_power));
  return s;
}

// |x| <= H |y| is equivalent to w+ >= 0 and w- >= 0 with w(+-) = H sgn(y) y -+ x.
// A net with positive leading coefficient is non-negative wherever its
// negative terms add up to at most the leading one; past the monotonicity
// points of those terms that sum only decreases, so one gauge covers all
// smaller ones.
struct Certificate {
  SymbolicNet w[2];
  double s_mono = 2.0;
  bool viable = true;

  Certificate(const SymbolicNet& x, const SymbolicNet& y, double H) {
    const SymbolicNet hy = (y.leading().coeff > 0 ? H : -H) * y;
    w[0] = hy - x;
    w[1] = hy + x;
    for (const auto& n : w) {
      if (n.is_zero()) continue;
      if (n.leading().coeff <= 0.0) viable = false;
      s_mono = std::max(s_mono, monotone_from(n));
    }
  }

  bool holds_from(double s) const {
    if (!viable) return false;
    for (const auto& n : w)
      if (!n.is_zero() && negative_part(n, s) > 1.0) return false;
    return true;
  }
};

// Terms of z with |x| > H |y|, for symbolic nets evaluated in log space.
Counterexample symbolic_counterexample(const SymbolicNet& x, const SymbolicNet& y,
                                       double H,
                                       const std::function<IndexPoint(int)>& point_at,
                                       const IndexSet& S) {
  Counterexample ce;
  ce.H = H;
  const double log_H = std::log(H);
  for (int k = 0; k < static_cast<int>(kMaxOctaves); ++k) {
    if (k >= kProbeLength && ce.terms.size() >= kMinCertificateTerms) break;
    const IndexPoint p = point_at(k);
    const double g = S.gauge(p);
    if (!(g < 1.0) || !(g > 0.0)) continue;
    const auto [sx, lx] = x.signed_log_abs(std::log(g));
    const auto [sy, ly] = y.signed_log_abs(std::log(g));
    if (sx == 0) continue;
    const double log_rhs = sy == 0 ? -INFINITY : log_H + ly;
    if (lx <= log_rhs) continue;
    if (k >= kProbeLength) ce.extrapolated = true;
    ce.terms.push_back({k, p, g, std::exp(lx), std::exp(log_rhs), lx - log_rhs});
  }
  return ce;
}

double leading_ratio(const SymbolicNet& x, const SymbolicNet& y) {
  return std::abs(x.leading().coeff / y.leading().coeff);
}

}  // namespace

SampledNet lift(const SymbolicNet& x, std::shared_ptr<const IndexSet> S) {
  return [x, S](const IndexPoint& p) { return x.eval(S->gauge(p)); };
}

bool bounded_at(const SymbolicNet& x, const SymbolicNet& y, double H, double log_u) {
  const auto [sx, lx] = x.signed_log_abs(log_u);
  if (sx == 0) return true;
  const auto [sy, ly] = y.signed_log_abs(log_u);
  if (sy == 0) return false;
  return lx <= std::log(H) + ly + 1e-12 * (1.0 + std::abs(lx));
}

SymbolicDecision decide_symbolic(const SymbolicNet& x, const SymbolicNet& y) {
  if (x.is_zero()) return {true, 1.0, 0.0};
  if (y.is_zero()) return {false, 1.0, 0.0};
  const double base = 2.0 * leading_ratio(x, y);
  if (!order_leq(x.order(), y.order())) return {false, base, 0.0};

  double H = base;
  for (int attempt = 0; attempt < 60; ++attempt, H *= 2.0) {
    const Certificate c(x, y, H);
    if (!c.viable) continue;
    const double s0 = std::min(c.s_mono, kMaxOctaves);
    if (c.holds_from(s0)) return {true, H, s0};
    double lo = s0, hi = std::min(2.0 * s0, kMaxOctaves);
    while (!c.holds_from(hi) && hi < kMaxOctaves) {
      lo = hi;
      hi = std::min(2.0 * hi, kMaxOctaves);
    }
    if (!c.holds_from(hi)) continue;
    while (hi - lo > 0.25) {
      const double mid = 0.5 * (lo + hi);
      (c.holds_from(mid) ? hi : lo) = mid;
    }
    return {true, H, hi};
  }
  return {true, base, INFINITY};
}

Verdict bigo_symbolic(const SymbolicNet& x, const SymbolicNet& y) {
  const SymbolicDecision d = decide_symbolic(x, y);
  Verdict v;
  v.mode = Mode::symbolic;
  v.holds = d.holds;
  if (d.holds && !std::isfinite(d.threshold_octaves)) {
    v.indeterminate = true;
    v.note = "holds, but no gauge threshold above 2^-1000 is certified";
    return v;
  }
  if (d.holds) {
    const double g = std::exp2(-d.threshold_octaves);
    v.witness = Witness{d.H, SpecialPoint{g}, g};
    return v;
  }
  const SpecialIndexSet S;
  v.counterexample = symbolic_counterexample(
      x, y, d.H, [](int k) -> IndexPoint { return SpecialPoint{std::exp2(-k)}; }, S);
  v.note = y.is_zero() ? "y vanishes identically" : "x grows faster than y";
  return v;
}

Verdict bigo_anchored(const SymbolicNet& x, const SymbolicNet& y, const IndexSet& S,
                      const FilterClass& A, const IndexPoint& a,
                      const AnchorOptions& options) {
  if (!S.contains(A, a))
    throw PreconditionError("bigo_anchored: anchor " + to_string(a) + " is not in " +
                            to_string(A));
  const SymbolicDecision d = decide_symbolic(x, y);
  Verdict v;
  v.mode = Mode::symbolic;
  v.holds = d.holds;
  if (!d.holds) {
    v.counterexample = symbolic_counterexample(
        x, y, d.H, [&](int k) { return S.shrink(a, std::exp2(-k)); }, S);
    v.note = "x grows faster than y along A below a";
    return v;
  }
  if (!std::isfinite(d.threshold_octaves)) {
    v.indeterminate = true;
    v.note = "holds, but no gauge threshold above 2^-1000 is certified";
    return v;
  }
  const IndexPoint eps0 = S.at_gauge(a, std::exp2(-d.threshold_octaves));
  v.witness = Witness{d.H, eps0, S.gauge(eps0)};
  Rng rng(options.seed);
  for (int i = 0; i <= options.resamples; ++i) {
    const IndexPoint e = i == 0 ? eps0 : S.sample_below(A, eps0, rng);
    const double g = S.gauge(e);
    if (g >= 1.0) continue;
    if (!S.in_down_set(A, eps0, e) || !bounded_at(x, y, d.H, std::log(g))) {
      v.indeterminate = true;
      v.note = "witness failed re-verification at " + to_string(e);
      return v;
    }
  }
  return v;
}

// ------------------------------------------------------------- sampled

Verdict bigo_pointwise(const SampledNet& x, const SampledNet& y, const IndexSet& S,
                       const FilterClass& A, const IndexPoint& a,
                       const NullSequence& probe, const PointwiseOptions& options) {
  if (!tends_to_emptyset(probe.points, A, a, S))
    throw PreconditionError("bigo_pointwise: probe does not tend to the empty set");
  const auto& z = probe.points;
  const int n = static_cast<int>(z.size());
  std::vector<double> ax(n), ay(n);
  for (int k = 0; k < n; ++k) {
    ax[k] = std::abs(x(z[k]));
    ay[k] = std::abs(y(z[k]));
  }
  auto violates = [](double X, double Y, double H) { return !(X <= H * Y); };

  Verdict v;
  v.mode = Mode::sampled;
  const int need = (n + 1) / 2;
  double found_H = 0.0;
  int found_start = n;
  for (double H = 1.0; H <= options.H_max * 1.0000001; H *= 10.0) {
    int start = n;
    while (start > 0 && !violates(ax[start - 1], ay[start - 1], H)) --start;
    if (n - start >= need) {
      found_H = H;
      found_start = start;
      break;
    }
  }

  auto certificate = [&](double H, const std::vector<IndexPoint>& pts,
                         const std::vector<double>& X, const std::vector<double>& Y,
                         int first_extended) {
    NullSequence bad{{}, probe.host, probe.anchor};
    std::vector<int> ks;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (violates(X[k], Y[k], H)) {
        bad.points.push_back(pts[k]);
        ks.push_back(static_cast<int>(k));
      }
    const NullSequence dec = extract_decreasing(bad, S);
    Counterexample ce;
    ce.H = H;
    std::size_t j = 0;
    for (const auto& p : dec.points) {
      while (!S.same(bad.points[j], p)) ++j;
      const int k = ks[j];
      ce.terms.push_back({k, p, S.gauge(p), X[k], H * Y[k], std::log(X[k] / (H * Y[k]))});
      if (k >= first_extended) ce.extrapolated = true;
    }
    return ce;
  };

  if (found_H == 0.0) {
    v.holds = false;
    v.counterexample = certificate(options.H_max, z, ax, ay, n);
    v.note = "no H up to " + std::to_string(options.H_max) + " bounds the probe tail";
    return v;
  }

  // Trend of the running maximum R of log|x/y| at probe depths that double:
  // n/4, n/2, n, 2n, 4n, 8n, the last three reached with finite values. Per
  // doubling of depth R grows by a constant for L-type growth, by a growing
  // amount for power growth, and by a halving amount for a ratio tending to
  // a limit like 1/L or faster.
  auto log_ratio = [](double X, double Y) {
    return X == 0.0 ? -INFINITY : std::log(X / Y);
  };
  std::vector<std::pair<int, IndexPoint>> deep;  // probe index, point
  std::vector<double> deep_x, deep_y;
  for (int depth = 2 * n; depth <= 8 * n && depth - 1 < options.extend_to; depth *= 2) {
    const IndexPoint p = S.shrink(z.back(), std::exp2(-(depth - n)));
    const double X = std::abs(x(p)), Y = std::abs(y(p));
    if (!std::isfinite(X) || !std::isfinite(Y) || Y == 0.0 || !(S.gauge(p) > 0.0)) break;
    deep.emplace_back(depth - 1, p);
    deep_x.push_back(X);
    deep_y.push_back(Y);
  }
  std::vector<int> marks;
  for (int m : {n / 4, n / 2, n - 1}) marks.push_back(m);
  for (const auto& d : deep) marks.push_back(d.first);
  const int used = static_cast<int>(marks.size());
  const int m0 = marks[used - 3], m1 = marks[used - 2], m2 = marks[used - 1];
  auto running_max = [&](int upto) {
    double r = -INFINITY;
    for (int k = m0; k <= std::min(upto, n - 1); ++k) r = std::max(r, log_ratio(ax[k], ay[k]));
    for (std::size_t j = 0; j < deep.size(); ++j)
      if (deep[j].first >= m0 && deep[j].first <= upto)
        r = std::max(r, log_ratio(deep_x[j], deep_y[j]));
    return r;
  };
  const double R0 = running_max(m0), R1 = running_max(m1), R2 = running_max(m2);
  enum class Trend { bounded, growing, unclear } trend = Trend::bounded;
  if (std::isfinite(R2)) {
    const double d1 = std::isfinite(R0) ? R1 - R0 : INFINITY, d2 = R2 - R1;
    if (d2 < options.flat_increment) {
      trend = Trend::bounded;
    } else {
      const double rho = d1 > 0.0 ? d2 / d1 : INFINITY;
      trend = rho <= options.converge_ratio ? Trend::bounded
              : rho >= options.growth_ratio ? Trend::growing
                                            : Trend::unclear;
    }
  }

  if (trend == Trend::bounded) {
    // The witness H has to cover the deep points as well.
    double H = found_H;
    auto covers = [&](double h) {
      for (std::size_t j = 0; j < deep.size(); ++j)
        if (violates(deep_x[j], deep_y[j], h)) return false;
      return true;
    };
    while (!covers(H) && H < options.H_max) H *= 10.0;
    if (!covers(H)) {
      v.indeterminate = true;
      v.note = "tail looks bounded but deeper points exceed every H";
      return v;
    }
    if (H != found_H) {
      found_start = n;
      while (found_start > 0 && !violates(ax[found_start - 1], ay[found_start - 1], H))
        --found_start;
    }
    v.holds = true;
    v.witness = Witness{H, z[found_start], S.gauge(z[found_start])};
    return v;
  }
  if (trend == Trend::unclear) {
    v.indeterminate = true;
    v.note = "ratio still increasing at the end of the probe; trend unclear";
    return v;
  }
  // Growing: extend the probe below its last point looking for violations.
  std::vector<IndexPoint> pts(z.begin(), z.end());
  std::vector<double> X = ax, Y = ay;
  int violations = 0;
  for (int j = 1; n - 1 + j < options.extend_to; ++j) {
    const IndexPoint p = S.shrink(z.back(), std::exp2(-j));
    if (!(S.gauge(p) > 0.0)) break;
    const double px = std::abs(x(p)), py = std::abs(y(p));
    if (!std::isfinite(px) || !std::isfinite(py)) break;
    pts.push_back(p);
    X.push_back(px);
    Y.push_back(py);
    if (violates(X.back(), Y.back(), found_H) && ++violations >= 5) break;
  }
  if (violations == 0) {
    v.indeterminate = true;
    v.note = "growth extrapolated but no violation found down to the extension limit";
    return v;
  }
  v.holds = false;
  v.counterexample = certificate(found_H, pts, X, Y, n);
  v.note = "ratio grows past every bound; violations found beyond the probe";
  return v;
}

// --------------------------------------------------------- class-quantified

namespace {
bool same_class(const FilterClass& a, const FilterClass& b) {
  return a.kind == b.kind && a.order == b.order && a.endpoint == b.endpoint;
}
}  // namespace

void check_refine_closed(const std::vector<FilterClass>& J, const IndexSet& S) {
  if (J.empty()) throw PreconditionError("O_J: J is empty");
  for (const auto& A : J)
    for (const auto& B : J) {
      const FilterClass C = S.refine(A, B);
      const bool inside =
          std::any_of(J.begin(), J.end(), [&](const FilterClass& D) { return same_class(C, D); });
      if (!inside)
        throw PreconditionError("O_J: J is not closed under refine: " + to_string(A) +
                                ", " + to_string(B) + " -> " + to_string(C));
    }
}

Verdict bigo_OJ(const SymbolicNet& x, const SymbolicNet& y,
                const std::vector<FilterClass>& J, const IndexSet& S,
                const OJOptions& options) {
  check_refine_closed(J, S);
  Rng rng(options.seed);
  std::optional<Verdict> first_failure;
  for (const auto& A : J) {
    std::vector<IndexPoint> anchors;
    if (auto rep = S.representative(A)) anchors.push_back(*rep);
    for (int i = 0; i < options.anchors; ++i) anchors.push_back(S.sample(A, rng));
    if (anchors.empty()) continue;
    std::optional<Verdict> accepted;
    bool all = true;
    for (const auto& a : anchors) {
      Verdict v = bigo_anchored(x, y, S, A, a, {options.resamples, rng()});
      if (v.indeterminate) return v;
      if (!v.holds) {
        all = false;
        if (!first_failure) first_failure = v;
        break;
      }
      if (!accepted) accepted = v;
    }
    if (all && accepted) {
      accepted->note = "holds with A = " + to_string(A) + " for all sampled anchors";
      return *accepted;
    }
  }
  Verdict v = first_failure.value_or(Verdict{});
  v.holds = false;
  v.note = "no class in J works";
  return v;
}

// ------------------------------------------------------------- uniform

Verdict bigo_uniform(const UniformNet& x, const SymbolicNet& y, const Interval& K,
                     const IndexSet& S, const FilterClass& A, const IndexPoint& a,
                     const NullSequence& probe, const GridHints& hints,
                     const GridOptions& grid, const PointwiseOptions& options) {
  if (K.empty() || !std::isfinite(K.lo) || !std::isfinite(K.hi))
    throw PreconditionError("bigo_uniform: K must be a closed bounded interval");
  bool disagreement = false;
  const SampledNet sup_net = [&](const IndexPoint& p) {
    const GridSup g = grid_sup([&](double t) { return x(t, p); }, K,
                               hints ? hints(p) : std::vector<double>{}, grid);
    disagreement = disagreement || g.disagreement;
    return g.value;
  };
  const SampledNet y_net = [&](const IndexPoint& p) { return y.eval(S.gauge(p)); };
  Verdict v = bigo_pointwise(sup_net, y_net, S, A, a, probe, options);
  if (disagreement) {
    v.indeterminate = true;
    v.note = "grid refinement disagreement on the sup over K";
  }
  return v;
}

}  // namespace soi
