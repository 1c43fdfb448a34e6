#include "soi/colombeau.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>

#include "soi/errors.hpp"

namespace soi {
namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string interval_string(const Interval& K) {
  return "[" + format_double(K.lo) + ", " + format_double(K.hi) + "]";
}

// Slope and intercept of the least-squares line through (x, y).
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

FilterClass probe_class(const IndexSet& S, int q) {
  if (S.kind() == IndexKind::full) return FilterClass{IndexKind::full, 1.0, q};
  return S.whole();
}

SampledNet gauge_power(const IndexSet& S, double m) {
  return [&S, m](const IndexPoint& p) { return std::pow(S.gauge(p), m); };
}

// sup_K |v_eps| for a fixed net v, memoized by gauge along one ray.
class SupNet {
 public:
  SupNet(RepNet v, Interval K, const IndexSet& S, GridOptions grid)
      : v_(std::move(v)), K_(K), S_(&S), grid_(grid),
        cache_(std::make_shared<std::map<double, double>>()) {}

  double operator()(const IndexPoint& p) const {
    const double g = S_->gauge(p);
    auto it = cache_->find(g);
    if (it != cache_->end()) return it->second;
    const double s = sup_on_K_detail(v_, K_, 0, p, *S_, grid_).value;
    cache_->emplace(g, s);
    return s;
  }

 private:
  RepNet v_;
  Interval K_;
  const IndexSet* S_;
  GridOptions grid_;
  std::shared_ptr<std::map<double, double>> cache_;
};

// x = O(u^m) along the probe for m = 0..m_max; the first failing m, if any.
struct PowerScan {
  bool indeterminate = false;
  int failing_m = -1;
  Verdict verdict;
};

PowerScan scan_powers(const SampledNet& x, int m_max, const IndexSet& S,
                      const FilterClass& A, const IndexPoint& a, const NullSequence& probe,
                      const PointwiseOptions& pointwise) {
  PowerScan out;
  for (int m = 0; m <= m_max; ++m) {
    Verdict v = bigo_pointwise(x, gauge_power(S, m), S, A, a, probe, pointwise);
    if (v.indeterminate) {
      out.indeterminate = true;
      out.verdict = std::move(v);
      return out;
    }
    if (!v.holds) {
      out.failing_m = m;
      out.verdict = std::move(v);
      return out;
    }
    out.verdict = std::move(v);
  }
  return out;
}

void require_point_values(const IndexSet& S, const char* op) {
  if (S.kind() == IndexKind::trivial)
    throw UnsupportedError(std::string(op) +
                           ": point values are available for the special, full and "
                           "nsa-base instances only");
}

}  // namespace

std::vector<Interval> exhaustion(const Domain& omega, int count) {
  std::vector<Interval> out;
  for (int m = 1; m <= count; ++m) {
    const double margin = 1.0 / (m + 2);
    const Interval K{std::max(-static_cast<double>(m), omega.lo + margin),
                     std::min(static_cast<double>(m), omega.hi - margin)};
    if (!K.empty()) out.push_back(K);
  }
  return out;
}

IndexPoint probe_anchor(const IndexSet& S, const std::optional<FilterClass>& A) {
  const FilterClass cls = A.value_or(S.whole());
  const auto rep = S.representative(cls);
  if (!rep) throw PreconditionError("probe_anchor: class " + to_string(cls) + " is empty");
  return S.at_gauge(*rep, 0.5);
}

// ------------------------------------------------------------ moderateness

int ModerateReport::N(int alpha) const {
  int n = 0;
  for (const ModerateProbe& p : probes)
    if (p.alpha == alpha) n = std::max(n, p.N);
  return n;
}

ModerateReport is_moderate(const RepNet& net, const IndexSet& S,
                           const ModerateOptions& options) {
  const RepNet u = resolve_for(net, S);
  if (options.k_max - options.k_min < 2)
    throw DomainError("is_moderate: the slope fit needs at least three gauges");
  const std::vector<Interval> Ks = exhaustion(u.domain(), options.exhaustion);
  if (Ks.empty()) throw DomainError("is_moderate: the exhaustion of the domain is empty");
  const IndexPoint anchor = probe_anchor(S, probe_class(S, options.q));

  ModerateReport report;
  report.moderate = true;
  for (int alpha = 0; alpha <= options.alpha_max; ++alpha) {
    const RepNet d = rep_derive(u, alpha);
    for (const Interval& K : Ks) {
      ModerateProbe probe;
      probe.K = K;
      probe.alpha = alpha;
      probe.symbolic_exponent = symbolic_exponent(d, K);
      std::vector<double> lx, ly;
      for (int k = options.k_min; k <= options.k_max; ++k) {
        const IndexPoint p = S.at_gauge(anchor, std::ldexp(1.0, -k));
        const double g = S.gauge(p);
        const double s = sup_on_K_detail(d, K, 0, p, S, options.grid).value;
        probe.rows.push_back({k, g, s});
        if (s > 0.0 && std::isfinite(s)) {
          lx.push_back(std::log(g));
          ly.push_back(std::log(s));
        }
      }
      const bool vanishing = lx.size() < 3;
      probe.slope = vanishing ? NAN : fit_line(lx, ly).first;
      const double E = probe.symbolic_exponent;
      if (vanishing || std::isinf(E))
        probe.agree = vanishing && std::isinf(E);
      else
        probe.agree = std::abs(-probe.slope - E) <= options.slope_tol;
      probe.N = std::isinf(E) ? 0 : std::max(0, static_cast<int>(std::ceil(E - 1e-9)));
      if (!probe.agree) {
        report.indeterminate = true;
        report.moderate = false;
        if (report.note.empty())
          report.note = "symbolic exponent " + format_double(E) + " and fitted slope " +
                        format_double(probe.slope) + " disagree on K = " +
                        interval_string(K) + ", alpha = " + std::to_string(alpha);
      }
      report.probes.push_back(std::move(probe));
    }
  }
  return report;
}

void write_csv(std::ostream& out, const ModerateReport& report) {
  out << "K_lo,K_hi,alpha,k,gauge,sup,slope\n";
  for (const ModerateProbe& p : report.probes)
    for (const SlopeRow& r : p.rows)
      out << format_double(p.K.lo) << ',' << format_double(p.K.hi) << ',' << p.alpha << ','
          << r.k << ',' << format_double(r.gauge) << ',' << format_double(r.sup) << ','
          << format_double(p.slope) << '\n';
}

FullFormsReport full_moderate_forms(const RepNet& net, const IndexSet& S,
                                    const FullFormsOptions& options) {
  const RepNet u = resolve_for(net, S);
  if (S.kind() != IndexKind::full)
    throw KindMismatch("full_moderate_forms: needs the full instance, got " +
                       to_string(S.kind()));
  const std::vector<Interval> Ks = exhaustion(u.domain(), options.exhaustion);
  if (Ks.empty()) throw DomainError("full_moderate_forms: empty exhaustion");
  const int q_top = std::max(options.q_max, 0);

  // Sampled profiles of each A_q with their sup nets, shared by both forms.
  struct Probe {
    FilterClass A;
    IndexPoint anchor;
    NullSequence seq;
    std::vector<SupNet> sups;  // per (alpha, K)
  };
  std::vector<RepNet> derived;
  for (int alpha = 0; alpha <= options.alpha_max; ++alpha) derived.push_back(rep_derive(u, alpha));
  std::vector<std::vector<Probe>> pool(q_top + 1);
  for (int q = 0; q <= q_top; ++q) {
    const FilterClass A{IndexKind::full, 1.0, q};
    Rng rng(options.seed + 7919 * static_cast<std::uint64_t>(q));
    std::vector<IndexPoint> members;
    if (auto rep = S.representative(A)) members.push_back(*rep);
    while (static_cast<int>(members.size()) < options.profiles) members.push_back(S.sample(A, rng));
    for (const IndexPoint& m : members) {
      const IndexPoint a = S.at_gauge(m, 0.5);
      Probe pr{A, a, null_sequence(S, A, a, options.probe_length, 1), {}};
      for (const RepNet& d : derived)
        for (const Interval& K : Ks) pr.sups.emplace_back(d, K, S, options.grid);
      pool[q].push_back(std::move(pr));
    }
  }

  // sup = O(u^-N) for every sampled profile of A_q; nullopt if undecided.
  auto holds = [&](int N, int q) -> std::optional<bool> {
    bool undecided = false;
    for (const Probe& pr : pool[q])
      for (const SupNet& sup : pr.sups) {
        const Verdict v = bigo_pointwise(sup, gauge_power(S, -N), S, pr.A, pr.anchor,
                                         pr.seq, options.pointwise);
        if (v.indeterminate)
          undecided = true;
        else if (!v.holds)
          return false;
      }
    if (undecided) return std::nullopt;
    return true;
  };

  FullFormsReport report;
  for (int N = 0; N <= options.n_max && !report.exists_N_q.moderate; ++N)
    for (int q = 0; q <= q_top; ++q) {
      const auto h = holds(N, q);
      if (!h) report.exists_N_q.indeterminate = true;
      if (h && *h) {
        report.exists_N_q = {true, false, N, q};
        break;
      }
    }
  for (int N = 0; N <= q_top; ++N) {
    const auto h = holds(N, N);
    if (!h) report.N_equals_q.indeterminate = true;
    if (h && *h) {
      report.N_equals_q = {true, false, N, N};
      break;
    }
  }
  return report;
}

// ------------------------------------------------------------ negligibility

NegligibleReport is_negligible(const RepNet& net, const IndexSet& S,
                               const NegligibleOptions& options) {
  const RepNet u = resolve_for(net, S);
  NegligibleReport report;
  report.failing_K = Interval{0.0, -1.0};
  if (u.is_zero()) {
    report.negligible = true;
    report.symbolic_exponent = -INFINITY;
    report.note = "identically zero";
    return report;
  }
  const ModerateReport mod = is_moderate(u, S, options.moderate);
  if (!mod.moderate)
    throw PreconditionError("is_negligible: moderateness is not verified (" + mod.note + ")");

  const std::vector<Interval> Ks = exhaustion(u.domain(), options.exhaustion);
  report.symbolic_exponent = -INFINITY;
  for (const Interval& K : Ks)
    report.symbolic_exponent = std::max(report.symbolic_exponent, symbolic_exponent(u, K));
  const bool symbolic = report.symbolic_exponent <= -options.m_max;

  const FilterClass A = probe_class(S, options.moderate.q);
  const IndexPoint a = probe_anchor(S, A);
  const NullSequence probe = null_sequence(S, A, a, options.probe_length, 1);
  bool numeric = true, undecided = false;
  for (const Interval& K : Ks) {
    const SupNet sup(u, K, S, options.grid);
    PowerScan scan = scan_powers(sup, options.m_max, S, A, a, probe, options.pointwise);
    if (scan.indeterminate) {
      undecided = true;
      report.verdict = std::move(scan.verdict);
      break;
    }
    if (scan.failing_m >= 0) {
      numeric = false;
      report.failing_m = scan.failing_m;
      report.failing_K = K;
      report.verdict = std::move(scan.verdict);
      break;
    }
    report.verdict = std::move(scan.verdict);
  }
  if (undecided) {
    report.indeterminate = true;
    report.note = "pointwise engine undecided: " + report.verdict.note;
    return report;
  }
  if (numeric != symbolic) {
    report.indeterminate = true;
    report.note = "symbolic exponent " + format_double(report.symbolic_exponent) +
                  (symbolic ? " says negligible" : " says not negligible") +
                  " but the sampled sups disagree";
    return report;
  }
  report.negligible = numeric;
  if (!numeric)
    report.note = "sup over " + interval_string(report.failing_K) + " is not O(u^" +
                  std::to_string(report.failing_m) + ")";

  if (report.negligible && options.derivative_check) {
    const RepNet du = rep_derive(u);
    bool decays = true;
    for (const Interval& K : Ks) {
      if (!(symbolic_exponent(du, K) < 0.0)) decays = false;
      const SupNet sup(du, K, S, options.grid);
      const Verdict v = bigo_pointwise(sup, gauge_power(S, 1), S, A, a, probe, options.pointwise);
      if (!v.holds || v.indeterminate) decays = false;
    }
    report.derivatives_decay = decays;
  }
  return report;
}

InterpolationCheck interpolation_identity(const RepNet& u, double x, double h,
                                          const IndexPoint& eps, const IndexSet& S) {
  if (!(h > 0.0)) throw DomainError("interpolation_identity: step must be positive");
  const RepSlice u0(u, eps, S);
  const RepSlice u1(rep_derive(u, 1), eps, S);
  const RepSlice u2(rep_derive(u, 2), eps, S);
  const double a = u0(x), b = u0(x + h), d = u1(x);
  InterpolationCheck out;
  out.residual = std::abs(d - (b - a) / h);
  GridOptions grid;
  grid.cross_check = false;
  const double second = grid_sup([&](double t) { return u2(t); }, Interval{x, x + h},
                                 u2.hints(), grid).value;
  out.bound = 0.5 * h * second;
  out.rounding = 4e-16 * (std::abs(a) + std::abs(b)) / h + 1e-14 * std::abs(d);
  return out;
}

Decision gen_equal(const RepNet& u, const RepNet& v, const IndexSet& S,
                   const NegligibleOptions& options) {
  const RepNet d = resolve_for(rep_sub(u, v), S);
  if (d.is_zero()) return {true, false, "identical normal forms"};
  const NegligibleReport r = is_negligible(d, S, options);
  return {r.negligible, r.indeterminate, r.note};
}

// ------------------------------------------------------------ point values

Decision forall_small(const Predicate& P, const IndexSet& S,
                      const std::vector<FilterClass>& J, const ForallOptions& options) {
  if (options.tail < 1 || options.tail > options.probe_length)
    throw DomainError("forall_small: tail must lie in [1, probe length]");
  const std::vector<FilterClass> classes = J.empty() ? S.filter_base(3) : J;
  Rng rng(options.seed);
  bool all_refuted = true;
  for (const FilterClass& A : classes) {
    std::vector<IndexPoint> anchors;
    if (auto rep = S.representative(A)) anchors.push_back(*rep);
    if (anchors.empty()) continue;
    for (int i = 0; i < options.anchors; ++i) anchors.push_back(S.sample(A, rng));
    bool all_hold = true, refuted = false;
    for (const IndexPoint& m : anchors) {
      const IndexPoint a = S.at_gauge(m, 0.5);
      const NullSequence seq = null_sequence(S, A, a, options.probe_length, 1);
      int good = 0;
      for (int k = options.probe_length - options.tail; k < options.probe_length; ++k)
        if (P(seq.points[k])) ++good;
      if (good != options.tail) all_hold = false;
      if (good == 0) refuted = true;
    }
    if (all_hold) return {true, false, "holds on the probe tail in " + to_string(A)};
    if (!refuted) all_refuted = false;
  }
  if (all_refuted) return {false, false, "every class has a probe whose tail refutes P"};
  return {false, true, "P oscillates on the probe tail"};
}

GenPoint make_gen_point(const SymbolicNet& x, const Domain& omega, const IndexSet& S,
                        std::optional<Interval> K) {
  GenPoint pt;
  pt.closed_form = x;
  pt.host = omega;
  const IndexSet* s = &S;
  pt.rep = [x, s](const IndexPoint& p) { return x.eval(s->gauge(p)); };
  int N = 0;
  constexpr int kMaxN = 64;
  while (N <= kMaxN && !decide_symbolic(x, SymbolicNet::monomial(1.0, Rational(-N))).holds) ++N;
  if (N > kMaxN) throw DomainError("make_gen_point: " + x.to_string() + " is not moderate");
  pt.N = N;

  auto inside = [&](const Interval& I) {
    return forall_small([&](const IndexPoint& p) { return I.contains(pt.rep(p)); }, S);
  };
  const Decision in_domain = forall_small(
      [&](const IndexPoint& p) { return omega.contains(pt.rep(p)); }, S);
  if (!in_domain.value)
    throw DomainError("make_gen_point: " + x.to_string() +
                      " does not stay in the domain " + to_string(omega) +
                      " for small eps, so it lies in no compact subset (" + in_domain.note +
                      ")");
  if (K) {
    if (!omega.contains(*K))
      throw DomainError("make_gen_point: K = " + interval_string(*K) +
                        " is not a compact subset of " + to_string(omega));
    const Decision d = inside(*K);
    if (!d.value)
      throw DomainError("make_gen_point: x_eps is not in K = " + interval_string(*K) +
                        " for small eps (" + d.note + ")");
    pt.K = K;
    return pt;
  }
  // Inference from the limit of the closed form.
  bool converges = true;
  double c = 0.0;
  if (!x.is_zero()) {
    const Order o = x.order();
    converges = o.power > Rational(0) || (o.power == Rational(0) && o.log_power <= 0);
    for (const Monomial& t : x.terms())
      if (t.power == Rational(0) && t.log_power == 0) c += t.coeff;
  }
  if (converges && omega.contains(c)) {
    const double d = std::min({1.0, 0.5 * (c - omega.lo), 0.5 * (omega.hi - c)});
    const Interval guess{c - d, c + d};
    if (inside(guess).value) pt.K = guess;
  }
  return pt;
}

PointValue eval_at(const RepNet& u, const GenPoint& x, const IndexSet& S,
                   const EvalOptions& options) {
  require_point_values(S, "eval_at");
  if (!x.compact())
    throw PreconditionError("eval_at: the point has no compact-support certificate");
  const IndexSet* s = &S;
  auto value_net = [u, s](SampledNet pt) {
    return SampledNet([u, s, pt](const IndexPoint& p) { return RepSlice(u, p, *s)(pt(p)); });
  };
  PointValue out;
  const double E = symbolic_exponent(resolve_for(u, S), *x.K);
  out.value.N = std::isinf(E) ? 0 : std::max(0, static_cast<int>(std::ceil(E - 1e-9)));
  out.value.rep = value_net(x.rep);

  const double power = options.perturbation_power;
  const SampledNet moved = value_net([xr = x.rep, s, power](const IndexPoint& p) {
    return xr(p) + std::pow(s->gauge(p), power);
  });
  const SampledNet diff = [a = out.value.rep, moved](const IndexPoint& p) {
    return a(p) - moved(p);
  };
  const Decision z = is_zero(GenNumber{diff, 0}, S, options.m_max, options.probe_length,
                             options.pointwise);
  out.well_defined = z;
  return out;
}

Decision is_zero(const GenNumber& x, const IndexSet& S, int m_max, int probe_length,
                 const PointwiseOptions& pointwise) {
  const FilterClass A = S.whole();
  const IndexPoint a = probe_anchor(S, A);
  const NullSequence probe = null_sequence(S, A, a, probe_length, 1);
  const PowerScan scan = scan_powers(x.rep, m_max, S, A, a, probe, pointwise);
  if (scan.indeterminate) return {false, true, scan.verdict.note};
  if (scan.failing_m >= 0)
    return {false, false, "not O(u^" + std::to_string(scan.failing_m) + ")"};
  return {true, false, "O(u^" + std::to_string(m_max) + ") along the probe"};
}

Leading leading_behavior(const GenNumber& x, const IndexSet& S, int k_min, int k_max) {
  const IndexPoint a = probe_anchor(S);
  Leading out;
  std::vector<double> lx, ly;
  double sign = 1.0;
  for (int k = k_min; k <= k_max; ++k) {
    const IndexPoint p = S.at_gauge(a, std::ldexp(1.0, -k));
    const double g = S.gauge(p), v = x.rep(p);
    out.rows.push_back({k, g, v});
    if (v != 0.0 && std::isfinite(v)) {
      lx.push_back(std::log(g));
      ly.push_back(std::log(std::abs(v)));
      sign = v < 0 ? -1.0 : 1.0;
    }
  }
  if (lx.size() < 2) return out;  // vanishes along the probe
  const double slope = fit_line(lx, ly).first;
  const double snapped = std::round(4.0 * slope) / 4.0;
  out.exponent = std::abs(slope - snapped) < 0.05 ? snapped : slope;
  out.coefficient = sign * std::exp(ly.back() - out.exponent * lx.back());
  return out;
}

ZeroTestReport zero_test_by_points(const RepNet& u, const IndexSet& S,
                                   const ZeroTestOptions& options) {
  require_point_values(S, "zero_test_by_points");
  ZeroTestReport report;
  const FilterClass A = S.whole();
  const IndexPoint a = probe_anchor(S, A);
  const NullSequence probe = null_sequence(S, A, a, options.probe_length, 1);
  const std::vector<Interval> Ks = exhaustion(u.domain(), options.exhaustion);
  if (Ks.empty()) throw DomainError("zero_test_by_points: empty exhaustion");
  const IndexSet* s = &S;

  bool undecided = false;
  for (const Interval& K : Ks) {
    // Argmax of |u_eps| over K and the value there, memoized by gauge.
    auto cache = std::make_shared<std::map<double, std::pair<double, double>>>();
    auto best = [u, K, s, cache, grid = options.grid](const IndexPoint& p) {
      const double g = s->gauge(p);
      auto it = cache->find(g);
      if (it != cache->end()) return it->second;
      const GridSup sup = sup_on_K_detail(u, K, 0, p, *s, grid);
      const std::pair<double, double> r{sup.argmax, RepSlice(u, p, *s)(sup.argmax)};
      cache->emplace(g, r);
      return r;
    };
    const SampledNet value = [best](const IndexPoint& p) { return best(p).second; };
    PowerScan scan = scan_powers(value, options.m_max, S, A, a, probe, options.pointwise);
    if (scan.indeterminate) {
      undecided = true;
      report.value_verdict = std::move(scan.verdict);
      continue;
    }
    if (scan.failing_m >= 0) {
      GenPoint w;
      w.rep = [best](const IndexPoint& p) { return best(p).first; };
      w.host = u.domain();
      w.N = 0;
      w.K = K;
      report.witness = std::move(w);
      report.value_verdict = std::move(scan.verdict);
      report.note = "value at the argmax point is not O(u^" +
                    std::to_string(scan.failing_m) + ") on K = " + interval_string(K);
      break;
    }
  }
  if (!report.witness) {
    if (undecided) {
      report.indeterminate = true;
      report.note = "value net undecided: " + report.value_verdict.note;
    } else {
      report.zero = true;
      report.note = "every argmax value is O(u^" + std::to_string(options.m_max) + ")";
    }
  }

  const NegligibleReport neg = is_negligible(u, S, options.negligible);
  report.agrees_with_negligible =
      !neg.indeterminate && !report.indeterminate && neg.negligible == report.zero;
  if (!report.indeterminate && !report.agrees_with_negligible) {
    report.indeterminate = true;
    report.note += neg.indeterminate ? "; negligibility test undecided: " + neg.note
                                     : "; disagrees with the negligibility test";
  }
  return report;
}

// ------------------------------------------------------------ text form

namespace {

class RepParser {
 public:
  RepParser(const std::string& text, const Domain& domain) : s_(text), domain_(domain) {}

  RepNet parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    RepNet e = expr();
    skip();
    if (pos_ < s_.size())
      throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  bool accept_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  void empty_call() {
    expect('(');
    expect(')');
  }

  RepNet expr() {
    RepNet e = term();
    for (;;) {
      if (accept('+'))
        e = rep_add(e, term());
      else if (accept('-'))
        e = rep_sub(e, term());
      else
        return e;
    }
  }

  RepNet term() {
    RepNet e = factor();
    while (accept('*')) e = rep_mul(e, factor());
    return e;
  }

  RepNet with_domain(const RepNet& r) { return RepNet(r.atoms(), domain_); }

  RepNet factor() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return rep_scale(-1.0, factor());
    }
    if (c == '(') {
      ++pos_;
      RepNet e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return embed_smooth({number()}, domain_);
    if (accept_word("delta")) {
      empty_call();
      return with_domain(embed_delta(make_Aq(0)));
    }
    if (accept_word("heaviside")) {
      empty_call();
      return with_domain(embed_heaviside(make_Aq(0)));
    }
    if (accept_word("dH")) {
      empty_call();
      return with_domain(rep_derive(embed_heaviside(make_Aq(0))));
    }
    if (accept_word("smooth")) {
      expect('(');
      RepNet e = expr();
      expect(')');
      for (const Atom& a : e.atoms())
        if (!a.factors.empty() || a.power != Rational(0))
          throw ParseError("smooth() takes a polynomial in x", pos_);
      return e;
    }
    if (accept_word("scale-embed")) {
      expect('(');
      const std::size_t at = pos_;
      const std::int64_t q = integer();
      expect(')');
      if (q < 0 || q > kDefaultMaxMomentOrder)
        throw ParseError("scale-embed order outside [0, " +
                             std::to_string(kDefaultMaxMomentOrder) + "]",
                         at);
      return with_domain(embed_delta(make_Aq(static_cast<int>(q))));
    }
    if (accept_word("D")) {
      expect('(');
      RepNet e = expr();
      expect(')');
      return rep_derive(e);
    }
    if (c == 'x') {
      ++pos_;
      std::int64_t n = 1;
      if (accept('^')) {
        const std::size_t at = pos_;
        n = integer();
        if (n < 0 || n > 64) throw ParseError("power of x must lie in [0, 64]", at);
      }
      std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
      p.back() = 1.0;
      return embed_smooth(p, domain_);
    }
    if (c == 'u') {
      ++pos_;
      Rational p(1);
      if (accept('^')) p = rational();
      return embed_gauge_power(p, domain_);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected a number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::int64_t integer() {
    skip();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      negative = s_[pos_] == '-';
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected an integer", start);
    const std::int64_t v = std::stoll(s_.substr(digits, pos_ - digits));
    return negative ? -v : v;
  }

  Rational rational() {
    const bool paren = accept('(');
    const std::size_t start = pos_;
    const std::int64_t num = integer();
    std::int64_t den = 1;
    if (accept('/')) den = integer();
    if (den == 0) throw ParseError("zero denominator in exponent", start);
    if (paren) expect(')');
    return Rational(num, den);
  }

  const std::string& s_;
  Domain domain_;
  std::size_t pos_ = 0;
};

}  // namespace

RepNet parse_repnet(const std::string& text, const Domain& domain) {
  return RepParser(text, domain).parse();
}

}  // namespace soi
