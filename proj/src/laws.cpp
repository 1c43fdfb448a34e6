#include "soi/laws.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "soi/errors.hpp"

namespace soi {
namespace {

constexpr std::size_t kMaxCounterexamples = 5;

Monomial random_term(Rng& rng, const NetDistribution& d, bool bounded) {
  std::uniform_real_distribution<double> mag(d.coeff_lo, d.coeff_hi);
  std::uniform_int_distribution<int> den(1, std::max(1, d.max_den));
  const int q = den(rng);
  const int lo = bounded ? 0 : d.p_lo * q;
  std::uniform_int_distribution<int> num(lo, d.p_hi * q);
  const Rational p(num(rng), q);
  const int k_hi = bounded && p.numerator() == 0 ? std::min(0, d.k_hi) : d.k_hi;
  std::uniform_int_distribution<int> logp(std::min(d.k_lo, k_hi), k_hi);
  const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  return {sign * mag(rng), p, logp(rng)};
}

SymbolicNet random_sum(Rng& rng, const NetDistribution& d, bool bounded) {
  std::uniform_int_distribution<int> count(1, std::max(1, d.max_terms));
  for (;;) {
    std::vector<Monomial> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, d, bounded));
    SymbolicNet net(std::move(terms));
    if (!net.is_zero()) return net;
  }
}

double random_scalar(Rng& rng) {
  if (std::bernoulli_distribution(0.1)(rng)) return 0.0;
  const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  return sign * std::uniform_real_distribution<double>(0.5, 5.0)(rng);
}

// Outcome of one trial: premises that failed (an implementation bug), the
// conclusion, and whether anything was left undecided.
struct Trial {
  bool premise_ok = true;
  bool holds = true;
  bool indeterminate = false;
  std::string detail;
};

std::string rel(const SymbolicNet& x, const SymbolicNet& y) {
  return x.to_string() + " = O(" + y.to_string() + ")";
}

// A relation "x = O(y)" in one of the three senses checked by the suite.
class Relation {
 public:
  virtual ~Relation() = default;
  virtual Verdict check(const SymbolicNet& x, const SymbolicNet& y, Rng& rng) const = 0;

  // Premise: must hold; anything else is recorded as a premise failure.
  void premise(Trial& t, const SymbolicNet& x, const SymbolicNet& y, Rng& rng) const {
    if (!t.premise_ok) return;
    const Verdict v = check(x, y, rng);
    if (!v.holds || v.indeterminate) {
      t.premise_ok = false;
      t.detail = "premise " + rel(x, y) + " not confirmed" +
                 (v.note.empty() ? "" : ": " + v.note);
    }
  }
  void conclusion(Trial& t, const SymbolicNet& x, const SymbolicNet& y, Rng& rng) const {
    if (!t.premise_ok || !t.holds) return;
    const Verdict v = check(x, y, rng);
    if (v.indeterminate) {
      t.indeterminate = true;
      t.detail = rel(x, y) + ": " + v.note;
    } else if (!v.holds) {
      t.holds = false;
      t.detail = rel(x, y) + " fails";
    }
  }
};

class Anchored : public Relation {
 public:
  Anchored(const IndexSet& S, FilterClass A, IndexPoint a, int resamples)
      : S_(S), A_(A), a_(std::move(a)), resamples_(resamples) {}
  Verdict check(const SymbolicNet& x, const SymbolicNet& y, Rng& rng) const override {
    return bigo_anchored(x, y, S_, A_, a_, {resamples_, rng()});
  }

 private:
  const IndexSet& S_;
  FilterClass A_;
  IndexPoint a_;
  int resamples_;
};

class ClassQuantified : public Relation {
 public:
  ClassQuantified(const IndexSet& S, std::vector<FilterClass> J, int resamples)
      : S_(S), J_(std::move(J)), resamples_(resamples) {}
  Verdict check(const SymbolicNet& x, const SymbolicNet& y, Rng& rng) const override {
    return bigo_OJ(x, y, J_, S_, {2, resamples_, rng()});
  }

 private:
  const IndexSet& S_;
  std::vector<FilterClass> J_;
  int resamples_;
};

using LawBody = std::function<void(Trial&, const Relation&, Rng&)>;

// The laws shared by O_{a,A} and O_J, "=" read as inclusion.
std::vector<std::pair<std::string, LawBody>> common_laws(const NetDistribution& d) {
  auto rn = [d](Rng& r) { return random_net(r, d); };
  auto rb = [d](Rng& r) { return random_bounded_net(r, d); };
  std::vector<std::pair<std::string, LawBody>> laws;
  laws.emplace_back("(i)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = rn(r);
    O.conclusion(t, x, x, r);
  });
  laws.emplace_back("(ii)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet z = rn(r), y = z * rb(r), x = y * rb(r);
    O.premise(t, x, y, r);
    O.premise(t, y, z, r);
    O.conclusion(t, x, z, r);
  });
  laws.emplace_back("(iii)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = rn(r), y = rn(r), xp = x * rb(r), yp = y * rb(r);
    O.premise(t, xp, x, r);
    O.premise(t, yp, y, r);
    O.conclusion(t, xp * yp, x * y, r);
  });
  laws.emplace_back("(iv)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = rn(r), y = rn(r), xp = x * rb(r), yp = y * rb(r);
    O.premise(t, xp, x, r);
    O.premise(t, yp, y, r);
    O.conclusion(t, xp + yp, abs(x) + abs(y), r);
  });
  laws.emplace_back("(v)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = rn(r), y = rn(r), yp = y * rb(r);
    O.premise(t, yp, y, r);
    O.conclusion(t, x * yp, x * y, r);
  });
  laws.emplace_back("(vi)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = rn(r), x1 = x * rb(r), x2 = x * rb(r);
    O.premise(t, x1, x, r);
    O.premise(t, x2, x, r);
    O.conclusion(t, x1 + x2, x, r);
  });
  laws.emplace_back("(vii)", [=](Trial& t, const Relation& O, Rng& r) {
    const SymbolicNet x = abs(rn(r)), y = abs(rn(r)), yp = y * rb(r);
    O.premise(t, yp, y, r);
    O.conclusion(t, x + yp, x + y, r);
  });
  laws.emplace_back("(viii)", [=](Trial& t, const Relation& O, Rng& r) {
    const double k = random_scalar(r);
    const SymbolicNet x = rn(r), xp = (k * x) * rb(r);
    O.premise(t, xp, k * x, r);
    O.conclusion(t, xp, x, r);
  });
  laws.emplace_back("(ix)", [=](Trial& t, const Relation& O, Rng& r) {
    const double k = random_scalar(r);
    const SymbolicNet x = rn(r), xp = x * rb(r);
    O.premise(t, xp, x, r);
    O.conclusion(t, k * xp, x, r);
  });
  return laws;
}

void record(LawResult& res, const Trial& t, int trial) {
  ++res.trials;
  const bool bad = !t.premise_ok || (!t.indeterminate && !t.holds);
  if (t.indeterminate && t.premise_ok) {
    ++res.indeterminate;
  } else if (bad) {
    ++res.failed;
  } else {
    ++res.passed;
  }
  const bool report = res.negative_control ? !bad : bad || t.indeterminate;
  if (report && res.counterexamples.size() < kMaxCounterexamples) {
    std::ostringstream os;
    os << "trial " << trial << ": "
       << (t.detail.empty() ? std::string("conclusion holds") : t.detail);
    res.counterexamples.push_back(os.str());
  }
}

Rng trial_rng(std::uint64_t seed, int trial, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Random polynomial of degree <= 2 with coefficients in [0.5, 2] up to sign.
std::vector<double> random_profile(Rng& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::vector<double> c(3);
  for (double& v : c) v = (std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0) * mag(rng);
  return c;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

SymbolicNet random_net(Rng& rng, const NetDistribution& dist) {
  return random_sum(rng, dist, false);
}

SymbolicNet random_bounded_net(Rng& rng, const NetDistribution& dist) {
  return random_sum(rng, dist, true);
}

bool LawReport::passed() const {
  return !laws.empty() &&
         std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.ok(); });
}

const LawResult& LawReport::law(const std::string& name) const {
  for (const auto& l : laws)
    if (l.law == name) return l;
  throw DomainError("no law named " + name);
}

LawReport law_suite(std::uint64_t seed, int trials, const IndexSet& S,
                    const LawOptions& options) {
  if (trials < 1) throw PreconditionError("law_suite: trials must be at least 1");
  const NetDistribution dist;
  const auto laws = common_laws(dist);
  const std::vector<FilterClass> base = S.filter_base(5);
  const std::vector<FilterClass> J(base.begin(), base.begin() + 4);

  std::map<std::string, LawResult> results;
  std::vector<std::string> order;
  auto slot = [&](const std::string& name, bool negative = false) -> LawResult& {
    auto [it, fresh] = results.try_emplace(name);
    if (fresh) {
      it->second.law = name;
      it->second.negative_control = negative;
      order.push_back(name);
    }
    return it->second;
  };

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, trial, 0);
    const FilterClass A =
        J[std::uniform_int_distribution<std::size_t>(0, J.size() - 1)(rng)];
    const IndexPoint a = S.sample(A, rng);
    const Anchored anchored(S, A, a, options.resamples);
    const ClassQuantified oj(S, J, options.resamples);

    for (const auto& [name, body] : laws) {
      Trial t;
      try {
        body(t, anchored, rng);
      } catch (const Error& e) {
        t.premise_ok = false;
        t.detail = e.what();
      }
      record(slot(name), t, trial);
    }

    // (x): a in B subset A and x = O_{a,A}(y) give x = O_{a,B}(y), realized
    // through an eps1 in B below eps0, which itself need not lie in B.
    {
      Trial t;
      try {
        std::uniform_int_distribution<std::size_t> pick(0, base.size() - 2);
        const std::size_t i = pick(rng);
        const std::size_t j = std::uniform_int_distribution<std::size_t>(i + 1, base.size() - 1)(rng);
        const FilterClass& outer = base[i];
        const FilterClass& inner = base[j];
        const IndexPoint b = S.sample(inner, rng);
        const SymbolicNet y = random_net(rng, dist), x = y * random_bounded_net(rng, dist);
        const Verdict v = bigo_anchored(x, y, S, outer, b, {options.resamples, rng()});
        if (!v.holds || v.indeterminate) {
          t.premise_ok = false;
          t.detail = "premise " + rel(x, y) + " on " + to_string(outer) + " not confirmed";
        } else {
          const IndexPoint eps1 = S.sample_below(inner, S.at_gauge(b, v.witness->gauge0), rng);
          bool ok = S.in_down_set(inner, b, eps1);
          for (int s = 0; ok && s < std::max(1, options.resamples); ++s) {
            const IndexPoint e = S.sample_below(inner, eps1, rng);
            const double g = S.gauge(e);
            ok = S.in_down_set(outer, v.witness->eps0, e) &&
                 (g >= 1.0 || bounded_at(x, y, v.witness->H, std::log(g)));
          }
          const Verdict w = bigo_anchored(x, y, S, inner, b, {options.resamples, rng()});
          if (!ok || !w.holds || w.indeterminate) {
            t.holds = false;
            t.detail = rel(x, y) + " fails on " + to_string(inner);
          }
        }
      } catch (const Error& e) {
        t.premise_ok = false;
        t.detail = e.what();
      }
      record(slot("(x)"), t, trial);
    }

    // Negative control: (vii) with y = -x <= 0 and y' = 2y; x + y' = -x is
    // not O(x + y) = O(0).
    {
      Trial t;
      const SymbolicNet x = abs(random_net(rng, dist)), y = -x, yp = 2.0 * y;
      try {
        anchored.conclusion(t, x + yp, x + y, rng);
      } catch (const Error& e) {
        t.premise_ok = false;
        t.detail = e.what();
      }
      record(slot("(vii) without x, y >= 0", true), t, trial);
    }

    Rng jrng = trial_rng(seed, trial, 1);
    for (const auto& [name, body] : laws) {
      Trial t;
      try {
        body(t, oj, jrng);
      } catch (const Error& e) {
        t.premise_ok = false;
        t.detail = e.what();
      }
      record(slot("J" + name), t, trial);
    }
  }

  // Uniform group: x_eps(t) = f(t) x(eps) on K = [-1, 1].
  const Interval K{-1.0, 1.0};
  for (int trial = 0; trial < options.uniform_trials; ++trial) {
    Rng rng = trial_rng(seed, trial, 2);
    const FilterClass A = S.whole();
    const IndexPoint a = S.at_gauge(S.representative(A).value_or(S.sample(A, rng)), 0.5);
    const NullSequence probe = null_sequence(S, A, a, 40, 1);
    auto uniform = [&](const std::vector<double>& f, const SymbolicNet& x) -> UniformNet {
      return [&S, f, x](double t, const IndexPoint& p) { return horner(f, t) * x.eval(S.gauge(p)); };
    };
    auto check = [&](Trial& t, const UniformNet& lhs, const SymbolicNet& rhs, bool premise,
                     const std::string& what) {
      if (!t.premise_ok || !t.holds || t.indeterminate) return;
      const Verdict v = bigo_uniform(lhs, rhs, K, S, A, a, probe);
      if (v.indeterminate) {
        if (premise) return;
        t.indeterminate = true;
        t.detail = what + ": " + v.note;
      } else if (!v.holds) {
        (premise ? t.premise_ok : t.holds) = false;
        t.detail = what + (premise ? " (premise)" : "") + " fails";
      }
    };
    const auto f1 = random_profile(rng), f2 = random_profile(rng);
    std::vector<double> f12(5, 0.0);
    for (std::size_t i = 0; i < f1.size(); ++i)
      for (std::size_t j = 0; j < f2.size(); ++j) f12[i + j] += f1[i] * f2[j];
    const SymbolicNet x = random_net(rng, dist), y = random_net(rng, dist);
    const SymbolicNet xp = x * random_bounded_net(rng, dist),
                      xpp = x * random_bounded_net(rng, dist),
                      yp = y * random_bounded_net(rng, dist);
    const double k = random_scalar(rng);
    auto run = [&](const std::string& name, const std::function<void(Trial&)>& body) {
      Trial t;
      try {
        body(t);
      } catch (const Error& e) {
        t.premise_ok = false;
        t.detail = e.what();
      }
      record(slot(name), t, trial);
    };
    run("K(iii)", [&](Trial& t) {
      check(t, uniform(f1, xp), x, true, "f1 x'");
      check(t, uniform(f2, yp), y, true, "f2 y'");
      check(t, uniform(f12, xp * yp), x * y, false, "f1 f2 x'y' = O(xy)");
    });
    run("K(iv)", [&](Trial& t) {
      check(t, [&](double s, const IndexPoint& p) {
        const double u = S.gauge(p);
        return horner(f1, s) * xp.eval(u) + horner(f2, s) * yp.eval(u);
      }, abs(x) + abs(y), false, "f1 x' + f2 y' = O(|x| + |y|)");
    });
    run("K(vi)", [&](Trial& t) {
      check(t, [&](double s, const IndexPoint& p) {
        const double u = S.gauge(p);
        return horner(f1, s) * xp.eval(u) + horner(f2, s) * xpp.eval(u);
      }, x, false, "f1 x' + f2 x'' = O(x)");
    });
    run("K(ix)", [&](Trial& t) {
      check(t, uniform(f1, k * xp), x, false, "k f1 x' = O(x)");
    });
  }

  LawReport report{S.kind(), {}};
  for (const auto& name : order) report.laws.push_back(results.at(name));
  return report;
}

}  // namespace soi
