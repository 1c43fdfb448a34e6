// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "broken_index_set.hpp"
#include "soi/colombeau.hpp"
#include "soi/errors.hpp"
#include "soi/laws.hpp"

namespace soi {
namespace {

struct Outcome {
  bool pass = true;
  std::string first_failure;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      first_failure = what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::shared_ptr<const IndexSet> special() { return make_index_set(IndexKind::special); }
std::shared_ptr<const IndexSet> full() { return make_index_set(IndexKind::full); }

RepNet delta() { return embed_delta(make_Aq(0)); }
RepNet smooth(std::vector<double> p) { return embed_smooth(std::move(p)); }
RepNet gauge_times(int power, const RepNet& u) {
  return rep_mul(embed_gauge_power(Rational(power), u.domain()), u);
}

void validation(Outcome& o) {
  for (auto kind : {IndexKind::special, IndexKind::full, IndexKind::nsa_base, IndexKind::trivial}) {
    const ValidationReport r = validate_index_set(*make_index_set(kind), 500, 7);
    int checks = 0;
    for (const ClauseResult& c : r.clauses) {
      checks += c.checks;
      o.require(c.passed(), to_string(kind) + " clause " + c.clause);
    }
    o.detail << to_string(kind) << " " << r.clauses.size() << " clauses/" << checks
             << " checks; ";
  }
  const ValidationReport broken = validate_index_set(testing::BrokenIndexSet{}, 500, 7);
  o.require(!broken.clause("(ii)").passed(), "broken control passes (ii)");
  o.detail << "broken control fails (ii) with " << broken.clause("(ii)").failures
           << " violations";
}

void laws(Outcome& o) {
  for (auto kind : {IndexKind::special, IndexKind::full}) {
    const LawReport r = law_suite(7, 1000, *make_index_set(kind));
    int failures = 0, laws = 0;
    for (const LawResult& l : r.laws) {
      o.require(l.ok(), to_string(kind) + " " + l.law);
      if (!l.negative_control) {
        failures += l.failed;
        ++laws;
      }
    }
    const LawResult& nc = r.law("(vii) without x, y >= 0");
    o.detail << to_string(kind) << ": " << laws << " laws, " << failures
             << " failures, negative control failed " << nc.failed << "/" << nc.trials
             << (kind == IndexKind::special ? "; " : "");
  }
}

void differential(Outcome& o) {
  auto S = special();
  Rng rng(17);
  const NullSequence probe = null_sequence(*S, S->whole(), SpecialPoint{1.0}, 40, 1);
  const int pairs = 200;
  int indeterminate = 0, disagreements = 0;
  for (int i = 0; i < pairs; ++i) {
    const SymbolicNet x = random_net(rng), y = random_net(rng);
    const Verdict vs = bigo_symbolic(x, y);
    const Verdict vp =
        bigo_pointwise(lift(x, S), lift(y, S), *S, S->whole(), SpecialPoint{1.0}, probe);
    if (vp.indeterminate) {
      ++indeterminate;
      continue;
    }
    if (vp.holds != vs.holds) {
      ++disagreements;
      o.require(false, x.to_string() + " vs " + y.to_string());
    }
  }
  o.require(indeterminate <= pairs / 20, "indeterminate rate above 5%");
  o.detail << pairs << " pairs, " << disagreements << " disagreements, " << indeterminate
           << " indeterminate";
}

void actions(Outcome& o) {
  const std::vector<TestFunction> fns = {TestFunction::base_bump(), make_Aq(2, 0.7),
                                         TestFunction(0.3, 0.8, {1.0, 0.5, -0.2})};
  Rng rng(11);
  std::uniform_real_distribution<double> R(0.1, 3.0), X(-2.0, 2.0);
  int checks = 0;
  double diam_err = 0.0;
  for (const TestFunction& phi : fns) {
    for (int t = 0; t < 50; ++t) {
      const double r = R(rng), s = R(rng), x = X(rng), y = X(rng);
      o.require(scale(1.0, phi) == phi, "1 (.) phi = phi");
      o.require(scale(r, scale(s, phi)) == scale(r * s, phi), "r (.) (s (.) phi)");
      o.require(translate(0.0, phi) == phi, "0 (+) phi = phi");
      o.require(translate(x, translate(y, phi)) == translate(x + y, phi), "x (+) (y (+) phi)");
      o.require(scale(r, translate(x, phi)) == translate(r * x, scale(r, phi)),
                "r (.) (x (+) phi)");
      diam_err = std::max(diam_err, std::abs(diam_supp(scale(r, phi)) - r * diam_supp(phi)));
      checks += 5;
    }
    for (int i = 0; i <= 30; ++i) {
      const double r = (10 + i) / 20.0;
      o.require((scale(r, phi) == phi) == (r == 1.0), "scale freeness at r = " + fmt(r));
    }
    for (int i = -20; i <= 20; ++i) {
      const double x = i / 20.0;
      o.require((translate(x, phi) == phi) == (x == 0.0), "translate freeness at x = " + fmt(x));
    }
  }
  o.require(diam_err <= 1e-12, "diameter scaling error " + fmt(diam_err));
  o.detail << checks << " law checks, max diam error " << fmt(diam_err)
           << ", freeness grids r in [0.5, 2] (31) and x in [-1, 1] (41)";
}

void mollifiers(Outcome& o) {
  double worst = 0.0;
  for (int q = 0; q <= 6; ++q) {
    const TestFunction phi = make_Aq(q, 1.0);
    for (int nodes : {64, 128}) {
      QuadratureOptions opt;
      opt.nodes = nodes;
      const double mass_err = std::abs(moment(phi, 0, opt) - 1.0);
      o.require(mass_err <= 1e-9, "mass q = " + std::to_string(q));
      worst = std::max(worst, mass_err);
      for (int j = 1; j <= q; ++j) {
        const double m = std::abs(moment(phi, j, opt));
        o.require(m <= 1e-9, "moment " + std::to_string(j) + " of q = " + std::to_string(q));
        worst = std::max(worst, m);
      }
    }
  }
  o.detail << "q = 0..6 at 64 and 128 nodes per panel, worst deviation " << fmt(worst);
}

void moderateness(Outcome& o) {
  auto S = special();
  ModerateOptions opt;
  double worst = 0.0;
  auto check = [&](const std::string& name, const RepNet& u, auto expected_N,
                   int alpha_max) {
    opt.alpha_max = alpha_max;
    const ModerateReport r = is_moderate(u, *S, opt);
    o.require(r.moderate && !r.indeterminate, name + " not moderate");
    for (const ModerateProbe& p : r.probes) {
      const int N = expected_N(p.alpha);
      o.require(p.agree, name + " tracks disagree");
      o.require(p.N == N, name + " N = " + std::to_string(p.N) + " at alpha " +
                              std::to_string(p.alpha));
      if (N > 0) {
        const double dev = std::abs(p.slope + N);
        worst = std::max(worst, dev);
        o.require(dev <= 0.25, name + " slope " + fmt(p.slope));
      }
    }
  };
  check("delta", delta(), [](int a) { return 1 + a; }, 2);
  check("delta^2", rep_mul(delta(), delta()), [](int) { return 2; }, 0);
  check("smooth", smooth({1.0, -2.0, 0.5}), [](int) { return 0; }, 2);
  o.detail << "delta N = 1+alpha (alpha <= 2), delta^2 N = 2, smooth N = 0; worst slope "
              "deviation "
           << fmt(worst);
}

void certificates(Outcome& o) {
  auto S = special();
  for (const auto& [name, u] : {std::pair{std::string("delta"), delta()},
                                std::pair{std::string("x*delta"),
                                          rep_mul(smooth({0.0, 1.0}), delta())}}) {
    const NegligibleReport r = is_negligible(u, *S);
    o.require(!r.negligible && !r.indeterminate, name + " not refuted");
    if (!r.verdict.counterexample) {
      o.require(false, name + " has no certificate");
      continue;
    }
    const auto& terms = r.verdict.counterexample->terms;
    o.require(terms.size() >= 3, name + " certificate too short");
    int verified = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i > 0) o.require(S->less(terms[i].point, terms[i - 1].point), name + " not decreasing");
      const double x = sup_on_K(u, r.failing_K, 0, terms[i].point, *S);
      const double y = std::pow(S->gauge(terms[i].point), r.failing_m);
      for (double H = 1.0; H <= 1e6; H *= 10.0) {
        o.require(x > H * y, name + " term " + std::to_string(i) + " at H = " + fmt(H));
        ++verified;
      }
    }
    o.detail << name << ": not O(u^" << r.failing_m << "), " << terms.size() << " terms, "
             << verified << " (term, H) checks" << (name == "delta" ? "; " : "");
  }
}

std::vector<RepNet> forms_corpus() {
  const RepNet d = delta();
  const RepNet x = smooth({0.0, 1.0});
  return {d,
          rep_mul(x, d),
          rep_mul(smooth({0.0, 0.0, 1.0}), d),
          rep_mul(d, d),
          rep_derive(d),
          smooth({1.0, 1.0}),
          smooth({0.0, 0.0, 2.0}),
          gauge_times(10, x),
          rep_add(d, smooth({1.0})),
          embed_delta(make_Aq(2))};
}

void full_forms(Outcome& o) {
  auto S = full();
  int n = 0;
  std::string Ns;
  for (const RepNet& u : forms_corpus()) {
    const FullFormsReport r = full_moderate_forms(u, *S);
    o.require(r.identical(), u.to_string());
    o.require(!r.exists_N_q.indeterminate && r.exists_N_q.moderate, "not moderate " + u.to_string());
    Ns += (n++ ? "," : "") + std::to_string(r.exists_N_q.N);
  }
  o.detail << n << " nets, q <= 4, alpha <= 1, identical N = {" << Ns << "}";
}

void point_values(Outcome& o) {
  auto S = special();
  const RepNet d = delta(), x = smooth({0.0, 1.0});
  const std::vector<RepNet> corpus = {d,
                                      rep_mul(x, d),
                                      rep_derive(d),
                                      x,
                                      smooth({1.0}),
                                      gauge_times(10, x),
                                      gauge_times(12, d),
                                      gauge_times(6, smooth({0.0, 0.0, 1.0})),
                                      RepNet(),
                                      rep_sub(rep_derive(embed_heaviside(make_Aq(0))), d)};
  int zero = 0;
  for (const RepNet& u : corpus) {
    const ZeroTestReport z = zero_test_by_points(u, *S);
    const NegligibleReport n = is_negligible(u, *S);
    o.require(!z.indeterminate && !n.indeterminate, "undecided " + u.to_string());
    o.require(z.zero == n.negligible, "zero test disagrees on " + u.to_string());
    zero += z.zero;
  }
  int invariant = 0;
  for (const std::string& p : {"u", "0.3 + u", "-0.5 + 2*u^2"}) {
    const GenPoint a = make_gen_point(parse_net(p), Domain{}, *S);
    const GenPoint b = make_gen_point(parse_net(p) + parse_net("u^10"), Domain{}, *S);
    for (const RepNet& u : corpus) {
      const GenNumber va = eval_at(u, a, *S).value, vb = eval_at(u, b, *S).value;
      const GenNumber diff{[va, vb](const IndexPoint& e) { return va.rep(e) - vb.rep(e); }, 0};
      const Decision z = is_zero(diff, *S);
      o.require(z.value && !z.indeterminate, "eval_at moves at " + p + " for " + u.to_string());
      invariant += z.value && !z.indeterminate;
    }
  }
  o.detail << corpus.size() << " nets (" << zero << " zero), zero test = negligibility on all; "
           << invariant << "/" << 3 * corpus.size() << " point values invariant under u^10";
}

void order_isomorphism(Outcome& o) {
  Rng rng(23);
  std::uniform_real_distribution<double> U(0.01, 2.0);
  int exceptions = 0;
  for (auto kind : {IndexKind::full, IndexKind::nsa_base}) {
    auto S = make_index_set(kind);
    const IndexPoint e = S->sample(S->whole(), rng);
    auto act = [&](double r) -> IndexPoint {
      if (const auto* f = std::get_if<FullPoint>(&e)) return FullPoint{r * f->scale, f->profile};
      return NsaPoint{scale(r, std::get<NsaPoint>(e).fn)};
    };
    for (int i = 0; i < 500; ++i) {
      const double r = U(rng), s = i % 10 == 0 ? r : U(rng);
      if (S->leq(act(r), act(s)) != (r <= s)) {
        ++exceptions;
        o.require(false, to_string(kind) + " r = " + fmt(r) + " s = " + fmt(s));
      }
    }
  }
  o.detail << "500 pairs each on full and nsa-base, " << exceptions << " exceptions";
}

}  // namespace
}  // namespace soi

int main() {
  using Check = std::pair<const char*, std::function<void(soi::Outcome&)>>;
  const std::vector<Check> criteria = {
      {"index-set validation", soi::validation},
      {"big-O law suite", soi::laws},
      {"differential oracle", soi::differential},
      {"action laws and freeness", soi::actions},
      {"mollifier moments", soi::mollifiers},
      {"canonical moderateness", soi::moderateness},
      {"non-negligibility certificates", soi::certificates},
      {"full-instance quantifier forms", soi::full_forms},
      {"point-value characterization", soi::point_values},
      {"order isomorphism", soi::order_isomorphism},
  };
  int failed = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    soi::Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << ++n << ". " << name << ": "
              << o.detail.str() << (o.pass ? "" : " | first failure: " + o.first_failure)
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
