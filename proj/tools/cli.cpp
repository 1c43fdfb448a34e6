#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "soi/colombeau.hpp"
#include "soi/errors.hpp"
#include "soi/laws.hpp"

namespace soi::cli {
namespace {

using json = nlohmann::json;

struct Session {
  std::string index = "special";
  std::optional<int> q;
  std::optional<int> kmin, kmax;
  std::optional<double> tol;
  std::string csv;
  std::uint64_t seed = 7;
  bool json = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

void table(std::ostream& out, const std::vector<std::string>& head,
           const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    w[c] = head[c].size();
    for (const auto& r : rows) w[c] = std::max(w[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "  " : "") << pad(r[c], w[c]);
    out << '\n';
  };
  line(head);
  for (const auto& r : rows) line(r);
}

void write_csv_file(const std::string& path, const std::vector<std::string>& head,
                    const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  for (std::size_t c = 0; c < head.size(); ++c) f << (c ? "," : "") << head[c];
  f << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) f << (c ? "," : "") << r[c];
    f << '\n';
  }
}

Domain parse_domain(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("expected LO,HI, got '" + text + "'");
  auto bound = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw UsageError("bad bound '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw UsageError("bad bound '" + s + "'");
    }
  };
  return Domain{bound(text.substr(0, comma)), bound(text.substr(comma + 1))};
}

std::shared_ptr<const IndexSet> index_set(const Session& s) {
  try {
    return make_index_set(parse_index_kind(s.index));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int verdict_code(const Verdict& v) {
  return v.indeterminate ? kIndeterminate : v.holds ? kHolds : kFails;
}

std::string verdict_word(const Verdict& v) {
  return v.indeterminate ? "indeterminate" : v.holds ? "holds" : "fails";
}

const std::vector<std::string> kCounterHead = {"k", "gauge", "abs_x", "H_abs_y"};

std::vector<std::vector<std::string>> counter_rows(const Counterexample& ce) {
  std::vector<std::vector<std::string>> rows;
  for (const CounterTerm& t : ce.terms)
    rows.push_back({std::to_string(t.k), num(t.gauge), num(t.lhs), num(t.rhs)});
  return rows;
}

json verdict_json(const Verdict& v) {
  json j;
  j["verdict"] = verdict_word(v);
  if (v.witness) {
    j["H"] = v.witness->H;
    j["gauge0"] = v.witness->gauge0;
  }
  if (v.counterexample) {
    j["H"] = v.counterexample->H;
    j["extrapolated"] = v.counterexample->extrapolated;
    json terms = json::array();
    for (const CounterTerm& t : v.counterexample->terms)
      terms.push_back({{"k", t.k}, {"gauge", t.gauge}, {"abs_x", t.lhs}, {"H_abs_y", t.rhs}});
    j["counterexample"] = terms;
  }
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

void print_verdict(std::ostream& out, const Session& s, const Verdict& v) {
  out << "verdict: " << verdict_word(v) << '\n';
  if (v.witness)
    out << "witness: H = " << num(v.witness->H) << ", eps0 gauge = " << num(v.witness->gauge0)
        << '\n';
  if (v.counterexample) {
    out << "counterexample (H = " << num(v.counterexample->H)
        << (v.counterexample->extrapolated ? ", extended past the probe" : "") << "):\n";
    table(out, kCounterHead, counter_rows(*v.counterexample));
    if (!s.csv.empty()) write_csv_file(s.csv, kCounterHead, counter_rows(*v.counterexample));
  }
  if (!v.note.empty()) out << "note: " << v.note << '\n';
}

// ------------------------------------------------------------------ bigo

int cmd_bigo(const Session& s, const std::string& lhs, const std::string& rhs, bool sampled,
             std::ostream& out) {
  const SymbolicNet x = parse_net(lhs), y = parse_net(rhs);
  const auto S = index_set(s);
  Verdict v;
  if (sampled) {
    const int kmin = s.kmin.value_or(1), kmax = s.kmax.value_or(40);
    if (kmin < 0 || kmax < kmin + 3) throw UsageError("need 0 <= kmin and kmax >= kmin + 3");
    const FilterClass A = S->kind() == IndexKind::full && s.q
                              ? FilterClass{IndexKind::full, 1.0, *s.q}
                              : S->whole();
    const auto rep = S->representative(A);
    if (!rep) throw DomainError("class " + to_string(A) + " is empty");
    const NullSequence probe = null_sequence(*S, A, *rep, kmax - kmin + 1, kmin);
    v = bigo_pointwise(lift(x, S), lift(y, S), *S, A, *rep, probe);
  } else if (S->kind() == IndexKind::special) {
    v = bigo_symbolic(x, y);
  } else {
    std::vector<FilterClass> J = S->filter_base(3);
    if (S->kind() == IndexKind::full && s.q) J = {FilterClass{IndexKind::full, 1.0, *s.q}};
    OJOptions o;
    o.seed = s.seed;
    v = bigo_OJ(x, y, J, *S, o);
  }
  if (s.json) {
    json j = verdict_json(v);
    j["command"] = "bigo";
    j["lhs"] = x.to_string();
    j["rhs"] = y.to_string();
    j["index"] = to_string(S->kind());
    out << j.dump() << '\n';
    if (!s.csv.empty() && v.counterexample)
      write_csv_file(s.csv, kCounterHead, counter_rows(*v.counterexample));
  } else {
    out << x.to_string() << " = O(" << y.to_string() << ") in the " << to_string(S->kind())
        << " index set\n";
    print_verdict(out, s, v);
  }
  return verdict_code(v);
}

// ------------------------------------------------------------------ laws

int cmd_laws(const Session& s, int trials, std::ostream& out) {
  const auto S = index_set(s);
  const LawReport r = law_suite(s.seed, trials, *S);
  const std::vector<std::string> head = {"law", "trials", "passed", "failed", "indeterminate",
                                         "result"};
  std::vector<std::vector<std::string>> rows;
  for (const LawResult& l : r.laws)
    rows.push_back({l.law, std::to_string(l.trials), std::to_string(l.passed),
                    std::to_string(l.failed), std::to_string(l.indeterminate),
                    l.ok() ? (l.negative_control ? "fails as expected" : "ok") : "FAILED"});
  if (s.json) {
    json j;
    j["command"] = "laws";
    j["index"] = to_string(S->kind());
    j["passed"] = r.passed();
    json laws = json::array();
    for (const LawResult& l : r.laws)
      laws.push_back({{"law", l.law}, {"trials", l.trials}, {"passed", l.passed},
                      {"failed", l.failed}, {"indeterminate", l.indeterminate},
                      {"negative_control", l.negative_control}, {"ok", l.ok()}});
    j["laws"] = laws;
    out << j.dump() << '\n';
  } else {
    out << "law suite, " << to_string(S->kind()) << " index set, " << trials
        << " trials, seed " << s.seed << '\n';
    table(out, head, rows);
    for (const LawResult& l : r.laws)
      for (const std::string& c : l.counterexamples) out << l.law << ": " << c << '\n';
    out << (r.passed() ? "all laws hold\n" : "some laws FAILED\n");
  }
  if (!s.csv.empty()) write_csv_file(s.csv, head, rows);
  return r.passed() ? kHolds : kFails;
}

// ------------------------------------------------------------------ genfun

std::shared_ptr<const IndexSet> genfun_index(const Session& s) {
  auto S = index_set(s);
  if (S->kind() == IndexKind::trivial)
    throw DomainError("genfun: the trivial index set is not supported; use special, full or "
                      "nsa-base");
  return S;
}

int cmd_moderate(const Session& s, const RepNet& u, std::ostream& out) {
  const auto S = genfun_index(s);
  ModerateOptions o;
  if (s.kmin) o.k_min = *s.kmin;
  if (s.kmax) o.k_max = *s.kmax;
  if (s.tol) o.slope_tol = *s.tol;
  if (s.q) o.q = *s.q;
  const ModerateReport r = is_moderate(u, *S, o);
  std::optional<FullFormsReport> forms;
  if (S->kind() == IndexKind::full) {
    FullFormsOptions f;
    f.seed = s.seed;
    forms = full_moderate_forms(u, *S, f);
  }
  const std::string word = r.indeterminate ? "indeterminate" : r.moderate ? "yes" : "no";
  if (s.json) {
    json j;
    j["command"] = "moderate";
    j["net"] = u.to_string();
    j["moderate"] = word;
    json probes = json::array();
    for (const ModerateProbe& p : r.probes)
      probes.push_back({{"K", {p.K.lo, p.K.hi}}, {"alpha", p.alpha}, {"N", p.N},
                        {"symbolic_exponent", std::isinf(p.symbolic_exponent)
                                                  ? json("-inf")
                                                  : json(p.symbolic_exponent)},
                        {"slope", std::isnan(p.slope) ? json(nullptr) : json(p.slope)},
                        {"agree", p.agree}});
    j["probes"] = probes;
    if (forms)
      j["full_forms"] = {{"exists_N_q", {{"moderate", forms->exists_N_q.moderate},
                                         {"N", forms->exists_N_q.N},
                                         {"q", forms->exists_N_q.q}}},
                         {"N_equals_q", {{"moderate", forms->N_equals_q.moderate},
                                         {"N", forms->N_equals_q.N}}}};
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump() << '\n';
  } else {
    out << "net: " << u.to_string() << '\n' << "moderate: " << word << '\n';
    for (int alpha = 0; alpha <= o.alpha_max; ++alpha)
      out << "N = " << r.N(alpha) << " at alpha = " << alpha << '\n';
    std::vector<std::vector<std::string>> rows;
    for (const ModerateProbe& p : r.probes)
      rows.push_back({"[" + num(p.K.lo) + ", " + num(p.K.hi) + "]", std::to_string(p.alpha),
                      num(p.symbolic_exponent), num(p.slope), std::to_string(p.N),
                      p.agree ? "yes" : "no"});
    table(out, {"K", "alpha", "symbolic", "slope", "N", "agree"}, rows);
    if (forms)
      out << "full instance: (exists N, q) form N = " << forms->exists_N_q.N
          << " (q = " << forms->exists_N_q.q << "), (N = q) form N = " << forms->N_equals_q.N
          << " over alpha <= 1"
          << (forms->identical() ? ", identical\n" : ", DIFFERENT\n");
    if (!r.note.empty()) out << "note: " << r.note << '\n';
  }
  if (!s.csv.empty()) {
    std::ofstream f(s.csv);
    if (!f) throw DomainError("cannot write " + s.csv);
    write_csv(f, r);
  }
  return r.indeterminate ? kIndeterminate : r.moderate ? kHolds : kFails;
}

int cmd_negligible(const Session& s, const RepNet& u, std::ostream& out) {
  const auto S = genfun_index(s);
  NegligibleOptions o;
  if (s.q) o.moderate.q = *s.q;
  const NegligibleReport r = is_negligible(u, *S, o);
  const std::string word = r.indeterminate ? "indeterminate" : r.negligible ? "yes" : "no";
  if (s.json) {
    json j = verdict_json(r.verdict);
    j["command"] = "negligible";
    j["net"] = u.to_string();
    j["negligible"] = word;
    if (r.failing_m >= 0) {
      j["failing_m"] = r.failing_m;
      j["failing_K"] = {r.failing_K.lo, r.failing_K.hi};
    }
    if (r.derivatives_decay) j["derivatives_decay"] = *r.derivatives_decay;
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump() << '\n';
    if (!s.csv.empty() && r.verdict.counterexample)
      write_csv_file(s.csv, kCounterHead, counter_rows(*r.verdict.counterexample));
  } else {
    out << "net: " << u.to_string() << '\n' << "negligible: " << word << '\n';
    if (r.failing_m >= 0) {
      out << "sup over [" << num(r.failing_K.lo) << ", " << num(r.failing_K.hi)
          << "] is not O(u^" << r.failing_m << ")\n";
      print_verdict(out, s, r.verdict);
    } else if (!r.note.empty()) {
      out << "note: " << r.note << '\n';
    }
    if (r.derivatives_decay)
      out << "derivative sups decay: " << (*r.derivatives_decay ? "yes" : "no") << '\n';
  }
  return r.indeterminate ? kIndeterminate : r.negligible ? kHolds : kFails;
}

int cmd_equal(const Session& s, const RepNet& u, const RepNet& v, std::ostream& out) {
  const auto S = genfun_index(s);
  const Decision d = gen_equal(u, v, *S);
  const std::string word = d.indeterminate ? "indeterminate" : d.value ? "true" : "false";
  if (s.json) {
    out << json{{"command", "equal"}, {"equal", word}, {"note", d.note}}.dump() << '\n';
  } else {
    out << "equal: " << word << '\n';
    if (!d.note.empty()) out << "note: " << d.note << '\n';
  }
  return d.indeterminate ? kIndeterminate : d.value ? kHolds : kFails;
}

int cmd_point_eval(const Session& s, const RepNet& u, const std::string& point,
                   const std::optional<std::string>& K, std::ostream& out) {
  const auto S = genfun_index(s);
  std::optional<Interval> cert;
  if (K) {
    const Domain d = parse_domain(*K);
    cert = Interval{d.lo, d.hi};
  }
  const GenPoint x = make_gen_point(parse_net(point), u.domain(), *S, cert);
  if (!x.compact())
    throw DomainError("point-eval: no compact set certifies the point; pass --K LO,HI");
  const PointValue v = eval_at(u, x, *S);
  const Leading lead = leading_behavior(v.value, *S, s.kmin.value_or(8), s.kmax.value_or(20));
  const std::string wd = v.well_defined.indeterminate ? "indeterminate"
                         : v.well_defined.value       ? "yes"
                                                      : "no";
  std::vector<std::vector<std::string>> rows;
  for (const SlopeRow& r : lead.rows)
    rows.push_back({std::to_string(r.k), num(r.gauge), num(r.sup)});
  if (s.json) {
    out << json{{"command", "point-eval"},
                {"net", u.to_string()},
                {"point", x.closed_form->to_string()},
                {"K", {x.K->lo, x.K->hi}},
                {"leading_coefficient", lead.coefficient},
                {"leading_exponent", lead.exponent},
                {"N", v.value.N},
                {"well_defined", wd}}
               .dump()
        << '\n';
  } else {
    out << "net: " << u.to_string() << '\n'
        << "point: " << x.closed_form->to_string() << " in K = [" << num(x.K->lo) << ", "
        << num(x.K->hi) << "]\n";
    table(out, {"k", "gauge", "value"}, rows);
    out << "leading behavior: " << num(lead.coefficient) << " * u^" << num(lead.exponent)
        << '\n'
        << "moderateness N = " << v.value.N << '\n'
        << "well-defined under u^10 perturbation: " << wd << '\n';
  }
  if (!s.csv.empty()) write_csv_file(s.csv, {"k", "gauge", "value"}, rows);
  return v.well_defined.indeterminate ? kIndeterminate
         : v.well_defined.value       ? kHolds
                                      : kFails;
}

int cmd_zero_test(const Session& s, const RepNet& u, std::ostream& out) {
  const auto S = genfun_index(s);
  const ZeroTestReport r = zero_test_by_points(u, *S);
  const std::string word = r.indeterminate ? "indeterminate" : r.zero ? "zero" : "nonzero";
  std::vector<std::vector<std::string>> rows;
  if (r.witness) {
    const IndexPoint a = probe_anchor(*S);
    for (int k = s.kmin.value_or(8); k <= s.kmax.value_or(20); ++k) {
      const IndexPoint p = S->at_gauge(a, std::ldexp(1.0, -k));
      const double xe = r.witness->rep(p);
      rows.push_back({std::to_string(k), num(S->gauge(p)), num(xe),
                      num(RepSlice(u, p, *S)(xe))});
    }
  }
  if (s.json) {
    json j{{"command", "zero-test"}, {"net", u.to_string()}, {"verdict", word},
           {"agrees_with_negligible", r.agrees_with_negligible}, {"note", r.note}};
    if (r.witness) {
      json w = json::array();
      for (const auto& row : rows) w.push_back(row);
      j["witness"] = w;
      j["witness_K"] = {r.witness->K->lo, r.witness->K->hi};
    }
    out << j.dump() << '\n';
  } else {
    out << "net: " << u.to_string() << '\n' << "verdict: " << word << '\n';
    if (r.witness) {
      out << "witness point x_eps = argmax over [" << num(r.witness->K->lo) << ", "
          << num(r.witness->K->hi) << "] of |u_eps|:\n";
      table(out, {"k", "gauge", "x_eps", "u_eps(x_eps)"}, rows);
    }
    out << "negligibility test agrees: " << (r.agrees_with_negligible ? "yes" : "no") << '\n';
    if (!r.note.empty()) out << "note: " << r.note << '\n';
  }
  if (!s.csv.empty() && !rows.empty())
    write_csv_file(s.csv, {"k", "gauge", "x_eps", "value"}, rows);
  return r.indeterminate ? kIndeterminate : r.zero ? kHolds : kFails;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sets of indices, big-O relations and generalized functions", "soi"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with flag defaults (flags win)");
  Session s;
  app.add_option("--index", s.index, "special | full | nsa-base | trivial")
      ->check(CLI::IsMember({"special", "full", "nsa-base", "nsa_base", "trivial"}));
  app.add_option("--q", s.q, "full instance: probe class A_q")->check(CLI::Range(0, 6));
  app.add_option("--kmin", s.kmin, "first probe exponent k (gauge 2^-k)")
      ->check(CLI::Range(0, 200));
  app.add_option("--kmax", s.kmax, "last probe exponent k")->check(CLI::Range(0, 200));
  app.add_option("--tol", s.tol, "slope tolerance of the moderateness fit")
      ->check(CLI::Range(0.0, 10.0));
  app.add_option("--csv", s.csv, "write the report table as CSV");
  app.add_option("--seed", s.seed, "random seed");
  app.add_flag("--json", s.json, "one JSON object per report");

  std::function<int()> action;

  auto* bigo = app.add_subcommand("bigo", "decide LHS = O(RHS) for gauge nets");
  std::string lhs, rhs;
  bool sampled = false;
  bigo->add_option("lhs", lhs, "net, e.g. \"u^2 + u*L\"")->required();
  bigo->add_option("rhs", rhs, "net")->required();
  bigo->add_flag("--sampled", sampled, "use the sampled engine along z_k = 2^-k");
  bigo->callback([&] { action = [&] { return cmd_bigo(s, lhs, rhs, sampled, out); }; });

  auto* laws = app.add_subcommand("laws", "run the big-O law suite");
  int trials = 1000;
  laws->add_option("--trials", trials, "random trials per law")->check(CLI::Range(1, 1000000));
  laws->callback([&] { action = [&] { return cmd_laws(s, trials, out); }; });

  auto* gen = app.add_subcommand("genfun", "generalized function queries");
  gen->require_subcommand(1);
  std::optional<std::string> domain_text;
  gen->add_option("--domain", domain_text, "open interval LO,HI (default the real line)");
  std::string e1, e2, point;
  std::optional<std::string> K;
  auto domain = [&] { return domain_text ? parse_domain(*domain_text) : Domain{}; };
  auto parse1 = [&] { return parse_repnet(e1, domain()); };

  auto* mod = gen->add_subcommand("moderate", "moderateness with N per (K, alpha)");
  mod->add_option("net", e1)->required();
  mod->callback([&] { action = [&] { return cmd_moderate(s, parse1(), out); }; });
  auto* neg = gen->add_subcommand("negligible", "negligibility with a certificate");
  neg->add_option("net", e1)->required();
  neg->callback([&] { action = [&] { return cmd_negligible(s, parse1(), out); }; });
  auto* eq = gen->add_subcommand("equal", "equality in the quotient");
  eq->add_option("lhs", e1)->required();
  eq->add_option("rhs", e2)->required();
  eq->callback([&] {
    action = [&] { return cmd_equal(s, parse1(), parse_repnet(e2, domain()), out); };
  });
  auto* pe = gen->add_subcommand("point-eval", "value at a generalized point");
  pe->add_option("net", e1)->required();
  pe->add_option("point", point, "gauge net, e.g. \"0.3 + u\"")->required();
  pe->add_option("--K", K, "compact set LO,HI certifying the point");
  pe->callback([&] { action = [&] { return cmd_point_eval(s, parse1(), point, K, out); }; });
  auto* zt = gen->add_subcommand("zero-test", "zero test through point values");
  zt->add_option("net", e1)->required();
  zt->callback([&] { action = [&] { return cmd_zero_test(s, parse1(), out); }; });

  std::vector<std::string> argv_store = {"soi"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    if (s.kmin && s.kmax && *s.kmax < *s.kmin) throw UsageError("--kmax is below --kmin");
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace soi::cli
