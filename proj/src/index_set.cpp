#include "soi/index_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "soi/errors.hpp"

namespace soi {
namespace {

template <class P>
const P& as(const IndexPoint& p, const char* who) {
  if (const P* q = std::get_if<P>(&p)) return *q;
  throw KindMismatch(std::string(who) + ": point " + to_string(p) +
                     " belongs to another index set");
}

void expect_kind(const FilterClass& A, IndexKind kind) {
  if (A.kind != kind)
    throw KindMismatch("class " + to_string(A) + " used with " + to_string(kind) +
                       " index set");
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

// 2^-U(0, octaves): log-uniform factor in (2^-octaves, 1].
double log_factor(Rng& rng, double octaves) {
  return std::exp2(-uniform(rng, 0.0, octaves));
}

void require_below(const IndexSet& S, const FilterClass& A, const IndexPoint& e,
                   const IndexPoint& p, const char* who) {
  if (!S.in_down_set(A, e, p))
    throw PreconditionError(std::string(who) + ": " + to_string(p) +
                            " is not in " + to_string(A) + " below " +
                            to_string(e));
}

TestFunction zero_function() { return TestFunction(0.0, 1.0, {0.0}); }

}  // namespace

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::special: return "special";
    case IndexKind::full: return "full";
    case IndexKind::nsa_base: return "nsa-base";
    case IndexKind::trivial: return "trivial";
  }
  return "?";
}

IndexKind parse_index_kind(const std::string& text) {
  if (text == "special") return IndexKind::special;
  if (text == "full") return IndexKind::full;
  if (text == "nsa-base" || text == "nsa_base") return IndexKind::nsa_base;
  if (text == "trivial") return IndexKind::trivial;
  throw DomainError("unknown index set '" + text + "'");
}

std::string to_string(const IndexPoint& p) {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&](const auto& q) {
        using P = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<P, SpecialPoint>) {
          os << q.r;
        } else if constexpr (std::is_same_v<P, FullPoint>) {
          os << q.scale << " (.) " << q.profile.to_string();
        } else if constexpr (std::is_same_v<P, NsaPoint>) {
          os << q.fn.to_string();
        } else {
          os << "(" << q.r << ", tag " << q.tag.id << "/q" << q.tag.moment_order
             << ")";
        }
      },
      p);
  return os.str();
}

std::string to_string(const FilterClass& c) {
  std::ostringstream os;
  switch (c.kind) {
    case IndexKind::special: os << "(0, " << c.endpoint << "]"; break;
    case IndexKind::full: os << "A_" << c.order; break;
    case IndexKind::nsa_base: os << "D_" << c.order; break;
    case IndexKind::trivial: os << "I_" << c.order; break;
  }
  return os.str();
}

double IndexSet::gauge(const IndexPoint& p) const {
  return std::min(1.0, size(p));
}

IndexPoint IndexSet::at_gauge(const IndexPoint& e, double g) const {
  if (g >= gauge(e)) return e;
  return shrink(e, g / size(e));
}

std::shared_ptr<const IndexSet> make_index_set(IndexKind kind) {
  switch (kind) {
    case IndexKind::special: return std::make_shared<SpecialIndexSet>();
    case IndexKind::full: return std::make_shared<FullIndexSet>();
    case IndexKind::nsa_base: return std::make_shared<NsaIndexSet>();
    case IndexKind::trivial: return std::make_shared<TrivialIndexSet>();
  }
  throw DomainError("unknown index set kind");
}

// ---------------------------------------------------------------- special

bool SpecialIndexSet::leq(const IndexPoint& i, const IndexPoint& j) const {
  return as<SpecialPoint>(i, "leq").r <= as<SpecialPoint>(j, "leq").r;
}

bool SpecialIndexSet::same(const IndexPoint& i, const IndexPoint& j) const {
  return as<SpecialPoint>(i, "same").r == as<SpecialPoint>(j, "same").r;
}

double SpecialIndexSet::size(const IndexPoint& p) const {
  return as<SpecialPoint>(p, "gauge").r;
}

bool SpecialIndexSet::contains(const FilterClass& A, const IndexPoint& p) const {
  expect_kind(A, IndexKind::special);
  const double r = as<SpecialPoint>(p, "contains").r;
  return r > 0.0 && r <= A.endpoint;
}

FilterClass SpecialIndexSet::whole() const { return {IndexKind::special, 1.0, 0}; }

std::vector<FilterClass> SpecialIndexSet::filter_base(int count) const {
  std::vector<FilterClass> base;
  for (int k = 0; k < count; ++k)
    base.push_back({IndexKind::special, 1.0 / (k + 1), 0});
  return base;
}

FilterClass SpecialIndexSet::refine(const FilterClass& A, const FilterClass& B) const {
  expect_kind(A, IndexKind::special);
  expect_kind(B, IndexKind::special);
  return {IndexKind::special, std::min(A.endpoint, B.endpoint), 0};
}

std::optional<IndexPoint> SpecialIndexSet::representative(const FilterClass& A) const {
  expect_kind(A, IndexKind::special);
  if (!(A.endpoint > 0.0)) return std::nullopt;
  return SpecialPoint{std::min(A.endpoint, 1.0)};
}

IndexPoint SpecialIndexSet::sample(const FilterClass& A, Rng& rng) const {
  expect_kind(A, IndexKind::special);
  return SpecialPoint{std::min(A.endpoint, 1.0) * log_factor(rng, 20.0)};
}

IndexPoint SpecialIndexSet::sample_below(const FilterClass& A, const IndexPoint& e,
                                         Rng& rng) const {
  expect_kind(A, IndexKind::special);
  const double top = std::min({as<SpecialPoint>(e, "sample_below").r, A.endpoint, 1.0});
  if (coin(rng, 0.1)) return SpecialPoint{top};
  return SpecialPoint{top * log_factor(rng, 10.0)};
}

IndexPoint SpecialIndexSet::shrink(const IndexPoint& e, double t) const {
  return SpecialPoint{t * as<SpecialPoint>(e, "shrink").r};
}

IndexPoint SpecialIndexSet::down_witness(const IndexPoint& b, const IndexPoint& c,
                                         const FilterClass& A,
                                         const IndexPoint& e) const {
  require_below(*this, A, e, b, "down_witness");
  require_below(*this, A, e, c, "down_witness");
  return SpecialPoint{0.5 * std::min(as<SpecialPoint>(b, "").r,
                                     as<SpecialPoint>(c, "").r)};
}

// ------------------------------------------------------------------- full

FullIndexSet::FullIndexSet() {
  for (double rho : {1.0, 0.5, 2.0}) {
    for (int q = 0; q <= kDefaultMaxMomentOrder; ++q) {
      TestFunction fn = make_Aq(q, rho);
      int max_order = q;
      while (max_order < kDefaultMaxMomentOrder && in_Aq(fn, max_order + 1))
        ++max_order;
      family_.push_back({fn, max_order});
    }
  }
  for (double shift : {0.3, -0.7}) family_.push_back({translate(shift, make_Aq(2)), 0});
}

IndexPoint FullIndexSet::point(double scale, const TestFunction& profile) {
  if (!(scale > 0.0)) throw DomainError("full index point: scale must be positive");
  return FullPoint{scale, profile};
}

bool FullIndexSet::leq(const IndexPoint& i, const IndexPoint& j) const {
  const auto& a = as<FullPoint>(i, "leq");
  const auto& b = as<FullPoint>(j, "leq");
  return size(i) <= size(j) &&
         canonical_profile(a.profile) == canonical_profile(b.profile);
}

bool FullIndexSet::same(const IndexPoint& i, const IndexPoint& j) const {
  return as<FullPoint>(i, "same").function() == as<FullPoint>(j, "same").function();
}

double FullIndexSet::size(const IndexPoint& p) const {
  const auto& f = as<FullPoint>(p, "gauge");
  return f.scale * diam_supp(f.profile);
}

bool FullIndexSet::contains(const FilterClass& A, const IndexPoint& p) const {
  expect_kind(A, IndexKind::full);
  const auto& f = as<FullPoint>(p, "contains");
  return f.scale > 0.0 && in_Aq(f.profile, A.order);
}

FilterClass FullIndexSet::whole() const { return {IndexKind::full, 1.0, 0}; }

std::vector<FilterClass> FullIndexSet::filter_base(int count) const {
  std::vector<FilterClass> base;
  for (int q = 0; q < std::min(count, kDefaultMaxMomentOrder + 1); ++q)
    base.push_back({IndexKind::full, 1.0, q});
  return base;
}

FilterClass FullIndexSet::refine(const FilterClass& A, const FilterClass& B) const {
  expect_kind(A, IndexKind::full);
  expect_kind(B, IndexKind::full);
  return {IndexKind::full, 1.0, std::max(A.order, B.order)};
}

std::optional<IndexPoint> FullIndexSet::representative(const FilterClass& A) const {
  expect_kind(A, IndexKind::full);
  if (A.order < 0) return std::nullopt;
  try {
    return FullPoint{1.0, make_Aq(A.order, 1.0, std::max(A.order, kDefaultMaxMomentOrder))};
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

IndexPoint FullIndexSet::sample(const FilterClass& A, Rng& rng) const {
  expect_kind(A, IndexKind::full);
  std::vector<const Profile*> pool;
  for (const auto& p : family_)
    if (p.max_order >= A.order) pool.push_back(&p);
  const double scale = std::exp2(uniform(rng, -20.0, 2.0));
  if (pool.empty()) return FullPoint{scale, make_Aq(A.order, 1.0, A.order)};
  const auto* p = pool[uniform_int(rng, 0, static_cast<int>(pool.size()) - 1)];
  return FullPoint{scale, p->fn};
}

IndexPoint FullIndexSet::sample_below(const FilterClass& A, const IndexPoint& e,
                                      Rng& rng) const {
  expect_kind(A, IndexKind::full);
  if (!contains(A, e))
    throw PreconditionError("sample_below: " + to_string(A) +
                            " has no element below " + to_string(e));
  if (coin(rng, 0.1)) return e;
  return shrink(e, log_factor(rng, 10.0));
}

IndexPoint FullIndexSet::shrink(const IndexPoint& e, double t) const {
  const auto& f = as<FullPoint>(e, "shrink");
  return FullPoint{t * f.scale, f.profile};
}

IndexPoint FullIndexSet::down_witness(const IndexPoint& b, const IndexPoint& c,
                                      const FilterClass& A,
                                      const IndexPoint& e) const {
  require_below(*this, A, e, b, "down_witness");
  require_below(*this, A, e, c, "down_witness");
  // Everything below e lies on the ray t (.) e; go below both ratios.
  const double t = 0.5 * std::min(size(b), size(c)) / size(e);
  return shrink(e, t);
}

// --------------------------------------------------------------- nsa-base

double NsaIndexSet::underline(const TestFunction& phi) {
  return phi.is_zero() ? 1.0 : diam_supp(phi);
}

int NsaIndexSet::class_within(double eps0) {
  if (!(eps0 > 0.0)) throw DomainError("class_within: threshold must be positive");
  if (1.0 / eps0 > 1e9) throw DomainError("class_within: threshold below 1e-9");
  int n = static_cast<int>(std::ceil(1.0 / eps0));
  while (1.0 / n > eps0) ++n;
  return std::max(n, 1);
}

bool NsaIndexSet::leq(const IndexPoint& i, const IndexPoint& j) const {
  return underline(as<NsaPoint>(i, "leq").fn) <= underline(as<NsaPoint>(j, "leq").fn);
}

bool NsaIndexSet::same(const IndexPoint& i, const IndexPoint& j) const {
  return as<NsaPoint>(i, "same").fn == as<NsaPoint>(j, "same").fn;
}

double NsaIndexSet::size(const IndexPoint& p) const {
  return underline(as<NsaPoint>(p, "gauge").fn);
}

bool NsaIndexSet::contains(const FilterClass& A, const IndexPoint& p) const {
  expect_kind(A, IndexKind::nsa_base);
  const double d = underline(as<NsaPoint>(p, "contains").fn);
  return A.order <= 0 || d <= 1.0 / A.order;
}

FilterClass NsaIndexSet::whole() const { return {IndexKind::nsa_base, 1.0, 0}; }

std::vector<FilterClass> NsaIndexSet::filter_base(int count) const {
  std::vector<FilterClass> base;
  for (int n = 0; n < count; ++n) base.push_back({IndexKind::nsa_base, 1.0, n});
  return base;
}

FilterClass NsaIndexSet::refine(const FilterClass& A, const FilterClass& B) const {
  expect_kind(A, IndexKind::nsa_base);
  expect_kind(B, IndexKind::nsa_base);
  return {IndexKind::nsa_base, 1.0, std::max(A.order, B.order)};
}

std::optional<IndexPoint> NsaIndexSet::representative(const FilterClass& A) const {
  expect_kind(A, IndexKind::nsa_base);
  const int n = std::max(A.order, 1);
  return NsaPoint{make_Aq(0, 0.5 / n)};
}

IndexPoint NsaIndexSet::sample(const FilterClass& A, Rng& rng) const {
  expect_kind(A, IndexKind::nsa_base);
  if (A.order <= 1 && coin(rng, 0.05)) return NsaPoint{zero_function()};
  const double max_diam = A.order <= 0 ? 2.0 : 1.0 / A.order;
  const double radius = 0.5 * max_diam * log_factor(rng, 12.0);
  std::vector<double> coeffs{uniform(rng, 0.5, 2.0)};
  const int degree = uniform_int(rng, 0, 2);
  for (int i = 0; i < degree; ++i) coeffs.push_back(uniform(rng, -0.5, 0.5));
  return NsaPoint{TestFunction(uniform(rng, -1.0, 1.0), radius, coeffs)};
}

IndexPoint NsaIndexSet::sample_below(const FilterClass& A, const IndexPoint& e,
                                     Rng& rng) const {
  expect_kind(A, IndexKind::nsa_base);
  const auto& fe = as<NsaPoint>(e, "sample_below").fn;
  const double top = std::min(underline(fe), A.order <= 0 ? 2.0 : 1.0 / A.order);
  const double u = uniform(rng, 0.0, 1.0);
  if (u < 0.1 && contains(A, e)) return e;
  if (u < 0.2 && !fe.is_zero() && underline(fe) <= top)
    return NsaPoint{translate(0.5, fe)};  // same diameter, different function
  return NsaPoint{TestFunction(uniform(rng, -1.0, 1.0),
                               0.5 * top * log_factor(rng, 10.0),
                               {uniform(rng, 0.5, 2.0), uniform(rng, -0.5, 0.5)})};
}

IndexPoint NsaIndexSet::shrink(const IndexPoint& e, double t) const {
  const auto& fe = as<NsaPoint>(e, "shrink").fn;
  if (fe.is_zero()) return NsaPoint{make_Aq(0, 0.5 * t)};
  return NsaPoint{scale(t, fe)};
}

IndexPoint NsaIndexSet::down_witness(const IndexPoint& b, const IndexPoint& c,
                                     const FilterClass& A,
                                     const IndexPoint& e) const {
  require_below(*this, A, e, b, "down_witness");
  require_below(*this, A, e, c, "down_witness");
  const double m = std::min(size(b), size(c));
  const double cap = A.order > 0 ? 1.0 / A.order : 2.0;
  return NsaPoint{make_Aq(0, 0.25 * std::min(m, cap))};
}

// ---------------------------------------------------------------- trivial

namespace {
constexpr int kTrivialTags = 6;  // sampled tags: id k with moment order k
}

bool TrivialIndexSet::leq(const IndexPoint& i, const IndexPoint& j) const {
  const auto& a = as<TrivialPoint>(i, "leq");
  const auto& b = as<TrivialPoint>(j, "leq");
  return a.tag == b.tag && a.r <= b.r;
}

bool TrivialIndexSet::same(const IndexPoint& i, const IndexPoint& j) const {
  const auto& a = as<TrivialPoint>(i, "same");
  const auto& b = as<TrivialPoint>(j, "same");
  return a.tag == b.tag && a.r == b.r;
}

double TrivialIndexSet::size(const IndexPoint& p) const {
  return as<TrivialPoint>(p, "gauge").r;
}

bool TrivialIndexSet::contains(const FilterClass& A, const IndexPoint& p) const {
  expect_kind(A, IndexKind::trivial);
  const auto& t = as<TrivialPoint>(p, "contains");
  return t.r > 0.0 && t.r <= 1.0 && t.tag.moment_order >= A.order;
}

FilterClass TrivialIndexSet::whole() const { return {IndexKind::trivial, 1.0, 0}; }

std::vector<FilterClass> TrivialIndexSet::filter_base(int count) const {
  std::vector<FilterClass> base;
  for (int q = 0; q < count; ++q) base.push_back({IndexKind::trivial, 1.0, q});
  return base;
}

FilterClass TrivialIndexSet::refine(const FilterClass& A, const FilterClass& B) const {
  expect_kind(A, IndexKind::trivial);
  expect_kind(B, IndexKind::trivial);
  return {IndexKind::trivial, 1.0, std::max(A.order, B.order)};
}

std::optional<IndexPoint> TrivialIndexSet::representative(const FilterClass& A) const {
  expect_kind(A, IndexKind::trivial);
  const int q = std::max(A.order, 0);
  return TrivialPoint{1.0, {q, q}};
}

IndexPoint TrivialIndexSet::sample(const FilterClass& A, Rng& rng) const {
  expect_kind(A, IndexKind::trivial);
  const int lo = std::max(A.order, 0);
  const int id = uniform_int(rng, lo, std::max(lo, kTrivialTags - 1));
  return TrivialPoint{log_factor(rng, 20.0), {id, id}};
}

IndexPoint TrivialIndexSet::sample_below(const FilterClass& A, const IndexPoint& e,
                                         Rng& rng) const {
  expect_kind(A, IndexKind::trivial);
  const auto& t = as<TrivialPoint>(e, "sample_below");
  if (t.tag.moment_order < A.order)
    throw PreconditionError("sample_below: " + to_string(A) +
                            " has no element below " + to_string(e));
  if (coin(rng, 0.1)) return TrivialPoint{std::min(t.r, 1.0), t.tag};
  return TrivialPoint{std::min(t.r, 1.0) * log_factor(rng, 10.0), t.tag};
}

IndexPoint TrivialIndexSet::shrink(const IndexPoint& e, double t) const {
  const auto& p = as<TrivialPoint>(e, "shrink");
  return TrivialPoint{t * p.r, p.tag};
}

IndexPoint TrivialIndexSet::down_witness(const IndexPoint& b, const IndexPoint& c,
                                         const FilterClass& A,
                                         const IndexPoint& e) const {
  require_below(*this, A, e, b, "down_witness");
  require_below(*this, A, e, c, "down_witness");
  const auto& te = as<TrivialPoint>(e, "");
  return TrivialPoint{0.5 * std::min(size(b), size(c)), te.tag};
}

// ---------------------------------------------------------- null sequences

NullSequence null_sequence(const IndexSet& S, const FilterClass& A,
                           const IndexPoint& a, int length, int first_k) {
  NullSequence seq{{}, A, a};
  for (int k = first_k; k < first_k + length; ++k) {
    IndexPoint z = S.shrink(a, std::exp2(-k));
    if (!S.in_down_set(A, a, z))
      throw PreconditionError("null_sequence: " + to_string(z) + " left " +
                              to_string(A) + " below " + to_string(a));
    seq.points.push_back(std::move(z));
  }
  return seq;
}

bool tends_to_emptyset(const std::vector<IndexPoint>& seq, const FilterClass& A,
                       const IndexPoint& a, const IndexSet& S,
                       const NullOptions& options) {
  const std::size_t n = std::min<std::size_t>(seq.size(), options.prefix);
  for (std::size_t k = 0; k < n; ++k)
    if (!S.in_down_set(A, a, seq[k]))
      throw PreconditionError("tends_to_emptyset: entry " + std::to_string(k) +
                              " = " + to_string(seq[k]) + " is not in " +
                              to_string(A) + " below " + to_string(a));
  if (n < 2) return false;
  std::vector<double> tail(n);
  tail[n - 1] = S.gauge(seq[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) tail[k] = std::max(tail[k + 1], S.gauge(seq[k]));
  const double last = tail[n - 1], mid = tail[n / 2];
  if (last <= options.floor) return true;
  return mid <= 0.5 * tail[0] && last < mid;
}

NullSequence extract_decreasing(const NullSequence& seq, const IndexSet& S) {
  const auto& z = seq.points;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (!S.leq(z[i], z[j]) && !S.leq(z[j], z[i]))
        throw UnsupportedError("extract_decreasing: terms " + std::to_string(i) +
                               " and " + std::to_string(j) + " are incomparable");
  NullSequence out{{}, seq.host, seq.anchor};
  if (z.empty()) return out;
  std::size_t cur = 0;
  out.points.push_back(z[0]);
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (S.less(z[k], z[cur])) {
      cur = k;
      out.points.push_back(z[k]);
    }
  }
  return out;
}

// -------------------------------------------------------------- validation

namespace {

class Clause {
 public:
  explicit Clause(std::string name) { result_.clause = std::move(name); }
  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checks;
    if (ok) return;
    ++result_.failures;
    if (result_.counterexamples.size() < 5) result_.counterexamples.push_back(describe());
  }
  ClauseResult take() { return std::move(result_); }

 private:
  ClauseResult result_;
};

template <class F>
void guarded(Clause& clause, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    clause.check(false, [&] { return std::string("exception: ") + e.what(); });
  }
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const ClauseResult& c) { return c.passed(); });
}

const ClauseResult& ValidationReport::clause(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.clause == name) return c;
  throw DomainError("no clause named " + name);
}

ValidationReport validate_index_set(const IndexSet& S, int budget, std::uint64_t seed) {
  if (budget < 1) throw PreconditionError("validate_index_set: budget must be >= 1");
  Rng rng(seed);
  const auto base = S.filter_base(6);
  std::vector<FilterClass> usable;
  for (const auto& A : base)
    if (S.representative(A)) usable.push_back(A);
  if (usable.empty()) usable.push_back(S.whole());
  auto pick = [&]() -> const FilterClass& {
    return usable[uniform_int(rng, 0, static_cast<int>(usable.size()) - 1)];
  };

  Clause preorder("(i)"), base_clause("(ii)"), refine_clause("(iii)"), directed("(iv)");

  for (int t = 0; t < budget; ++t) {
    guarded(preorder, [&] {
      const FilterClass& A = pick();
      const IndexPoint i = S.sample(A, rng);
      const IndexPoint j = S.sample_below(A, i, rng);
      const IndexPoint k = S.sample_below(A, j, rng);
      preorder.check(S.leq(i, i), [&] { return "not reflexive at " + to_string(i); });
      preorder.check(S.leq(j, i) && S.leq(k, j) && S.leq(k, i), [&] {
        return "chain " + to_string(k) + " <= " + to_string(j) + " <= " +
               to_string(i) + " not transitive";
      });
      // Unrelated triples exercise transitivity across the whole carrier.
      const IndexPoint x = S.sample(S.whole(), rng);
      const IndexPoint y = S.sample(S.whole(), rng);
      const IndexPoint z = S.sample(S.whole(), rng);
      if (S.leq(x, y) && S.leq(y, z))
        preorder.check(S.leq(x, z), [&] {
          return to_string(x) + " <= " + to_string(y) + " <= " + to_string(z) +
                 " not transitive";
        });
    });
  }

  guarded(base_clause, [&] {
    const FilterClass whole = S.whole();
    base_clause.check(!base.empty() && base.front().kind == whole.kind &&
                          base.front().order == whole.order &&
                          base.front().endpoint == whole.endpoint,
                      [] { return std::string("filter base does not start with I"); });
  });
  for (const auto& A : base) {
    guarded(base_clause, [&] {
      const auto rep = S.representative(A);
      base_clause.check(rep && S.contains(A, *rep),
                        [&] { return "class " + to_string(A) + " is empty"; });
    });
  }
  for (int t = 0; t < budget; ++t) {
    guarded(base_clause, [&] {
      const IndexPoint p = S.sample(pick(), rng);
      base_clause.check(S.contains(S.whole(), p),
                        [&] { return to_string(p) + " not in I"; });
    });
  }

  for (int t = 0; t < budget; ++t) {
    guarded(refine_clause, [&] {
      const FilterClass& A = pick();
      const FilterClass& B = pick();
      const FilterClass C = S.refine(A, B);
      const auto rep = S.representative(C);
      refine_clause.check(rep.has_value(), [&] {
        return "refine(" + to_string(A) + ", " + to_string(B) + ") is empty";
      });
      if (!rep) return;
      const IndexPoint x = S.sample(C, rng);
      for (const IndexPoint* p : {&*rep, &x})
        refine_clause.check(S.contains(C, *p) && S.contains(A, *p) && S.contains(B, *p),
                            [&] {
                              return to_string(*p) + " in " + to_string(C) +
                                     " but not in " + to_string(A) + " and " +
                                     to_string(B);
                            });
    });
  }

  for (int t = 0; t < budget; ++t) {
    guarded(directed, [&] {
      const FilterClass& A = pick();
      const IndexPoint a = S.sample(A, rng);
      const IndexPoint e = S.sample_below(A, a, rng);
      const IndexPoint b = S.sample_below(A, e, rng);
      const IndexPoint c = S.sample_below(A, e, rng);
      const IndexPoint d = S.down_witness(b, c, A, e);
      directed.check(S.in_down_set(A, e, d) && S.less(d, b) && S.less(d, c), [&] {
        return "witness " + to_string(d) + " fails for b = " + to_string(b) +
               ", c = " + to_string(c) + " in " + to_string(A) + " below " +
               to_string(e);
      });
    });
  }

  ValidationReport report;
  report.kind = S.kind();
  report.clauses = {preorder.take(), base_clause.take(), refine_clause.take(),
                    directed.take()};
  return report;
}

}  // namespace soi
