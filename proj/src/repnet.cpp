#include "soi/repnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "soi/errors.hpp"

namespace soi {
namespace {

constexpr double kCancelTol = 1e-13;
constexpr int kMaxKernelOrder = Jet<double>::kMaxOrder;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

int compare(double a, double b) { return a < b ? -1 : (b < a ? 1 : 0); }

int compare_kernels(const TestFunction& a, const TestFunction& b) {
  if (int c = compare(a.center(), b.center())) return c;
  if (int c = compare(a.radius(), b.radius())) return c;
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (int c = compare(ca[i], cb[i])) return c;
  return 0;
}

int compare_factors(const KernelFactor& a, const KernelFactor& b) {
  if (a.from_index != b.from_index) return a.from_index ? 1 : -1;
  if (int c = compare_kernels(a.kernel, b.kernel)) return c;
  if (a.j != b.j) return a.j < b.j ? -1 : 1;
  if (int c = compare(a.shift, b.shift)) return c;
  if (a.s != b.s) return a.s < b.s ? -1 : 1;
  return 0;
}

int compare_keys(const Atom& a, const Atom& b) {
  if (a.power != b.power) return a.power < b.power ? -1 : 1;
  if (a.factors.size() != b.factors.size())
    return a.factors.size() < b.factors.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.factors.size(); ++i)
    if (int c = compare_factors(a.factors[i], b.factors[i])) return c;
  return 0;
}

void trim(std::vector<double>& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    const double s = x + y;
    out[i] = std::abs(s) <= kCancelTol * (std::abs(x) + std::abs(y)) ? 0.0 : s;
  }
  trim(out);
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  trim(out);
  return out;
}

std::vector<double> poly_derive(const std::vector<double>& p) {
  std::vector<double> out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(static_cast<double>(i) * p[i]);
  trim(out);
  return out;
}

double poly_eval(const std::vector<double>& p, double x) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

// Order to which p vanishes at a, judged relative to the size of p near a.
int vanishing_order(const std::vector<double>& p, double a) {
  const double base = std::max(1.0, std::abs(a));
  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) scale += std::abs(p[i]) * std::pow(base, i);
  for (std::size_t m = 0; m < p.size(); ++m) {
    // m-th Taylor coefficient at a.
    double c = 0.0, binom = 1.0;
    for (std::size_t i = m; i < p.size(); ++i) {
      c += binom * p[i] * std::pow(a, static_cast<double>(i - m));
      binom = binom * static_cast<double>(i + 1) / static_cast<double>(i + 1 - m);
    }
    if (std::abs(c) > 1e-12 * scale) return static_cast<int>(m);
  }
  return static_cast<int>(p.size());
}

std::string poly_string(const std::vector<double>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    std::string term = format_double(std::abs(p[i]));
    if (i > 0) {
      const std::string xi = i == 1 ? "x" : "x^" + std::to_string(i);
      term = std::abs(p[i]) == 1.0 ? xi : term + "*" + xi;
    }
    if (out.empty())
      out = (p[i] < 0 ? "-" : "") + term;
    else
      out += (p[i] < 0 ? " - " : " + ") + term;
  }
  return out;
}

void check_same_domain(const RepNet& u, const RepNet& v, const char* op) {
  if (!(u.domain() == v.domain()))
    throw DomainError(std::string(op) + ": domain mismatch, " + to_string(u.domain()) +
                      " vs " + to_string(v.domain()));
}

}  // namespace

std::string to_string(const Domain& d) {
  auto end = [](double v) {
    if (std::isinf(v)) return std::string(v < 0 ? "-inf" : "inf");
    return format_double(v);
  };
  return "(" + end(d.lo) + ", " + end(d.hi) + ")";
}

RepNet::RepNet(Domain domain) : domain_(domain) {}

RepNet::RepNet(std::vector<Atom> atoms, Domain domain)
    : atoms_(std::move(atoms)), domain_(domain) {
  if (domain_.empty()) throw DomainError("RepNet: empty domain " + soi::to_string(domain_));
  normalize();
}

void RepNet::normalize() {
  for (Atom& a : atoms_) {
    std::sort(a.factors.begin(), a.factors.end(),
              [](const KernelFactor& x, const KernelFactor& y) {
                return compare_factors(x, y) < 0;
              });
    for (const KernelFactor& f : a.factors) {
      if (f.j < -1) throw DomainError("RepNet: kernel order below -1");
      if (f.s < Rational(0)) throw DomainError("RepNet: negative gauge scale exponent");
    }
    trim(a.poly);
    const bool zero_kernel = std::any_of(a.factors.begin(), a.factors.end(),
                                         [](const KernelFactor& f) {
                                           return !f.from_index && f.kernel.is_zero();
                                         });
    if (zero_kernel) a.poly.clear();
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& a, const Atom& b) { return compare_keys(a, b) < 0; });
  std::vector<Atom> merged;
  for (Atom& a : atoms_) {
    if (!merged.empty() && compare_keys(merged.back(), a) == 0)
      merged.back().poly = poly_add(merged.back().poly, a.poly);
    else
      merged.push_back(std::move(a));
  }
  atoms_.clear();
  for (Atom& a : merged)
    if (!a.poly.empty()) atoms_.push_back(std::move(a));
}

bool operator==(const RepNet& a, const RepNet& b) {
  if (!(a.domain_ == b.domain_) || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    if (compare_keys(a.atoms_[i], b.atoms_[i]) != 0) return false;
    const auto& p = a.atoms_[i].poly;
    const auto& q = b.atoms_[i].poly;
    if (p.size() != q.size()) return false;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (std::abs(p[k] - q[k]) > 1e-12 * std::max(1.0, std::abs(p[k]))) return false;
  }
  return true;
}

std::string RepNet::to_string() const {
  if (atoms_.empty()) return "0";
  std::vector<std::pair<TestFunction, bool>> table;
  auto id_of = [&](const KernelFactor& f) {
    for (std::size_t i = 0; i < table.size(); ++i)
      if (table[i].second == f.from_index && compare_kernels(table[i].first, f.kernel) == 0)
        return i;
    table.emplace_back(f.kernel, f.from_index);
    return table.size() - 1;
  };
  std::string out;
  for (const Atom& a : atoms_) {
    std::vector<std::string> parts;
    if (a.power != Rational(0)) parts.push_back("u^" + soi::to_string(a.power));
    const std::string p = poly_string(a.poly);
    if (p != "1" || a.factors.empty()) parts.push_back("(" + p + ")");
    for (const KernelFactor& f : a.factors)
      parts.push_back("K[" + std::to_string(id_of(f)) + ", " + std::to_string(f.j) +
                      "]((x - " + format_double(f.shift) + ")/u^" + soi::to_string(f.s) +
                      ")");
    std::string atom;
    for (const std::string& s : parts) atom += (atom.empty() ? "" : " * ") + s;
    out += (out.empty() ? "" : " + ") + atom;
  }
  for (std::size_t i = 0; i < table.size(); ++i)
    out += "; K" + std::to_string(i) + " = " + table[i].first.to_string() +
           (table[i].second ? " (index kernel)" : "");
  if (!std::isinf(domain_.lo) || !std::isinf(domain_.hi))
    out += "; domain " + soi::to_string(domain_);
  return out;
}

RepNet rep_add(const RepNet& u, const RepNet& v) {
  check_same_domain(u, v, "rep_add");
  std::vector<Atom> atoms = u.atoms();
  atoms.insert(atoms.end(), v.atoms().begin(), v.atoms().end());
  return RepNet(std::move(atoms), u.domain());
}

RepNet rep_sub(const RepNet& u, const RepNet& v) {
  return rep_add(u, rep_scale(-1.0, v));
}

RepNet rep_scale(double c, const RepNet& u) {
  std::vector<Atom> atoms = u.atoms();
  for (Atom& a : atoms)
    for (double& x : a.poly) x *= c;
  return RepNet(std::move(atoms), u.domain());
}

RepNet rep_mul(const RepNet& u, const RepNet& v) {
  check_same_domain(u, v, "rep_mul");
  std::vector<Atom> atoms;
  for (const Atom& a : u.atoms())
    for (const Atom& b : v.atoms()) {
      Atom c;
      c.power = a.power + b.power;
      c.poly = poly_mul(a.poly, b.poly);
      c.factors = a.factors;
      c.factors.insert(c.factors.end(), b.factors.begin(), b.factors.end());
      atoms.push_back(std::move(c));
    }
  return RepNet(std::move(atoms), u.domain());
}

RepNet rep_derive(const RepNet& u, int order) {
  if (order < 0) throw DomainError("rep_derive: negative order");
  RepNet cur = u;
  for (int n = 0; n < order; ++n) {
    std::vector<Atom> atoms;
    for (const Atom& a : cur.atoms()) {
      Atom d = a;
      d.poly = poly_derive(a.poly);
      atoms.push_back(std::move(d));
      for (std::size_t i = 0; i < a.factors.size(); ++i) {
        Atom t = a;
        t.factors[i].j += 1;
        t.power -= a.factors[i].s;
        atoms.push_back(std::move(t));
      }
    }
    cur = RepNet(std::move(atoms), cur.domain());
  }
  return cur;
}

RepNet embed_smooth(const std::vector<double>& poly, Domain domain) {
  return RepNet({Atom{Rational(0), poly, {}}}, domain);
}

RepNet embed_gauge_power(Rational power, Domain domain) {
  return RepNet({Atom{power, {1.0}, {}}}, domain);
}

namespace {

RepNet embed_kernel(const TestFunction& phi, int j, Rational power, const char* name) {
  if (std::abs(phi.mass() - 1.0) > 1e-9)
    throw PreconditionError(std::string(name) + ": kernel mass " +
                            format_double(phi.mass()) + " is not 1");
  KernelFactor f{phi, true, j, 0.0, Rational(1)};
  return RepNet({Atom{power, {1.0}, {f}}}, Domain{});
}

}  // namespace

RepNet embed_delta(const TestFunction& phi) {
  return embed_kernel(phi, 0, Rational(-1), "embed_delta");
}

RepNet embed_heaviside(const TestFunction& phi) {
  return embed_kernel(phi, -1, Rational(0), "embed_heaviside");
}

std::optional<TestFunction> index_kernel(const IndexPoint& eps, const IndexSet& S) {
  const double g = S.gauge(eps);
  if (const auto* f = std::get_if<FullPoint>(&eps))
    return scale(1.0 / g, f->function());
  if (const auto* n = std::get_if<NsaPoint>(&eps)) return scale(1.0 / g, n->fn);
  return std::nullopt;
}

RepNet resolve_for(const RepNet& u, const IndexSet& S) {
  if (S.kind() != IndexKind::full && S.kind() != IndexKind::nsa_base) return u;
  static const TestFunction placeholder = make_Aq(0);
  std::vector<Atom> atoms = u.atoms();
  for (Atom& a : atoms)
    for (KernelFactor& f : a.factors)
      if (f.from_index) f.kernel = placeholder;
  return RepNet(std::move(atoms), u.domain());
}

Domain domain_at(const Domain& omega, const IndexPoint& eps, const IndexSet& S) {
  (void)S;
  const auto* f = std::get_if<FullPoint>(&eps);
  if (!f) return omega;
  const Interval supp = f->function().support();
  return Domain{omega.lo - supp.lo, omega.hi - supp.hi};
}

RepSlice::RepSlice(const RepNet& u, const IndexPoint& eps, const IndexSet& S)
    : gauge_(S.gauge(eps)), domain_(domain_at(u.domain(), eps, S)) {
  const std::optional<TestFunction> own = index_kernel(eps, S);
  const double log_g = std::log(gauge_);
  for (const Atom& a : u.atoms()) {
    Term t{std::exp(to_double(a.power) * log_g), a.poly, {}};
    for (const KernelFactor& f : a.factors) {
      if (f.j > kMaxKernelOrder)
        throw UnsupportedError("RepNet: kernel derivative order " + std::to_string(f.j) +
                               " exceeds " + std::to_string(kMaxKernelOrder));
      const TestFunction& k = f.from_index && own ? *own : f.kernel;
      t.factors.push_back({k, f.j, f.shift, std::exp(to_double(f.s) * log_g)});
    }
    terms_.push_back(std::move(t));
  }
}

double RepSlice::operator()(double x) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double v = 1.0;
    for (const Factor& f : t.factors) {
      const double y = (x - f.shift) / f.width;
      v *= f.j < 0 ? cumulative(f.kernel, y) : eval(f.kernel, y, f.j, kMaxKernelOrder);
      if (v == 0.0) break;
    }
    if (v == 0.0) continue;
    v *= poly_eval(t.poly, x);
    if (v == 0.0) continue;
    sum += t.coeff * v;
  }
  return sum;
}

std::vector<double> RepSlice::hints() const {
  constexpr int kPerKernel = 33;
  std::vector<double> out;
  for (const Term& t : terms_)
    for (const Factor& f : t.factors) {
      const Interval s = f.kernel.support();
      const double lo = f.shift + f.width * s.lo, hi = f.shift + f.width * s.hi;
      out.push_back(f.shift);
      for (int i = 0; i < kPerKernel; ++i) out.push_back(lo + (hi - lo) * i / (kPerKernel - 1));
    }
  return out;
}

namespace {

GridSup slice_sup(const RepNet& derived, const Interval& K, const IndexPoint& eps,
                  const IndexSet& S, const GridOptions& grid) {
  const RepSlice slice(derived, eps, S);
  if (!slice.domain().contains(K))
    throw DomainError("sup_on_K: K = [" + format_double(K.lo) + ", " + format_double(K.hi) +
                      "] is not inside the domain " + to_string(slice.domain()) +
                      " at eps = " + to_string(eps));
  return grid_sup([&](double x) { return slice(x); }, K, slice.hints(), grid);
}

}  // namespace

GridSup sup_on_K_detail(const RepNet& u, const Interval& K, int alpha,
                        const IndexPoint& eps, const IndexSet& S, const GridOptions& grid) {
  if (alpha < 0) throw DomainError("sup_on_K: negative derivative order");
  return slice_sup(rep_derive(u, alpha), K, eps, S, grid);
}

double sup_on_K(const RepNet& u, const Interval& K, int alpha, const IndexPoint& eps,
                const IndexSet& S, const GridOptions& grid) {
  return sup_on_K_detail(u, K, alpha, eps, S, grid).value;
}

double symbolic_exponent(const RepNet& u, const Interval& K) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Atom& a : u.atoms()) {
    bool vanishes = false;
    std::optional<double> center;
    Rational s_max(0);
    for (const KernelFactor& f : a.factors) {
      if (f.s == Rational(0)) {
        if (f.j >= 0 && !f.from_index) {
          const Interval s = f.kernel.support();
          if (f.shift + s.hi < K.lo || f.shift + s.lo > K.hi) vanishes = true;
        }
        continue;
      }
      if (f.j < 0) {
        // The cumulative integral is 0 left of its shrinking support.
        if (K.hi < f.shift) vanishes = true;
        continue;
      }
      if (center && *center != f.shift) vanishes = true;  // disjoint supports
      center = f.shift;
      s_max = std::max(s_max, f.s);
    }
    if (center && !K.contains(*center)) vanishes = true;
    if (vanishes) continue;
    double p = to_double(a.power);
    if (center) p += to_double(s_max) * vanishing_order(a.poly, *center);
    worst = std::max(worst, -p);
  }
  return worst;
}

}  // namespace soi
