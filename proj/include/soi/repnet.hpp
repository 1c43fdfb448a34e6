#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "soi/grid.hpp"
#include "soi/index_set.hpp"
#include "soi/symbolic_net.hpp"
#include "soi/testfn.hpp"

namespace soi {

/// Open interval (lo, hi); either end may be infinite.
struct Domain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool empty() const { return !(lo < hi); }
  bool contains(double x) const { return lo < x && x < hi; }
  /// K is a compact subset of the domain.
  bool contains(const Interval& K) const { return lo < K.lo && K.hi < hi; }
  friend bool operator==(const Domain&, const Domain&) = default;
};

std::string to_string(const Domain& d);

/// K^(j)((x - shift) / u^s), with K^(-1) the cumulative integral of K.
struct KernelFactor {
  TestFunction kernel;
  /// Use the index's own test function in place of `kernel` when the index
  /// carries one (full and nsa-base instances).
  bool from_index = false;
  int j = 0;
  double shift = 0.0;
  Rational s{1};
};

/// u^power * P(x) * product of kernel factors, P given by the coefficients of
/// x^0, x^1, ...
struct Atom {
  Rational power{0};
  std::vector<double> poly;
  std::vector<KernelFactor> factors;
};

/// Representative net of a generalized function on a domain: a finite sum of
/// atoms in normal form (factors sorted, atoms with equal power and factors
/// merged, vanishing polynomials dropped).
class RepNet {
 public:
  explicit RepNet(Domain domain = {});
  RepNet(std::vector<Atom> atoms, Domain domain);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Domain& domain() const { return domain_; }
  bool is_zero() const { return atoms_.empty(); }

  /// Textual form `u^p * poly(x) * K[id, j]((x - a)/u^s) + ...`, followed by
  /// the kernel table `; K0 = bump(...)`.
  std::string to_string() const;

  friend bool operator==(const RepNet& a, const RepNet& b);

 private:
  void normalize();
  std::vector<Atom> atoms_;
  Domain domain_;
};

/// Throws DomainError when the domains differ.
RepNet rep_add(const RepNet& u, const RepNet& v);
RepNet rep_sub(const RepNet& u, const RepNet& v);
RepNet rep_mul(const RepNet& u, const RepNet& v);
RepNet rep_scale(double c, const RepNet& u);
/// d/dx, applied `order` times.
RepNet rep_derive(const RepNet& u, int order = 1);

/// The epsilon-independent polynomial P.
RepNet embed_smooth(const std::vector<double>& poly, Domain domain = {});
/// u^power (times 1).
RepNet embed_gauge_power(Rational power, Domain domain = {});
/// u_eps(x) = phi(x / u) / u. Throws PreconditionError unless phi has unit mass.
RepNet embed_delta(const TestFunction& phi);
/// u_eps(x) = Phi(x / u) with Phi the cumulative integral of phi.
RepNet embed_heaviside(const TestFunction& phi);

/// The kernel used at eps by factors marked from_index: the index's test
/// function rescaled by 1 / gauge, so that embed_delta gives exactly that
/// function. Empty for the special and trivial instances.
std::optional<TestFunction> index_kernel(const IndexPoint& eps, const IndexSet& S);

/// u with the stored kernel of every from_index factor replaced by one
/// placeholder when S supplies its own kernel, so that atoms that coincide in
/// S share one normal form.
RepNet resolve_for(const RepNet& u, const IndexSet& S);

/// The domain of u_eps: Omega itself, or for the full instance
/// (inf Omega - inf supp phi, sup Omega - sup supp phi) with phi the index's
/// test function (possibly empty).
Domain domain_at(const Domain& omega, const IndexPoint& eps, const IndexSet& S);

/// u_eps as a function of x, with the grid hints that resolve its kernels.
class RepSlice {
 public:
  RepSlice(const RepNet& u, const IndexPoint& eps, const IndexSet& S);

  double gauge() const { return gauge_; }
  const Domain& domain() const { return domain_; }
  double operator()(double x) const;
  /// Kernel centers and points across every scaled kernel support.
  std::vector<double> hints() const;

 private:
  struct Factor {
    TestFunction kernel;
    int j;
    double shift;
    double width;  // u^s
  };
  struct Term {
    double coeff;  // u^power
    std::vector<double> poly;
    std::vector<Factor> factors;
  };
  std::vector<Term> terms_;
  double gauge_;
  Domain domain_;
};

/// sup over K of |d^alpha u_eps / dx^alpha| by the cross-checked grid sup.
/// Throws DomainError naming eps unless K is a compact subset of the domain
/// of u_eps.
GridSup sup_on_K_detail(const RepNet& u, const Interval& K, int alpha,
                        const IndexPoint& eps, const IndexSet& S,
                        const GridOptions& grid = {});
double sup_on_K(const RepNet& u, const Interval& K, int alpha, const IndexPoint& eps,
                const IndexSet& S, const GridOptions& grid = {});

/// Growth exponent E of sup_K |u_eps| ~ u^-E read off the atoms: an atom
/// whose shrinking kernels sit at a point outside K vanishes eventually, and
/// a polynomial vanishing to order m at the kernel center gains u^(s m).
/// -infinity when every atom vanishes on K eventually.
double symbolic_exponent(const RepNet& u, const Interval& K);

}  // namespace soi
