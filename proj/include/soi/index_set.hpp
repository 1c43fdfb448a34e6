#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "soi/testfn.hpp"

namespace soi {

enum class IndexKind { special, full, nsa_base, trivial };

std::string to_string(IndexKind kind);
/// Accepts "special", "full", "nsa-base" (or "nsa_base"), "trivial".
IndexKind parse_index_kind(const std::string& text);

/// Gauge value r in (0, 1].
struct SpecialPoint {
  double r;
};

/// The mollifier scale (.) profile; profile has unit mass.
struct FullPoint {
  double scale;
  TestFunction profile;
  TestFunction function() const { return soi::scale(scale, profile); }
};

/// An arbitrary test function ordered by its support diameter.
struct NsaPoint {
  TestFunction fn;
};

/// Opaque stand-in for the test object of a trivial index: only its identity
/// and the highest vanishing-moment order it satisfies matter.
struct TrivialTag {
  int id;
  int moment_order;
  friend bool operator==(const TrivialTag&, const TrivialTag&) = default;
};

struct TrivialPoint {
  double r;
  TrivialTag tag;
};

using IndexPoint = std::variant<SpecialPoint, FullPoint, NsaPoint, TrivialPoint>;

std::string to_string(const IndexPoint& p);

/// special: (0, endpoint]; full: A_order; nsa-base: D_order; trivial: I_order.
struct FilterClass {
  IndexKind kind;
  double endpoint = 1.0;
  int order = 0;
};

std::string to_string(const FilterClass& c);

using Rng = std::mt19937_64;

class IndexSet {
 public:
  virtual ~IndexSet() = default;

  virtual IndexKind kind() const = 0;

  /// The pre-order. Throws KindMismatch for points of another instance.
  virtual bool leq(const IndexPoint& i, const IndexPoint& j) const = 0;
  /// Equality of points (the "=" in i < j iff i <= j and i != j).
  virtual bool same(const IndexPoint& i, const IndexPoint& j) const = 0;
  bool less(const IndexPoint& i, const IndexPoint& j) const {
    return leq(i, j) && !same(i, j);
  }

  /// The gauge, a value in (0, 1].
  double gauge(const IndexPoint& p) const;
  /// Unclamped size whose clamp to 1 is the gauge.
  virtual double size(const IndexPoint& p) const = 0;

  virtual bool contains(const FilterClass& A, const IndexPoint& p) const = 0;
  bool in_down_set(const FilterClass& A, const IndexPoint& e,
                   const IndexPoint& p) const {
    return contains(A, p) && leq(p, e);
  }

  /// The class equal to the whole carrier.
  virtual FilterClass whole() const = 0;
  /// The first `count` classes of the filter base, starting with whole().
  virtual std::vector<FilterClass> filter_base(int count) const = 0;
  /// A class contained in both arguments.
  virtual FilterClass refine(const FilterClass& A, const FilterClass& B) const = 0;
  /// Some member of A, or nothing if A has no constructible member.
  virtual std::optional<IndexPoint> representative(const FilterClass& A) const = 0;

  virtual IndexPoint sample(const FilterClass& A, Rng& rng) const = 0;
  /// A random element of the down-set A_{<=e}; e must lie in A.
  virtual IndexPoint sample_below(const FilterClass& A, const IndexPoint& e,
                                  Rng& rng) const = 0;
  /// For 0 < t <= 1 an element below e, in every class containing e, whose
  /// size is t * size(e).
  virtual IndexPoint shrink(const IndexPoint& e, double t) const = 0;
  /// The element of the ray below e with gauge g, or e itself if g >= gauge(e).
  IndexPoint at_gauge(const IndexPoint& e, double g) const;

  /// d in A_{<=e} with d < b and d < c. Throws PreconditionError unless
  /// b, c lie in A_{<=e}.
  virtual IndexPoint down_witness(const IndexPoint& b, const IndexPoint& c,
                                  const FilterClass& A,
                                  const IndexPoint& e) const = 0;

  /// Whether the order restricted to A_{<=e} is total.
  virtual bool totally_ordered_below() const { return true; }
};

std::shared_ptr<const IndexSet> make_index_set(IndexKind kind);

class SpecialIndexSet : public IndexSet {
 public:
  IndexKind kind() const override { return IndexKind::special; }
  bool leq(const IndexPoint& i, const IndexPoint& j) const override;
  bool same(const IndexPoint& i, const IndexPoint& j) const override;
  double size(const IndexPoint& p) const override;
  bool contains(const FilterClass& A, const IndexPoint& p) const override;
  FilterClass whole() const override;
  std::vector<FilterClass> filter_base(int count) const override;
  FilterClass refine(const FilterClass& A, const FilterClass& B) const override;
  std::optional<IndexPoint> representative(const FilterClass& A) const override;
  IndexPoint sample(const FilterClass& A, Rng& rng) const override;
  IndexPoint sample_below(const FilterClass& A, const IndexPoint& e,
                          Rng& rng) const override;
  IndexPoint shrink(const IndexPoint& e, double t) const override;
  IndexPoint down_witness(const IndexPoint& b, const IndexPoint& c,
                          const FilterClass& A,
                          const IndexPoint& e) const override;
};

/// Points r (.) phi with phi in A_0. The sampler draws profiles from a fixed
/// family: make_Aq(q, rho) for q <= 6 and rho in {1, 1/2, 2}, plus translated
/// copies, which have a nonzero first moment.
class FullIndexSet : public IndexSet {
 public:
  FullIndexSet();
  IndexKind kind() const override { return IndexKind::full; }
  bool leq(const IndexPoint& i, const IndexPoint& j) const override;
  bool same(const IndexPoint& i, const IndexPoint& j) const override;
  double size(const IndexPoint& p) const override;
  bool contains(const FilterClass& A, const IndexPoint& p) const override;
  FilterClass whole() const override;
  std::vector<FilterClass> filter_base(int count) const override;
  FilterClass refine(const FilterClass& A, const FilterClass& B) const override;
  std::optional<IndexPoint> representative(const FilterClass& A) const override;
  IndexPoint sample(const FilterClass& A, Rng& rng) const override;
  IndexPoint sample_below(const FilterClass& A, const IndexPoint& e,
                          Rng& rng) const override;
  IndexPoint shrink(const IndexPoint& e, double t) const override;
  IndexPoint down_witness(const IndexPoint& b, const IndexPoint& c,
                          const FilterClass& A,
                          const IndexPoint& e) const override;

  /// The point scale (.) profile.
  static IndexPoint point(double scale, const TestFunction& profile);

 private:
  struct Profile {
    TestFunction fn;
    int max_order;  // largest q with fn in A_q
  };
  std::vector<Profile> family_;
};

/// Test functions ordered by their support diameter phi_ (1 for the zero
/// function). Classes D_n = {phi_ <= 1/n} for n >= 1 and D_0 = everything.
class NsaIndexSet : public IndexSet {
 public:
  IndexKind kind() const override { return IndexKind::nsa_base; }
  bool leq(const IndexPoint& i, const IndexPoint& j) const override;
  bool same(const IndexPoint& i, const IndexPoint& j) const override;
  double size(const IndexPoint& p) const override;
  bool contains(const FilterClass& A, const IndexPoint& p) const override;
  FilterClass whole() const override;
  std::vector<FilterClass> filter_base(int count) const override;
  FilterClass refine(const FilterClass& A, const FilterClass& B) const override;
  std::optional<IndexPoint> representative(const FilterClass& A) const override;
  IndexPoint sample(const FilterClass& A, Rng& rng) const override;
  IndexPoint sample_below(const FilterClass& A, const IndexPoint& e,
                          Rng& rng) const override;
  IndexPoint shrink(const IndexPoint& e, double t) const override;
  IndexPoint down_witness(const IndexPoint& b, const IndexPoint& c,
                          const FilterClass& A,
                          const IndexPoint& e) const override;

  /// phi_ of a test function.
  static double underline(const TestFunction& phi);
  /// Some n with D_n contained in the interval below a point of gauge eps0.
  /// Throws DomainError for eps0 below 1e-9.
  static int class_within(double eps0);
};

/// Pairs (r, tag) ordered by r within a fixed tag. Class I_q holds the tags
/// whose moment order is at least q.
class TrivialIndexSet : public IndexSet {
 public:
  IndexKind kind() const override { return IndexKind::trivial; }
  bool leq(const IndexPoint& i, const IndexPoint& j) const override;
  bool same(const IndexPoint& i, const IndexPoint& j) const override;
  double size(const IndexPoint& p) const override;
  bool contains(const FilterClass& A, const IndexPoint& p) const override;
  FilterClass whole() const override;
  std::vector<FilterClass> filter_base(int count) const override;
  FilterClass refine(const FilterClass& A, const FilterClass& B) const override;
  std::optional<IndexPoint> representative(const FilterClass& A) const override;
  IndexPoint sample(const FilterClass& A, Rng& rng) const override;
  IndexPoint sample_below(const FilterClass& A, const IndexPoint& e,
                          Rng& rng) const override;
  IndexPoint shrink(const IndexPoint& e, double t) const override;
  IndexPoint down_witness(const IndexPoint& b, const IndexPoint& c,
                          const FilterClass& A,
                          const IndexPoint& e) const override;
};

struct NullSequence {
  std::vector<IndexPoint> points;
  FilterClass host;
  IndexPoint anchor;
};

/// z_k = shrink(a, 2^-k) for k = first_k, ..., first_k + length - 1.
NullSequence null_sequence(const IndexSet& S, const FilterClass& A,
                           const IndexPoint& a, int length, int first_k = 0);

struct NullOptions {
  int prefix = 40;
  double floor = 1e-12;
};

/// Finite-prefix decision of "tends to the empty set": with T_k the supremum
/// of the gauges from k on, true iff T_last <= floor, or the tail supremum has
/// halved by mid-prefix and still decreases afterwards.
bool tends_to_emptyset(const std::vector<IndexPoint>& seq, const FilterClass& A,
                       const IndexPoint& a, const IndexSet& S,
                       const NullOptions& options = {});

/// Strictly decreasing subsequence: keep z_0, then repeatedly jump to the
/// first later term strictly below the last kept one. Throws UnsupportedError
/// if two terms are incomparable.
NullSequence extract_decreasing(const NullSequence& seq, const IndexSet& S);

struct ClauseResult {
  std::string clause;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> counterexamples;  // at most a few
  bool passed() const { return failures == 0 && checks > 0; }
};

struct ValidationReport {
  IndexKind kind;
  std::vector<ClauseResult> clauses;  // (i), (ii), (iii), (iv)
  bool passed() const;
  const ClauseResult& clause(const std::string& name) const;
};

/// Seeded sampling check of the four defining clauses.
ValidationReport validate_index_set(const IndexSet& S, int budget = 500,
                                    std::uint64_t seed = 7);

}  // namespace soi
