#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soi/bigo.hpp"

namespace soi {

/// Random monomial sums: 1..max_terms terms, |coeff| in [coeff_lo, coeff_hi]
/// with random sign, power n/d with d <= max_den in [p_lo, p_hi], log power in
/// [k_lo, k_hi].
struct NetDistribution {
  int max_terms = 3;
  double coeff_lo = 0.5;
  double coeff_hi = 5.0;
  int max_den = 3;
  int p_lo = -2;
  int p_hi = 2;
  int k_lo = -1;
  int k_hi = 1;
};

SymbolicNet random_net(Rng& rng, const NetDistribution& dist = {});
/// A random net that is O(1): every term has power > 0, or power 0 and log
/// power <= 0.
SymbolicNet random_bounded_net(Rng& rng, const NetDistribution& dist = {});

struct LawResult {
  std::string law;
  int trials = 0;
  int passed = 0;
  int failed = 0;
  int indeterminate = 0;
  /// The law is applied outside its hypotheses and is expected to fail.
  bool negative_control = false;
  std::vector<std::string> counterexamples;  // at most a few
  bool ok() const {
    return negative_control ? passed == 0 && failed == trials && trials > 0
                            : failed == 0 && trials > 0;
  }
};

struct LawReport {
  IndexKind kind;
  std::vector<LawResult> laws;
  bool passed() const;
  const LawResult& law(const std::string& name) const;
};

struct LawOptions {
  int resamples = 4;       // witness re-verification points per anchored verdict
  int uniform_trials = 10;  // trials of the uniform group (0 disables it)
};

/// Random instances of the big-O laws for O_{a,A} ("(i)".."(x)"), for O_J
/// ("J(i)".."J(ix)") and a uniform group ("K(...)"), plus the negative control
/// "(vii) without x, y >= 0". Premises are built to hold (multiplying by O(1)
/// nets), so every trial exercises the conclusion.
LawReport law_suite(std::uint64_t seed, int trials, const IndexSet& S,
                    const LawOptions& options = {});

}  // namespace soi
