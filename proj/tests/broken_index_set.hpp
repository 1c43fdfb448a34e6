#pragma once

#include "soi/index_set.hpp"

namespace soi::testing {

/// The special instance with an empty class (0, 0] slipped into its filter
/// base: a negative control for the validation harness.
class BrokenIndexSet : public SpecialIndexSet {
 public:
  std::vector<FilterClass> filter_base(int count) const override {
    auto base = SpecialIndexSet::filter_base(count);
    base.push_back({IndexKind::special, 0.0, 0});
    return base;
  }
};

}  // namespace soi::testing
