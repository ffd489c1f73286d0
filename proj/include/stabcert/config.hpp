#ifndef STABCERT_CONFIG_HPP
#define STABCERT_CONFIG_HPP

#include <cstddef>
#include <cstdint>

namespace stabcert {

/// Knobs shared by every analysis entry point.
///
/// `tolerance` is the margin for all strict-inequality decisions: a quantity
/// required to be "< 1" passes below 1 - tolerance, fails above 1 + tolerance
/// and is Marginal in between. The pivot threshold for eliminations is
/// separate (see kPivotRelTol) and scale-aware.
struct AnalysisConfig {
  double tolerance = 1e-9;
  std::size_t cycle_cap = 100000;
  std::size_t family_cap = 1000000;
  std::uint64_t seed = 0;
  bool with_oracle = true;

  void validate() const;
};

}  // namespace stabcert

#endif
