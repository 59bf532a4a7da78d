#pragma once

#include <vector>

#include "mmot/measures.hpp"
#include "mmot/multi_index.hpp"

namespace mmot {

/// The built-in 3-marginal, 3-point reference instance in R^2 — the smallest
/// known example whose optimal coupling is not induced by any transport map.
/// Coordinates are kept as decimal strings and parsed at load so the values
/// here are character-identical with the published ones.
Instance reference_example();

/// Independently established facts about `reference_example()`, used by
/// `verify-paper-example` and the acceptance suite.
struct ReferenceExpected {
  double lp_value;              // optimal multi-marginal transport cost
  double mmc;                   // minimal cost over deterministic couplings
  double gap_percent;           // 100 * (mmc - lp) / lp
  double support_weight;        // every optimal-coupling atom carries 1/6
  std::vector<IndexTuple> lp_support;   // 0-based, lexicographically sorted
  std::vector<IndexTuple> mmc_support;  // tuples of the best Monge coupling
  std::vector<std::vector<int>> mmc_sigmas;  // sigma_2, sigma_3 (0-based)
  double value_tolerance;       // the published values carry 5 significant digits
};

const ReferenceExpected& reference_expected();

}  // namespace mmot
