#pragma once

#include <vector>

#include "dephaselab/dephase.hpp"
#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"

namespace dephaselab {

/// |<a|b>|^2 for normalized pure states.
double fidelity_pure(const PureState& a, const PureState& b);

/// Squared Bhattacharyya sum over shared patterns: the closed-form fidelity
/// of commuting Fock-diagonal mixtures.
double fidelity_diagonal(const DiagonalMixture& m1, const DiagonalMixture& m2);

/// (sum over shared blocks of sqrt(P+ P-) |<cond+|cond->|)^2.
double fidelity_block(const BlockMixture& b1, const BlockMixture& b2);

/// Verdict on F(in+) vs F(dephased) vs prob_fail^2 at tolerance 1e-10.
struct FidelityBoundsReport {
  static constexpr double kTol = 1e-10;

  double f_input = 0.0;
  double f_dephased = 0.0;
  double prob_fail = 0.0;
  bool lower_ok = false;  // f_input <= f_dephased
  bool upper_ok = false;  // f_dephased <= prob_fail^2
  double slack_lower = 0.0;
  double slack_upper = 0.0;
};

/// Transforms both states, dephases on `dephased_modes` (empty = all modes,
/// i.e. total dephasing) and checks the fidelity bound chain. Violations are
/// report content, not errors.
FidelityBoundsReport check_fidelity_bounds(const PureState& plus,
                                           const PureState& minus,
                                           const LinearCircuit& circuit,
                                           const std::vector<int>& dephased_modes,
                                           double prob_fail);

}  // namespace dephaselab
