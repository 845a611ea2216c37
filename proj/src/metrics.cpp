#include "dephaselab/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dephaselab {

double fidelity_pure(const PureState& a, const PureState& b) {
  if (a.n_modes() != b.n_modes()) {
    throw std::invalid_argument("fidelity_pure: mode-count mismatch");
  }
  if (!a.normalized() || !b.normalized()) {
    throw std::invalid_argument("fidelity_pure: unnormalized input");
  }
  const double f = std::norm(inner_product(a, b));
  return std::min(f, 1.0);
}

double fidelity_diagonal(const DiagonalMixture& m1,
                         const DiagonalMixture& m2) {
  if (m1.n_modes != m2.n_modes) {
    throw std::invalid_argument("fidelity_diagonal: mode-count mismatch");
  }
  double s = 0.0;
  for (const auto& [p, w1] : m1.weights) {
    auto it = m2.weights.find(p);
    if (it == m2.weights.end()) continue;
    s += std::sqrt(w1 * it->second);
  }
  return s * s;
}

double fidelity_block(const BlockMixture& b1, const BlockMixture& b2) {
  if (b1.dephased_modes != b2.dephased_modes) {
    throw std::invalid_argument("fidelity_block: mismatched dephased sets");
  }
  double s = 0.0;
  for (const auto& [key, blk1] : b1.blocks) {
    auto it = b2.blocks.find(key);
    if (it == b2.blocks.end()) continue;
    const BlockMixture::Block& blk2 = it->second;
    double overlap = 1.0;
    if (blk1.conditional && blk2.conditional) {
      overlap = std::abs(inner_product(*blk1.conditional, *blk2.conditional));
    }
    s += std::sqrt(blk1.probability * blk2.probability) * overlap;
  }
  return s * s;
}

FidelityBoundsReport check_fidelity_bounds(
    const PureState& plus, const PureState& minus,
    const LinearCircuit& circuit, const std::vector<int>& dephased_modes,
    double prob_fail) {
  if (!(prob_fail >= -1e-12 && prob_fail <= 1.0 + 1e-9)) {
    throw std::invalid_argument("check_fidelity_bounds: prob_fail not in [0,1]");
  }
  FidelityBoundsReport rep;
  rep.prob_fail = prob_fail;
  rep.f_input = fidelity_pure(plus, minus);
  const PureState plus_h = transform(circuit, plus);
  const PureState minus_h = transform(circuit, minus);
  if (dephased_modes.empty() ||
      static_cast<int>(dephased_modes.size()) == plus_h.n_modes()) {
    rep.f_dephased =
        fidelity_diagonal(dephase_total(plus_h), dephase_total(minus_h));
  } else {
    rep.f_dephased = fidelity_block(dephase_partial(plus_h, dephased_modes),
                                    dephase_partial(minus_h, dephased_modes));
  }
  rep.slack_lower = rep.f_dephased - rep.f_input;
  rep.slack_upper = prob_fail * prob_fail - rep.f_dephased;
  rep.lower_ok = rep.slack_lower >= -FidelityBoundsReport::kTol;
  rep.upper_ok = rep.slack_upper >= -FidelityBoundsReport::kTol;
  return rep;
}

}  // namespace dephaselab
