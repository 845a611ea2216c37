#include "dephaselab/dephase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dephaselab {

double DiagonalMixture::total_weight() const {
  double s = 0.0;
  for (const auto& [p, w] : weights) s += w;
  return s;
}

double BlockMixture::total_probability() const {
  double s = 0.0;
  for (const auto& [k, b] : blocks) s += b.probability;
  return s;
}

DiagonalMixture dephase_total(const PureState& state) {
  DiagonalMixture mix;
  mix.n_modes = state.n_modes();
  for (const auto& [p, a] : state.terms()) {
    mix.weights[p] = std::norm(a);
  }
  return mix;
}

BlockMixture dephase_partial(const PureState& state,
                             const std::vector<int>& modes) {
  if (modes.empty()) {
    throw std::invalid_argument("dephase_partial: empty mode set");
  }
  std::vector<int> dephased = modes;
  std::sort(dephased.begin(), dephased.end());
  dephased.erase(std::unique(dephased.begin(), dephased.end()),
                 dephased.end());
  if (dephased.front() < 0 || dephased.back() >= state.n_modes()) {
    throw std::invalid_argument("dephase_partial: mode index out of range");
  }
  std::vector<int> remaining;
  for (int m = 0; m < state.n_modes(); ++m) {
    if (!std::binary_search(dephased.begin(), dephased.end(), m)) {
      remaining.push_back(m);
    }
  }

  BlockMixture out;
  out.dephased_modes = dephased;
  out.remaining_modes = remaining;

  std::map<FockPattern, PureState::TermMap> raw;
  for (const auto& [p, a] : state.terms()) {
    const FockPattern key = p.restricted(dephased);
    if (remaining.empty()) {
      raw[key][p] += a;  // placeholder term, only the weight matters
    } else {
      raw[key][p.restricted(remaining)] += a;
    }
  }
  for (auto& [key, terms] : raw) {
    double prob = 0.0;
    for (const auto& [q, c] : terms) prob += std::norm(c);
    if (prob < BlockMixture::kDropThreshold) {
      out.dropped_mass += prob;
      continue;
    }
    BlockMixture::Block block;
    block.probability = prob;
    if (!remaining.empty()) {
      const double inv = 1.0 / std::sqrt(prob);
      PureState::TermMap scaled;
      for (const auto& [q, c] : terms) scaled[q] = c * inv;
      block.conditional = PureState::from_terms(
          static_cast<int>(remaining.size()), std::move(scaled));
    }
    out.blocks.emplace(key, std::move(block));
  }
  return out;
}

std::vector<std::pair<FockPattern, double>> pattern_distribution(
    const DiagonalMixture& mix) {
  if (mix.weights.empty()) {
    throw std::invalid_argument("pattern_distribution: empty mixture");
  }
  return {mix.weights.begin(), mix.weights.end()};
}

}  // namespace dephaselab
