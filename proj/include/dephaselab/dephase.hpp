#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dephaselab/fock.hpp"

namespace dephaselab {

/// Fock-diagonal mixture: the photon-counting statistics of a state. The
/// phase integral is carried out analytically (off-diagonals dropped).
struct DiagonalMixture {
  int n_modes = 1;
  std::map<FockPattern, double> weights;

  double total_weight() const;
};

/// Mixture diagonal only on the dephased (detected) modes; each block keeps
/// the normalized conditional state of the undetected modes. Blocks with
/// probability below kDropThreshold are dropped and accounted for in
/// dropped_mass.
struct BlockMixture {
  static constexpr double kDropThreshold = 1e-14;

  struct Block {
    double probability = 0.0;
    /// Absent when every mode is dephased.
    std::optional<PureState> conditional;
  };

  std::vector<int> dephased_modes;  // sorted, unique
  std::vector<int> remaining_modes;
  std::map<FockPattern, Block> blocks;  // keyed by dephased-mode occupations
  double dropped_mass = 0.0;

  double total_probability() const;
};

/// weight(pattern) = |amplitude|^2 for every supported pattern.
DiagonalMixture dephase_total(const PureState& state);

/// Blocks keyed by the occupations of `modes`; block probability is the
/// squared norm of the unnormalized conditional on the remaining modes.
BlockMixture dephase_partial(const PureState& state,
                             const std::vector<int>& modes);

/// Lexicographically ordered (pattern, probability) rows.
std::vector<std::pair<FockPattern, double>> pattern_distribution(
    const DiagonalMixture& mix);

}  // namespace dephaselab
