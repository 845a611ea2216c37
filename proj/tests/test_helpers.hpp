#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dephaselab/discrimination.hpp"
#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"

namespace dephaselab::testing {

inline FockPattern pat(std::vector<int> occ) { return FockPattern(std::move(occ)); }

inline PureState toy_plus() {
  return build_pure_state(
      2, {{pat({2, 0}), std::sqrt(2.0 / 3.0)}, {pat({1, 1}), std::sqrt(1.0 / 3.0)}});
}

inline PureState toy_minus() {
  return build_pure_state(
      2, {{pat({2, 0}), std::sqrt(2.0 / 3.0)}, {pat({1, 1}), -std::sqrt(1.0 / 3.0)}});
}

inline PureState toy_plus_ab(double alpha, double beta) {
  return build_pure_state(2, {{pat({2, 0}), alpha}, {pat({1, 1}), beta}});
}

inline PureState toy_minus_ab(double alpha, double beta) {
  return build_pure_state(2, {{pat({2, 0}), alpha}, {pat({1, 1}), -beta}});
}

inline bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

inline bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

/// Random sparse state with the given fixed total photon number, normalized.
inline PureState random_fixed_n_state(Rng& rng, int modes, int total,
                                      int n_terms) {
  std::vector<FockPattern> all;
  std::vector<int> cur;
  // enumerate patterns of the given total
  auto rec = [&](auto&& self, int modes_left, int total_left) -> void {
    if (modes_left == 1) {
      cur.push_back(total_left);
      all.emplace_back(cur);
      cur.pop_back();
      return;
    }
    for (int n = 0; n <= total_left; ++n) {
      cur.push_back(n);
      self(self, modes_left - 1, total_left - n);
      cur.pop_back();
    }
  };
  rec(rec, modes, total);

  std::vector<std::pair<FockPattern, Complex>> terms;
  for (int t = 0; t < n_terms; ++t) {
    const auto& p = all[rng.raw() % all.size()];
    terms.emplace_back(p, Complex(rng.normal(), rng.normal()));
  }
  double norm2 = 0.0;
  {
    PureState::TermMap merged;
    for (auto& [p, a] : terms) merged[p] += a;
    for (auto& [p, a] : merged) norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& [p, a] : terms) a *= inv;
  return build_pure_state(modes, terms);
}

/// Random normalized sparse state with mixed totals.
inline PureState random_state(Rng& rng, int modes, int max_total,
                              int n_terms) {
  std::vector<std::pair<FockPattern, Complex>> terms;
  for (int t = 0; t < n_terms; ++t) {
    std::vector<int> occ(static_cast<size_t>(modes), 0);
    const int total = 1 + static_cast<int>(rng.raw() % static_cast<unsigned>(max_total));
    for (int k = 0; k < total; ++k) {
      occ[rng.raw() % static_cast<unsigned>(modes)] += 1;
    }
    terms.emplace_back(FockPattern(occ), Complex(rng.normal(), rng.normal()));
  }
  double norm2 = 0.0;
  {
    PureState::TermMap merged;
    for (auto& [p, a] : terms) merged[p] += a;
    for (auto& [p, a] : merged) norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& [p, a] : terms) a *= inv;
  return build_pure_state(modes, terms);
}

/// Brute-force moment oracle: expands c_j = sum_i U(j,i) a_i on the
/// UNtransformed states (independent of transform()).
inline Complex moment_oracle(const LinearCircuit& circuit,
                             const PureState& plus, const PureState& minus,
                             const std::vector<int>& modes) {
  const int dim = circuit.dim();
  const size_t r = modes.size();
  auto expand = [&](const PureState& s) {
    PureState::TermMap acc;
    std::vector<int> assign(r, 0);
    while (true) {
      Complex coeff(1.0, 0.0);
      for (size_t t = 0; t < r; ++t) coeff *= circuit.entry(modes[t], assign[t]);
      if (coeff != Complex(0.0, 0.0)) {
        const PureState lowered = apply_lowering(s, assign);
        for (const auto& [p, a] : lowered.terms()) acc[p] += coeff * a;
      }
      size_t t = 0;
      for (; t < r; ++t) {
        if (++assign[t] < dim) break;
        assign[t] = 0;
      }
      if (t == r) break;
    }
    return PureState::from_terms(s.n_modes(), std::move(acc));
  };
  return inner_product(expand(plus), expand(minus));
}

}  // namespace dephaselab::testing
