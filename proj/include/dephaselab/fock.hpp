#pragma once

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dephaselab {

using Complex = std::complex<double>;

/// Photon occupation numbers, one entry per mode. Ordered lexicographically
/// by occupations; this is the canonical order used in every report.
class FockPattern {
 public:
  FockPattern() = default;
  explicit FockPattern(std::vector<int> occupations);

  int n_modes() const { return static_cast<int>(occ_.size()); }
  int total() const { return total_; }
  int operator[](int mode) const { return occ_[static_cast<size_t>(mode)]; }
  const std::vector<int>& occupations() const { return occ_; }

  FockPattern raised(int mode) const;
  /// Lowered by one photon in `mode`; invalid (pattern unchanged, ok=false)
  /// when that mode is empty.
  std::pair<FockPattern, bool> lowered(int mode) const;

  /// Occupations restricted to the given (sorted) mode subset.
  FockPattern restricted(const std::vector<int>& modes) const;

  /// Space-separated occupations, e.g. "2 0 1".
  std::string str() const;

  friend auto operator<=>(const FockPattern& a, const FockPattern& b) {
    return a.occ_ <=> b.occ_;
  }
  friend bool operator==(const FockPattern& a, const FockPattern& b) {
    return a.occ_ == b.occ_;
  }

 private:
  std::vector<int> occ_;
  int total_ = 0;
};

/// Tolerances for amplitude-vanishing and phase-equality tests.
struct ComplexTolerance {
  double abs_tol = 1e-10;
  double phase_tol = 1e-8;  // radians

  void validate() const;
};

/// Sparse superposition of multimode photon-number patterns. Immutable after
/// construction. Signal states built through build_pure_state satisfy
/// norm^2 in (0, 1 + tol]; derived states (lowered, scaled) may carry any
/// norm including zero.
class PureState {
 public:
  using TermMap = std::map<FockPattern, Complex>;

  static constexpr double kPruneThreshold = 1e-14;
  static constexpr double kNormTol = 1e-9;

  /// Zero state on one mode; placeholder for report structs.
  PureState() = default;

  /// Prunes sub-threshold amplitudes and computes the norm. No normalization
  /// constraint; use build_pure_state for signal states.
  static PureState from_terms(int n_modes, TermMap terms,
                              double truncation_deficit = 0.0);

  int n_modes() const { return n_modes_; }
  const TermMap& terms() const { return terms_; }
  size_t term_count() const { return terms_.size(); }
  double norm2() const { return norm2_; }
  double norm() const;
  bool normalized() const;
  bool is_zero() const { return terms_.empty(); }
  /// Probability mass discarded when the state was built by truncation
  /// (coherent_product_state); zero otherwise.
  double truncation_deficit() const { return truncation_deficit_; }

  Complex amplitude(const FockPattern& p) const;

  /// Largest total photon number over the support (0 for the zero state).
  int max_total_photons() const;
  /// Total photon number if every supported pattern has the same one.
  bool has_fixed_photon_number(int* n = nullptr) const;

 private:
  PureState(int n_modes, TermMap terms, double norm2, double deficit)
      : n_modes_(n_modes),
        terms_(std::move(terms)),
        norm2_(norm2),
        truncation_deficit_(deficit) {}

  int n_modes_ = 1;
  TermMap terms_;
  double norm2_ = 0.0;
  double truncation_deficit_ = 0.0;
};

/// Merges duplicate patterns, prunes, and validates: patterns must all have
/// length n_modes and the result must be nonzero with norm^2 <= 1 + tol.
PureState build_pure_state(
    int n_modes, const std::vector<std::pair<FockPattern, Complex>>& terms);

/// sum over shared patterns of conj(bra amplitude) * ket amplitude.
Complex inner_product(const PureState& bra, const PureState& ket);

/// Tensor product; mode counts add, amplitudes multiply.
PureState tensor(const PureState& a, const PureState& b);

/// Product of truncated coherent states, one mode per entry of `alphas`.
/// Per-mode cutoff is the smallest n_max whose neglected Poisson mass is
/// below tail_tol. The state is NOT renormalized; the discarded mass is
/// reported via truncation_deficit().
PureState coherent_product_state(const std::vector<Complex>& alphas,
                                 double tail_tol);

/// Applies the product of annihilation operators over the mode multiset
/// with exact sqrt(n) factors. May return the zero state.
PureState apply_lowering(const PureState& state, const std::vector<int>& modes);

/// Exact integer factorial up to 20!, floating point beyond.
double factorial(int n);

}  // namespace dephaselab
