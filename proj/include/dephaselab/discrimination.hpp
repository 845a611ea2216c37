#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"

namespace dephaselab {

/// Support split of a transformed state pair: patterns exclusive to the +
/// state (k), exclusive to the - state (l), and ambiguous (m). A pattern is
/// ambiguous iff both amplitudes exceed the tolerance.
struct PatternClassification {
  std::vector<FockPattern> conclusive_plus;   // k
  std::vector<FockPattern> conclusive_minus;  // l
  std::vector<FockPattern> ambiguous;         // m
  std::map<FockPattern, Complex> alpha;       // + amplitudes over the union
  std::map<FockPattern, Complex> beta;        // - amplitudes over the union
};

PatternClassification classify_patterns(const PureState& plus_h,
                                        const PureState& minus_h,
                                        double tol = 1e-10);

/// <chi+| prod c_j^dag prod c_j |chi-> over the mode multiset: transform
/// both states, annihilate, overlap. Orders above the states' photon
/// content return exact zero.
Complex normal_ordered_moment(const LinearCircuit& circuit,
                              const PureState& plus, const PureState& minus,
                              const std::vector<int>& modes);

/// Same moment when the caller already holds the transformed states.
Complex normal_ordered_moment_transformed(const PureState& plus_h,
                                          const PureState& minus_h,
                                          const std::vector<int>& modes);

struct UsdContribution {
  FockPattern pattern;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double contribution = 0.0;
};

struct UsdReport {
  double prior_plus = 0.5;
  double prior_minus = 0.5;
  double prob_fail_circuit = 0.0;
  double prob_success_circuit = 0.0;
  /// |<chi+|chi->|, the quantum optimum at equal priors.
  double prob_fail_optimal = 0.0;
  /// Set only at equal priors; nullopt otherwise (the |<chi+|chi->| optimum
  /// assumes equal priors).
  std::optional<bool> optimal;
  std::vector<UsdContribution> contributions;
  PatternClassification classification;
};

UsdReport usd_report(const LinearCircuit& circuit, const PureState& plus,
                     const PureState& minus, double prior_plus = 0.5,
                     double classification_tol = 1e-10);

/// usd_report on pre-transformed states (overlap taken from them; it is
/// unitarily invariant).
UsdReport usd_report_transformed(const PureState& plus_h,
                                 const PureState& minus_h,
                                 double prior_plus = 0.5,
                                 double classification_tol = 1e-10);

enum class HierarchyKind {
  kOrthogonalZero,  // all moments must vanish
  kUsdPhase,        // phase/modulus chains against the overlap
};

struct ConditionEntry {
  std::vector<int> modes;  // sorted multiset
  int order = 0;
  bool distinct = true;  // no repeated index
  Complex value;
  double modulus_bound = 0.0;  // N^(r) |overlap| (USD kind)
  bool vanishing = false;
  std::optional<bool> phase_ok;  // evaluated only when non-vanishing (USD)
  bool modulus_ok = true;
  bool sufficient_alone = false;  // orthogonal fixed-N highest order
};

struct ConditionReport {
  HierarchyKind kind = HierarchyKind::kUsdPhase;
  Complex overlap;
  double reference_phase = 0.0;
  int max_order = 0;
  /// Total photon number when both states share a fixed one.
  std::optional<int> fixed_photon_number;
  std::vector<ConditionEntry> entries;  // order-major, lexicographic multisets

  struct SumRule {
    Complex value;
    Complex expected;
    bool ok = false;
  };
  std::optional<SumRule> sum_rule;  // first-order sum, fixed-N USD only
  bool pass = false;
};

/// Exact-discrimination hierarchy for orthogonal inputs: every moment over
/// every index multiset up to max_order (capped at N for fixed-N states)
/// must vanish.
ConditionReport orthogonal_hierarchy(const LinearCircuit& circuit,
                                     const PureState& plus,
                                     const PureState& minus, int max_order,
                                     const ComplexTolerance& tol = {});

/// Optimal-USD hierarchy for nonorthogonal inputs: all non-vanishing moments
/// must share the overlap's phase and obey the falling-factorial modulus
/// bounds; fixed-N states additionally get the first-order sum rule.
ConditionReport usd_hierarchy(const LinearCircuit& circuit,
                              const PureState& plus, const PureState& minus,
                              int max_order, const ComplexTolerance& tol = {});

/// Conditional-dynamics subset: repeated-index moments (c_j^dag)^n c_j^n
/// only, n = 1..max_order, zero checks for orthogonal inputs and phase /
/// modulus checks otherwise.
ConditionReport conditional_mode_check(const LinearCircuit& circuit,
                                       const PureState& plus,
                                       const PureState& minus, int mode,
                                       int max_order,
                                       const ComplexTolerance& tol = {});

ConditionReport orthogonal_hierarchy_transformed(
    const PureState& plus_h, const PureState& minus_h, int max_order,
    const ComplexTolerance& tol = {});
ConditionReport usd_hierarchy_transformed(const PureState& plus_h,
                                          const PureState& minus_h,
                                          int max_order,
                                          const ComplexTolerance& tol = {});
ConditionReport conditional_mode_check_transformed(
    const PureState& plus_h, const PureState& minus_h, int mode,
    int max_order, const ComplexTolerance& tol = {});

/// Structure check on the ambiguous amplitudes of an optimal-USD output
/// pair: equal moduli and a single common relative phase.
struct OptimalFormReport {
  bool amplitude_match = true;
  bool common_phase = true;
  /// arg(beta_m / alpha_m) when ambiguous patterns exist.
  std::optional<double> phase;
  int n_ambiguous = 0;
};

OptimalFormReport optimal_form_check(const PureState& plus_h,
                                     const PureState& minus_h,
                                     const ComplexTolerance& tol = {});

/// Highest-order (= photon number N) moments of a fixed-N pair against the
/// output amplitude products, with the exact combinatorial factor from
/// repeated indices computed on both routes.
struct HighestOrderRow {
  FockPattern pattern;
  Complex amplitude_product;  // conj(alpha_p) * beta_p
  Complex moment;
  double combinatorial_factor = 1.0;  // prod_i p_i!
  bool consistent = true;
};

std::vector<HighestOrderRow> highest_order_products(
    const LinearCircuit& circuit, const PureState& plus,
    const PureState& minus, const ComplexTolerance& tol = {});

}  // namespace dephaselab
