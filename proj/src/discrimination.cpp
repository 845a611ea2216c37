#include "dephaselab/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dephaselab {

namespace {

double angular_distance(Complex a, Complex ref) {
  // |arg(a) - arg(ref)| reduced to [0, pi]
  return std::abs(std::arg(a * std::conj(ref)));
}

double falling_factorial(int n, int r) {
  double f = 1.0;
  for (int k = 0; k < r; ++k) f *= (n - k);
  return f < 0.0 ? 0.0 : f;
}

void enumerate_multisets(int dim, int order, int first,
                         std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == order) {
    out.push_back(cur);
    return;
  }
  for (int i = first; i < dim; ++i) {
    cur.push_back(i);
    enumerate_multisets(dim, order, i, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> multisets(int dim, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_multisets(dim, order, 0, cur, out);
  return out;
}

bool all_distinct(const std::vector<int>& sorted_modes) {
  return std::adjacent_find(sorted_modes.begin(), sorted_modes.end()) ==
         sorted_modes.end();
}

std::optional<int> common_fixed_photon_number(const PureState& a,
                                              const PureState& b) {
  int na = 0;
  int nb = 0;
  if (a.has_fixed_photon_number(&na) && b.has_fixed_photon_number(&nb) &&
      na == nb) {
    return na;
  }
  return std::nullopt;
}

ConditionReport build_hierarchy(const PureState& plus_h,
                                const PureState& minus_h,
                                HierarchyKind kind, int max_order,
                                const ComplexTolerance& tol,
                                std::optional<int> restrict_mode) {
  tol.validate();
  if (plus_h.n_modes() != minus_h.n_modes()) {
    throw std::invalid_argument("hierarchy: mode-count mismatch");
  }
  if (max_order < 1) {
    throw std::invalid_argument("hierarchy: max_order must be >= 1");
  }
  const int dim = plus_h.n_modes();
  if (restrict_mode && (*restrict_mode < 0 || *restrict_mode >= dim)) {
    throw std::invalid_argument("hierarchy: mode index out of range");
  }

  ConditionReport rep;
  rep.kind = kind;
  rep.overlap = inner_product(plus_h, minus_h);
  rep.reference_phase = std::arg(rep.overlap);
  rep.fixed_photon_number = common_fixed_photon_number(plus_h, minus_h);
  const int n_photons =
      std::max(plus_h.max_total_photons(), minus_h.max_total_photons());
  rep.max_order =
      rep.fixed_photon_number ? std::min(max_order, *rep.fixed_photon_number)
                              : max_order;

  const double abs_overlap = std::abs(rep.overlap);
  bool pass = true;
  Complex first_order_sum(0.0, 0.0);

  for (int order = 1; order <= rep.max_order; ++order) {
    std::vector<std::vector<int>> sets;
    if (restrict_mode) {
      sets.push_back(std::vector<int>(static_cast<size_t>(order),
                                      *restrict_mode));
    } else {
      sets = multisets(dim, order);
    }
    for (const auto& modes : sets) {
      ConditionEntry e;
      e.modes = modes;
      e.order = order;
      e.distinct = all_distinct(modes);
      e.value = normal_ordered_moment_transformed(plus_h, minus_h, modes);
      e.vanishing = std::abs(e.value) <= tol.abs_tol;
      if (kind == HierarchyKind::kOrthogonalZero) {
        e.modulus_bound = 0.0;
        e.modulus_ok = e.vanishing;
        e.sufficient_alone =
            rep.fixed_photon_number && order == *rep.fixed_photon_number;
        if (!e.vanishing) pass = false;
      } else {
        e.modulus_bound = falling_factorial(n_photons, order) * abs_overlap;
        e.modulus_ok = std::abs(e.value) <= e.modulus_bound + tol.abs_tol;
        if (!e.vanishing) {
          e.phase_ok = angular_distance(e.value, rep.overlap) <= tol.phase_tol;
          if (!*e.phase_ok) pass = false;
        }
        if (!e.modulus_ok) pass = false;
      }
      if (order == 1) first_order_sum += e.value;
      rep.entries.push_back(std::move(e));
    }
  }

  if (kind == HierarchyKind::kUsdPhase && rep.fixed_photon_number &&
      !restrict_mode) {
    ConditionReport::SumRule sr;
    sr.value = first_order_sum;
    sr.expected = static_cast<double>(*rep.fixed_photon_number) * rep.overlap;
    sr.ok = std::abs(sr.value - sr.expected) <= tol.abs_tol;
    if (!sr.ok) pass = false;
    rep.sum_rule = sr;
  }
  rep.pass = pass;
  return rep;
}

}  // namespace

PatternClassification classify_patterns(const PureState& plus_h,
                                        const PureState& minus_h,
                                        double tol) {
  if (plus_h.n_modes() != minus_h.n_modes()) {
    throw std::invalid_argument("classify_patterns: mode-count mismatch");
  }
  PatternClassification c;
  for (const auto& [p, a] : plus_h.terms()) c.alpha[p] = a;
  for (const auto& [p, b] : minus_h.terms()) c.beta[p] = b;
  std::map<FockPattern, char> support;
  for (const auto& [p, a] : plus_h.terms()) {
    if (std::abs(a) > tol) support[p] |= 1;
  }
  for (const auto& [p, b] : minus_h.terms()) {
    if (std::abs(b) > tol) support[p] |= 2;
  }
  for (const auto& [p,flags] : support) {
    switch (flags) {
      case 1:
        c.conclusive_plus.push_back(p);
        break;
      case 2:
        c.conclusive_minus.push_back(p);
        break;
      case 3:
        c.ambiguous.push_back(p);
        break;
      default:
        break;
    }
  }
  return c;
}

Complex normal_ordered_moment_transformed(const PureState& plus_h,
                                          const PureState& minus_h,
                                          const std::vector<int>& modes) {
  if (plus_h.n_modes() != minus_h.n_modes()) {
    throw std::invalid_argument("normal_ordered_moment: mode-count mismatch");
  }
  for (int m : modes) {
    if (m < 0 || m >= plus_h.n_modes()) {
      throw std::invalid_argument("normal_ordered_moment: mode out of range");
    }
  }
  const int order = static_cast<int>(modes.size());
  if (order > plus_h.max_total_photons() ||
      order > minus_h.max_total_photons()) {
    return Complex(0.0, 0.0);  // identically zero beyond the photon content
  }
  return inner_product(apply_lowering(plus_h, modes),
                       apply_lowering(minus_h, modes));
}

Complex normal_ordered_moment(const LinearCircuit& circuit,
                              const PureState& plus, const PureState& minus,
                              const std::vector<int>& modes) {
  return normal_ordered_moment_transformed(transform(circuit, plus),
                                           transform(circuit, minus), modes);
}

UsdReport usd_report_transformed(const PureState& plus_h,
                                 const PureState& minus_h, double prior_plus,
                                 double classification_tol) {
  if (!(prior_plus >= 0.0 && prior_plus <= 1.0)) {
    throw std::invalid_argument("usd_report: invalid priors");
  }
  UsdReport rep;
  rep.prior_plus = prior_plus;
  rep.prior_minus = 1.0 - prior_plus;
  rep.classification =
      classify_patterns(plus_h, minus_h, classification_tol);
  rep.prob_fail_optimal = std::abs(inner_product(plus_h, minus_h));

  double fail = 0.0;
  for (const FockPattern& p : rep.classification.ambiguous) {
    UsdContribution c;
    c.pattern = p;
    c.p_plus = std::norm(rep.classification.alpha.at(p));
    c.p_minus = std::norm(rep.classification.beta.at(p));
    c.contribution = rep.prior_plus * c.p_plus + rep.prior_minus * c.p_minus;
    fail += c.contribution;
    rep.contributions.push_back(std::move(c));
  }
  double success = 0.0;
  for (const FockPattern& p : rep.classification.conclusive_plus) {
    success += rep.prior_plus * std::norm(rep.classification.alpha.at(p));
  }
  for (const FockPattern& p : rep.classification.conclusive_minus) {
    success += rep.prior_minus * std::norm(rep.classification.beta.at(p));
  }
  rep.prob_fail_circuit = fail;
  rep.prob_success_circuit = success;
  if (std::abs(prior_plus - 0.5) <= 1e-12) {
    rep.optimal =
        std::abs(rep.prob_fail_circuit - rep.prob_fail_optimal) <= 1e-10;
  }
  return rep;
}

UsdReport usd_report(const LinearCircuit& circuit, const PureState& plus,
                     const PureState& minus, double prior_plus,
                     double classification_tol) {
  return usd_report_transformed(transform(circuit, plus),
                                transform(circuit, minus), prior_plus,
                                classification_tol);
}

ConditionReport orthogonal_hierarchy_transformed(const PureState& plus_h,
                                                 const PureState& minus_h,
                                                 int max_order,
                                                 const ComplexTolerance& tol) {
  if (std::abs(inner_product(plus_h, minus_h)) > tol.abs_tol) {
    throw std::invalid_argument("orthogonal_hierarchy: inputs not orthogonal");
  }
  return build_hierarchy(plus_h, minus_h, HierarchyKind::kOrthogonalZero,
                         max_order, tol, std::nullopt);
}

ConditionReport orthogonal_hierarchy(const LinearCircuit& circuit,
                                     const PureState& plus,
                                     const PureState& minus, int max_order,
                                     const ComplexTolerance& tol) {
  return orthogonal_hierarchy_transformed(transform(circuit, plus),
                                          transform(circuit, minus),
                                          max_order, tol);
}

ConditionReport usd_hierarchy_transformed(const PureState& plus_h,
                                          const PureState& minus_h,
                                          int max_order,
                                          const ComplexTolerance& tol) {
  if (std::abs(inner_product(plus_h, minus_h)) <= tol.abs_tol) {
    throw std::invalid_argument(
        "usd_hierarchy: orthogonal inputs (use orthogonal_hierarchy)");
  }
  return build_hierarchy(plus_h, minus_h, HierarchyKind::kUsdPhase, max_order,
                         tol, std::nullopt);
}

ConditionReport usd_hierarchy(const LinearCircuit& circuit,
                              const PureState& plus, const PureState& minus,
                              int max_order, const ComplexTolerance& tol) {
  return usd_hierarchy_transformed(transform(circuit, plus),
                                   transform(circuit, minus), max_order, tol);
}

ConditionReport conditional_mode_check_transformed(
    const PureState& plus_h, const PureState& minus_h, int mode,
    int max_order, const ComplexTolerance& tol) {
  const bool orthogonal =
      std::abs(inner_product(plus_h, minus_h)) <= tol.abs_tol;
  return build_hierarchy(plus_h, minus_h,
                         orthogonal ? HierarchyKind::kOrthogonalZero
                                    : HierarchyKind::kUsdPhase,
                         max_order, tol, mode);
}

ConditionReport conditional_mode_check(const LinearCircuit& circuit,
                                       const PureState& plus,
                                       const PureState& minus, int mode,
                                       int max_order,
                                       const ComplexTolerance& tol) {
  return conditional_mode_check_transformed(transform(circuit, plus),
                                            transform(circuit, minus), mode,
                                            max_order, tol);
}

OptimalFormReport optimal_form_check(const PureState& plus_h,
                                     const PureState& minus_h,
                                     const ComplexTolerance& tol) {
  tol.validate();
  const PatternClassification cls =
      classify_patterns(plus_h, minus_h, tol.abs_tol);
  OptimalFormReport rep;
  rep.n_ambiguous = static_cast<int>(cls.ambiguous.size());
  if (cls.ambiguous.empty()) return rep;

  Complex aggregate(0.0, 0.0);
  for (const FockPattern& p : cls.ambiguous) {
    const Complex a = cls.alpha.at(p);
    const Complex b = cls.beta.at(p);
    if (std::abs(std::abs(a) - std::abs(b)) > tol.abs_tol) {
      rep.amplitude_match = false;
    }
    aggregate += b * std::conj(a);
  }
  for (const FockPattern& p : cls.ambiguous) {
    const Complex ratio_dir = cls.beta.at(p) * std::conj(cls.alpha.at(p));
    if (angular_distance(ratio_dir, aggregate) > tol.phase_tol) {
      rep.common_phase = false;
    }
  }
  if (rep.common_phase) rep.phase = std::arg(aggregate);
  return rep;
}

namespace {

void enumerate_patterns_of_total(int modes_left, int total_left,
                                 std::vector<int>& cur,
                                 std::vector<FockPattern>& out) {
  if (modes_left == 1) {
    cur.push_back(total_left);
    out.emplace_back(cur);
    cur.pop_back();
    return;
  }
  for (int n = 0; n <= total_left; ++n) {
    cur.push_back(n);
    enumerate_patterns_of_total(modes_left - 1, total_left - n, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<HighestOrderRow> highest_order_products(
    const LinearCircuit& circuit, const PureState& plus,
    const PureState& minus, const ComplexTolerance& tol) {
  tol.validate();
  const std::optional<int> fixed = common_fixed_photon_number(plus, minus);
  if (!fixed) {
    throw std::invalid_argument(
        "highest_order_products: states must share a fixed photon number");
  }
  const int n_photons = *fixed;
  const PureState plus_h = transform(circuit, plus);
  const PureState minus_h = transform(circuit, minus);

  std::vector<FockPattern> patterns;
  std::vector<int> cur;
  enumerate_patterns_of_total(plus_h.n_modes(), n_photons, cur, patterns);
  std::sort(patterns.begin(), patterns.end());

  std::vector<HighestOrderRow> rows;
  rows.reserve(patterns.size());
  for (const FockPattern& p : patterns) {
    HighestOrderRow row;
    row.pattern = p;
    std::vector<int> modes;
    double factor = 1.0;
    for (int m = 0; m < p.n_modes(); ++m) {
      modes.insert(modes.end(), static_cast<size_t>(p[m]), m);
      factor *= factorial(p[m]);
    }
    row.combinatorial_factor = factor;
    row.moment = normal_ordered_moment_transformed(plus_h, minus_h, modes);
    row.amplitude_product =
        std::conj(plus_h.amplitude(p)) * minus_h.amplitude(p);
    row.consistent =
        std::abs(row.moment - factor * row.amplitude_product) <= tol.abs_tol;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dephaselab
