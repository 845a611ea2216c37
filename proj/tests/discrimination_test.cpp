#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dephaselab/discrimination.hpp"
#include "dephaselab/metrics.hpp"
#include "dephaselab/naimark.hpp"
#include "dephaselab/search.hpp"
#include "test_helpers.hpp"

using namespace dephaselab;
using namespace dephaselab::testing;

TEST_CASE("classify_patterns: toy pair under the symmetric splitter") {
  const LinearCircuit bs = fifty_fifty();
  const PatternClassification cls = classify_patterns(
      transform(bs, toy_plus()), transform(bs, toy_minus()), 1e-10);
  REQUIRE(cls.conclusive_plus.size() == 1);
  REQUIRE(cls.conclusive_minus.size() == 1);
  REQUIRE(cls.ambiguous.size() == 1);
  CHECK(cls.conclusive_plus[0] == pat({2, 0}));
  CHECK(cls.conclusive_minus[0] == pat({0, 2}));
  CHECK(cls.ambiguous[0] == pat({1, 1}));
}

TEST_CASE("classify_patterns: disjoint and identical supports") {
  const PureState a = build_pure_state(2, {{pat({1, 0}), 1.0}});
  const PureState b = build_pure_state(2, {{pat({0, 1}), 1.0}});
  const PatternClassification disjoint = classify_patterns(a, b, 1e-10);
  CHECK(disjoint.ambiguous.empty());
  CHECK(disjoint.conclusive_plus.size() == 1);

  const PatternClassification same = classify_patterns(a, a, 1e-10);
  CHECK(same.conclusive_plus.empty());
  CHECK(same.conclusive_minus.empty());
  CHECK(same.ambiguous.size() == 1);
}

TEST_CASE("normal_ordered_moment: toy pair at the 50/50 splitter") {
  const LinearCircuit bs = fifty_fifty();
  const PureState plus = toy_plus();
  const PureState minus = toy_minus();
  CHECK(close(normal_ordered_moment(bs, plus, minus, {0}),
              Complex(1.0 / 3.0, 0)));
  // second order: closed form 2|v1|^2 [a^2 |v1|^2 - 2 b^2 |v2|^2] = 0 at 50/50
  CHECK(close(normal_ordered_moment(bs, plus, minus, {0, 0}), Complex(0, 0)));
  CHECK(close(normal_ordered_moment(bs, plus, minus, {0, 1}),
              Complex(1.0 / 3.0, 0)));
  // orders above the photon content are exact zeros
  CHECK(normal_ordered_moment(bs, plus, minus, {0, 0, 1}) == Complex(0, 0));
  CHECK_THROWS_AS(normal_ordered_moment(bs, plus, minus, {7}),
                  std::invalid_argument);
}

TEST_CASE("normal_ordered_moment: toy second order matches the closed form") {
  // 2 a^2 |v1|^2 - b^2 + sqrt2 a b (v1 v2* - cc) for row (v1, v2),
  // second order 2|v1|^2 [a^2 |v1|^2 - 2 b^2 |v2|^2 + sqrt2 a b (v1 v2* - cc)]
  const double a = std::sqrt(0.55), b = std::sqrt(0.45);
  const PureState plus = toy_plus_ab(a, b);
  const PureState minus = toy_minus_ab(a, b);
  for (double theta : {0.3, 0.7, 1.1}) {
    Eigen::MatrixXcd m(2, 2);
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const LinearCircuit u = validate_unitary(m);
    for (int j = 0; j < 2; ++j) {
      const double v1 = std::norm(u.entry(j, 0));
      const double v2 = std::norm(u.entry(j, 1));
      const Complex first = normal_ordered_moment(u, plus, minus, {j});
      CHECK(close(first, Complex(2 * a * a * v1 - b * b * (v1 + v2), 0), 1e-12));
      const Complex second = normal_ordered_moment(u, plus, minus, {j, j});
      CHECK(close(second, Complex(2 * v1 * (a * a * v1 - 2 * b * b * v2), 0),
                  1e-12));
    }
  }
}

TEST_CASE("normal_ordered_moment agrees with the symbolic-expansion oracle") {
  Rng rng(51);
  for (int i = 0; i < 12; ++i) {
    const int modes = 2 + static_cast<int>(rng.raw() % 2);
    const PureState plus = random_state(rng, modes, 3, 4);
    const PureState minus = random_state(rng, modes, 3, 4);
    const LinearCircuit u = haar_random(modes, 5100 + static_cast<unsigned>(i));
    for (const std::vector<int>& j :
         {std::vector<int>{0}, {1}, {0, 1}, {0, 0}, {1, 1, 0}}) {
      bool in_range = true;
      for (int m : j) in_range &= m < modes;
      if (!in_range) continue;
      CHECK(close(normal_ordered_moment(u, plus, minus, j),
                  moment_oracle(u, plus, minus, j), 1e-10));
    }
  }
}

TEST_CASE("sum rule: sum_j <c_j^dag c_j> = N <chi+|chi-> on fixed-N states") {
  Rng rng(52);
  for (int i = 0; i < 50; ++i) {
    const int modes = 2 + static_cast<int>(rng.raw() % 3);
    const int total = 1 + static_cast<int>(rng.raw() % 4);
    const PureState plus = random_fixed_n_state(rng, modes, total, 3);
    const PureState minus = random_fixed_n_state(rng, modes, total, 3);
    const LinearCircuit u = haar_random(modes, 5200 + static_cast<unsigned>(i));
    Complex sum(0, 0);
    for (int j = 0; j < modes; ++j) {
      sum += normal_ordered_moment(u, plus, minus, {j});
    }
    const Complex expected =
        static_cast<double>(total) * inner_product(plus, minus);
    CHECK(close(sum, expected, 1e-10));
  }
}

TEST_CASE("usd_report: toy optimum, identity failure, coherent demo") {
  const UsdReport opt = usd_report(fifty_fifty(), toy_plus(), toy_minus());
  CHECK(close(opt.prob_fail_circuit, 1.0 / 3.0, 1e-12));
  CHECK(close(opt.prob_success_circuit, 2.0 / 3.0, 1e-12));
  CHECK(close(opt.prob_fail_optimal, 1.0 / 3.0, 1e-12));
  REQUIRE(opt.optimal.has_value());
  CHECK(*opt.optimal);
  CHECK(opt.contributions.size() == 1);
  CHECK(opt.contributions[0].pattern == pat({1, 1}));

  const LinearCircuit id = validate_unitary(Eigen::MatrixXcd::Identity(2, 2));
  const UsdReport bad = usd_report(id, toy_plus(), toy_minus());
  CHECK(close(bad.prob_fail_circuit, 1.0, 1e-12));
  CHECK_FALSE(*bad.optimal);

  // coherent pair on the exact transformed representation
  const PureState out_plus = coherent_product_state(
      {Complex(std::sqrt(2.0) * 0.7, 0), Complex(0, 0)}, 1e-12);
  const PureState out_minus = coherent_product_state(
      {Complex(0, 0), Complex(-std::sqrt(2.0) * 0.7, 0)}, 1e-12);
  const UsdReport coh = usd_report_transformed(out_plus, out_minus);
  CHECK(close(coh.prob_fail_circuit, std::exp(-0.98), 1e-12));
  CHECK(*coh.optimal);

  CHECK_THROWS_AS(usd_report(id, toy_plus(), toy_minus(), 1.5),
                  std::invalid_argument);
  // unequal priors: circuit value reported, optimal not applicable
  const UsdReport skew = usd_report(fifty_fifty(), toy_plus(), toy_minus(), 0.75);
  CHECK_FALSE(skew.optimal.has_value());
  CHECK(close(skew.prob_fail_circuit, 1.0 / 3.0, 1e-12));
}

TEST_CASE("orthogonal_hierarchy: disjoint pair passes under identity") {
  const PureState a = build_pure_state(2, {{pat({1, 0}), 1.0}});
  const PureState b = build_pure_state(2, {{pat({0, 1}), 1.0}});
  const LinearCircuit id = validate_unitary(Eigen::MatrixXcd::Identity(2, 2));
  const ConditionReport rep = orthogonal_hierarchy(id, a, b, 3);
  CHECK(rep.pass);
  CHECK(rep.max_order == 1);  // capped at the fixed photon number
  for (const auto& e : rep.entries) {
    CHECK(e.vanishing);
    CHECK(e.sufficient_alone);
  }
}

TEST_CASE("orthogonal_hierarchy: orthogonal toy pair fails at second order") {
  const double s = 1.0 / std::sqrt(2.0);
  const PureState plus = toy_plus_ab(s, s);
  const PureState minus = toy_minus_ab(s, s);
  const ConditionReport rep =
      orthogonal_hierarchy(fifty_fifty(), plus, minus, 2);
  CHECK_FALSE(rep.pass);
  // first orders vanish for this pair; the violation shows at order 2
  bool first_ok = true, second_violated = false;
  for (const auto& e : rep.entries) {
    if (e.order == 1 && !e.vanishing) first_ok = false;
    if (e.order == 2 && !e.vanishing) second_violated = true;
  }
  CHECK(first_ok);
  CHECK(second_violated);
}

TEST_CASE("orthogonal_hierarchy: single-photon pair fails under 50/50") {
  const PureState a = build_pure_state(2, {{pat({1, 0}), 1.0}});
  const PureState b = build_pure_state(2, {{pat({0, 1}), 1.0}});
  const ConditionReport rep = orthogonal_hierarchy(fifty_fifty(), a, b, 1);
  CHECK_FALSE(rep.pass);
  CHECK(close(rep.entries[0].value, Complex(0.5, 0)));
  CHECK(close(rep.entries[1].value, Complex(-0.5, 0)));
  CHECK_THROWS_AS(orthogonal_hierarchy(fifty_fifty(), toy_plus(), toy_minus(), 1),
                  std::invalid_argument);
}

TEST_CASE("usd_hierarchy: toy pair at the optimum passes with the sum rule") {
  const ConditionReport rep =
      usd_hierarchy(fifty_fifty(), toy_plus(), toy_minus(), 2);
  CHECK(rep.pass);
  REQUIRE(rep.sum_rule.has_value());
  CHECK(close(rep.sum_rule->value, Complex(2.0 / 3.0, 0), 1e-12));
  CHECK(rep.sum_rule->ok);
  REQUIRE(rep.fixed_photon_number.has_value());
  CHECK(*rep.fixed_photon_number == 2);
  for (const auto& e : rep.entries) {
    if (!e.vanishing) {
      REQUIRE(e.phase_ok.has_value());
      CHECK(*e.phase_ok);
    }
    CHECK(e.modulus_ok);
  }
}

TEST_CASE("usd_hierarchy: infeasible-regime pair violated for real circuits") {
  const double a = std::sqrt(0.55), b = std::sqrt(0.45);
  const PureState plus = toy_plus_ab(a, b);
  const PureState minus = toy_minus_ab(a, b);
  for (double theta : {0.0, 0.3, 0.6, 0.9, 1.2, 1.5}) {
    Eigen::MatrixXcd m(2, 2);
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const ConditionReport rep =
        usd_hierarchy(validate_unitary(m), plus, minus, 2);
    CHECK_FALSE(rep.pass);
  }
  CHECK_THROWS_AS(
      usd_hierarchy(fifty_fifty(), toy_plus_ab(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)),
                    toy_minus_ab(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)), 2),
      std::invalid_argument);
}

TEST_CASE("usd_hierarchy: compiled one-photon USD circuit passes") {
  const UsdPovm usd = usd_povm(0.8, 0.6);
  const PureState plus = build_pure_state(
      3, {{pat({1, 0, 0}), 0.8}, {pat({0, 1, 0}), 0.6}});
  const PureState minus = build_pure_state(
      3, {{pat({1, 0, 0}), 0.8}, {pat({0, 1, 0}), -0.6}});
  const ConditionReport rep =
      usd_hierarchy(usd.dilation.circuit(), plus, minus, 1);
  CHECK(rep.pass);
  REQUIRE(rep.sum_rule.has_value());
  CHECK(rep.sum_rule->ok);
}

TEST_CASE("conditional_mode_check: toy pair, coherent pair, orthogonal pair") {
  const ConditionReport toy =
      conditional_mode_check(fifty_fifty(), toy_plus(), toy_minus(), 0, 2);
  CHECK(toy.pass);
  REQUIRE(toy.entries.size() == 2);
  CHECK(close(toy.entries[0].value, Complex(1.0 / 3.0, 0)));
  CHECK(*toy.entries[0].phase_ok);
  CHECK(toy.entries[1].vanishing);

  const PureState out_plus = coherent_product_state(
      {Complex(std::sqrt(2.0) * 0.7, 0), Complex(0, 0)}, 1e-12);
  const PureState out_minus = coherent_product_state(
      {Complex(0, 0), Complex(-std::sqrt(2.0) * 0.7, 0)}, 1e-12);
  for (int mode = 0; mode < 2; ++mode) {
    const ConditionReport coh = conditional_mode_check_transformed(
        out_plus, out_minus, mode, 6);
    CHECK(coh.pass);
    for (const auto& e : coh.entries) CHECK(e.vanishing);
  }

  const PureState a = build_pure_state(2, {{pat({1, 0}), 1.0}});
  const PureState b = build_pure_state(2, {{pat({0, 1}), 1.0}});
  const ConditionReport orth =
      conditional_mode_check(fifty_fifty(), a, b, 0, 1);
  CHECK_FALSE(orth.pass);
  CHECK(orth.kind == HierarchyKind::kOrthogonalZero);
}

TEST_CASE("optimal_form_check: toy optimum, coherent pair, skewed pair") {
  const LinearCircuit bs = fifty_fifty();
  const OptimalFormReport toy =
      optimal_form_check(transform(bs, toy_plus()), transform(bs, toy_minus()));
  CHECK(toy.amplitude_match);
  CHECK(toy.common_phase);
  REQUIRE(toy.phase.has_value());
  CHECK(close(*toy.phase, 0.0, 1e-10));
  CHECK(toy.n_ambiguous == 1);

  const PureState out_plus = coherent_product_state(
      {Complex(std::sqrt(2.0) * 0.7, 0), Complex(0, 0)}, 1e-12);
  const PureState out_minus = coherent_product_state(
      {Complex(0, 0), Complex(-std::sqrt(2.0) * 0.7, 0)}, 1e-12);
  const OptimalFormReport coh = optimal_form_check(out_plus, out_minus);
  CHECK(coh.amplitude_match);
  CHECK(coh.common_phase);
  CHECK(close(*coh.phase, 0.0, 1e-10));

  const PureState skew_a = build_pure_state(2, {{pat({1, 0}), 0.8},
                                                {pat({0, 1}), 0.6}});
  const PureState skew_b = build_pure_state(2, {{pat({1, 0}), 0.6},
                                                {pat({0, 1}), 0.8}});
  const OptimalFormReport skew = optimal_form_check(skew_a, skew_b);
  CHECK_FALSE(skew.amplitude_match);
}

TEST_CASE("highest_order_products: toy pair tables") {
  const auto rows = highest_order_products(fifty_fifty(), toy_plus(), toy_minus());
  REQUIRE(rows.size() == 3);  // patterns 02, 11, 20
  for (const auto& row : rows) {
    CHECK(row.consistent);
    if (row.pattern == pat({1, 1})) {
      CHECK(close(row.amplitude_product, Complex(1.0 / 3.0, 0)));
    } else {
      CHECK(std::abs(row.amplitude_product) < 1e-12);
    }
  }
  const LinearCircuit id = validate_unitary(Eigen::MatrixXcd::Identity(2, 2));
  const auto id_rows = highest_order_products(id, toy_plus(), toy_minus());
  for (const auto& row : id_rows) {
    CHECK(row.consistent);
    if (row.pattern == pat({2, 0})) {
      CHECK(close(row.amplitude_product, Complex(2.0 / 3.0, 0)));
    }
  }
  // non-fixed photon number rejected
  const PureState mixed = build_pure_state(2, {{pat({1, 0}), 0.6},
                                               {pat({2, 0}), 0.8}});
  CHECK_THROWS_AS(highest_order_products(id, mixed, mixed),
                  std::invalid_argument);
}

TEST_CASE("highest_order_products: zero products iff disjoint supports") {
  // exact discrimination: disjoint supports, all products vanish
  const PureState a = build_pure_state(2, {{pat({1, 0}), 1.0}});
  const PureState b = build_pure_state(2, {{pat({0, 1}), 1.0}});
  const LinearCircuit id = validate_unitary(Eigen::MatrixXcd::Identity(2, 2));
  for (const auto& row : highest_order_products(id, a, b)) {
    CHECK(std::abs(row.amplitude_product) < 1e-12);
    CHECK(std::abs(row.moment) < 1e-12);
  }
  // random instances: products nonzero exactly when supports intersect
  Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    const int modes = 2 + static_cast<int>(rng.raw() % 3);
    const int total = 1 + static_cast<int>(rng.raw() % 3);
    const PureState plus = random_fixed_n_state(rng, modes, total, 3);
    const PureState minus = random_fixed_n_state(rng, modes, total, 3);
    const LinearCircuit u = haar_random(modes, 5300 + static_cast<unsigned>(i));
    double max_product = 0.0;
    for (const auto& row : highest_order_products(u, plus, minus)) {
      CHECK(row.consistent);
      max_product = std::max(max_product, std::abs(row.amplitude_product));
    }
    const bool disjoint =
        classify_patterns(transform(u, plus), transform(u, minus), 1e-10)
            .ambiguous.empty();
    CHECK((max_product <= 1e-10) == disjoint);
  }
}

TEST_CASE("usd_report: coherent pair through the circuit at loose tolerance") {
  // truncation residue (~1e-7 amplitudes) must sit below the classification
  // floor for the circuit route to reproduce the closed-form failure rate
  const PureState in_plus =
      coherent_product_state({Complex(0.7, 0), Complex(0.7, 0)}, 1e-12);
  const PureState in_minus =
      coherent_product_state({Complex(-0.7, 0), Complex(0.7, 0)}, 1e-12);
  const UsdReport rep =
      usd_report(fifty_fifty(), in_plus, in_minus, 0.5, 1e-5);
  CHECK(close(rep.prob_fail_circuit, std::exp(-0.98), 1e-9));
  CHECK(rep.optimal.value_or(false));
  CHECK(rep.contributions.size() == 1);
  CHECK(rep.contributions[0].pattern == pat({0, 0}));
}

TEST_CASE("usd_report invariants on random instances") {
  Rng rng(54);
  for (int i = 0; i < 40; ++i) {
    const int modes = 2 + static_cast<int>(rng.raw() % 2);
    const PureState plus = random_state(rng, modes, 3, 4);
    const PureState minus = random_state(rng, modes, 3, 4);
    const LinearCircuit u = haar_random(modes, 5400 + static_cast<unsigned>(i));
    const UsdReport rep = usd_report(u, plus, minus);
    CHECK(rep.prob_fail_circuit >= rep.prob_fail_optimal - 1e-10);
    CHECK(close(rep.prob_fail_circuit + rep.prob_success_circuit, 1.0, 1e-12));
  }
}

TEST_CASE("optimal implies fidelity criterion and hierarchy pass") {
  // the known optimal instances
  const LinearCircuit bs = fifty_fifty();
  const UsdReport toy = usd_report(bs, toy_plus(), toy_minus());
  REQUIRE(*toy.optimal);
  const double f_in = fidelity_pure(toy_plus(), toy_minus());
  const double f_deph = fidelity_diagonal(
      dephase_total(transform(bs, toy_plus())),
      dephase_total(transform(bs, toy_minus())));
  CHECK(close(f_in, f_deph, 1e-10));
  CHECK(usd_hierarchy(bs, toy_plus(), toy_minus(), 2).pass);
}
