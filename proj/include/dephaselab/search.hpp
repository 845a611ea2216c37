#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dephaselab/discrimination.hpp"
#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"

namespace dephaselab {

struct SearchConfig {
  int n_modes = 2;          // signal modes + vacuum ancillas
  int max_restarts = 64;
  std::uint64_t seed = 1;
  int iteration_budget = 2000;       // per restart
  double convergence_tol = 1e-12;    // on the surrogate objective
  double classification_tol = 1e-5;  // amplitude floor for pattern classes

  void validate() const;
};

struct RestartOutcome {
  int restart = 0;
  double objective = 0.0;  // failure probability at the endpoint
  double surrogate = 0.0;  // Bhattacharyya sum = sqrt(F_dephased)
  int iterations = 0;
  bool converged = false;
};

struct SearchResult {
  LinearCircuit best_circuit;
  double best_objective = 1.0;
  double overlap_abs = 0.0;
  /// best_objective within 1e-9 of the quantum optimum |<chi+|chi->|.
  bool optimal = false;
  bool budget_exhausted = false;  // best restart stopped on budget
  UsdReport report;
  ConditionReport hierarchy;
  std::vector<RestartOutcome> trace;
};

/// Derivative-free minimization of the USD failure probability over
/// U(n_modes) parameterized by a Givens mesh. Nelder-Mead restarts minimize
/// the smooth surrogate sum_p sqrt(P+_p P-_p); the discrete-classification
/// failure probability ranks the restart endpoints. Deterministic for a
/// fixed config; restarts may run on `threads` workers (0 = hardware
/// parallelism, capped by the DEPHASE_LAB_THREADS handling in the CLI).
SearchResult minimize_failure(const PureState& plus, const PureState& minus,
                              const SearchConfig& config, int threads = 0);

/// Analytic fixed-array verdict for the two-photon toy pair
/// alpha|20> +- beta|11>: infeasible exactly when beta^2 <= alpha^2 <
/// 2 beta^2; the 50/50 beam splitter witnesses alpha^2 = 2 beta^2.
struct ToyFeasibility {
  double alpha = 0.0;
  double beta = 0.0;
  bool feasible_fixed_array = false;
  std::optional<LinearCircuit> witness;
  std::string obstruction;  // empty when feasible
};

ToyFeasibility toy_feasibility(double alpha, double beta);

/// Recognizes inputs of the toy form alpha|20> +- beta|11> (up to vacuum
/// padding) and returns (alpha, beta).
std::optional<std::pair<double, double>> detect_toy_form(
    const PureState& plus, const PureState& minus);

struct AncillaSweepEntry {
  std::string label;
  int n_modes = 0;
  SearchResult result;
};

/// minimize_failure over tensor(signal, ancilla) for each labeled ancilla.
std::vector<AncillaSweepEntry> ancilla_sweep(
    const PureState& signal_plus, const PureState& signal_minus,
    const std::vector<std::pair<std::string, PureState>>& ancillas,
    const SearchConfig& config, int threads = 0);

/// The symmetric beam-splitter matrix (1,1;1,-1)/sqrt(2).
LinearCircuit fifty_fifty();

}  // namespace dephaselab
