#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"

namespace dephaselab {

/// Rank-1 POVM: elements E_mu = |u_mu><u_mu| on an n-dimensional signal
/// space, with sum_mu E_mu = 1. total_dim is the number of outcomes, one
/// output rail each.
struct PovmSet {
  static constexpr double kCompletenessTol = 1e-10;

  int signal_dim = 1;  // n
  int total_dim = 1;   // N = number of elements
  std::vector<Eigen::VectorXcd> elements;  // |u_mu>, length n

  /// Born-rule outcome probabilities |<u_mu|psi>|^2 for a signal amplitude
  /// vector of length n.
  std::vector<double> born_probabilities(const Eigen::VectorXcd& signal) const;
};

double povm_completeness_deviation(
    const std::vector<Eigen::VectorXcd>& elements, int signal_dim);

PovmSet validate_povm(const std::vector<Eigen::VectorXcd>& elements,
                      int signal_dim,
                      double tol = PovmSet::kCompletenessTol);

/// Projective extension of a POVM: an N x N unitary whose row mu is
/// |w_mu> = |u_mu> (+) |N_mu>.
struct NaimarkDilation {
  PovmSet povm;
  Eigen::MatrixXcd unitary;  // rows are the |w_mu>

  /// Extension vectors |N_mu> (the last N - n entries of each row).
  std::vector<Eigen::VectorXcd> extensions() const;

  /// The circuit that implements the projection in this library's transform
  /// convention ("V = U" applied through V*_{kj}): elementwise conjugate of
  /// the dilation unitary.
  LinearCircuit circuit() const;
};

/// Completes the n orthonormal u-columns to an orthonormal N-frame by
/// orthonormalizing the canonical basis against the existing columns in
/// index order (deterministic; the extension is otherwise non-unique).
NaimarkDilation naimark_unitary(const PovmSet& povm);

/// The three-element POVM for optimal USD of chi_pm = alpha|0> +- beta|1>
/// together with the closed-form extension vectors and their dilation.
struct UsdPovm {
  PovmSet povm;
  std::vector<Eigen::VectorXcd> extensions;  // |N_mu> as written in closed form
  NaimarkDilation dilation;                  // rows u_mu (+) N_mu
  double prob_fail = 0.0;                    // alpha^2 - beta^2
  double prob_success = 0.0;                 // 2 beta^2
};

UsdPovm usd_povm(double alpha, double beta);

/// Runs the dilation circuit on a one-photon multiple-rail state whose
/// signal amplitude is confined to the first n rails, returning the click
/// distribution over the N output rails.
std::vector<double> simulate_povm(const NaimarkDilation& dilation,
                                  const PureState& input);

}  // namespace dephaselab
