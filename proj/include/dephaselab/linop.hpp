#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "dephaselab/fock.hpp"

namespace dephaselab {

/// Validated passive linear-optics unitary. Mode-operator convention:
/// c_j = U^dag a_j U = sum_i U(j,i) a_i, so states transform by the
/// creation-operator substitution adag_j -> sum_i U(i,j) adag_i.
class LinearCircuit {
 public:
  static constexpr double kUnitarityTol = 1e-10;

  LinearCircuit() : u_(Eigen::MatrixXcd::Identity(1, 1)) {}

  int dim() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  Complex entry(int row, int col) const { return u_(row, col); }

  friend LinearCircuit validate_unitary(const Eigen::MatrixXcd& m, double tol);

 private:
  explicit LinearCircuit(Eigen::MatrixXcd u) : u_(std::move(u)) {}
  Eigen::MatrixXcd u_;
};

/// max_ij |(U^dag U - 1)_ij|; also infinity for non-square input.
double unitarity_deviation(const Eigen::MatrixXcd& m);

LinearCircuit validate_unitary(const Eigen::MatrixXcd& m,
                               double tol = LinearCircuit::kUnitarityTol);

/// Exact action of the circuit on a Fock-space state; photon number and
/// norm preserving by construction.
PureState transform(const LinearCircuit& circuit, const PureState& state);

PureState embed_with_vacuum(const PureState& state, int extra_modes);
LinearCircuit embed_with_vacuum(const LinearCircuit& circuit, int extra_modes);

/// Triangular mesh of two-mode rotations, one angle and one phase each,
/// followed by output phases. angles.size() == N(N-1)/2,
/// phases.size() == N(N-1)/2 + N.
struct GivensParameterization {
  int dim = 1;
  std::vector<double> angles;  // in [0, pi/2]
  std::vector<double> phases;  // in [0, 2pi)

  void validate() const;
};

/// The (p, p+1) column pairs in elimination-sweep order; one entry per
/// rotation in the mesh.
std::vector<std::pair<int, int>> givens_pair_schedule(int dim);

/// Mesh product for raw (unconstrained) parameters; always unitary.
/// Used directly by the optimizer.
Eigen::MatrixXcd givens_mesh_matrix(int dim, const std::vector<double>& angles,
                                    const std::vector<double>& phases);

LinearCircuit compose_from_givens(const GivensParameterization& params);
GivensParameterization decompose_to_givens(const LinearCircuit& circuit);

/// Seed-deterministic Haar-like random unitary (Ginibre + QR with the
/// phase-of-R normalization); identical output for identical seeds on any
/// platform.
LinearCircuit haar_random(int dim, std::uint64_t seed);

/// Portable deterministic RNG used for haar_random and the search restarts:
/// mt19937_64 drawn as 53-bit uniforms plus Box-Muller normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();  // [0, 1)
  double normal();
  std::uint64_t raw();

 private:
  std::uint64_t s_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dephaselab
