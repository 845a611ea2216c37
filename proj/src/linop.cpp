#include "dephaselab/linop.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dephaselab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0) y += kTwoPi;
  if (y >= kTwoPi) y = 0.0;
  return y;
}

}  // namespace

double unitarity_deviation(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::MatrixXcd g =
      m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

LinearCircuit validate_unitary(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("validate_unitary: matrix must be square");
  }
  const double dev = unitarity_deviation(m);
  if (!(dev <= tol)) {
    throw std::invalid_argument("validate_unitary: unitarity violation, max deviation " +
                                std::to_string(dev));
  }
  return LinearCircuit(m);
}

PureState transform(const LinearCircuit& circuit, const PureState& state) {
  const int n = state.n_modes();
  if (circuit.dim() != n) {
    throw std::invalid_argument("transform: circuit dim != state modes");
  }
  const Eigen::MatrixXcd& u = circuit.matrix();

  PureState::TermMap out;
  const FockPattern vacuum(std::vector<int>(static_cast<size_t>(n), 0));
  for (const auto& [pattern, amp] : state.terms()) {
    double fact = 1.0;
    for (int j = 0; j < n; ++j) fact *= factorial(pattern[j]);
    PureState::TermMap cur;
    cur[vacuum] = amp / std::sqrt(fact);
    // adag_j -> sum_i U(i,j) adag_i, applied once per photon of the pattern.
    for (int j = 0; j < n; ++j) {
      for (int rep = 0; rep < pattern[j]; ++rep) {
        PureState::TermMap next;
        for (const auto& [q, c] : cur) {
          for (int i = 0; i < n; ++i) {
            const Complex uij = u(i, j);
            if (uij == Complex(0.0, 0.0)) continue;
            next[q.raised(i)] +=
                c * uij * std::sqrt(static_cast<double>(q[i] + 1));
          }
        }
        cur = std::move(next);
      }
    }
    for (const auto& [q, c] : cur) out[q] += c;
  }
  return PureState::from_terms(n, std::move(out),
                               state.truncation_deficit());
}

PureState embed_with_vacuum(const PureState& state, int extra_modes) {
  if (extra_modes < 0) {
    throw std::invalid_argument("embed_with_vacuum: extra_modes < 0");
  }
  if (extra_modes == 0) return state;
  PureState::TermMap out;
  for (const auto& [p, a] : state.terms()) {
    std::vector<int> occ = p.occupations();
    occ.insert(occ.end(), static_cast<size_t>(extra_modes), 0);
    out[FockPattern(std::move(occ))] = a;
  }
  return PureState::from_terms(state.n_modes() + extra_modes, std::move(out),
                               state.truncation_deficit());
}

LinearCircuit embed_with_vacuum(const LinearCircuit& circuit,
                                int extra_modes) {
  if (extra_modes < 0) {
    throw std::invalid_argument("embed_with_vacuum: extra_modes < 0");
  }
  const int n = circuit.dim();
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n + extra_modes, n + extra_modes);
  m.topLeftCorner(n, n) = circuit.matrix();
  return validate_unitary(m);
}

void GivensParameterization::validate() const {
  if (dim < 1) throw std::invalid_argument("GivensParameterization: dim < 1");
  const size_t k = static_cast<size_t>(dim) * (dim - 1) / 2;
  if (angles.size() != k || phases.size() != k + static_cast<size_t>(dim)) {
    throw std::invalid_argument(
        "GivensParameterization: parameter counts do not match dim");
  }
  for (double t : angles) {
    if (!(t >= 0.0 && t <= std::numbers::pi / 2 + 1e-12)) {
      throw std::invalid_argument(
          "GivensParameterization: angle outside [0, pi/2]");
    }
  }
  for (double p : phases) {
    if (!(p >= 0.0 && p < kTwoPi + 1e-12)) {
      throw std::invalid_argument(
          "GivensParameterization: phase outside [0, 2pi)");
    }
  }
}

std::vector<std::pair<int, int>> givens_pair_schedule(int dim) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(dim) * (dim - 1) / 2);
  for (int i = dim - 1; i >= 1; --i) {
    for (int j = 0; j < i; ++j) pairs.emplace_back(j, j + 1);
  }
  return pairs;
}

Eigen::MatrixXcd givens_mesh_matrix(int dim, const std::vector<double>& angles,
                                    const std::vector<double>& phases) {
  const auto pairs = givens_pair_schedule(dim);
  const size_t k = pairs.size();
  if (angles.size() != k || phases.size() != k + static_cast<size_t>(dim)) {
    throw std::invalid_argument("givens_mesh_matrix: bad parameter counts");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  // U = D * T_{K-1} * ... * T_0 with the 2x2 block of T on (p, q):
  //   [ cos t          -sin t e^{i phi} ]
  //   [ sin t e^{-iphi} cos t           ]
  for (size_t idx = 0; idx < k; ++idx) {
    const auto [p, q] = pairs[idx];
    const double c = std::cos(angles[idx]);
    const double s = std::sin(angles[idx]);
    const Complex e = std::polar(1.0, phases[idx]);
    const Eigen::RowVectorXcd rp = m.row(p);
    const Eigen::RowVectorXcd rq = m.row(q);
    m.row(p) = c * rp - s * e * rq;
    m.row(q) = s * std::conj(e) * rp + c * rq;
  }
  for (int r = 0; r < dim; ++r) {
    m.row(r) *= std::polar(1.0, phases[k + static_cast<size_t>(r)]);
  }
  return m;
}

LinearCircuit compose_from_givens(const GivensParameterization& params) {
  params.validate();
  return validate_unitary(
      givens_mesh_matrix(params.dim, params.angles, params.phases));
}

GivensParameterization decompose_to_givens(const LinearCircuit& circuit) {
  const int n = circuit.dim();
  Eigen::MatrixXcd v = circuit.matrix();
  GivensParameterization out;
  out.dim = n;
  // Null below-diagonal entries bottom-up by right-multiplying T^dag on
  // column pairs (j, j+1); what remains is the diagonal of output phases.
  for (int i = n - 1; i >= 1; --i) {
    for (int j = 0; j < i; ++j) {
      const Complex target = v(i, j);
      const Complex pivot = v(i, j + 1);
      const double rt = std::abs(target);
      const double rp = std::abs(pivot);
      double theta = 0.0;
      double phi = 0.0;
      if (rt > 0.0) {
        theta = std::atan2(rt, rp);
        phi = (rp > 0.0 ? std::arg(pivot) : 0.0) - std::arg(target);
      }
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex e = std::polar(1.0, phi);
      const Eigen::VectorXcd cj = v.col(j);
      const Eigen::VectorXcd cq = v.col(j + 1);
      v.col(j) = c * cj - s * std::conj(e) * cq;
      v.col(j + 1) = s * e * cj + c * cq;
      out.angles.push_back(theta);
      out.phases.push_back(wrap_2pi(phi));
    }
  }
  for (int r = 0; r < n; ++r) {
    out.phases.push_back(wrap_2pi(std::arg(v(r, r))));
  }
  return out;
}

Rng::Rng(std::uint64_t seed) : s_(seed) {}

std::uint64_t Rng::raw() {
  // splitmix64 step; portable and fully deterministic.
  s_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 =
      (static_cast<double>(raw() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(kTwoPi * u2);
  return r * std::cos(kTwoPi * u2);
}

LinearCircuit haar_random(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("haar_random: dim < 1");
  Rng rng(seed);
  Eigen::MatrixXcd z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      z(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double m = std::abs(d);
    q.col(k) *= (m > 0.0 ? d / m : Complex(1.0, 0.0));
  }
  return validate_unitary(q);
}

}  // namespace dephaselab
