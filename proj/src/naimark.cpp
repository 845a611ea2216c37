#include "dephaselab/naimark.hpp"

#include <cmath>
#include <stdexcept>

namespace dephaselab {

std::vector<double> PovmSet::born_probabilities(
    const Eigen::VectorXcd& signal) const {
  if (signal.size() != signal_dim) {
    throw std::invalid_argument("born_probabilities: wrong signal dimension");
  }
  std::vector<double> probs;
  probs.reserve(elements.size());
  for (const auto& u : elements) {
    probs.push_back(std::norm(u.dot(signal)));  // Eigen dot conjugates u
  }
  return probs;
}

double povm_completeness_deviation(
    const std::vector<Eigen::VectorXcd>& elements, int signal_dim) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(signal_dim, signal_dim);
  for (const auto& u : elements) sum += u * u.adjoint();
  return (sum - Eigen::MatrixXcd::Identity(signal_dim, signal_dim))
      .cwiseAbs()
      .maxCoeff();
}

PovmSet validate_povm(const std::vector<Eigen::VectorXcd>& elements,
                      int signal_dim, double tol) {
  if (signal_dim < 1 || elements.empty()) {
    throw std::invalid_argument("validate_povm: empty POVM or bad dimension");
  }
  for (const auto& u : elements) {
    if (u.size() != signal_dim) {
      throw std::invalid_argument("validate_povm: element length != signal_dim");
    }
  }
  const double dev = povm_completeness_deviation(elements, signal_dim);
  if (!(dev <= tol)) {
    throw std::invalid_argument(
        "validate_povm: completeness violation, max deviation " +
        std::to_string(dev));
  }
  PovmSet set;
  set.signal_dim = signal_dim;
  set.total_dim = static_cast<int>(elements.size());
  set.elements = elements;
  return set;
}

std::vector<Eigen::VectorXcd> NaimarkDilation::extensions() const {
  const int n = povm.signal_dim;
  const int total = povm.total_dim;
  std::vector<Eigen::VectorXcd> out;
  out.reserve(static_cast<size_t>(total));
  for (int mu = 0; mu < total; ++mu) {
    out.push_back(unitary.row(mu).tail(total - n).transpose());
  }
  return out;
}

LinearCircuit NaimarkDilation::circuit() const {
  return validate_unitary(unitary.conjugate());
}

NaimarkDilation naimark_unitary(const PovmSet& povm) {
  const int n = povm.signal_dim;
  const int total = povm.total_dim;
  if (static_cast<int>(povm.elements.size()) != total || total < n) {
    throw std::invalid_argument("naimark_unitary: dimension inconsistency");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(total, total);
  for (int mu = 0; mu < total; ++mu) {
    u.block(mu, 0, 1, n) = povm.elements[static_cast<size_t>(mu)].transpose();
  }
  // Completeness makes the first n columns orthonormal already.
  int col = n;
  for (int k = 0; k < total && col < total; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total);
    v(k) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < col; ++j) {
        v -= u.col(j) * u.col(j).dot(v);
      }
    }
    const double norm = v.norm();
    if (norm > 1e-8) {
      u.col(col) = v / norm;
      ++col;
    }
  }
  if (col < total) {
    throw std::runtime_error("naimark_unitary: completion failure");
  }
  NaimarkDilation d;
  d.povm = povm;
  d.unitary = u;
  validate_unitary(d.unitary);  // rows orthonormal by construction
  return d;
}

UsdPovm usd_povm(double alpha, double beta) {
  if (!(alpha > beta && beta > 0.0)) {
    throw std::invalid_argument("usd_povm: requires alpha > beta > 0");
  }
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9) {
    throw std::invalid_argument("usd_povm: requires alpha^2 + beta^2 = 1");
  }
  const double ratio = beta / alpha;
  const double root = std::sqrt(1.0 - ratio * ratio);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Eigen::VectorXcd u1(2), u2(2), u3(2);
  u1 << inv_sqrt2 * ratio, inv_sqrt2;
  u2 << inv_sqrt2 * ratio, -inv_sqrt2;
  u3 << root, 0.0;
  Eigen::VectorXcd n1(1), n2(1), n3(1);
  n1 << inv_sqrt2 * root;
  n2 << inv_sqrt2 * root;
  n3 << -ratio;

  UsdPovm out;
  out.povm = validate_povm({u1, u2, u3}, 2);
  out.extensions = {n1, n2, n3};
  out.prob_fail = alpha * alpha - beta * beta;
  out.prob_success = 2.0 * beta * beta;

  Eigen::MatrixXcd w(3, 3);
  w.row(0) << u1(0), u1(1), n1(0);
  w.row(1) << u2(0), u2(1), n2(0);
  w.row(2) << u3(0), u3(1), n3(0);
  out.dilation.povm = out.povm;
  out.dilation.unitary = w;
  validate_unitary(w);

  // Unambiguity and optimality directly from the construction.
  Eigen::VectorXcd chi_plus(2), chi_minus(2);
  chi_plus << alpha, beta;
  chi_minus << alpha, -beta;
  const double err_plus = std::norm(u2.dot(chi_plus));
  const double err_minus = std::norm(u1.dot(chi_minus));
  const double succ = std::norm(u1.dot(chi_plus)) / 2.0 +
                      std::norm(u2.dot(chi_minus)) / 2.0;
  if (err_plus > 1e-12 || err_minus > 1e-12 ||
      std::abs(succ - out.prob_success) > 1e-10) {
    throw std::runtime_error("usd_povm: construction self-check failed");
  }
  return out;
}

std::vector<double> simulate_povm(const NaimarkDilation& dilation,
                                  const PureState& input) {
  const int total = dilation.povm.total_dim;
  const int n = dilation.povm.signal_dim;
  if (input.n_modes() != total) {
    throw std::invalid_argument(
        "simulate_povm: input must live on all N rails (pad with vacuum)");
  }
  for (const auto& [p, a] : input.terms()) {
    if (p.total() != 1) {
      throw std::invalid_argument("simulate_povm: multi-photon input");
    }
    for (int m = n; m < total; ++m) {
      if (p[m] != 0 && std::abs(a) > 1e-12) {
        throw std::invalid_argument(
            "simulate_povm: signal amplitude outside the first n rails");
      }
    }
  }
  const PureState out = transform(dilation.circuit(), input);
  std::vector<double> probs(static_cast<size_t>(total), 0.0);
  for (int mu = 0; mu < total; ++mu) {
    std::vector<int> occ(static_cast<size_t>(total), 0);
    occ[static_cast<size_t>(mu)] = 1;
    probs[static_cast<size_t>(mu)] =
        std::norm(out.amplitude(FockPattern(std::move(occ))));
  }
  return probs;
}

}  // namespace dephaselab
