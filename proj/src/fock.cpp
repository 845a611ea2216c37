#include "dephaselab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dephaselab {

FockPattern::FockPattern(std::vector<int> occupations)
    : occ_(std::move(occupations)) {
  if (occ_.empty()) {
    throw std::invalid_argument("FockPattern: at least one mode required");
  }
  for (int n : occ_) {
    if (n < 0) {
      throw std::invalid_argument("FockPattern: negative occupation");
    }
  }
  total_ = std::accumulate(occ_.begin(), occ_.end(), 0);
}

FockPattern FockPattern::raised(int mode) const {
  std::vector<int> occ = occ_;
  occ[static_cast<size_t>(mode)] += 1;
  return FockPattern(std::move(occ));
}

std::pair<FockPattern, bool> FockPattern::lowered(int mode) const {
  if (occ_[static_cast<size_t>(mode)] == 0) return {*this, false};
  std::vector<int> occ = occ_;
  occ[static_cast<size_t>(mode)] -= 1;
  return {FockPattern(std::move(occ)), true};
}

FockPattern FockPattern::restricted(const std::vector<int>& modes) const {
  std::vector<int> occ;
  occ.reserve(modes.size());
  for (int m : modes) occ.push_back(occ_[static_cast<size_t>(m)]);
  return FockPattern(std::move(occ));
}

std::string FockPattern::str() const {
  std::ostringstream out;
  for (size_t i = 0; i < occ_.size(); ++i) {
    if (i) out << ' ';
    out << occ_[i];
  }
  return out.str();
}

void ComplexTolerance::validate() const {
  if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol) || !(phase_tol >= 0.0) ||
      !std::isfinite(phase_tol)) {
    throw std::invalid_argument(
        "ComplexTolerance: tolerances must be finite and non-negative");
  }
}

double factorial(int n) {
  static const double kTable[] = {
      1.,
      1.,
      2.,
      6.,
      24.,
      120.,
      720.,
      5040.,
      40320.,
      362880.,
      3628800.,
      39916800.,
      479001600.,
      6227020800.,
      87178291200.,
      1307674368000.,
      20922789888000.,
      355687428096000.,
      6402373705728000.,
      121645100408832000.,
      2432902008176640000.};
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  if (n <= 20) return kTable[n];
  double r = kTable[20];
  for (int k = 21; k <= n; ++k) r *= k;
  return r;
}

PureState PureState::from_terms(int n_modes, TermMap terms, double deficit) {
  if (n_modes < 1) {
    throw std::invalid_argument("PureState: n_modes must be positive");
  }
  double norm2 = 0.0;
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->first.n_modes() != n_modes) {
      throw std::invalid_argument("PureState: pattern length != n_modes");
    }
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms.erase(it);
    } else {
      norm2 += std::norm(it->second);
      ++it;
    }
  }
  return PureState(n_modes, std::move(terms), norm2, deficit);
}

double PureState::norm() const { return std::sqrt(norm2_); }

bool PureState::normalized() const {
  return std::abs(norm2_ - 1.0) <= kNormTol;
}

Complex PureState::amplitude(const FockPattern& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

int PureState::max_total_photons() const {
  int best = 0;
  for (const auto& [p, a] : terms_) best = std::max(best, p.total());
  return best;
}

bool PureState::has_fixed_photon_number(int* n) const {
  if (terms_.empty()) return false;
  const int total = terms_.begin()->first.total();
  for (const auto& [p, a] : terms_) {
    if (p.total() != total) return false;
  }
  if (n) *n = total;
  return true;
}

PureState build_pure_state(
    int n_modes, const std::vector<std::pair<FockPattern, Complex>>& terms) {
  PureState::TermMap merged;
  for (const auto& [pattern, amp] : terms) {
    if (pattern.n_modes() != n_modes) {
      throw std::invalid_argument(
          "build_pure_state: pattern length != n_modes");
    }
    merged[pattern] += amp;
  }
  PureState state = PureState::from_terms(n_modes, std::move(merged));
  if (state.is_zero()) {
    throw std::invalid_argument("build_pure_state: all-zero state");
  }
  if (state.norm2() > 1.0 + PureState::kNormTol) {
    throw std::invalid_argument("build_pure_state: squared norm exceeds 1");
  }
  return state;
}

Complex inner_product(const PureState& bra, const PureState& ket) {
  if (bra.n_modes() != ket.n_modes()) {
    throw std::invalid_argument("inner_product: mode-count mismatch");
  }
  const auto& small = bra.term_count() <= ket.term_count() ? bra : ket;
  const auto& large = bra.term_count() <= ket.term_count() ? ket : bra;
  const bool small_is_bra = &small == &bra;
  Complex sum(0.0, 0.0);
  for (const auto& [p, a] : small.terms()) {
    const Complex b = large.amplitude(p);
    if (b == Complex(0.0, 0.0)) continue;
    sum += small_is_bra ? std::conj(a) * b : std::conj(b) * a;
  }
  return sum;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState::TermMap out;
  for (const auto& [pa, ca] : a.terms()) {
    for (const auto& [pb, cb] : b.terms()) {
      std::vector<int> occ = pa.occupations();
      occ.insert(occ.end(), pb.occupations().begin(), pb.occupations().end());
      out[FockPattern(std::move(occ))] = ca * cb;
    }
  }
  const double deficit =
      1.0 - (1.0 - a.truncation_deficit()) * (1.0 - b.truncation_deficit());
  return PureState::from_terms(a.n_modes() + b.n_modes(), std::move(out),
                               deficit);
}

namespace {

// Single-mode truncated coherent amplitudes e^{-|g|^2/2} g^n / sqrt(n!),
// cut at the smallest n_max with Poisson tail mass below tail_tol.
std::vector<Complex> coherent_amplitudes(Complex g, double tail_tol) {
  const double lambda = std::norm(g);
  if (lambda == 0.0) return {Complex(1.0, 0.0)};
  std::vector<double> pmf;
  double p = std::exp(-lambda);
  double total = 0.0;
  // Poisson mass beyond ~mean + 60 stddev is far below any usable tail_tol.
  const int hard_cap = static_cast<int>(lambda + 60.0 * std::sqrt(lambda) + 80);
  for (int n = 0; n <= hard_cap; ++n) {
    pmf.push_back(p);
    total += p;
    p *= lambda / (n + 1);
  }
  int n_max = hard_cap;
  double tail = 1.0 - total;  // beyond the hard cap; effectively zero
  for (int n = hard_cap; n >= 1; --n) {
    if (tail + pmf[static_cast<size_t>(n)] >= tail_tol) break;
    tail += pmf[static_cast<size_t>(n)];
    n_max = n - 1;
  }
  std::vector<Complex> amps(static_cast<size_t>(n_max) + 1);
  Complex a = std::exp(-lambda / 2.0);
  for (int n = 0; n <= n_max; ++n) {
    amps[static_cast<size_t>(n)] = a;
    a *= g / std::sqrt(static_cast<double>(n + 1));
  }
  return amps;
}

}  // namespace

PureState coherent_product_state(const std::vector<Complex>& alphas,
                                 double tail_tol) {
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
    throw std::invalid_argument(
        "coherent_product_state: tail_tol must be in (0, 1)");
  }
  if (alphas.empty()) {
    throw std::invalid_argument("coherent_product_state: no modes");
  }
  std::vector<std::vector<Complex>> per_mode;
  per_mode.reserve(alphas.size());
  for (Complex g : alphas) per_mode.push_back(coherent_amplitudes(g, tail_tol));

  PureState::TermMap out;
  std::vector<int> idx(alphas.size(), 0);
  while (true) {
    Complex amp(1.0, 0.0);
    for (size_t m = 0; m < idx.size(); ++m) {
      amp *= per_mode[m][static_cast<size_t>(idx[m])];
    }
    out[FockPattern(idx)] += amp;
    size_t m = 0;
    for (; m < idx.size(); ++m) {
      if (++idx[m] < static_cast<int>(per_mode[m].size())) break;
      idx[m] = 0;
    }
    if (m == idx.size()) break;
  }
  double kept = 1.0;
  for (const auto& amps : per_mode) {
    double s = 0.0;
    for (Complex a : amps) s += std::norm(a);
    kept *= s;
  }
  return PureState::from_terms(static_cast<int>(alphas.size()), std::move(out),
                               1.0 - kept);
}

PureState apply_lowering(const PureState& state,
                         const std::vector<int>& modes) {
  for (int m : modes) {
    if (m < 0 || m >= state.n_modes()) {
      throw std::invalid_argument("apply_lowering: mode index out of range");
    }
  }
  PureState::TermMap cur(state.terms().begin(), state.terms().end());
  for (int m : modes) {
    PureState::TermMap next;
    for (const auto& [p, a] : cur) {
      const int n = p[m];
      if (n == 0) continue;
      next[p.lowered(m).first] += a * std::sqrt(static_cast<double>(n));
    }
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return PureState::from_terms(state.n_modes(), std::move(cur));
}

}  // namespace dephaselab
