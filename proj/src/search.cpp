#include "dephaselab/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace dephaselab {

namespace {

constexpr double kOptimalTol = 1e-9;

double bhattacharyya(const PureState& a, const PureState& b) {
  double s = 0.0;
  for (const auto& [p, amp] : a.terms()) {
    const Complex other = b.amplitude(p);
    if (other == Complex(0.0, 0.0)) continue;
    s += std::abs(amp) * std::abs(other);
  }
  return s;
}

double failure_probability(const PureState& a, const PureState& b,
                           double tol) {
  double s = 0.0;
  for (const auto& [p, amp] : a.terms()) {
    if (std::abs(amp) <= tol) continue;
    const Complex other = b.amplitude(p);
    if (std::abs(other) <= tol) continue;
    s += 0.5 * (std::norm(amp) + std::norm(other));
  }
  return s;
}

// Standard Nelder-Mead; terminates when the simplex objective spread drops
// below tol or the iteration budget runs out.
struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, double tol,
                             int budget) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (size_t i = 0; i < n; ++i) xs[i + 1][i] += step;
  for (size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  NelderMeadResult res;
  int iters = 0;
  std::vector<size_t> idx(n + 1);
  while (iters < budget) {
    ++iters;
    for (size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    const size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    if (fs[worst] - fs[best] < tol) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
    }
    for (size_t d = 0; d < n; ++d) centroid[d] /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> y(n);
      for (size_t d = 0; d < n; ++d) {
        y[d] = centroid[d] + t * (xs[worst][d] - centroid[d]);
      }
      return y;
    };
    std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[best]) {
      std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = std::move(xe);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = std::move(xr);
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
      } else {
        for (size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (size_t d = 0; d < n; ++d) {
            xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
          }
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  size_t best = 0;
  for (size_t i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  res.x = xs[best];
  res.f = fs[best];
  res.iterations = iters;
  return res;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
  return rng.raw();
}

}  // namespace

void SearchConfig::validate() const {
  if (n_modes < 1 || max_restarts < 1 || iteration_budget < 1 ||
      !(convergence_tol > 0.0) || !(classification_tol > 0.0)) {
    throw std::invalid_argument("SearchConfig: invalid field");
  }
}

LinearCircuit fifty_fifty() {
  Eigen::MatrixXcd h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return validate_unitary(h);
}

SearchResult minimize_failure(const PureState& plus, const PureState& minus,
                              const SearchConfig& config, int threads) {
  config.validate();
  if (plus.n_modes() != minus.n_modes()) {
    throw std::invalid_argument("minimize_failure: mode-count mismatch");
  }
  if (config.n_modes < plus.n_modes()) {
    throw std::invalid_argument("minimize_failure: n_modes below state modes");
  }
  if (!plus.normalized() || !minus.normalized()) {
    throw std::invalid_argument("minimize_failure: unnormalized inputs");
  }
  const int n = config.n_modes;
  const PureState plus_e = embed_with_vacuum(plus, n - plus.n_modes());
  const PureState minus_e = embed_with_vacuum(minus, n - minus.n_modes());
  const double overlap = std::abs(inner_product(plus_e, minus_e));
  if (overlap <= 1e-10) {
    throw std::invalid_argument(
        "minimize_failure: orthogonal inputs have no USD optimum to match");
  }

  const size_t n_angles = static_cast<size_t>(n) * (n - 1) / 2;
  const size_t n_params = n_angles + n_angles + static_cast<size_t>(n);

  auto surrogate = [&](const std::vector<double>& x) {
    const std::vector<double> angles(x.begin(), x.begin() + n_angles);
    const std::vector<double> phases(x.begin() + n_angles, x.end());
    const Eigen::MatrixXcd m = givens_mesh_matrix(n, angles, phases);
    const LinearCircuit c = validate_unitary(m, 1e-8);
    return bhattacharyya(transform(c, plus_e), transform(c, minus_e));
  };

  std::vector<RestartOutcome> trace(static_cast<size_t>(config.max_restarts));
  std::vector<std::vector<double>> endpoints(
      static_cast<size_t>(config.max_restarts));

  auto run_restart = [&](int r) {
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(r)));
    std::vector<double> x0(n_params, 0.0);
    if (r > 0) {  // restart 0 probes the identity mesh
      for (size_t i = 0; i < n_angles; ++i) {
        x0[i] = rng.uniform() * std::numbers::pi / 2;
      }
      for (size_t i = n_angles; i < n_params; ++i) {
        x0[i] = rng.uniform() * 2.0 * std::numbers::pi;
      }
    }
    NelderMeadResult nm = nelder_mead(surrogate, std::move(x0), 0.4,
                                      config.convergence_tol,
                                      config.iteration_budget);
    const std::vector<double> angles(nm.x.begin(), nm.x.begin() + n_angles);
    const std::vector<double> phases(nm.x.begin() + n_angles, nm.x.end());
    const LinearCircuit c =
        validate_unitary(givens_mesh_matrix(n, angles, phases), 1e-8);
    RestartOutcome out;
    out.restart = r;
    out.surrogate = nm.f;
    out.objective = failure_probability(transform(c, plus_e),
                                        transform(c, minus_e),
                                        config.classification_tol);
    out.iterations = nm.iterations;
    out.converged = nm.converged;
    trace[static_cast<size_t>(r)] = out;
    endpoints[static_cast<size_t>(r)] = std::move(nm.x);
  };

  int n_workers = threads > 0 ? threads
                              : static_cast<int>(
                                    std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, config.max_restarts));
  if (n_workers == 1) {
    for (int r = 0; r < config.max_restarts; ++r) run_restart(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < config.max_restarts;
             r = next.fetch_add(1)) {
          run_restart(r);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int r = 1; r < config.max_restarts; ++r) {
    const auto& a = trace[static_cast<size_t>(r)];
    const auto& b = trace[static_cast<size_t>(best)];
    if (a.objective < b.objective ||
        (a.objective == b.objective && a.surrogate < b.surrogate)) {
      best = r;
    }
  }

  const auto& bx = endpoints[static_cast<size_t>(best)];
  const std::vector<double> angles(bx.begin(), bx.begin() + n_angles);
  const std::vector<double> phases(bx.begin() + n_angles, bx.end());
  SearchResult result;
  result.best_circuit =
      validate_unitary(givens_mesh_matrix(n, angles, phases), 1e-8);
  result.overlap_abs = overlap;
  result.trace = trace;
  result.budget_exhausted = !trace[static_cast<size_t>(best)].converged;
  result.report = usd_report(result.best_circuit, plus_e, minus_e, 0.5,
                             config.classification_tol);
  result.best_objective = result.report.prob_fail_circuit;
  result.optimal = result.best_objective - overlap <= kOptimalTol;
  int fixed_n = 0;
  const bool fixed = plus_e.has_fixed_photon_number(&fixed_n) &&
                     minus_e.has_fixed_photon_number(&fixed_n);
  const int max_order =
      fixed ? std::min(fixed_n, 4)
            : std::min(std::max(plus_e.max_total_photons(),
                                minus_e.max_total_photons()),
                       4);
  result.hierarchy = usd_hierarchy(result.best_circuit, plus_e, minus_e,
                                   std::max(1, max_order));
  return result;
}

std::optional<std::pair<double, double>> detect_toy_form(
    const PureState& plus, const PureState& minus) {
  if (plus.n_modes() != minus.n_modes() || plus.n_modes() < 2) {
    return std::nullopt;
  }
  std::vector<int> occ20(static_cast<size_t>(plus.n_modes()), 0);
  occ20[0] = 2;
  std::vector<int> occ11(static_cast<size_t>(plus.n_modes()), 0);
  occ11[0] = 1;
  occ11[1] = 1;
  const FockPattern p20{occ20}, p11{occ11};
  if (plus.term_count() != 2 || minus.term_count() != 2) return std::nullopt;
  const Complex a = plus.amplitude(p20);
  const Complex b = plus.amplitude(p11);
  const Complex am = minus.amplitude(p20);
  const Complex bm = minus.amplitude(p11);
  const double eps = 1e-12;
  if (std::abs(a.imag()) > eps || std::abs(b.imag()) > eps ||
      std::abs(am.imag()) > eps || std::abs(bm.imag()) > eps) {
    return std::nullopt;
  }
  if (a.real() <= 0 || b.real() <= 0) return std::nullopt;
  if (std::abs(am.real() - a.real()) > eps ||
      std::abs(bm.real() + b.real()) > eps) {
    return std::nullopt;
  }
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-9) return std::nullopt;
  return std::make_pair(a.real(), b.real());
}

ToyFeasibility toy_feasibility(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) ||
      std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "toy_feasibility: requires alpha, beta > 0 with alpha^2 + beta^2 = 1");
  }
  ToyFeasibility out;
  out.alpha = alpha;
  out.beta = beta;
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  const double eps = 1e-12;
  const bool infeasible = (a2 >= b2 - eps) && (a2 < 2.0 * b2 - eps);
  out.feasible_fixed_array = !infeasible;
  if (infeasible) {
    out.obstruction =
        "first/second-order sign conditions nu.a >= 0 and nu.b >= 0 with "
        "a = (2a^2-b^2, -b^2), b = (a^2, -2b^2) cannot hold for every row of "
        "a unitary when b^2 <= a^2 < 2b^2";
  } else if (std::abs(a2 - 2.0 * b2) <= 1e-9) {
    out.witness = fifty_fifty();
  }
  return out;
}

std::vector<AncillaSweepEntry> ancilla_sweep(
    const PureState& signal_plus, const PureState& signal_minus,
    const std::vector<std::pair<std::string, PureState>>& ancillas,
    const SearchConfig& config, int threads) {
  std::vector<AncillaSweepEntry> rows;
  rows.reserve(ancillas.size());
  for (const auto& [label, ancilla] : ancillas) {
    AncillaSweepEntry entry;
    entry.label = label;
    const PureState plus = tensor(signal_plus, ancilla);
    const PureState minus = tensor(signal_minus, ancilla);
    SearchConfig cfg = config;
    cfg.n_modes = std::max(cfg.n_modes, plus.n_modes());
    entry.n_modes = cfg.n_modes;
    entry.result = minimize_failure(plus, minus, cfg, threads);
    rows.push_back(std::move(entry));
  }
  return rows;
}

}  // namespace dephaselab
