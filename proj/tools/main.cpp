// dephase-lab: feasibility checks and simulation for implementing POVMs --
// in particular optimal unambiguous discrimination of two pure states --
// with passive linear optics and photon counting.
//
// Exit status: 0 = success / verdict positive, 1 = computation succeeded but
// the verdict is negative (hierarchy violated, circuit not optimal, optimum
// not found), 2 = invalid input.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dephaselab/coherent_demo.hpp"
#include "dephaselab/io.hpp"

namespace dl = dephaselab;
namespace io = dephaselab::io;

namespace {

constexpr int kOk = 0;
constexpr int kVerdictNegative = 1;
constexpr int kInputError = 2;

int thread_cap() {
  const char* env = std::getenv("DEPHASE_LAB_THREADS");
  if (!env) return 0;  // machine parallelism
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

const char* kSchemaFooter =
    "File schemas (JSON):\n"
    "  state   {\"n_modes\": int, \"terms\": [{\"pattern\": [int...], "
    "\"re\": f, \"im\": f}]}\n"
    "          or {\"coherent\": {\"alphas\": [[re,im]...], \"tail_tol\": f}}\n"
    "  circuit {\"dim\": int, \"rows\": [[[re,im], ...] ...]}  (convention "
    "c_j = sum_i U_ji a_i)\n"
    "  givens  {\"dim\": int, \"angles\": [...], \"phases\": [...]}\n"
    "  povm    {\"signal_dim\": int, \"elements\": [{\"vec\": [[re,im]...]}]}\n"
    "  config  {\"n_modes\", \"max_restarts\", \"seed\", \"iteration_budget\", "
    "\"convergence_tol\", \"classification_tol\"}\n"
    "Mode indices in flags and reports are 1-based. DEPHASE_LAB_THREADS caps "
    "parallel search restarts.\n";

std::vector<int> parse_modes_1based(const std::string& list, int n_modes) {
  std::vector<int> modes;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    const int m = std::stoi(token);
    if (m < 1 || m > n_modes) {
      throw std::invalid_argument("mode index out of range: " + token);
    }
    modes.push_back(m - 1);
  }
  return modes;
}

int cmd_transform(const std::string& state_file, const std::string& circuit_file,
                  const std::string& out_file) {
  const dl::PureState state = io::read_state_file(state_file);
  const dl::LinearCircuit circuit = io::read_circuit_file(circuit_file);
  const dl::PureState out = dl::transform(circuit, state);
  io::write_text_file(out_file, io::state_to_json(out).dump(2) + "\n");
  std::cout << "norm " << out.norm() << ", " << out.term_count()
            << " patterns -> " << out_file << "\n";
  return kOk;
}

int cmd_dephase(const std::string& state_file, const std::string& out_file,
                const std::string& circuit_file, const std::string& modes) {
  dl::PureState state = io::read_state_file(state_file);
  if (!circuit_file.empty()) {
    state = dl::transform(io::read_circuit_file(circuit_file), state);
  }
  if (modes.empty()) {
    const dl::DiagonalMixture mix = dl::dephase_total(state);
    io::write_text_file(out_file, io::distribution_csv(mix));
    std::cout << mix.weights.size() << " patterns, total weight "
              << mix.total_weight() << " -> " << out_file << "\n";
  } else {
    const dl::BlockMixture mix =
        dl::dephase_partial(state, parse_modes_1based(modes, state.n_modes()));
    io::write_text_file(out_file, io::block_mixture_to_json(mix).dump(2) + "\n");
    std::cout << mix.blocks.size() << " blocks, total probability "
              << mix.total_probability() << " -> " << out_file << "\n";
  }
  return kOk;
}

int cmd_classify(const std::string& plus_file, const std::string& minus_file,
                 const std::string& circuit_file, double tol,
                 const std::string& out_file) {
  const dl::LinearCircuit circuit = io::read_circuit_file(circuit_file);
  const dl::PureState plus_h =
      dl::transform(circuit, io::read_state_file(plus_file));
  const dl::PureState minus_h =
      dl::transform(circuit, io::read_state_file(minus_file));
  const dl::PatternClassification cls =
      dl::classify_patterns(plus_h, minus_h, tol);
  std::cout << "conclusive +: " << cls.conclusive_plus.size()
            << ", conclusive -: " << cls.conclusive_minus.size()
            << ", ambiguous: " << cls.ambiguous.size() << "\n";
  for (const auto& p : cls.ambiguous) {
    std::cout << "  ambiguous [" << p.str() << "]\n";
  }
  if (!out_file.empty()) {
    io::write_text_file(out_file,
                        io::classification_to_json(cls).dump(2) + "\n");
  }
  return kOk;
}

int cmd_check(const std::string& plus_file, const std::string& minus_file,
              const std::string& circuit_file, const std::string& mode,
              int max_order, const std::string& out_file) {
  const dl::LinearCircuit circuit = io::read_circuit_file(circuit_file);
  const dl::PureState plus = io::read_state_file(plus_file);
  const dl::PureState minus = io::read_state_file(minus_file);
  const dl::PureState plus_h = dl::transform(circuit, plus);
  const dl::PureState minus_h = dl::transform(circuit, minus);

  int order = max_order;
  if (order <= 0) {
    int n = 0;
    order = (plus_h.has_fixed_photon_number(&n) &&
             minus_h.has_fixed_photon_number(&n))
                ? std::max(1, n)
                : 2;
  }
  const double overlap = std::abs(dl::inner_product(plus_h, minus_h));
  dl::ConditionReport rep;
  if (mode == "all") {
    rep = overlap <= 1e-10
              ? dl::orthogonal_hierarchy_transformed(plus_h, minus_h, order)
              : dl::usd_hierarchy_transformed(plus_h, minus_h, order);
  } else {
    const int j = std::stoi(mode);
    if (j < 1 || j > plus_h.n_modes()) {
      throw std::invalid_argument("check: --mode index out of range");
    }
    rep = dl::conditional_mode_check_transformed(plus_h, minus_h, j - 1,
                                                 order);
  }
  if (!out_file.empty()) {
    io::write_text_file(out_file, io::condition_report_csv(rep));
  }
  std::cout << (rep.kind == dl::HierarchyKind::kOrthogonalZero
                    ? "orthogonal hierarchy"
                    : "usd hierarchy")
            << (mode == "all" ? "" : " (conditional, mode " + mode + ")")
            << ": " << rep.entries.size() << " conditions up to order "
            << rep.max_order << ", " << (rep.pass ? "PASS" : "VIOLATED")
            << "\n";
  if (rep.sum_rule) {
    std::cout << "sum rule: " << (rep.sum_rule->ok ? "ok" : "violated")
              << "\n";
  }
  return rep.pass ? kOk : kVerdictNegative;
}

int cmd_usd(const std::string& plus_file, const std::string& minus_file,
            const std::string& circuit_file, double prior_plus, double tol,
            const std::string& out_file) {
  const dl::LinearCircuit circuit = io::read_circuit_file(circuit_file);
  const dl::PureState plus = io::read_state_file(plus_file);
  const dl::PureState minus = io::read_state_file(minus_file);
  const dl::UsdReport rep = dl::usd_report(circuit, plus, minus, prior_plus, tol);
  const dl::FidelityBoundsReport bounds =
      dl::check_fidelity_bounds(plus, minus, circuit, {}, rep.prob_fail_circuit);
  std::cout << "prob_fail " << rep.prob_fail_circuit << " (optimum "
            << rep.prob_fail_optimal << "), prob_success "
            << rep.prob_success_circuit << ", optimal "
            << (rep.optimal ? (*rep.optimal ? "yes" : "no") : "n/a (priors)")
            << "\n";
  std::cout << "fidelity bounds: F_in " << bounds.f_input << " <= F_deph "
            << bounds.f_dephased << " <= P_fail^2 "
            << bounds.prob_fail * bounds.prob_fail << " : "
            << (bounds.lower_ok && bounds.upper_ok ? "ok" : "violated")
            << "\n";
  if (!out_file.empty()) {
    io::json j = {{"usd_report", io::usd_report_to_json(rep)},
                  {"fidelity_bounds", io::fidelity_bounds_to_json(bounds)}};
    io::write_text_file(out_file, j.dump(2) + "\n");
  }
  return rep.optimal.value_or(false) ? kOk : kVerdictNegative;
}

int cmd_naimark(const std::string& povm_file, const std::string& out_circuit,
                const std::string& out_mesh,
                const std::vector<double>& usd_params) {
  dl::NaimarkDilation dilation;
  if (!usd_params.empty()) {
    const dl::UsdPovm usd = dl::usd_povm(usd_params[0], usd_params[1]);
    dilation = usd.dilation;
    std::cout << "usd povm for alpha=" << usd_params[0]
              << ", beta=" << usd_params[1] << ": prob_fail "
              << usd.prob_fail << ", prob_success " << usd.prob_success
              << "\n";
  } else {
    if (povm_file.empty()) {
      throw std::invalid_argument("naimark: need --povm or --usd");
    }
    dilation = dl::naimark_unitary(io::read_povm_file(povm_file));
  }
  const dl::LinearCircuit circuit = dilation.circuit();
  io::write_text_file(out_circuit,
                      io::circuit_to_json(circuit).dump(2) + "\n");
  std::cout << "dilation " << dilation.povm.total_dim << "x"
            << dilation.povm.total_dim << " (signal dim "
            << dilation.povm.signal_dim << ") -> " << out_circuit << "\n";
  if (!out_mesh.empty()) {
    io::write_text_file(
        out_mesh,
        io::givens_to_json(dl::decompose_to_givens(circuit)).dump(2) + "\n");
    std::cout << "mesh -> " << out_mesh << "\n";
  }
  return kOk;
}

int cmd_search(const std::string& plus_file, const std::string& minus_file,
               const std::string& config_file,
               const std::vector<std::string>& ancilla_files,
               const std::string& out_file, const std::string& out_csv) {
  const dl::PureState plus = io::read_state_file(plus_file);
  const dl::PureState minus = io::read_state_file(minus_file);
  const dl::SearchConfig config = io::read_search_config_file(config_file);

  if (!ancilla_files.empty()) {
    std::vector<std::pair<std::string, dl::PureState>> ancillas;
    for (const auto& f : ancilla_files) {
      ancillas.emplace_back(f, io::read_state_file(f));
    }
    const auto rows =
        dl::ancilla_sweep(plus, minus, ancillas, config, thread_cap());
    if (!out_csv.empty()) io::write_text_file(out_csv, io::sweep_csv(rows));
    bool any_optimal = false;
    for (const auto& row : rows) {
      std::cout << row.label << ": best_objective "
                << row.result.best_objective << " (overlap "
                << row.result.overlap_abs << "), "
                << (row.result.optimal ? "optimal" : "not found within budget")
                << "\n";
      any_optimal |= row.result.optimal;
    }
    return any_optimal ? kOk : kVerdictNegative;
  }

  const dl::SearchResult result =
      dl::minimize_failure(plus, minus, config, thread_cap());
  std::cout << "best_objective " << result.best_objective << ", overlap "
            << result.overlap_abs << ", "
            << (result.optimal ? "optimal" : "not found within budget")
            << "\n";
  if (!result.optimal) {
    if (const auto toy = dl::detect_toy_form(plus, minus)) {
      const dl::ToyFeasibility tf = dl::toy_feasibility(toy->first, toy->second);
      if (!tf.feasible_fixed_array) {
        std::cout << "analytic note: fixed-array optimal USD is infeasible "
                     "for this pair ("
                  << tf.obstruction << ")\n";
      }
    }
  }
  if (!out_file.empty()) {
    io::write_text_file(out_file,
                        io::search_result_to_json(result).dump(2) + "\n");
  }
  return result.optimal ? kOk : kVerdictNegative;
}

int cmd_coherent_demo(double alpha, double tail_tol, int max_order,
                      const std::string& out_file) {
  const dl::CoherentDemoReport rep = dl::coherent_demo(alpha, tail_tol, max_order);
  std::cout << "inputs truncated at tail " << tail_tol
            << " (deficit " << rep.input_plus.truncation_deficit() << ")\n";
  std::cout << "cross-validation |U in - out| = "
            << rep.cross_validation_distance << "\n";
  std::cout << "prob_fail " << rep.usd.prob_fail_circuit << " vs e^{-2a^2} "
            << rep.expected_fail << ", optimal "
            << (rep.usd.optimal.value_or(false) ? "yes" : "no") << "\n";
  std::cout << "conditional orders 1.." << max_order << " on both modes "
            << (rep.all_orders_vanish ? "all vanish" : "NONVANISHING")
            << "\n";
  if (!out_file.empty()) {
    io::json j = {{"alpha", alpha},
                  {"tail_tol", tail_tol},
                  {"expected_fail", rep.expected_fail},
                  {"cross_validation_distance", rep.cross_validation_distance},
                  {"usd_report", io::usd_report_to_json(rep.usd)},
                  {"all_orders_vanish", rep.all_orders_vanish}};
    io::json conds = io::json::array();
    for (const auto& c : rep.conditional) {
      conds.push_back(io::condition_report_to_json(c));
    }
    j["conditional"] = conds;
    io::write_text_file(out_file, j.dump(2) + "\n");
  }
  return rep.pass ? kOk : kVerdictNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dephase-lab: linear-optics implementability of POVMs via dephasing"};
  app.footer(kSchemaFooter);
  app.require_subcommand(1);

  std::string state_file, plus_file, minus_file, circuit_file, config_file;
  std::string out_file, out_csv, out_mesh, out_circuit, modes_spec;
  std::string mode = "all";
  std::string povm_file;
  std::vector<double> usd_params;
  std::vector<std::string> ancilla_files;
  double prior_plus = 0.5;
  double tol = 1e-10;
  double alpha = 0.7;
  double tail_tol = 1e-12;
  int max_order = 0;
  int demo_order = 6;

  auto* transform = app.add_subcommand("transform", "apply a circuit to a state");
  transform->add_option("state", state_file)->required();
  transform->add_option("circuit", circuit_file)->required();
  transform->add_option("out", out_file)->required();

  auto* dephase = app.add_subcommand(
      "dephase", "photon-counting statistics (CSV; --modes for partial)");
  dephase->add_option("state", state_file)->required();
  dephase->add_option("out", out_file)->required();
  dephase->add_option("--circuit", circuit_file, "transform first");
  dephase->add_option("--modes", modes_spec, "1-based, comma-separated");

  auto* classify = app.add_subcommand(
      "classify", "conclusive/ambiguous pattern sets of a transformed pair");
  classify->add_option("plus", plus_file)->required();
  classify->add_option("minus", minus_file)->required();
  classify->add_option("circuit", circuit_file)->required();
  classify->add_option("--tol", tol, "classification amplitude floor");
  classify->add_option("--out", out_file);

  auto* check = app.add_subcommand(
      "check", "hierarchy of necessary conditions (auto-selected by overlap)");
  check->add_option("plus", plus_file)->required();
  check->add_option("minus", minus_file)->required();
  check->add_option("circuit", circuit_file)->required();
  check->add_option("--mode", mode, "all, or a 1-based mode for the conditional subset");
  check->add_option("--max-order", max_order, "0 = photon number / 2");
  check->add_option("--out", out_file, "CSV report path");

  auto* usd = app.add_subcommand("usd", "failure probability and fidelity bounds");
  usd->add_option("plus", plus_file)->required();
  usd->add_option("minus", minus_file)->required();
  usd->add_option("circuit", circuit_file)->required();
  usd->add_option("--priors", prior_plus, "prior of the + state");
  usd->add_option("--tol", tol, "classification amplitude floor");
  usd->add_option("--out", out_file);

  auto* naimark = app.add_subcommand(
      "naimark", "compile a one-photon POVM to a linear-optics circuit");
  naimark->add_option("--povm", povm_file);
  naimark->add_option("--usd", usd_params, "alpha beta of the USD POVM")
      ->expected(2);
  naimark->add_option("--out-circuit", out_circuit)->required();
  naimark->add_option("--out-mesh", out_mesh);

  auto* search = app.add_subcommand(
      "search", "optimize a circuit for the USD failure probability");
  search->add_option("plus", plus_file)->required();
  search->add_option("minus", minus_file)->required();
  search->add_option("config", config_file)->required();
  search->add_option("--ancilla", ancilla_files, "state files; runs a sweep");
  search->add_option("--out", out_file, "result JSON");
  search->add_option("--out-csv", out_csv, "sweep CSV");

  auto* demo = app.add_subcommand(
      "coherent-demo", "binary coherent-state USD via a 50/50 splitter");
  demo->add_option("--alpha", alpha);
  demo->add_option("--tail", tail_tol, "per-mode truncation tail");
  demo->add_option("--max-order", demo_order, "conditional orders to check");
  demo->add_option("--out", out_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (transform->parsed()) {
      return cmd_transform(state_file, circuit_file, out_file);
    }
    if (dephase->parsed()) {
      return cmd_dephase(state_file, out_file, circuit_file, modes_spec);
    }
    if (classify->parsed()) {
      return cmd_classify(plus_file, minus_file, circuit_file, tol, out_file);
    }
    if (check->parsed()) {
      return cmd_check(plus_file, minus_file, circuit_file, mode, max_order,
                       out_file);
    }
    if (usd->parsed()) {
      return cmd_usd(plus_file, minus_file, circuit_file, prior_plus, tol,
                     out_file);
    }
    if (naimark->parsed()) {
      return cmd_naimark(povm_file, out_circuit, out_mesh, usd_params);
    }
    if (search->parsed()) {
      return cmd_search(plus_file, minus_file, config_file, ancilla_files,
                        out_file, out_csv);
    }
    if (demo->parsed()) {
      return cmd_coherent_demo(alpha, tail_tol, demo_order, out_file);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
