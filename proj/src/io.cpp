#include "dephaselab/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dephaselab::io {

namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string modes_str_1based(const std::vector<int>& modes) {
  std::ostringstream out;
  for (size_t i = 0; i < modes.size(); ++i) {
    if (i) out << ' ';
    out << modes[i] + 1;
  }
  return out.str();
}

}  // namespace

PureState state_from_json(const json& j) {
  if (j.contains("coherent")) {
    const json& c = j.at("coherent");
    std::vector<Complex> alphas;
    for (const json& a : c.at("alphas")) alphas.push_back(complex_from_json(a));
    return coherent_product_state(alphas, c.at("tail_tol").get<double>());
  }
  const int n_modes = j.at("n_modes").get<int>();
  std::vector<std::pair<FockPattern, Complex>> terms;
  for (const json& t : j.at("terms")) {
    terms.emplace_back(
        FockPattern(t.at("pattern").get<std::vector<int>>()),
        Complex(t.at("re").get<double>(), t.value("im", 0.0)));
  }
  return build_pure_state(n_modes, terms);
}

json state_to_json(const PureState& s) {
  json terms = json::array();
  for (const auto& [p, a] : s.terms()) {
    terms.push_back({{"pattern", p.occupations()},
                     {"re", a.real()},
                     {"im", a.imag()}});
  }
  return {{"n_modes", s.n_modes()}, {"terms", terms}};
}

LinearCircuit circuit_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const json& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != dim) {
    throw std::invalid_argument("circuit file: row count != dim");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = rows[static_cast<size_t>(r)];
    if (static_cast<int>(row.size()) != dim) {
      throw std::invalid_argument("circuit file: column count != dim");
    }
    for (int c = 0; c < dim; ++c) {
      m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
    }
  }
  return validate_unitary(m);
}

json circuit_to_json(const LinearCircuit& c) {
  json rows = json::array();
  for (int r = 0; r < c.dim(); ++r) {
    json row = json::array();
    for (int k = 0; k < c.dim(); ++k) row.push_back(complex_to_json(c.entry(r, k)));
    rows.push_back(std::move(row));
  }
  return {{"dim", c.dim()}, {"rows", rows}};
}

GivensParameterization givens_from_json(const json& j) {
  GivensParameterization g;
  g.dim = j.at("dim").get<int>();
  g.angles = j.at("angles").get<std::vector<double>>();
  g.phases = j.at("phases").get<std::vector<double>>();
  g.validate();
  return g;
}

json givens_to_json(const GivensParameterization& g) {
  return {{"dim", g.dim}, {"angles", g.angles}, {"phases", g.phases}};
}

PovmSet povm_from_json(const json& j) {
  const int signal_dim = j.at("signal_dim").get<int>();
  std::vector<Eigen::VectorXcd> elements;
  for (const json& e : j.at("elements")) {
    const json& vec = e.at("vec");
    Eigen::VectorXcd u(vec.size());
    for (size_t i = 0; i < vec.size(); ++i) {
      u(static_cast<Eigen::Index>(i)) = complex_from_json(vec[i]);
    }
    elements.push_back(std::move(u));
  }
  return validate_povm(elements, signal_dim);
}

json povm_to_json(const PovmSet& p) {
  json elements = json::array();
  for (const auto& u : p.elements) {
    json vec = json::array();
    for (Eigen::Index i = 0; i < u.size(); ++i) vec.push_back(complex_to_json(u(i)));
    elements.push_back({{"vec", vec}});
  }
  return {{"signal_dim", p.signal_dim}, {"elements", elements}};
}

SearchConfig search_config_from_json(const json& j) {
  SearchConfig c;
  c.n_modes = j.value("n_modes", c.n_modes);
  c.max_restarts = j.value("max_restarts", c.max_restarts);
  c.seed = j.value("seed", c.seed);
  c.iteration_budget = j.value("iteration_budget", c.iteration_budget);
  c.convergence_tol = j.value("convergence_tol", c.convergence_tol);
  c.classification_tol = j.value("classification_tol", c.classification_tol);
  c.validate();
  return c;
}

json search_config_to_json(const SearchConfig& c) {
  return {{"n_modes", c.n_modes},
          {"max_restarts", c.max_restarts},
          {"seed", c.seed},
          {"iteration_budget", c.iteration_budget},
          {"convergence_tol", c.convergence_tol},
          {"classification_tol", c.classification_tol}};
}

json classification_to_json(const PatternClassification& c) {
  auto patterns = [](const std::vector<FockPattern>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(p.occupations());
    return arr;
  };
  return {{"conclusive_plus", patterns(c.conclusive_plus)},
          {"conclusive_minus", patterns(c.conclusive_minus)},
          {"ambiguous", patterns(c.ambiguous)}};
}

json usd_report_to_json(const UsdReport& r) {
  json contributions = json::array();
  for (const auto& c : r.contributions) {
    contributions.push_back({{"pattern", c.pattern.occupations()},
                             {"p_plus", c.p_plus},
                             {"p_minus", c.p_minus},
                             {"contribution", c.contribution}});
  }
  json j = {{"priors", {r.prior_plus, r.prior_minus}},
            {"prob_fail_circuit", r.prob_fail_circuit},
            {"prob_success_circuit", r.prob_success_circuit},
            {"prob_fail_optimal", r.prob_fail_optimal},
            {"contributions", contributions},
            {"classification", classification_to_json(r.classification)}};
  if (r.optimal) {
    j["optimal"] = *r.optimal;
  } else {
    j["optimal"] = nullptr;
  }
  return j;
}

json fidelity_bounds_to_json(const FidelityBoundsReport& r) {
  return {{"f_input", r.f_input},
          {"f_dephased", r.f_dephased},
          {"prob_fail", r.prob_fail},
          {"lower_ok", r.lower_ok},
          {"upper_ok", r.upper_ok},
          {"slack_lower", r.slack_lower},
          {"slack_upper", r.slack_upper}};
}

json condition_report_to_json(const ConditionReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je = {{"order", e.order},
               {"modes", modes_str_1based(e.modes)},
               {"value", complex_to_json(e.value)},
               {"modulus_bound", e.modulus_bound},
               {"vanishing", e.vanishing},
               {"modulus_ok", e.modulus_ok},
               {"distinct", e.distinct},
               {"sufficient_alone", e.sufficient_alone}};
    je["phase_ok"] = e.phase_ok ? json(*e.phase_ok) : json(nullptr);
    entries.push_back(std::move(je));
  }
  json j = {{"kind", r.kind == HierarchyKind::kOrthogonalZero ? "orthogonal"
                                                              : "usd"},
            {"overlap", complex_to_json(r.overlap)},
            {"reference_phase", r.reference_phase},
            {"max_order", r.max_order},
            {"pass", r.pass},
            {"entries", entries}};
  if (r.fixed_photon_number) j["fixed_photon_number"] = *r.fixed_photon_number;
  if (r.sum_rule) {
    j["sum_rule"] = {{"value", complex_to_json(r.sum_rule->value)},
                     {"expected", complex_to_json(r.sum_rule->expected)},
                     {"ok", r.sum_rule->ok}};
  }
  return j;
}

json search_result_to_json(const SearchResult& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"restart", t.restart},
                     {"objective", t.objective},
                     {"surrogate", t.surrogate},
                     {"iterations", t.iterations},
                     {"converged", t.converged}});
  }
  return {{"best_objective", r.best_objective},
          {"overlap", r.overlap_abs},
          {"optimal", r.optimal},
          {"budget_exhausted", r.budget_exhausted},
          {"circuit", circuit_to_json(r.best_circuit)},
          {"givens", givens_to_json(decompose_to_givens(r.best_circuit))},
          {"usd_report", usd_report_to_json(r.report)},
          {"hierarchy", condition_report_to_json(r.hierarchy)},
          {"trace", trace}};
}

json block_mixture_to_json(const BlockMixture& b) {
  json blocks = json::array();
  for (const auto& [key, blk] : b.blocks) {
    json jb = {{"occupations", key.occupations()},
               {"probability", blk.probability}};
    if (blk.conditional) jb["conditional"] = state_to_json(*blk.conditional);
    blocks.push_back(std::move(jb));
  }
  json dephased = json::array();
  for (int m : b.dephased_modes) dephased.push_back(m + 1);
  return {{"dephased_modes", dephased},
          {"blocks", blocks},
          {"dropped_mass", b.dropped_mass}};
}

std::string distribution_csv(const DiagonalMixture& mix) {
  std::ostringstream out;
  out << "pattern,probability\n";
  for (const auto& [p, w] : pattern_distribution(mix)) {
    out << p.str() << ',' << fmt(w) << '\n';
  }
  return out.str();
}

std::string condition_report_csv(const ConditionReport& r) {
  std::ostringstream out;
  out << "order,modes,value_re,value_im,modulus,bound,phase_ok,modulus_ok,"
         "vanishing\n";
  for (const auto& e : r.entries) {
    out << e.order << ',' << modes_str_1based(e.modes) << ','
        << fmt(e.value.real()) << ',' << fmt(e.value.imag()) << ','
        << fmt(std::abs(e.value)) << ',' << fmt(e.modulus_bound) << ','
        << (e.phase_ok ? (*e.phase_ok ? "true" : "false") : "n/a") << ','
        << (e.modulus_ok ? "true" : "false") << ','
        << (e.vanishing ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<AncillaSweepEntry>& rows) {
  std::ostringstream out;
  out << "ancilla_label,n_modes,best_objective,optimal,overlap\n";
  for (const auto& row : rows) {
    out << row.label << ',' << row.n_modes << ','
        << fmt(row.result.best_objective) << ','
        << (row.result.optimal ? "true" : "false") << ','
        << fmt(row.result.overlap_abs) << '\n';
  }
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

PureState read_state_file(const std::string& path) {
  return state_from_json(read_json_file(path));
}

LinearCircuit read_circuit_file(const std::string& path) {
  return circuit_from_json(read_json_file(path));
}

PovmSet read_povm_file(const std::string& path) {
  return povm_from_json(read_json_file(path));
}

SearchConfig read_search_config_file(const std::string& path) {
  return search_config_from_json(read_json_file(path));
}

}  // namespace dephaselab::io
