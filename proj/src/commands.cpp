#include "descriptor/commands.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "descriptor/discretizer.hpp"
#include "descriptor/fractional.hpp"

namespace descriptor {

namespace {

using json = nlohmann::json;

constexpr double kDefaultT = 0.1;
constexpr long kDefaultSteps = 20;
constexpr double kDefaultOrder = 0.5;

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& a) {
  json rows = json::array();
  for (Index r = 0; r < a.rows(); ++r) rows.push_back(to_json(Vector(a.row(r).transpose())));
  return rows;
}

json to_json(const Complex& z) {
  if (z.imag() == 0.0) return z.real();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json to_json(const CMatrix& a) {
  if (a.size() == 0 || a.imag().cwiseAbs().maxCoeff() == 0.0) return to_json(Matrix(a.real()));
  return json{{"re", to_json(Matrix(a.real()))}, {"im", to_json(Matrix(a.imag()))}};
}

json to_json(const RationalMatrix& a) {
  json rows = json::array();
  for (Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c).str());
    rows.push_back(row);
  }
  return rows;
}

json states_json(const std::vector<Vector>& states) {
  json out = json::array();
  for (const auto& s : states) out.push_back(to_json(s));
  return out;
}

/// Values resolved from command-line flags, the spec file and defaults.
struct Settings {
  double T;
  long steps;
  double n;
  bool exact;
  DecompositionOptions options;
};

Settings resolve(const SystemSpecFile& spec, const CommandOptions& opts) {
  Settings s{opts.T.value_or(spec.T.value_or(kDefaultT)), opts.steps.value_or(spec.steps.value_or(kDefaultSteps)),
             opts.order_n.value_or(spec.order_n.value_or(kDefaultOrder)), opts.exact || spec.exact, spec.options};
  if (opts.rank_tol) s.options.tol.rank_tol = *opts.rank_tol;
  s.options.tol.validate();
  if (!(s.T > 0.0) || !std::isfinite(s.T)) throw Error(ErrorCode::InvalidArgument, "--T must be positive");
  if (s.steps < 0) throw Error(ErrorCode::InvalidArgument, "--steps must be nonnegative");
  return s;
}

json header(const std::string& command, const SystemSpecFile& spec, const CommandOptions& opts, const Settings& s) {
  json b;
  b["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  b["command"] = command;
  b["input"] = {{"name", spec.name}, {"digest", "sha256:" + spec.digest}, {"m", spec.m()}, {"r", spec.r()}};
  b["options"] = {{"T", s.T},
                  {"steps", s.steps},
                  {"order_n", s.n},
                  {"t0", spec.t0},
                  {"mode", s.exact ? "exact" : "float"},
                  {"rank_tol", s.options.tol.rank_tol},
                  {"residual_tol", s.options.tol.residual_tol},
                  {"cluster_tol", s.options.cluster_tol},
                  {"project", opts.project},
                  {"crosscheck", opts.crosscheck}};
  b["status"] = "ok";
  return b;
}

DescriptorSystem make_system(const SystemSpecFile& spec, const Settings& s) {
  if (s.exact) return build_system(ExactPencil{spec.F_exact, spec.G_exact}, spec.B, s.options.tol);
  return build_system(spec.F, spec.G, spec.B, s.options);
}

const Vector& require_y0(const SystemSpecFile& spec, const std::string& command) {
  if (!spec.Y0) throw Error(ErrorCode::ParseError, "field 'Y0': required by " + command);
  return *spec.Y0;
}

std::vector<double> sample_times(double t0, double T, long steps) {
  std::vector<double> t;
  for (long k = 0; k <= steps; ++k) t.push_back(t0 + static_cast<double>(k) * T);
  return t;
}

std::vector<std::string> state_columns(Index m, const std::string& first) {
  std::vector<std::string> cols{first};
  for (Index i = 0; i < m; ++i) cols.push_back("y" + std::to_string(i + 1));
  return cols;
}

json decomposition_json(const WeierstrassDecomposition& dec, const DecompositionResiduals& res) {
  json blocks = json::array();
  for (const auto& b : dec.finite_blocks) blocks.push_back({{"eigenvalue", to_json(b.eigenvalue)}, {"size", b.size}});
  return {{"p", dec.p},
          {"q", dec.q},
          {"q_star", dec.q_star},
          {"shift", to_json(dec.shift)},
          {"finite_blocks", blocks},
          {"infinite_blocks", dec.infinite_blocks},
          {"Jp", to_json(dec.Jp)},
          {"Hq", to_json(dec.Hq)},
          {"residual_F", res.res_F},
          {"residual_G", res.res_G}};
}

json spectrum_json(const SpectralStructure& s) {
  json eig = json::array();
  for (const auto& e : s.finite) {
    json item{{"value", to_json(e.value)}, {"multiplicity", e.multiplicity}};
    if (e.exact) item["exact"] = e.exact->str();
    eig.push_back(item);
  }
  return {{"p", s.p}, {"q", s.q}, {"eigenvalues", eig}};
}

/// Consistency handling shared by the commands that start from Y0.
Vector initial_state(const DescriptorSystem& sys, const SystemSpecFile& spec, const CommandOptions& opts,
                     const std::string& command, json& bundle, std::vector<std::string>& warnings, bool strict) {
  const Vector& y0 = require_y0(spec, command);
  const auto report = consistency_check(sys, y0, spec.input, spec.t0);
  bundle["consistency"] = {{"consistent", report.consistent},
                           {"defect", report.defect},
                           {"projected_Y0", to_json(report.projected_Y0)}};
  if (report.consistent) return y0;
  if (opts.project) {
    warnings.push_back("Y0 is inconsistent (defect " + std::to_string(report.defect) +
                       "); using the projected initial state");
    bundle["Y0_used"] = to_json(report.projected_Y0);
    return report.projected_Y0;
  }
  if (strict)
    throw Error(ErrorCode::InconsistentInitialCondition,
                "Y0 is inconsistent (defect " + std::to_string(report.defect) + "); rerun with --project");
  warnings.push_back("Y0 is inconsistent; discrete samples will not follow a continuous solution");
  return y0;
}

void cmd_analyze(const SystemSpecFile& spec, const Settings& s, CommandOutcome& out) {
  json& b = out.bundle;
  if (s.exact) {
    const ExactPencil pencil{spec.F_exact, spec.G_exact};
    const auto cls = classify_pencil(pencil);
    b["regularity"] = to_string(cls);
    if (cls == PencilClass::Singular) throw Error(ErrorCode::SingularPencil, "det(sF - G) vanishes identically");
    json coeffs = json::array();
    for (const auto& c : det_polynomial(pencil).coefficients()) coeffs.push_back(c.str());
    b["det_polynomial"] = coeffs;
    b["spectrum"] = spectrum_json(spectral_structure(pencil));
    const auto divisors = elementary_divisors(pencil);
    json finite = json::array();
    for (const auto& d : divisors.finite) {
      json item{{"value", to_json(d.value)}, {"degree", d.degree}};
      if (d.exact) item["exact"] = d.exact->str();
      finite.push_back(item);
    }
    b["elementary_divisors"] = {{"finite", finite}, {"infinite", divisors.infinite}};
    const auto dec = weierstrass_decompose(pencil);
    const auto res = verify_decomposition(dec, pencil);
    auto dj = decomposition_json(to_complex(dec), res);
    dj["Jp"] = to_json(dec.Jp);
    dj["Hq"] = to_json(dec.Hq);
    dj["P"] = to_json(dec.P);
    dj["Q"] = to_json(dec.Q);
    dj["shift"] = dec.shift.str();
    b["decomposition"] = dj;
  } else {
    const Pencil pencil{spec.F, spec.G};
    pencil.validate();
    const auto cls = classify_pencil(pencil, s.options.tol);
    b["regularity"] = to_string(cls);
    if (cls == PencilClass::Singular) throw Error(ErrorCode::SingularPencil, "det(sF - G) vanishes identically");
    const auto poly = det_polynomial(pencil, s.options.tol);
    b["det_polynomial"] = poly.coefficients();
    b["spectrum"] = spectrum_json(spectral_structure(pencil, s.options));
    b["elementary_divisors"] = {{"available", false}, {"reason", "exact mode required (--exact)"}};
    const auto dec = weierstrass_decompose(pencil, s.options);
    b["decomposition"] = decomposition_json(dec, verify_decomposition(dec, pencil));
  }
}

void cmd_solve(const SystemSpecFile& spec, const CommandOptions& opts, const Settings& s, CommandOutcome& out) {
  json& b = out.bundle;
  const auto sys = make_system(spec, s);
  b["structure"] = {{"p", sys.p()}, {"q", sys.q()}, {"q_star", sys.dec.q_star}};
  const Vector y0 = initial_state(sys, spec, opts, "solve", b, out.warnings, true);
  const auto grid = sample_times(spec.t0, s.T, s.steps);
  const auto traj = solve_continuous(sys, y0, spec.input, grid, spec.t0);
  b["trajectory"] = {{"columns", state_columns(sys.m(), "t")}, {"times", traj.times}, {"states", states_json(traj.states)}};
  b["decomposition_residuals"] = {{"F", traj.decomposition_residual_F}, {"G", traj.decomposition_residual_G}};
  if (grid.size() >= 3)
    b["residual_check"] = residual_check(sys, traj, spec.input);
  else
    b["residual_check"] = nullptr;
  if (opts.crosscheck) {
    const auto alt = solve_via_fundamental(sys, y0, spec.input, grid, spec.t0);
    b["crosscheck"] = {{"method", "fundamental_matrix"}, {"max_deviation", max_deviation(traj, alt)}};
  }
  out.csv.header = state_columns(sys.m(), "t");
  for (size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k]};
    row.insert(row.end(), traj.states[k].data(), traj.states[k].data() + traj.states[k].size());
    out.csv.rows.push_back(std::move(row));
  }
}

SampleSequence sampled_inputs(const SystemSpecFile& spec, const DiscretizedSystem& dsys, long steps) {
  const long first = std::min(0L, -(static_cast<long>(dsys.q_star) - 1));
  return sample_signal(spec.input, spec.t0, dsys.T, first, steps);
}

void index_csv(CommandOutcome& out, const std::vector<Vector>& states, Index m) {
  out.csv.header = state_columns(m, "k");
  for (size_t k = 0; k < states.size(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    row.insert(row.end(), states[k].data(), states[k].data() + states[k].size());
    out.csv.rows.push_back(std::move(row));
  }
}

void cmd_discretize(const SystemSpecFile& spec, const CommandOptions& opts, const Settings& s, CommandOutcome& out) {
  json& b = out.bundle;
  const auto sys = make_system(spec, s);
  const auto dsys = discretize(sys, s.T);
  json fast = json::array();
  for (const auto& c : dsys.fast_coeffs) fast.push_back(to_json(c));
  b["discretization"] = {{"T", dsys.T},
                         {"A", to_json(dsys.A)},
                         {"Phi_int", to_json(dsys.Phi_int)},
                         {"fast_coeffs", fast},
                         {"q_star", dsys.q_star},
                         {"memory_depth", dsys.memory_depth}};
  if (!spec.Y0) return;
  const Vector y0 = initial_state(sys, spec, opts, "discretize", b, out.warnings, false);
  const auto sim = discrete_simulate(dsys, y0, sampled_inputs(spec, dsys, s.steps), s.steps, false);
  b["samples"] = {{"columns", state_columns(sys.m(), "k")},
                  {"times", sample_times(spec.t0, s.T, s.steps)},
                  {"states", states_json(sim.states.vectors)},
                  {"history", "sampled from the input signal"}};
  index_csv(out, sim.states.vectors, sys.m());
}

SampleSequence fractional_inputs(const SystemSpecFile& spec, double T, long steps) {
  SampleSequence v;
  v.start_index = 0;
  for (long k = 0; k <= steps; ++k) v.vectors.push_back(spec.B * spec.input.value(spec.t0 + static_cast<double>(k) * T));
  return v;
}

double fractional_residual(const FractionalSystem& fsys, const SampleSequence& y, const SampleSequence& v) {
  double worst = 0.0;
  for (long k = 1; k < y.end_index(); ++k) {
    const Vector r = fsys.F * nabla_apply(y, fsys.n, k) - fsys.G * y.at(k) - v.at(k);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

json fractional_json(const FractionalSystem& fsys, const SampleSequence& y, const SampleSequence& v, long steps) {
  return {{"n", fsys.n.value()},
          {"coefficients", nabla_coefficients(fsys.n, steps).c},
          {"step_matrix_invertible", fsys.step_matrix_invertible},
          {"input_definition", "V_k = B V(t0 + k T)"},
          {"states", states_json(y.vectors)},
          {"max_residual", fractional_residual(fsys, y, v)}};
}

void cmd_fracsim(const SystemSpecFile& spec, const Settings& s, CommandOutcome& out) {
  json& b = out.bundle;
  const Vector& y0 = require_y0(spec, "fracsim");
  const auto fsys = make_fractional_system(spec.F, spec.G, FractionalOrder(s.n), s.options.tol);
  const auto v = fractional_inputs(spec, s.T, s.steps);
  const auto y = solve_fractional_system(fsys, v, y0, s.steps);
  b["fractional"] = fractional_json(fsys, y, v, s.steps);
  index_csv(out, y.vectors, spec.m());
}

void cmd_compare(const SystemSpecFile& spec, const CommandOptions& opts, const Settings& s, CommandOutcome& out) {
  json& b = out.bundle;
  const json columns = {"k", "t", "discrete_error", "fractional_error"};
  if (s.steps == 0) {
    b["table"] = {{"columns", columns}, {"rows", json::array()}};
    out.csv.header = state_columns(spec.m(), "k");
    return;
  }
  const FractionalOrder n(s.n);
  const auto sys = make_system(spec, s);
  b["structure"] = {{"p", sys.p()}, {"q", sys.q()}, {"q_star", sys.dec.q_star}};
  const Vector y0 = initial_state(sys, spec, opts, "compare", b, out.warnings, true);
  const auto dsys = discretize(sys, s.T);
  const auto cmp = compare_with_continuous(sys, dsys, y0, spec.input, s.steps, spec.t0);
  b["continuous_vs_discrete"] = {{"max_error", cmp.max_error},
                                 {"max_error_half_T", cmp.max_error_half},
                                 {"observed_order", cmp.observed_order}};

  std::optional<SampleSequence> frac;
  try {
    const auto fsys = make_fractional_system(spec.F, spec.G, n, s.options.tol);
    const auto v = fractional_inputs(spec, s.T, s.steps);
    frac = solve_fractional_system(fsys, v, y0, s.steps);
    b["fractional"] = fractional_json(fsys, *frac, v, s.steps);
  } catch (const Error& e) {
    if (!is_domain_error(e.code())) throw;
    b["fractional"] = {{"error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}}}};
  }

  json rows = json::array();
  double frac_max = 0.0;
  for (long k = 0; k <= s.steps; ++k) {
    const auto idx = static_cast<size_t>(k);
    const double disc = (cmp.discrete[idx] - cmp.continuous[idx]).cwiseAbs().maxCoeff();
    json frac_err = nullptr;
    if (frac) {
      const double e = (frac->at(k) - cmp.continuous[idx]).cwiseAbs().maxCoeff();
      frac_max = std::max(frac_max, e);
      frac_err = e;
    }
    rows.push_back({k, cmp.times[idx], disc, frac_err});
  }
  b["table"] = {{"columns", columns}, {"rows", rows}};
  if (frac) b["continuous_vs_fractional"] = {{"max_error", frac_max}};

  const auto sim = discrete_simulate(dsys, y0, sampled_inputs(spec, dsys, s.steps), s.steps, false);
  const auto report = correspondence_diagnostic(dsys, spec.F, n, s.steps, sim.inputs);
  json lags = json::array();
  for (const auto& l : report.lags) lags.push_back({{"lag", l.lag}, {"coefficient", l.coefficient}, {"delta", l.delta}});
  b["correspondence"] = {{"n", report.n},
                         {"lags", lags},
                         {"max_delta", report.max_delta},
                         {"best_fit_n", report.best_fit_n},
                         {"best_fit_total", report.best_fit_total},
                         {"corresponds", report.corresponds},
                         {"verdict", report.verdict},
                         {"aggregate_input", states_json(report.aggregate_input.vectors)}};
  index_csv(out, cmp.discrete, sys.m());
}

}  // namespace

CommandOutcome run_command(const std::string& command, const SystemSpecFile& spec, const CommandOptions& opts) {
  if (command != "analyze" && command != "solve" && command != "discretize" && command != "fracsim" &&
      command != "compare")
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  const Settings s = resolve(spec, opts);
  CommandOutcome out;
  out.bundle = header(command, spec, opts, s);
  try {
    if (command == "analyze") cmd_analyze(spec, s, out);
    else if (command == "solve") cmd_solve(spec, opts, s, out);
    else if (command == "discretize") cmd_discretize(spec, opts, s, out);
    else if (command == "fracsim") cmd_fracsim(spec, s, out);
    else cmd_compare(spec, opts, s, out);
  } catch (const Error& e) {
    if (!is_domain_error(e.code()) && e.code() != ErrorCode::InconsistentInitialCondition) throw;
    out.exit_code = 2;
    out.bundle["status"] = "error";
    out.bundle["error"] = {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  }
  if (!out.warnings.empty()) out.bundle["warnings"] = out.warnings;
  return out;
}

std::string render_bundle(const nlohmann::json& bundle) { return bundle.dump(2) + "\n"; }

std::string render_csv(const CsvTable& table) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace descriptor
