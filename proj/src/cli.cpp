#include "amelu/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "amelu/entanglement.hpp"
#include "amelu/invariant.hpp"
#include "amelu/json_io.hpp"
#include "amelu/oa.hpp"
#include "amelu/state.hpp"
#include "amelu/witness.hpp"

namespace amelu::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text) {
  const std::string s(trim(text));
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || !std::isfinite(v)) throw ArgumentError("'" + s + "' is not a number");
  return v;
}

}  // namespace

double parse_angle(std::string_view text) {
  std::string_view s = trim(text);
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) return parse_number(s);

  double sign = 1;
  std::string_view coeff = trim(s.substr(0, pi_at));
  if (!coeff.empty() && (coeff.front() == '-' || coeff.front() == '+')) {
    if (coeff.front() == '-') sign = -1;
    coeff = trim(coeff.substr(1));
  }
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  const double factor = coeff.empty() ? 1.0 : parse_number(coeff);

  std::string_view rest = trim(s.substr(pi_at + 2));
  double divisor = 1;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ArgumentError("cannot parse angle '" + std::string(s) + "'");
    divisor = parse_number(rest.substr(1));
    if (divisor == 0) throw ArgumentError("angle divides by zero");
  }
  return sign * factor * std::numbers::pi / divisor;
}

std::pair<Tuple, double> parse_phase(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ArgumentError("phase must look like 'j1,...,jN=theta'");
  Tuple t;
  std::string_view lhs = text.substr(0, eq);
  while (!lhs.empty()) {
    const auto comma = lhs.find(',');
    const double v = parse_number(lhs.substr(0, comma));
    if (v < 0 || v != std::floor(v)) throw ArgumentError("phase row entries must be non-negative integers");
    t.push_back(static_cast<int>(v));
    if (comma == std::string_view::npos) break;
    lhs.remove_prefix(comma + 1);
  }
  if (t.empty()) throw ArgumentError("phase row is empty");
  return {std::move(t), parse_angle(text.substr(eq + 1))};
}

std::vector<double> parse_theta_grid(std::string_view text) {
  std::vector<double> grid;
  while (true) {
    const auto comma = text.find(',');
    grid.push_back(parse_angle(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return grid;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct RunConfig {
  unsigned jobs = 1;
  std::uint64_t dense_cap = kDefaultDenseTermCap;
  double tol = kDefaultUniformityTol;
  std::uint64_t seed = 0;
  std::string format = "text";
};

OrthogonalArray load_oa(const std::string& path, std::optional<int> d) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_oa(in, d);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

EngineOptions engine_options(const RunConfig& cfg) {
  EngineOptions opts;
  opts.dense_cap = cfg.dense_cap;
  opts.jobs = cfg.jobs;
  return opts;
}

// ---- oa validate ----

struct OaValidateArgs {
  std::string file;
  std::optional<int> strength;
  std::optional<int> irredundant;
  std::optional<int> d;
};

int oa_validate(const OaValidateArgs& a, const RunConfig& cfg, std::ostream& out) {
  const OrthogonalArray oa = load_oa(a.file, a.d);
  const int r = oa.num_rows(), n = oa.num_parties(), d = oa.local_dim();
  bool ok = true;
  json report = {{"r", r}, {"N", n}, {"d", d}};
  std::ostringstream text;
  text << "array: r=" << r << " N=" << n << " d=" << d << '\n';

  std::vector<int> strengths, irredundants;
  if (a.strength) strengths.push_back(*a.strength);
  if (a.irredundant) irredundants.push_back(*a.irredundant);
  const bool checks_requested = a.strength || a.irredundant;
  if (!checks_requested) {
    for (int k = 1; k <= n; ++k) strengths.push_back(k);
    for (int k = 1; k < n; ++k) irredundants.push_back(k);
  }

  json strength_json = json::array();
  for (int k : strengths) {
    const StrengthReport s = check_strength(oa, k);
    if (checks_requested) ok = ok && s.holds;
    strength_json.push_back({{"k", k}, {"holds", s.holds}, {"lambda", s.index_lambda}});
    text << "strength " << k << ": " << (s.holds ? "holds" : "fails");
    if (s.holds) text << " (lambda=" << s.index_lambda << ") -> OA(" << r << ',' << n << ',' << d << ',' << k << ')';
    text << '\n';
  }
  json irr_json = json::array();
  for (int k : irredundants) {
    const bool irr = is_irredundant(oa, k);
    const bool is_iroa = irr && check_strength(oa, k).holds;
    if (checks_requested) ok = ok && is_iroa;
    irr_json.push_back({{"k", k}, {"irredundant", irr}, {"iroa", is_iroa}});
    text << "irredundant " << k << ": " << (irr ? "yes" : "no");
    if (is_iroa) text << " -> IrOA(" << r << ',' << n << ',' << d << ',' << k << ')';
    text << '\n';
  }
  report["strength"] = std::move(strength_json);
  report["irredundant"] = std::move(irr_json);
  report["theorem_condition"] = theorem_condition(r, n, d);
  report["pass"] = ok;
  text << "r > Nd-(N-1): " << (theorem_condition(r, n, d) ? "yes" : "no") << '\n';
  text << (ok ? "PASS" : "FAIL") << '\n';

  out << (cfg.format == "json" ? report.dump(2) + "\n" : text.str());
  return ok ? kPass : kFail;
}

// ---- state build / randomize ----

struct StateBuildArgs {
  std::string from_oa;
  std::vector<std::string> phases;
  std::string catalog;
  std::optional<int> d;
  std::string theta = "0";
  std::optional<int> parties;
  std::string out_path;
};

int state_build(const StateBuildArgs& a, std::ostream& out) {
  if (a.from_oa.empty() == a.catalog.empty()) throw ArgumentError("select exactly one of --from-oa or --catalog");
  std::optional<SparseState> state;
  if (!a.from_oa.empty()) {
    const OrthogonalArray oa = load_oa(a.from_oa, a.d);
    PhaseAssignment phases;
    for (const auto& spec : a.phases) {
      auto [row, theta] = parse_phase(spec);
      phases[row] = theta;
    }
    state = from_iroa(oa, phases);
  } else {
    if (!a.phases.empty()) throw ArgumentError("--phase only applies to --from-oa");
    const double theta = parse_angle(a.theta);
    if (a.parties) {
      if (a.catalog != "ghz") throw ArgumentError("--parties only applies to the ghz catalog entry");
      state = ghz_state(*a.parties, a.d.value_or(2));
    } else {
      const int default_d = a.catalog == "ame43" ? 3 : 2;
      state = catalog_state(a.catalog, a.d.value_or(default_d), theta);
    }
  }
  write_text(a.out_path, state_to_json(*state).dump(2) + "\n", out);
  return kPass;
}

struct StateRandomizeArgs {
  std::string file;
  std::string out_path;
  bool allow_unnormalized = false;
};

int state_randomize(const StateRandomizeArgs& a, const RunConfig& cfg, std::ostream& out) {
  const SparseState s = state_from_json(load_json(a.file), a.allow_unnormalized);
  const VectorXc rotated = random_local_unitary_apply(s, cfg.seed, std::min<std::uint64_t>(cfg.dense_cap, kDefaultDenseStateCap));
  const SparseState r = SparseState::from_dense(s.num_parties(), s.local_dim(), rotated, NormPolicy::allow_any);
  write_text(a.out_path, state_to_json(r).dump(2) + "\n", out);
  return kPass;
}

// ---- ent check ----

struct EntCheckArgs {
  std::string file;
  std::optional<int> k;
  bool ame = false;
  bool allow_unnormalized = false;
};

int ent_check(const EntCheckArgs& a, const RunConfig& cfg, std::ostream& out) {
  if (a.k.has_value() == a.ame) throw ArgumentError("select exactly one of --k or --ame");
  const SparseState s = state_from_json(load_json(a.file), a.allow_unnormalized);
  const UniformityReport r = a.ame ? is_ame(s, cfg.tol) : is_k_uniform(s, *a.k, cfg.tol);
  if (cfg.format == "json") {
    out << report_to_json(r).dump(2) << '\n';
  } else {
    out << (a.ame ? "AME" : "k-uniform") << " check, k=" << r.k << ": " << (r.pass ? "PASS" : "FAIL") << '\n';
    out << "max deviation: " << format_double(r.max_deviation) << '\n';
    out << "worst subset:";
    for (int p : r.worst_subset) out << ' ' << p;
    out << '\n';
  }
  return r.pass ? kPass : kFail;
}

// ---- inv compute ----

struct InvComputeArgs {
  std::string state_file;
  std::string perms_file;
  std::string engine = "auto";
  bool allow_unnormalized = false;
};

int inv_compute(const InvComputeArgs& a, const RunConfig& cfg, std::ostream& out) {
  const SparseState s = state_from_json(load_json(a.state_file), a.allow_unnormalized);
  std::ifstream pf(a.perms_file);
  if (!pf) throw Error("cannot open '" + a.perms_file + "'");
  const PermutationSet p = parse_permutations(pf);
  if (p.num_parties() != s.num_parties()) {
    throw ArgumentError("permutation file covers " + std::to_string(p.num_parties()) + " parties, state has " +
                        std::to_string(s.num_parties()));
  }
  InvariantValue v;
  if (a.engine == "dense") {
    v = invariant_dense(s.to_dense(), s.num_parties(), s.local_dim(), p, cfg.dense_cap);
  } else if (a.engine == "sparse") {
    v = invariant_sparse(s, p, cfg.jobs);
  } else {
    v = invariant(s, p, engine_options(cfg));
  }
  if (cfg.format == "json") {
    out << invariant_to_json(v).dump(2) << '\n';
  } else {
    out << "value: " << format_double(v.value.real()) << ' ' << format_double(v.value.imag()) << '\n';
    out << "engine: " << to_string(v.engine) << '\n';
    out << "term_count: " << v.term_count << '\n';
  }
  return kPass;
}

// ---- witness find / scan ----

struct WitnessArgs {
  std::string file;
  std::optional<int> d;
  int kernel_index = 0;
  std::string grid;
};

int witness_find(const WitnessArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const OrthogonalArray oa = load_oa(a.file, a.d);
  const auto w = find_witness(oa, a.kernel_index);
  if (!w) {
    out << json{{"witness", nullptr}}.dump(2) << '\n';
    err << "symbol-count kernel is trivial; no witness\n";
    return kFail;
  }
  const std::vector<double> grid = a.grid.empty() ? default_theta_grid() : parse_theta_grid(a.grid);
  const CertificationReport cert = verify_witness(oa, *w, grid, engine_options(cfg));
  WitnessDocument doc{*w, cert.pass, cert.thetas, cert.values};
  out << witness_to_json(doc, oa).dump(2) << '\n';
  if (!cert.pass) err << "invariant is constant on the theta grid; witness not certified\n";
  return cert.pass ? kPass : kFail;
}

int witness_scan(const WitnessArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const OrthogonalArray oa = load_oa(a.file, a.d);
  const auto w = find_witness(oa, a.kernel_index);
  if (!w) {
    err << "symbol-count kernel is trivial; nothing to scan\n";
    return kFail;
  }
  const std::vector<double> grid = a.grid.empty() ? default_theta_grid() : parse_theta_grid(a.grid);
  const CertificationReport cert = verify_witness(oa, *w, grid, engine_options(cfg));
  out << "theta,re,im\n";
  for (std::size_t i = 0; i < cert.thetas.size(); ++i) {
    out << format_double(cert.thetas[i]) << ',' << format_double(cert.values[i].real()) << ','
        << format_double(cert.values[i].imag()) << '\n';
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build AME states from orthogonal arrays and evaluate local-unitary invariants", "amelu"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--jobs", cfg.jobs, "Worker threads for invariant evaluation")->check(CLI::Range(1u, 1024u));
  app.add_option("--dense-cap", cfg.dense_cap, "Maximum d^(N n) assignments for the dense engine")
      ->check(CLI::Range(std::uint64_t{1000}, std::numeric_limits<std::uint64_t>::max()));
  app.add_option("--tol", cfg.tol, "Uniformity tolerance (max-entry norm)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for random local unitaries");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  // oa
  auto* oa_cmd = app.add_subcommand("oa", "Orthogonal array checks");
  oa_cmd->require_subcommand(1);
  OaValidateArgs oa_args;
  auto* oa_validate_cmd = oa_cmd->add_subcommand("validate", "Check strength and irredundancy");
  oa_validate_cmd->add_option("file", oa_args.file, "Array file")->required();
  oa_validate_cmd->add_option("--strength", oa_args.strength, "Strength k to check");
  oa_validate_cmd->add_option("--irredundant", oa_args.irredundant, "Irredundancy k to check");
  oa_validate_cmd->add_option("--d", oa_args.d, "Local dimension override");

  // state
  auto* state_cmd = app.add_subcommand("state", "State construction");
  state_cmd->require_subcommand(1);
  StateBuildArgs build_args;
  auto* build_cmd = state_cmd->add_subcommand("build", "Write a state as JSON");
  build_cmd->add_option("--from-oa", build_args.from_oa, "Irredundant orthogonal array file");
  build_cmd->add_option("--phase", build_args.phases, "Row phase 'j1,...,jN=theta' (repeatable)");
  build_cmd->add_option("--catalog", build_args.catalog, "Catalog family: psi3d, psi5d, ame43, ame52, ghz");
  build_cmd->add_option("--d", build_args.d, "Local dimension");
  build_cmd->add_option("--theta", build_args.theta, "Family parameter in radians (pi accepted)");
  build_cmd->add_option("--parties", build_args.parties, "Party count (ghz only)");
  build_cmd->add_option("--out", build_args.out_path, "Output file (stdout when omitted)");
  StateRandomizeArgs rand_args;
  auto* rand_cmd = state_cmd->add_subcommand("randomize", "Apply seeded random local unitaries");
  rand_cmd->add_option("file", rand_args.file, "State JSON")->required();
  rand_cmd->add_option("--out", rand_args.out_path, "Output file (stdout when omitted)");
  rand_cmd->add_flag("--allow-unnormalized", rand_args.allow_unnormalized, "Accept non-unit-norm input");

  // ent
  auto* ent_cmd = app.add_subcommand("ent", "Entanglement checks");
  ent_cmd->require_subcommand(1);
  EntCheckArgs ent_args;
  auto* ent_check_cmd = ent_cmd->add_subcommand("check", "k-uniformity / AME check");
  ent_check_cmd->add_option("file", ent_args.file, "State JSON")->required();
  ent_check_cmd->add_option("--k", ent_args.k, "Marginal size to check");
  ent_check_cmd->add_flag("--ame", ent_args.ame, "Check k = floor(N/2)");
  ent_check_cmd->add_flag("--allow-unnormalized", ent_args.allow_unnormalized, "Accept non-unit-norm input");

  // inv
  auto* inv_cmd = app.add_subcommand("inv", "Local-unitary invariants");
  inv_cmd->require_subcommand(1);
  InvComputeArgs inv_args;
  auto* inv_compute_cmd = inv_cmd->add_subcommand("compute", "Evaluate one invariant");
  inv_compute_cmd->add_option("state", inv_args.state_file, "State JSON")->required();
  inv_compute_cmd->add_option("perms", inv_args.perms_file, "Permutation file")->required();
  inv_compute_cmd->add_option("--engine", inv_args.engine, "auto, dense or sparse")
      ->check(CLI::IsMember({"auto", "dense", "sparse"}));
  inv_compute_cmd->add_flag("--allow-unnormalized", inv_args.allow_unnormalized, "Accept non-unit-norm input");

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "Inequivalence witnesses from an array");
  witness_cmd->require_subcommand(1);
  WitnessArgs witness_args;
  auto* find_cmd = witness_cmd->add_subcommand("find", "Emit a certified witness as JSON");
  auto* scan_cmd = witness_cmd->add_subcommand("scan", "Emit theta,re,im CSV of the witness invariant");
  for (auto* cmd : {find_cmd, scan_cmd}) {
    cmd->add_option("file", witness_args.file, "Array file")->required();
    cmd->add_option("--d", witness_args.d, "Local dimension override");
    cmd->add_option("--kernel-index", witness_args.kernel_index, "Which kernel basis vector to use")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--theta-grid", witness_args.grid, "Comma-separated angles (default 0,pi/3,pi/2,pi)");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kError;
  }

  try {
    if (oa_validate_cmd->parsed()) return oa_validate(oa_args, cfg, out);
    if (build_cmd->parsed()) return state_build(build_args, out);
    if (rand_cmd->parsed()) return state_randomize(rand_args, cfg, out);
    if (ent_check_cmd->parsed()) return ent_check(ent_args, cfg, out);
    if (inv_compute_cmd->parsed()) return inv_compute(inv_args, cfg, out);
    if (find_cmd->parsed()) return witness_find(witness_args, cfg, out, err);
    if (scan_cmd->parsed()) return witness_scan(witness_args, cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  err << app.help();
  return kError;
}

}  // namespace amelu::cli
