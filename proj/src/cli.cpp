#include "gsh/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "gsh/hermite.hpp"
#include "gsh/io.hpp"
#include "gsh/kernel.hpp"
#include "gsh/parallel.hpp"
#include "gsh/spaces.hpp"
#include "gsh/structural.hpp"
#include "gsh/weights.hpp"

namespace gsh::cli {

namespace {

using io::json;

struct Common {
  bool strict = false;
  int threads = 1;
  std::uint64_t seed = 20250809;
  std::string report_path;
  int numerical_flags = 0;

  void note_flag(bool raised) {
    if (raised) ++numerical_flags;
  }
};

// "a:b:n" -> n equally spaced points from a to b
std::vector<double> parse_grid(const std::string& s) {
  double a, b;
  long n;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
    throw std::invalid_argument("grid must be 'a:b:n' with n >= 1");
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i)
    g[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<int> parse_box(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty() || out.size() > kMaxDim)
    throw std::invalid_argument("box must list 1..3 comma-separated orders");
  return out;
}

json condition_report_json(const weights::ConditionReport& rep) {
  json j;
  j["condition"] = weights::to_string(rep.condition);
  j["verdict"] = weights::to_string(rep.verdict);
  j["checked_up_to"] = rep.checked_up_to;
  json w = json::object();
  for (const auto& [k, v] : rep.witnesses) w[k] = v;
  j["witnesses"] = w;
  return j;
}

json base_report(const std::string& command, const Common& common) {
  json j;
  j["command"] = command;
  j["config"] = json::object();
  j["config"]["seed"] = common.seed;
  j["config"]["strict"] = common.strict;
  j["config"]["threads"] = common.threads;
  j["inputs"] = json::object();
  return j;
}

void emit_report(const json& report, const Common& common, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!common.report_path.empty()) {
    std::ofstream f(common.report_path);
    if (!f) throw std::runtime_error("cannot write report to " + common.report_path);
    f << text;
  } else {
    out << text;
  }
}

weights::WeightSequence load_sequence(const std::string& path, json& report) {
  report["inputs"][path] = io::file_digest(path);
  return io::sequence_from_json(io::load_json(path));
}

CoefficientField load_field(const std::string& path, json& report) {
  report["inputs"][path] = io::file_digest(path);
  return io::field_from_json(io::load_json(path));
}

hermite::Callable make_preset(const std::string& name, int dim) {
  constexpr double pi = std::numbers::pi_v<double>;
  if (name == "h0") {
    return [dim](std::span<const double> x) {
      double v = 1.0;
      for (int k = 0; k < dim; ++k) v *= std::pow(pi, -0.25) * std::exp(-0.5 * x[k] * x[k]);
      return cplx{v, 0.0};
    };
  }
  if (name == "gaussian") {
    return [dim](std::span<const double> x) {
      double v = 1.0;
      for (int k = 0; k < dim; ++k) v *= std::exp(-0.5 * x[k] * x[k]);
      return cplx{v, 0.0};
    };
  }
  if (name.rfind("hermite:", 0) == 0) {
    const int n = std::stoi(name.substr(8));
    return [n, dim](std::span<const double> x) {
      double v = 1.0;
      for (int k = 0; k < dim; ++k) v *= hermite::hermite_eval(n, x[k]);
      return cplx{v, 0.0};
    };
  }
  throw std::invalid_argument("unknown preset '" + name + "' (use h0, gaussian, hermite:<n>)");
}

CoefficientField random_field(const Box& box, std::mt19937_64& rng, FieldKind kind) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefficientField f(box, kind);
  for (auto& z : f.data) z = cplx{u(rng), u(rng)};
  return f;
}

int severity(const std::exception& e) {
  if (dynamic_cast<const std::domain_error*>(&e)) return 2;
  return 1;
}

// ---------------------------------------------------------------- seq check
int cmd_seq_check(const std::string& spec_path, const std::string& conditions, Common& common,
                  std::ostream& out) {
  json report = base_report("seq check", common);
  const auto seq = load_sequence(spec_path, report);
  report["config"]["conditions"] = conditions;

  json results = json::object();
  std::istringstream is(conditions);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    weights::ConditionReport rep;
    if (tok == "m1")
      rep = weights::check_m1(seq);
    else if (tok == "m2")
      rep = weights::check_m2(seq);
    else if (tok == "m3q")
      rep = weights::check_m3_quasi(seq);
    else if (tok == "m3r")
      rep = weights::check_m3_nontrivial(seq, weights::NontrivialityMode::roumieu);
    else if (tok == "m3b")
      rep = weights::check_m3_nontrivial(seq, weights::NontrivialityMode::beurling);
    else
      throw std::invalid_argument("unknown condition '" + tok + "' (use m1,m2,m3q,m3r,m3b)");
    results[tok] = condition_report_json(rep);
    common.note_flag(rep.verdict == weights::Verdict::inconclusive);
  }
  report["results"] = results;
  emit_report(report, common, out);
  return 0;
}

// ---------------------------------------------------------------- seq assoc
int cmd_seq_assoc(const std::string& spec_path, const std::string& rho_grid, long p_cap,
                  const std::string& mode_name, Common& common, std::ostream& out) {
  json report = base_report("seq assoc", common);
  const auto seq = load_sequence(spec_path, report);
  const auto grid = parse_grid(rho_grid);
  weights::AssocOptions opt;
  opt.p_cap = p_cap;
  if (mode_name == "scan")
    opt.mode = weights::ScanMode::unimodal;
  else if (mode_name == "full")
    opt.mode = weights::ScanMode::full;
  else if (mode_name == "bracket")
    opt.mode = weights::ScanMode::bracket;
  else
    throw std::invalid_argument("mode must be scan, full or bracket");
  report["config"]["rho_grid"] = rho_grid;
  report["config"]["p_cap"] = p_cap;
  report["config"]["mode"] = mode_name;

  std::ostringstream table;
  table << std::setprecision(17);
  json values = json::array();
  for (double rho : grid) {
    const auto r = weights::associated_fn(seq, rho, opt);
    common.note_flag(r.saturated);
    table << rho << ' ' << r.value << '\n';
    values.push_back(json{{"rho", rho}, {"value", r.value}, {"p_star", r.p_star}, {"saturated", r.saturated}});
  }
  out << table.str();
  if (!common.report_path.empty()) {
    report["results"]["table"] = values;
    emit_report(report, common, out);
  }
  return 0;
}

// ------------------------------------------------------------- coeff analyze
int cmd_coeff_analyze(const std::string& input, const std::string& box_spec, int quad,
                      const std::string& out_path, Common& common, std::ostream& out) {
  json report = base_report("coeff analyze", common);
  const auto orders = parse_box(box_spec);
  const Box box(std::span<const int>(orders.data(), orders.size()));
  report["config"]["box"] = orders;
  report["config"]["quad"] = quad;

  CoefficientField a;
  if (input.rfind("preset:", 0) == 0) {
    a = hermite::analyze(make_preset(input.substr(7), box.dim()), box, quad);
  } else {
    report["inputs"][input] = io::file_digest(input);
    const SampledFunction s = io::samples_from_json(io::load_json(input));
    a = hermite::analyze(s, box, quad);
  }
  io::save_json(out_path, io::field_to_json(a));
  report["results"]["output"] = out_path;
  double max_abs = 0.0;
  for (const auto& z : a.data) max_abs = std::max(max_abs, std::abs(z));
  report["results"]["max_abs_coefficient"] = max_abs;
  emit_report(report, common, out);
  return 0;
}

// --------------------------------------------------------------- coeff synth
int cmd_coeff_synth(const std::string& coeffs, const std::string& grid_spec,
                    const std::string& out_path, Common& common, std::ostream& out) {
  json report = base_report("coeff synth", common);
  const auto a = load_field(coeffs, report);
  const auto g = parse_grid(grid_spec);
  std::vector<std::vector<double>> grids(a.box.dim(), g);
  const SampledFunction s = hermite::synthesize(a, grids);
  report["config"]["grid"] = grid_spec;
  if (!out_path.empty()) {
    io::save_json(out_path, io::samples_to_json(s));
    report["results"]["output"] = out_path;
    emit_report(report, common, out);
  } else if (a.box.dim() == 1) {
    std::ostringstream table;
    table << std::setprecision(17);
    for (std::size_t i = 0; i < s.values.size(); ++i)
      table << s.grid[0][i] << ' ' << s.values[i].real() << ' ' << s.values[i].imag() << '\n';
    out << table.str();
  } else {
    emit_report(report, common, out);
  }
  return 0;
}

// ------------------------------------------------------------------ classify
int cmd_classify(const std::string& coeffs, const std::string& spec_path, const std::string& kind,
                 const std::string& theta_spec, Common& common, std::ostream& out) {
  json report = base_report("classify", common);
  const auto a = load_field(coeffs, report);
  const auto seq = load_sequence(spec_path, report);
  weights::AssociatedFunctionTable table(seq);
  const auto thetas = parse_grid(theta_spec);

  spaces::MembershipKind mk;
  if (kind == "test")
    mk = spaces::MembershipKind::test_roumieu;
  else if (kind == "test-beurling")
    mk = spaces::MembershipKind::test_beurling;
  else if (kind == "dual")
    mk = spaces::MembershipKind::dual_roumieu;
  else if (kind == "dual-beurling")
    mk = spaces::MembershipKind::dual_beurling;
  else
    throw std::invalid_argument("kind must be test, test-beurling, dual or dual-beurling");

  std::vector<std::vector<double>> grid;
  for (double t : thetas) grid.emplace_back(a.box.dim(), t);
  const auto rep = spaces::classify(a, table, mk, grid);

  report["config"]["kind"] = kind;
  report["config"]["theta_grid"] = theta_spec;
  json r;
  r["theta_grid"] = rep.theta_grid;
  if (!rep.log_norms.empty()) r["log_norms"] = rep.log_norms;
  if (!rep.constants.empty()) r["constants"] = rep.constants;
  r["stable"] = rep.stable;
  r["theta_star"] = rep.theta_star;
  r["at_boundary"] = rep.at_boundary;
  report["results"] = r;
  common.note_flag(rep.at_boundary);
  emit_report(report, common, out);
  return 0;
}

// ---------------------------------------------------------------------- pair
int cmd_pair(const std::string& dual_path, const std::string& test_path, Common& common,
             std::ostream& out) {
  json report = base_report("pair", common);
  const auto b = load_field(dual_path, report);
  const auto a = load_field(test_path, report);
  const cplx v = spaces::parseval_pair(b, a);
  report["results"]["value"] = json::array({v.real(), v.imag()});
  emit_report(report, common, out);
  return 0;
}

// ---------------------------------------------------------------- regularize
int cmd_regularize(const std::string& dual_path, const std::string& spec_path, double mu,
                   bool verify, const std::string& out_path, Common& common, std::ostream& out) {
  json report = base_report("regularize", common);
  const auto b = load_field(dual_path, report);
  const auto seq = load_sequence(spec_path, report);
  report["config"]["mu"] = mu;

  const CoefficientField a = structural::regularize(b, seq, mu);
  io::save_json(out_path, io::field_to_json(a));
  report["results"]["output"] = out_path;

  if (verify) {
    const auto bound = structural::verify_bound(a, a.box.order(0) - 1);
    report["results"]["bound_sup"] = bound.sup_value;
    report["results"]["bound_table_size"] = bound.s.size();
  }
  const auto d1 = structural::divisor_total(seq, mu, 1);
  report["results"]["divisor_at_nu1"] = d1.value();
  common.note_flag(d1.tail_flag);
  emit_report(report, common, out);
  return 0;
}

// --------------------------------------------------------------- reconstruct
int cmd_reconstruct(const std::string& f_path, const std::string& test_path,
                    const std::string& spec_path, double mu, long beta_max, Common& common,
                    std::ostream& out) {
  json report = base_report("reconstruct", common);
  const auto a = load_field(f_path, report);
  const auto phi = load_field(test_path, report);
  const auto seq = load_sequence(spec_path, report);
  report["config"]["mu"] = mu;
  report["config"]["beta_max"] = beta_max;

  const auto osc = structural::oscillator_series_pair(a, seq, mu, phi, beta_max);

  // recover b_n = a_n D_mu(nu) and pair directly
  CoefficientField b(a.box, FieldKind::dual);
  for (std::size_t f = 0; f < a.data.size(); ++f) {
    if (a.data[f] == cplx{0.0, 0.0}) continue;
    const auto d = structural::divisor_total(seq, mu, a.box.unflat(f).total());
    b.data[f] = a.data[f] * d.value();
  }
  const cplx direct = spaces::parseval_pair(b, phi);
  const double residual = std::abs(osc.value - direct);
  const double rel = residual / std::max(1e-300, std::abs(direct));

  report["results"]["series_pairing"] = json::array({osc.value.real(), osc.value.imag()});
  report["results"]["parseval_pairing"] = json::array({direct.real(), direct.imag()});
  report["results"]["residual"] = residual;
  report["results"]["relative_residual"] = rel;
  report["results"]["tail_estimate"] = osc.tail_estimate;
  report["results"]["beta_used"] = osc.beta_used;
  emit_report(report, common, out);
  return 0;
}

// -------------------------------------------------------------- kernel build
int cmd_kernel_build(const std::string& bilinear, const std::string& out_box_spec,
                     const std::string& in_box_spec, const std::string& a_path,
                     const std::string& b_path, const std::string& out_path, Common& common,
                     std::ostream& out) {
  json report = base_report("kernel build", common);
  const auto oo = parse_box(out_box_spec);
  const auto io_ = parse_box(in_box_spec);
  const Box out_box(std::span<const int>(oo.data(), oo.size()));
  const Box in_box(std::span<const int>(io_.data(), io_.size()));
  report["config"]["bilinear"] = bilinear;

  kernel::KernelCoefficients t;
  if (bilinear == "identity" || bilinear == "parseval") {
    if (!(out_box == in_box)) throw std::invalid_argument("identity kernel needs equal boxes");
    t = kernel::identity_kernel(out_box);
  } else if (bilinear == "fourier") {
    if (!(out_box == in_box)) throw std::invalid_argument("fourier kernel needs equal boxes");
    t = kernel::fourier_kernel(out_box);
  } else if (bilinear.rfind("heat:", 0) == 0) {
    if (!(out_box == in_box)) throw std::invalid_argument("heat kernel needs equal boxes");
    t = kernel::heat_kernel(out_box, std::stod(bilinear.substr(5)));
  } else if (bilinear == "rankone") {
    const auto a = load_field(a_path, report);
    const auto b = load_field(b_path, report);
    t = kernel::rank_one_kernel(a, b);
  } else if (bilinear.rfind("from-kernel:", 0) == 0) {
    const std::string path = bilinear.substr(12);
    report["inputs"][path] = io::file_digest(path);
    const auto t0 = io::kernel_from_json(io::load_json(path));
    const auto B = [&t0](const CoefficientField& psi, const CoefficientField& phi) {
      return kernel::pair_kernel(t0, kernel::tensor(psi, phi));
    };
    t = kernel::kernel_from_bilinear(B, out_box, in_box);
  } else {
    throw std::invalid_argument("unknown bilinear '" + bilinear +
                                "' (identity, parseval, fourier, heat:<tau>, rankone, from-kernel:<file>)");
  }
  io::save_json(out_path, io::kernel_to_json(t));
  report["results"]["output"] = out_path;
  report["results"]["entries"] = t.data.size();
  emit_report(report, common, out);
  return 0;
}

// -------------------------------------------------------------- kernel apply
int cmd_kernel_apply(const std::string& kernel_path, const std::string& input_path,
                     const std::string& out_path, Common& common, std::ostream& out) {
  json report = base_report("kernel apply", common);
  report["inputs"][kernel_path] = io::file_digest(kernel_path);
  const auto t = io::kernel_from_json(io::load_json(kernel_path));
  const auto phi = load_field(input_path, report);
  const auto result = kernel::apply_operator(t, phi);
  io::save_json(out_path, io::field_to_json(result));
  report["results"]["output"] = out_path;
  emit_report(report, common, out);
  return 0;
}

// ------------------------------------------------------------- kernel verify
int cmd_kernel_verify(const std::string& kernel_path, int trials, Common& common,
                      std::ostream& out) {
  json report = base_report("kernel verify", common);
  report["inputs"][kernel_path] = io::file_digest(kernel_path);
  const auto t = io::kernel_from_json(io::load_json(kernel_path));
  report["config"]["trials"] = trials;

  std::mt19937_64 rng(common.seed);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto phi = random_field(t.in_box, rng, FieldKind::test);
    const auto psi = random_field(t.out_box, rng, FieldKind::test);
    worst = std::max(worst, kernel::verify_kernel_identity(t, phi, psi));
    scale = std::max(scale, std::abs(kernel::pair_kernel(t, kernel::tensor(psi, phi))));
  }
  const double uniq = kernel::kernel_uniqueness_probe(t);
  report["results"]["max_identity_residual"] = worst;
  report["results"]["identity_scale"] = scale;
  report["results"]["uniqueness_probe"] = uniq;
  emit_report(report, common, out);
  return 0;
}

// ------------------------------------------------------------- kernel growth
int cmd_kernel_growth(const std::string& kernel_path, const std::string& spec_path,
                      std::vector<double> theta, std::vector<double> nu, Common& common,
                      std::ostream& out) {
  json report = base_report("kernel growth", common);
  report["inputs"][kernel_path] = io::file_digest(kernel_path);
  const auto t = io::kernel_from_json(io::load_json(kernel_path));
  const auto seq = load_sequence(spec_path, report);
  weights::AssociatedFunctionTable table(seq);
  if (theta.empty()) theta.assign(t.l(), 1.0);
  if (nu.empty()) nu.assign(t.s(), 1.0);
  const auto g = kernel::kernel_growth_check(t, table, theta, nu);
  report["config"]["theta"] = theta;
  report["config"]["nu"] = nu;
  report["results"]["passes"] = g.passes;
  report["results"]["constant"] = g.constant;
  emit_report(report, common, out);
  return 0;
}

// ---------------------------------------------------------------------- demo
int cmd_demo(Common& common, std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok, double value) {
    out << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << std::setprecision(6) << value
        << ")\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(common.seed);

  // Theorem 1 pipeline: regularize a random dual field against gevrey(1),
  // reconstruct the pairing through the oscillator-power series.
  const auto seq = weights::WeightSequence::gevrey(1.0, 600);
  const Box box(64);
  const auto b = random_field(box, rng, FieldKind::dual);
  const auto phi = random_field(box, rng, FieldKind::test);
  const auto a = structural::regularize(b, seq, 1.0);
  const auto osc = structural::oscillator_series_pair(a, seq, 1.0, phi, 300);
  const cplx direct = spaces::parseval_pair(b, phi);
  const double rel = std::abs(osc.value - direct) / std::max(1e-300, std::abs(direct));
  check("structural round-trip relative residual <= 1e-8", rel <= 1e-8, rel);

  const double d = structural::divisor_total(seq, 1.0, 1).value();
  const double derr = std::fabs(d - std::cosh(1.0));
  check("divisor(gevrey(1), mu=1, nu=1) = cosh(1)", derr <= 1e-12, derr);

  const auto bound = structural::verify_bound(a, 63);
  check("regularized bound table finite", std::isfinite(bound.sup_value), bound.sup_value);

  // Theorem 2 pipeline: kernel identity, uniqueness, Fourier periodicity.
  const Box kb(16);
  const auto t = kernel::identity_kernel(kb);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto p = random_field(kb, rng, FieldKind::test);
    const auto q = random_field(kb, rng, FieldKind::test);
    worst = std::max(worst, kernel::verify_kernel_identity(t, p, q));
  }
  check("kernel identity residual <= 1e-13", worst <= 1e-13, worst);

  const double uniq = kernel::kernel_uniqueness_probe(t);
  check("kernel uniqueness probe <= 1e-15", uniq <= 1e-15, uniq);

  const auto F = kernel::fourier_kernel(kb);
  auto field = random_field(kb, rng, FieldKind::test);
  auto four = field;
  for (int i = 0; i < 4; ++i) four = kernel::apply_operator(F, four);
  double fres = 0.0;
  for (std::size_t f = 0; f < field.data.size(); ++f)
    fres = std::max(fres, std::abs(four.data[f] - field.data[f]));
  check("Fourier kernel F^4 = id", fres == 0.0, fres);

  out << (failures == 0 ? "demo: all checks passed\n" : "demo: FAILURES\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Hermite-spectral toolkit for weight-sequence analysis, coefficient-space "
               "membership diagnostics, structural regularization and kernel operators"};
  app.require_subcommand(1);

  Common common;
  if (const char* env = std::getenv("GSH_THREADS")) common.threads = std::atoi(env);
  app.add_flag("--strict", common.strict, "escalate numerical flags (saturation, exhaustion) to exit 2");
  app.add_option("--threads", common.threads, "worker cap for module-internal parallelism");
  app.add_option("--seed", common.seed, "seed for randomized subcommands");
  app.add_option("--report", common.report_path, "write the JSON report here instead of stdout");

  // seq
  auto* seq = app.add_subcommand("seq", "weight-sequence analysis");
  seq->require_subcommand(1);
  auto* seq_check = seq->add_subcommand("check", "check conditions (M.1)-(M.3)''' on a sequence");
  std::string spec_path, conditions = "m1,m2,m3q,m3r,m3b";
  seq_check->add_option("spec", spec_path, "sequence specification JSON")->required();
  seq_check->add_option("--conditions", conditions, "comma list from m1,m2,m3q,m3r,m3b");

  auto* seq_assoc = seq->add_subcommand("assoc", "tabulate the associated function M(rho)");
  std::string assoc_spec, rho_grid = "1:100:50", assoc_mode = "scan";
  long p_cap = 10000;
  seq_assoc->add_option("spec", assoc_spec, "sequence specification JSON")->required();
  seq_assoc->add_option("--rho-grid", rho_grid, "rho grid a:b:n");
  seq_assoc->add_option("--p-cap", p_cap, "largest p the scan may visit");
  seq_assoc->add_option("--mode", assoc_mode, "scan | full | bracket");

  // coeff
  auto* coeff = app.add_subcommand("coeff", "Fourier-Hermite analysis / synthesis");
  coeff->require_subcommand(1);
  auto* ca = coeff->add_subcommand("analyze", "compute Fourier-Hermite coefficients");
  std::string ca_input, ca_box, ca_out = "coeffs.json";
  int ca_quad = 0;
  ca->add_option("--input", ca_input, "samples JSON or preset:{h0,gaussian,hermite:<n>}")->required();
  ca->add_option("--box", ca_box, "per-axis truncation orders N[,N...]")->required();
  ca->add_option("--quad", ca_quad, "quadrature order (default: box order + 16)");
  ca->add_option("--out", ca_out, "output coefficient file");

  auto* cs = coeff->add_subcommand("synth", "evaluate a coefficient field on a grid");
  std::string cs_coeffs, cs_grid = "-8:8:321", cs_out;
  cs->add_option("--coeffs", cs_coeffs, "coefficient file")->required();
  cs->add_option("--grid", cs_grid, "grid a:b:n (per axis)");
  cs->add_option("--out", cs_out, "output samples JSON (default: two-column table on stdout)");

  // classify / pair
  auto* cl = app.add_subcommand("classify", "membership diagnostics along a theta grid");
  std::string cl_coeffs, cl_spec, cl_kind = "test", cl_theta = "0.25:4:16";
  cl->add_option("--coeffs", cl_coeffs, "coefficient file")->required();
  cl->add_option("--seq", cl_spec, "sequence specification JSON")->required();
  cl->add_option("--kind", cl_kind, "test | test-beurling | dual | dual-beurling");
  cl->add_option("--theta-grid", cl_theta, "theta grid a:b:n");

  auto* pr = app.add_subcommand("pair", "bilinear Parseval pairing <f, phi>");
  std::string pr_dual, pr_test;
  pr->add_option("--dual", pr_dual, "dual-side coefficient file")->required();
  pr->add_option("--test", pr_test, "test-side coefficient file")->required();

  // structural
  auto* rg = app.add_subcommand("regularize", "divide a dual field by the regularizing divisor");
  std::string rg_dual, rg_spec, rg_out = "f.json";
  double rg_mu = 1.0;
  bool rg_verify = false;
  rg->add_option("--dual", rg_dual, "dual-side coefficient file")->required();
  rg->add_option("--seq", rg_spec, "sequence specification JSON")->required();
  rg->add_option("--mu", rg_mu, "divisor scale mu > 0");
  rg->add_flag("--verify-bound", rg_verify, "tabulate n^2 |a_n| ||H_n||_inf");
  rg->add_option("--out", rg_out, "output coefficient file for f");

  auto* rc = app.add_subcommand("reconstruct", "pair through the oscillator-power series");
  std::string rc_f, rc_test, rc_spec;
  double rc_mu = 1.0;
  long rc_beta = 200;
  rc->add_option("--f", rc_f, "regularized coefficient file")->required();
  rc->add_option("--test", rc_test, "test-side coefficient file")->required();
  rc->add_option("--seq", rc_spec, "sequence specification JSON")->required();
  rc->add_option("--mu", rc_mu, "divisor scale mu > 0");
  rc->add_option("--beta-max", rc_beta, "series truncation cap");

  // kernel
  auto* kn = app.add_subcommand("kernel", "kernel-operator machinery");
  kn->require_subcommand(1);
  auto* kb = kn->add_subcommand("build", "extract kernel coefficients from a bilinear form");
  std::string kb_bilinear = "identity", kb_out_box = "8", kb_in_box = "8", kb_a, kb_b,
              kb_out = "kernel.json";
  kb->add_option("--bilinear", kb_bilinear,
                 "identity | parseval | fourier | heat:<tau> | rankone | from-kernel:<file>");
  kb->add_option("--out-box", kb_out_box, "output-side box orders");
  kb->add_option("--in-box", kb_in_box, "input-side box orders");
  kb->add_option("--a", kb_a, "rank-one left field");
  kb->add_option("--b", kb_b, "rank-one right field");
  kb->add_option("--out", kb_out, "output kernel file");

  auto* ka = kn->add_subcommand("apply", "apply the induced operator to a coefficient field");
  std::string ka_kernel, ka_input, ka_out = "out.json";
  ka->add_option("--kernel", ka_kernel, "kernel file")->required();
  ka->add_option("--input", ka_input, "input coefficient file")->required();
  ka->add_option("--out", ka_out, "output coefficient file");

  auto* kv = kn->add_subcommand("verify", "check <K phi, psi> = K(psi x phi) on random fields");
  std::string kv_kernel;
  int kv_trials = 20;
  kv->add_option("--kernel", kv_kernel, "kernel file")->required();
  kv->add_option("--trials", kv_trials, "number of random trials");

  auto* kg = kn->add_subcommand("growth", "check the kernel growth estimate");
  std::string kg_kernel, kg_spec;
  std::vector<double> kg_theta, kg_nu;
  kg->add_option("--kernel", kg_kernel, "kernel file")->required();
  kg->add_option("--seq", kg_spec, "sequence specification JSON")->required();
  kg->add_option("--theta", kg_theta, "output-side theta (one per axis)");
  kg->add_option("--nu", kg_nu, "input-side theta (one per axis)");

  auto* dm = app.add_subcommand("demo", "run the structural + kernel pipelines on fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    runtime::set_thread_count(common.threads);
    int rc_code = 0;
    if (*seq_check)
      rc_code = cmd_seq_check(spec_path, conditions, common, out);
    else if (*seq_assoc)
      rc_code = cmd_seq_assoc(assoc_spec, rho_grid, p_cap, assoc_mode, common, out);
    else if (*ca)
      rc_code = cmd_coeff_analyze(ca_input, ca_box, ca_quad, ca_out, common, out);
    else if (*cs)
      rc_code = cmd_coeff_synth(cs_coeffs, cs_grid, cs_out, common, out);
    else if (*cl)
      rc_code = cmd_classify(cl_coeffs, cl_spec, cl_kind, cl_theta, common, out);
    else if (*pr)
      rc_code = cmd_pair(pr_dual, pr_test, common, out);
    else if (*rg)
      rc_code = cmd_regularize(rg_dual, rg_spec, rg_mu, rg_verify, rg_out, common, out);
    else if (*rc)
      rc_code = cmd_reconstruct(rc_f, rc_test, rc_spec, rc_mu, rc_beta, common, out);
    else if (*kb)
      rc_code = cmd_kernel_build(kb_bilinear, kb_out_box, kb_in_box, kb_a, kb_b, kb_out, common, out);
    else if (*ka)
      rc_code = cmd_kernel_apply(ka_kernel, ka_input, ka_out, common, out);
    else if (*kv)
      rc_code = cmd_kernel_verify(kv_kernel, kv_trials, common, out);
    else if (*kg)
      rc_code = cmd_kernel_growth(kg_kernel, kg_spec, kg_theta, kg_nu, common, out);
    else if (*dm)
      rc_code = cmd_demo(common, out);

    if (rc_code == 0 && common.strict && common.numerical_flags > 0) {
      std::cerr << "strict: " << common.numerical_flags << " numerical flag(s) raised\n";
      return 2;
    }
    return rc_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return severity(e);
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout); }

}  // namespace gsh::cli
