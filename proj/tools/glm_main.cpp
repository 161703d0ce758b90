#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "glmgee/catalog.hpp"
#include "glmgee/constructors.hpp"
#include "glmgee/io.hpp"
#include "glmgee/order.hpp"
#include "glmgee/problems.hpp"
#include "glmgee/stability.hpp"

using namespace glmgee;

namespace {

struct Options {
  std::string method;
  std::string problem;
  std::vector<std::string> params;
  std::string dt;       // single value, or comma list for convergence
  std::string dt_list;
  double t0 = std::numeric_limits<double>::quiet_NaN();
  double tend = std::numeric_limits<double>::quiet_NaN();
  double tol_local = 1e-5;
  bool tol_local_set = false;
  double tol_global = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1.0;
  std::string out;
  std::string format = "csv";
  bool verbose = false;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return out;
}

std::vector<double> split_doubles(const std::string& src) {
  std::vector<double> vals;
  std::stringstream ss(src);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) vals.push_back(std::stod(tok));
  return vals;
}

double single_dt(const Options& opt) {
  std::vector<double> vals = split_doubles(opt.dt);
  if (vals.size() != 1 || !(vals[0] > 0.0))
    throw CLI::ValidationError("--dt", "one positive step size is required");
  return vals[0];
}

std::vector<double> dt_sweep(const Options& opt) {
  std::vector<double> dts = split_doubles(!opt.dt_list.empty() ? opt.dt_list : opt.dt);
  if (dts.size() < 2)
    throw CLI::ValidationError("--dt-list",
                               "need at least two comma-separated step sizes");
  return dts;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

OdeProblem resolve_problem(const Options& opt) {
  OdeProblem p = problems::get(opt.problem, parse_params(opt.params));
  if (!std::isnan(opt.t0)) p.t0 = opt.t0;
  if (!std::isnan(opt.tend)) p.tend = opt.tend;
  return p;
}

void write_trace(const Options& opt, const IntegrationTrace& trace, bool with_true) {
  Output out(opt.out);
  if (opt.format == "json")
    out.stream() << io::trace_to_json(trace, with_true) << "\n";
  else
    io::write_trace_csv(out.stream(), trace, with_true);
}

int cmd_list_methods() {
  for (const auto& m : catalog::list())
    std::cout << m.name << "  p=" << m.order << "  gamma=" << io::format_double(m.gamma)
              << "  form=" << form_name(m.form) << "\n";
  std::cout << "Prince-C1  (S,M,F) triplet for the exact-principal-error runner\n";
  std::cout << "RK32G1  base method with dense output (solving-for-correction source)\n";
  return 0;
}

int cmd_list_problems() {
  for (const auto& n : problems::names()) {
    OdeProblem p = problems::get(n);
    std::cout << n << "  m=" << p.dim << "  window=[" << p.t0 << ", " << p.tend << "]"
              << (p.has_exact() ? "  exact solution" : "  reference oracle") << "\n";
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  const auto& entry = catalog::get(opt.method);
  ValidationReport v = validate(entry.tableau);
  OrderReport rep = verify_order(entry.tableau);
  if (opt.format == "json") {
    Output out(opt.out);
    out.stream() << "{\n\"order_report\": " << io::order_report_to_json(rep)
                 << ",\n\"tableau\": " << io::tableau_to_json(entry.tableau) << "\n}\n";
    bool okj = v.consistency_ok && v.preconsistency_ok && rep.order_y == entry.declared.order;
    return okj ? 0 : 1;
  }
  std::cout << opt.method << ":\n"
            << "  consistency " << (v.consistency_ok ? "OK" : "FAILED") << ", preconsistency "
            << (v.preconsistency_ok ? "OK" : "FAILED") << "\n"
            << "  order_y=" << rep.order_y << "  companion=" << rep.order_companion
            << "  gamma_relation=" << (rep.gamma_relation_ok ? "OK" : "FAILED") << "\n"
            << "  decoupling: BU=" << (rep.decoupling.BU_diagonal ? "diag" : "full")
            << " BAU=" << (rep.decoupling.BAU_diagonal ? "diag" : "full")
            << " BdiagA1U=" << (rep.decoupling.BdiagA1U_diagonal ? "diag" : "full") << "\n";
  if (opt.verbose) {
    TableauQ m =
        entry.tableau.form == TableauForm::Yeps ? to_yytilde(entry.tableau) : entry.tableau;
    WeightTable<Rational> w = propagate_weights(m, rep.max_order_checked);
    std::cout << "  per-tree residuals (slot columns)\n";
    for (int id = 0; id < w.trees.size(); ++id) {
      std::cout << "    order " << w.trees[id].order << " tree " << id << ":";
      for (int slot = 0; slot < m.r; ++slot)
        std::cout << " " << io::format_double(to_double(Rational(w.xi_hat[id](slot) - w.exact[id])));
      std::cout << "\n";
    }
  }
  bool ok = v.consistency_ok && v.preconsistency_ok && rep.order_y == entry.declared.order;
  return ok ? 0 : 1;
}

int cmd_integrate(const Options& opt) {
  OdeProblem p = resolve_problem(opt);
  TableauD t = to_double(catalog::get(opt.method).tableau);
  StepController ctrl =
      opt.tol_local_set
          ? StepController::local_error(single_dt(opt), opt.tol_local, opt.dt_min, opt.dt_max)
          : StepController::fixed(single_dt(opt));
  IntegrationTrace trace = integrate(t, p, p.t0, p.y0, p.tend, ctrl);
  write_trace(opt, trace, p.has_exact());
  if (trace.diverged) std::cerr << "numerical failure: " << trace.divergence_note << "\n";
  return trace.diverged ? 1 : 0;
}

int cmd_convergence(const Options& opt) {
  OdeProblem p = resolve_problem(opt);
  TableauD t = to_double(catalog::get(opt.method).tableau);
  ConvergenceTable table = convergence_study(t, p, p.t0, p.y0, p.tend, dt_sweep(opt));
  Output out(opt.out);
  io::write_convergence_csv(out.stream(), table);
  return 0;
}

int cmd_stability_region(const Options& opt, double re_min, double re_max, double im_min,
                         double im_max, int nx, int ny) {
  TableauD t = to_double(catalog::get(opt.method).tableau);
  StabilityScan scan = scan_region(t, re_min, re_max, im_min, im_max, nx, ny);
  Output out(opt.out);
  io::write_scan_csv(out.stream(), scan);
  return 0;
}

int cmd_stability_order(const Options& opt) {
  TableauD t = to_double(catalog::get(opt.method).tableau);
  StabilityOrderReport rep = stability_order(t);
  if (rep.saturated)
    std::cout << opt.method << ": stability order >= 6 (samples at round-off)\n";
  else
    std::cout << opt.method << ": stability order " << *rep.order << " (slope "
              << io::format_double(rep.slope) << ")\n";
  if (opt.verbose)
    for (std::size_t i = 0; i < rep.z_samples.size(); ++i)
      std::cout << "  z=" << rep.z_samples[i]
                << "  |Phi(e^z,z)|=" << io::format_double(rep.phi_magnitudes[i]) << "\n";
  return 0;
}

int cmd_construct(const std::string& kind, const std::string& base, int order,
                  const Options& opt) {
  TableauQ built;
  if (kind == "solcor") {
    if (base != "RK32G1")
      throw CLI::ValidationError("--base", "solcor construction ships with base RK32G1");
    built = build_solving_for_correction(catalog::rk32g1());
  } else if (kind == "extrapolation") {
    RkTableauQ rk;
    if (base == "Midpoint")
      rk = catalog::explicit_midpoint();
    else if (base == "RK4")
      rk = catalog::classical_rk4();
    else
      throw CLI::ValidationError("--base", "extrapolation bases: Midpoint, RK4");
    built = build_extrapolation(rk, order > 0 ? order : rk.order);
  } else {
    throw CLI::ValidationError("--kind", "constructions: solcor, extrapolation");
  }
  Output out(opt.out);
  out.stream() << io::tableau_to_json(built) << "\n";
  return 0;
}

int cmd_reproduce(const std::string& target, Options opt) {
  if (target == "fig1") {
    OdeProblem p = problems::tree_test();
    TableauD t = to_double(catalog::get("RK32G1-GL").tableau);
    Output out(opt.out);
    out.stream() << "dt,true_err_y3,eps_global_y3,estimator_ratio_y3\n";
    for (double dt : {0.4, 0.2, 0.1, 0.05, 0.025}) {
      IntegrationTrace tr = integrate(t, p, p.t0, p.y0, p.tend, StepController::fixed(dt));
      double true3 = (*tr.back().true_err)(2);
      double est3 = tr.back().eps_global(2);
      out.stream() << io::format_double(dt) << "," << io::format_double(true3) << ","
                   << io::format_double(est3) << ","
                   << io::format_double(std::abs((true3 - est3) / true3)) << "\n";
    }
    return 0;
  }
  if (target == "fig2c") {
    opt.method = "GLM-A2";
    opt.problem = "prince42";
    opt.dt = "0.03";
    opt.tol_local_set = false;
    return cmd_integrate(opt);
  }
  if (target == "fig4a" || target == "fig4b") {
    opt.method = target == "fig4a" ? "GLM-A4" : "GLM-s5-p3-g0";
    opt.problem = "prince42";
    opt.dt_list = "0.1,0.05,0.025,0.0125,0.00625";
    return cmd_convergence(opt);
  }
  if (target == "fig5") {
    OdeProblem p = problems::prince42();
    IntegrationTrace tr =
        run_exact_principal_error(catalog::prince_triplet(), p, p.t0, p.y0, p.tend, 0.03);
    write_trace(opt, tr, true);
    return 0;
  }
  if (target == "fig7") {
    opt.method = "GLM-A2";
    return cmd_stability_region(opt, -4.0, 1.0, -3.0, 3.0, 400, 400);
  }
  if (target == "fig8") {
    OdeProblem p = problems::kulikov2013i();
    TableauD t = to_double(catalog::get("GLM-s5-p3-g0").tableau);
    IntegrationTrace tr =
        integrate(t, p, p.t0, p.y0, p.tend, StepController::local_error(1e-3, 1e-5, 1e-5, 1e-3));
    write_trace(opt, tr, true);
    return tr.diverged ? 1 : 0;
  }
  if (target == "fig9") {
    OdeProblem p = problems::kulikov2013i();
    if (!std::isnan(opt.tend)) p.tend = opt.tend;
    TableauD t = to_double(catalog::get("GLM-s5-p3-g0").tableau);
    double dt0 = opt.dt.empty() ? 1e-3 : single_dt(opt);
    ToleranceRerun rerun =
        prescribed_tolerance_rerun(t, p, p.t0, p.y0, p.tend, dt0, opt.tol_global);
    std::cerr << "pilot_eps=" << io::format_double(rerun.pilot_eps)
              << " dt_star=" << io::format_double(rerun.dt_star) << "\n";
    write_trace(opt, rerun.trace, true);
    return rerun.trace.diverged ? 1 : 0;
  }
  throw CLI::ValidationError(
      "reproduce", "targets: fig1 fig2c fig4a fig4b fig5 fig7 fig8 fig9 (got " + target + ")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"general linear time stepping with built-in global error estimation"};
  app.require_subcommand(1);
  Options opt;

  CLI::Option* tol_local_opt = nullptr;
  auto add_common = [&](CLI::App* sub, bool needs_method, bool needs_problem) {
    if (needs_method) sub->add_option("--method", opt.method, "catalog method name")->required();
    if (needs_problem)
      sub->add_option("--problem", opt.problem, "test problem name")->required();
    sub->add_option("--param", opt.params, "problem parameter override key=value");
    sub->add_option("--dt", opt.dt, "step size (comma list doubles as --dt-list)");
    sub->add_option("--dt-list", opt.dt_list, "comma-separated step sizes");
    sub->add_option("--t0", opt.t0, "start time override");
    sub->add_option("--tend", opt.tend, "end time override");
    tol_local_opt = sub->add_option("--tol-local", opt.tol_local,
                                    "local error target (enables the step controller)");
    sub->add_option("--tol-global", opt.tol_global, "global error target");
    sub->add_option("--dt-min", opt.dt_min, "smallest admissible step");
    sub->add_option("--dt-max", opt.dt_max, "largest admissible step");
    sub->add_option("--out", opt.out, "output path (stdout when omitted)");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--verbose", opt.verbose, "extra diagnostics");
  };

  CLI::App* list_methods = app.add_subcommand("list-methods", "catalog summary");
  CLI::App* list_problems = app.add_subcommand("list-problems", "test problem summary");
  CLI::App* verify = app.add_subcommand("verify", "consistency/order/decoupling checks");
  add_common(verify, true, false);
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "time stepping with estimates");
  add_common(integrate_cmd, true, true);
  CLI::Option* integrate_tol = tol_local_opt;
  CLI::App* convergence = app.add_subcommand("convergence", "dt sweep with fitted slopes");
  add_common(convergence, true, true);
  CLI::App* region = app.add_subcommand("stability-region", "rho(R(z)) scan");
  add_common(region, true, false);
  double re_min = -4, re_max = 1, im_min = -3, im_max = 3;
  int nx = 200, ny = 200;
  region->add_option("--re-min", re_min);
  region->add_option("--re-max", re_max);
  region->add_option("--im-min", im_min);
  region->add_option("--im-max", im_max);
  region->add_option("--nx", nx);
  region->add_option("--ny", ny);
  CLI::App* order_cmd = app.add_subcommand("stability-order", "slope of Phi(e^z, z)");
  add_common(order_cmd, true, false);
  CLI::App* construct = app.add_subcommand("construct", "emit a built tableau as JSON");
  std::string kind = "solcor", base = "RK32G1";
  int base_order = 0;
  construct->add_option("--kind", kind, "solcor or extrapolation");
  construct->add_option("--base", base, "base method");
  construct->add_option("--order", base_order, "base order (extrapolation)");
  construct->add_option("--out", opt.out, "output path");
  CLI::App* reproduce = app.add_subcommand("reproduce", "rerun a reported experiment");
  std::string target;
  reproduce->add_option("target", target, "fig1 fig2c fig4a fig4b fig5 fig7 fig8 fig9")
      ->required();
  add_common(reproduce, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.tol_local_set = integrate_tol != nullptr && integrate_tol->count() > 0;

  try {
    if (*list_methods) return cmd_list_methods();
    if (*list_problems) return cmd_list_problems();
    if (*verify) return cmd_verify(opt);
    if (*integrate_cmd) return cmd_integrate(opt);
    if (*convergence) return cmd_convergence(opt);
    if (*region) return cmd_stability_region(opt, re_min, re_max, im_min, im_max, nx, ny);
    if (*order_cmd) return cmd_stability_order(opt);
    if (*construct) return cmd_construct(kind, base, base_order, opt);
    if (*reproduce) return cmd_reproduce(target, opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
