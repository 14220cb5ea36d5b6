#include <algorithm>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "commands.hpp"
#include "lamharm/config.hpp"
#include "lamharm/errors.hpp"
#include "output.hpp"

namespace {

using namespace lamharm::cli;

int run(const std::vector<std::string>& args, int depth = 0);

int rerun(const std::string& manifest, int depth) {
  const nlohmann::json doc = nlohmann::json::parse(lamharm::read_text_file(manifest), nullptr, false);
  if (doc.is_discarded() || !doc.contains("argv") || !doc["argv"].is_array())
    throw lamharm::ParseError(manifest + ": not a run manifest");
  const auto argv = doc["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun") throw lamharm::ParseError("manifest replays another rerun");
  return run(argv, depth + 1);
}

int run(const std::vector<std::string>& args, int depth) {
  CLI::App app{"Layered Laplace problems: solve, verify and run the transform demos."};
  app.require_subcommand(1);
  std::function<int()> action;

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Solve a config and sample the field on a polar grid");
  s->add_option("--config", solve.config, "Problem JSON")->required();
  s->add_option("--grid", solve.grid, "RxA: radii x angles");
  s->add_option("--out", solve.out, "CSV output");
  s->callback([&] { action = [&] { return cmd_solve(solve, args); }; });

  CheckOptions check;
  std::string check_out;
  auto* c = app.add_subcommand("check", "Validate, solve and report residuals as JSON");
  c->set_help_flag("--help", "Print this help message and exit");
  c->add_option("--config", check.config, "Problem JSON")->required();
  c->add_option("--h", check.h, "Stencil step of the Laplacian residual");
  c->add_option("--samples", check.laplacian_samples, "Stencil centers per layer");
  c->add_option("--angles", check.angular_samples, "Angular samples per sphere (0: default)");
  c->add_option("--tol", check.condition_threshold, "Condition residual threshold");
  c->add_option("--laplacian-tol", check.laplacian_threshold, "Laplacian residual threshold");
  c->add_option("--out", check_out, "Also write the report here");
  c->callback([&] {
    if (!check_out.empty()) check.out = check_out;
    action = [&] { return cmd_check(check, args); };
  });

  RobinOptions robin;
  auto* r = app.add_subcommand("demo-robin", "Robin transform: quadrature vs (H + lE)^-1");
  r->add_option("--H", robin.H, "Matrix rows separated by ';', entries by ','");
  r->add_option("--modes", robin.modes, "Mode list, e.g. 0-10 or 0,2,5");
  r->add_option("--tol", robin.tol, "Tail tolerance of the s integral");
  r->add_option("--out", robin.out, "CSV output");
  r->callback([&] { action = [&] { return cmd_demo_robin(robin, args); }; });

  ReflectionOptions refl;
  auto* f = app.add_subcommand("demo-reflection", "Reflection series vs mode oracle and P0");
  f->add_option("--K", refl.K, "Matrix rows separated by ';', entries by ','");
  f->add_option("--r", refl.r, "Interface radius");
  f->add_option("--band", refl.band, "Band limit of the test function");
  f->add_option("--tol", refl.tol, "Series truncation tolerance");
  f->add_option("--grid", refl.grid, "RxA comparison grid");
  f->add_option("--out", refl.out, "CSV output");
  f->callback([&] { action = [&] { return cmd_demo_reflection(refl, args); }; });

  AxisOptions axis;
  auto* a = app.add_subcommand("axis-roundtrip", "Axis transform round trip");
  a->add_option("--config", axis.config, "Axis JSON")->required();
  a->add_option("--function", axis.function, "gaussian | zero");
  a->add_option("--sigma", axis.sigma, "Gaussian width");
  a->add_option("--shift", axis.shift, "Gaussian center");
  a->add_option("--half-width", axis.half_width, "Grid covers [-X, X]");
  a->add_option("--samples", axis.samples, "Grid points");
  a->add_option("--normalization", axis.normalization, "spectral | printed");
  a->add_option("--tol", axis.threshold, "Round-trip error threshold");
  a->add_option("--out", axis.out, "CSV output");
  a->callback([&] { action = [&] { return cmd_axis_roundtrip(axis, args); }; });

  KernelOptions kernel;
  auto* k = app.add_subcommand("kernel", "Tabulate the zonal kernel series");
  k->add_option("--config", kernel.config, "Problem JSON")->required();
  k->add_option("--layer", kernel.layer, "Target layer");
  k->add_option("--source", kernel.source, "boundary | interface index");
  k->add_option("--r", kernel.r, "Target radius");
  k->add_option("--band", kernel.band, "Band limit L");
  k->add_option("--samples", kernel.samples, "Points in t = <eta, xi>");
  k->add_option("--convention", kernel.convention, "standard | gegenbauer (alias paper)");
  k->add_option("--out", kernel.out, "CSV output");
  k->callback([&] { action = [&] { return cmd_kernel(kernel, args); }; });

  std::string manifest;
  auto* m = app.add_subcommand("rerun", "Replay a run manifest");
  m->add_option("--manifest", manifest, "Manifest JSON")->required();
  m->callback([&] { action = [&] { return rerun(manifest, depth); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    return action();
  } catch (const lamharm::SingularMatrix& e) {
    std::cerr << "error: " << e.what();
    if (e.interface_index()) std::cerr << fmt::format(" (interface k={})", *e.interface_index());
    if (e.mode()) std::cerr << fmt::format(" (mode l={})", *e.mode());
    std::cerr << "\n";
    return kSingular;
  } catch (const lamharm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
