// Command-line front end: mesh, run, verify, converge, schemes.
#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "trisk/convergence.hpp"
#include "trisk/error.hpp"
#include "trisk/verify.hpp"

using namespace trisk;

namespace {

int cmd_mesh(const std::string& spec, const std::string& out) {
  MeshPair m = mesh_from_spec(spec);
  auto rep = validate_mesh(m);
  std::cout << "mesh " << spec << ": " << m.topo.nv << " vertices, " << m.topo.ne << " edges, " << m.topo.nc
            << " cells; domain area " << std::setprecision(17) << m.geom.domain_area() << "; "
            << (m.orthogonal ? "orthogonal" : "not orthogonal") << "\n";
  for (const auto& f : rep.failures) std::cout << "  invalid: " << f << "\n";
  std::cout << (rep.ok() ? "valid\n" : "INVALID\n");
  if (!out.empty()) {
    save_mesh(m, out);
    std::cout << "saved " << out << "\n";
  }
  return rep.ok() ? 0 : 1;
}

struct RunOverrides {
  std::string config, mesh, scheme, out;
  int steps = -1;
  double dt = 0;
  long long seed = -1;
};

int cmd_run(const RunOverrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.mesh.empty()) cfg.mesh = o.mesh;
  if (!o.scheme.empty()) cfg.scheme = scheme_preset(o.scheme);
  if (!o.out.empty()) cfg.output.dir = o.out;
  if (o.steps >= 0) cfg.steps = o.steps;
  if (o.dt > 0) cfg.integrator.dt = o.dt;
  if (o.seed >= 0) cfg.ic.seed = static_cast<std::uint64_t>(o.seed);
  RunSummary s = run_simulation(cfg, std::cout);
  if (!s.csv_path.empty()) std::cout << "diagnostics written to " << s.csv_path << "\n";
  return 0;
}

int cmd_verify(std::vector<std::string> meshes, std::uint64_t seed, int samples, bool no_time) {
  if (meshes.empty()) meshes = {"quad:8", "quad:9:0.5", "trihex:4"};
  VerifyOptions opt;
  opt.seed = seed;
  opt.samples = samples;
  opt.time_tests = !no_time;
  int failed = 0, total = 0;
  for (const auto& spec : meshes) {
    MeshPair m = mesh_from_spec(spec);
    Checks c = verify_all(m, opt);
    print_checks(std::cout, spec, c);
    for (const auto& x : c) {
      if (x.diagnostic) continue;
      ++total;
      if (!x.pass) {
        ++failed;
        std::cerr << "failed: " << spec << ": " << x.name << "\n";
      }
    }
  }
  std::cout << total - failed << "/" << total << " checks passed\n";
  return failed ? 1 : 0;
}

int cmd_converge(std::vector<std::string> opnames, std::vector<std::string> families, std::vector<int> sizes,
                 const std::string& out) {
  if (opnames.empty()) opnames = convergence_operators();
  if (families.empty()) families = {"quad", "trihex"};
  std::ofstream csv;
  if (!out.empty()) {
    csv.open(out);
    if (!csv) throw Error(ErrorKind::IoError, "cannot write " + out);
    csv << "operator,family,N,h,l2,linf,order_l2,order_linf\n" << std::setprecision(17);
  }
  for (const auto& fam : families)
    for (const auto& op : opnames) {
      ConvergenceReport r = convergence_study(op, fam, sizes);
      print_report(std::cout, r);
      if (csv.is_open())
        for (const auto& row : r.rows)
          csv << op << "," << fam << "," << row.n << "," << row.h << "," << row.l2 << "," << row.linf << ","
              << row.order_l2 << "," << row.order_linf << "\n";
    }
  return 0;
}

int cmd_schemes() {
  std::cout << std::left << std::setw(14) << "preset" << std::setw(10) << "hodge" << std::setw(15) << "R"
            << std::setw(7) << "Q" << "T\n";
  for (const auto& name : preset_names()) {
    SchemeConfig s = scheme_preset(name);
    std::cout << std::setw(14) << name << std::setw(10) << s.hodge << std::setw(15) << to_string(s.r) << std::setw(7)
              << to_string(s.q) << to_string(s.t) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete exterior calculus and TRiSK-type shallow-water solver"};
  app.require_subcommand(1);

  std::string mesh_spec, mesh_out;
  auto* mesh = app.add_subcommand("mesh", "generate, validate and optionally save a mesh");
  mesh->add_option("--mesh", mesh_spec, "quad:N[:spacing], trihex:N[:spacing] or a mesh file")->required();
  mesh->add_option("--out", mesh_out, "write the mesh in text format");

  RunOverrides ro;
  auto* run = app.add_subcommand("run", "simulate from a JSON config");
  run->add_option("--config", ro.config, "JSON run configuration");
  run->add_option("--mesh", ro.mesh, "override the mesh");
  run->add_option("--scheme", ro.scheme, "override the scheme preset");
  run->add_option("--out", ro.out, "output directory");
  run->add_option("--steps", ro.steps, "number of steps")->check(CLI::NonNegativeNumber);
  run->add_option("--dt", ro.dt, "time step")->check(CLI::PositiveNumber);
  run->add_option("--seed", ro.seed, "seed for random initial conditions")->check(CLI::NonNegativeNumber);

  std::vector<std::string> vmeshes;
  std::uint64_t seed = 1;
  int samples = 100;
  bool no_time = false;
  auto* verify = app.add_subcommand("verify", "run the operator and property suite");
  verify->add_option("--mesh", vmeshes, "mesh spec (repeatable); default quad:8, quad:9:0.5, trihex:4");
  verify->add_option("--seed", seed, "seed for random states");
  verify->add_option("--samples", samples, "random samples per property")->check(CLI::PositiveNumber);
  verify->add_flag("--no-time", no_time, "skip the time-integration tests");

  std::vector<std::string> copnames, families;
  std::vector<int> sizes = {8, 16, 32};
  std::string conv_out;
  auto* conv = app.add_subcommand("converge", "operator convergence study");
  conv->add_option("--operator", copnames, "div, curl, grad, perp, R, KE, quadrature (repeatable; default all)");
  conv->add_option("--family", families, "quad or trihex (repeatable; default both)");
  conv->add_option("--sizes", sizes, "resolutions")->delimiter(',');
  conv->add_option("--out", conv_out, "CSV output");

  auto* schemes = app.add_subcommand("schemes", "list scheme presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mesh) return cmd_mesh(mesh_spec, mesh_out);
    if (*run) return cmd_run(ro);
    if (*verify) return cmd_verify(vmeshes, seed, samples, no_time);
    if (*conv) return cmd_converge(copnames, families, sizes, conv_out);
    if (*schemes) return cmd_schemes();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool usage = e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::InvalidParameter ||
                 e.kind() == ErrorKind::InvalidMeshSize;
    return usage ? 2 : 1;
  }
  return 2;
}
