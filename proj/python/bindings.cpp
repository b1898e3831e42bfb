// Python bindings: meshes, operators, the shallow-water model and the verification suite.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "trisk/convergence.hpp"
#include "trisk/error.hpp"
#include "trisk/timestep.hpp"
#include "trisk/verify.hpp"

namespace py = pybind11;
using namespace trisk;

namespace {

Eigen::VectorXd vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

py::dict diag_dict(const Diagnostics& d) {
  py::dict r;
  r["mass"] = d.mass;
  r["circulation"] = d.circulation;
  r["energy"] = d.energy;
  r["potential_enstrophy"] = d.potential_enstrophy;
  r["min_h"] = d.min_h;
  r["max_h"] = d.max_h;
  r["max_u"] = d.max_u;
  return r;
}

/// Model plus physics, so Python callers handle one object.
struct Simulation {
  Model model;
  PhysicsParams physics;
  ModelState state;

  Simulation(const std::string& mesh, const std::string& scheme, double g, double f0, double H0)
      : model(build_model(mesh_from_spec(mesh), scheme_preset(scheme))),
        physics(make_physics(model.mesh, model.ops, g, f0)) {
    state.u = Cochain::zeros(model.mesh, straight(1, Flavor::Circulation));
    state.h = Cochain(twisted(2), vec(model.mesh.geom.tcell_area) * H0);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DEC operators and a TRiSK-type rotating shallow-water solver";
#ifdef TRISK_VERSION
  m.attr("__version__") = TRISK_VERSION;
#else
  m.attr("__version__") = "dev";
#endif

  static py::exception<Error> exc(m, "TriskError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      err.attr("kind") = to_string(e.kind());
      PyErr_SetString(exc.ptr(), e.what());
    }
  });

  py::class_<MeshPair>(m, "Mesh")
      .def_property_readonly("nv", [](const MeshPair& x) { return x.topo.nv; })
      .def_property_readonly("ne", [](const MeshPair& x) { return x.topo.ne; })
      .def_property_readonly("nc", [](const MeshPair& x) { return x.topo.nc; })
      .def_property_readonly("orthogonal", [](const MeshPair& x) { return x.orthogonal; })
      .def_property_readonly("domain_area", [](const MeshPair& x) { return x.geom.domain_area(); })
      .def_property_readonly("edge_length", [](const MeshPair& x) { return vec(x.geom.edge_len); })
      .def_property_readonly("dual_edge_length", [](const MeshPair& x) { return vec(x.geom.tedge_len); })
      .def_property_readonly("cell_area", [](const MeshPair& x) { return vec(x.geom.cell_area); })
      .def_property_readonly("dual_cell_area", [](const MeshPair& x) { return vec(x.geom.tcell_area); })
      .def("validate", [](const MeshPair& x) { return validate_mesh(x).failures; })
      .def("save", [](const MeshPair& x, const std::string& path) { save_mesh(x, path); });

  m.def("build_periodic_quad", &build_periodic_quad, py::arg("n"), py::arg("spacing") = 1.0);
  m.def("build_periodic_trihex", &build_periodic_trihex, py::arg("n"), py::arg("spacing") = 1.0);
  m.def("mesh_from_spec", &mesh_from_spec, py::arg("spec"));

  py::class_<DecOperators>(m, "Operators")
      .def(py::init(&build_dec_operators), py::arg("mesh"))
      .def_property_readonly("D1", [](const DecOperators& o) { return o.D1.mat; })
      .def_property_readonly("D2", [](const DecOperators& o) { return o.D2.mat; })
      .def_property_readonly("Dt1", [](const DecOperators& o) { return o.Dt1.mat; })
      .def_property_readonly("Dt2", [](const DecOperators& o) { return o.Dt2.mat; })
      .def_property_readonly("H1", [](const DecOperators& o) { return o.hodge.H1.mat; })
      .def_property_readonly("Ht2", [](const DecOperators& o) { return o.hodge.Ht2.mat; })
      .def_property_readonly("H2", [](const DecOperators& o) { return o.hodge.H2.mat; });

  m.def(
      "build_W",
      [](const MeshPair& mesh, const std::string& r) {
        RKind k = r == "combinatorial" ? RKind::Combinatorial : RKind::Metric;
        return build_W_from_R(mesh, build_R(mesh, k), build_dec_operators(mesh));
      },
      py::arg("mesh"), py::arg("R") = "metric");
  m.def("build_R", [](const MeshPair& mesh, const std::string& r) {
    return build_R(mesh, r == "combinatorial" ? RKind::Combinatorial : RKind::Metric).mat;
  }, py::arg("mesh"), py::arg("R") = "metric");

  m.def("preset_names", &preset_names);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const std::string&, const std::string&, double, double, double>(), py::arg("mesh") = "quad:8",
           py::arg("scheme") = "trsk2010-te", py::arg("g") = 1.0, py::arg("f0") = 0.0, py::arg("H0") = 1.0)
      .def_property(
          "u", [](const Simulation& s) { return s.state.u.values; },
          [](Simulation& s, const Eigen::VectorXd& v) {
            if (v.size() != s.state.u.values.size()) throw Error(ErrorKind::TypeMismatch, "u has the wrong length");
            s.state.u.values = v;
          })
      .def_property(
          "h", [](const Simulation& s) { return s.state.h.values; },
          [](Simulation& s, const Eigen::VectorXd& v) {
            if (v.size() != s.state.h.values.size()) throw Error(ErrorKind::TypeMismatch, "h has the wrong length");
            s.state.h.values = v;
          })
      .def_property_readonly("time", [](const Simulation& s) { return s.state.time; })
      .def_property_readonly("mesh", [](const Simulation& s) { return s.model.mesh; })
      .def("pv", [](const Simulation& s) { return diagnose_pv(s.model, s.state, s.physics).values; })
      .def("tendencies",
           [](const Simulation& s) {
             Tendencies t = tendencies(s.model, s.state, s.physics);
             return py::make_tuple(t.dh.values, t.du.values);
           })
      .def("rates",
           [](const Simulation& s) {
             InvariantRates r = invariant_rates(s.model, s.state, s.physics, tendencies(s.model, s.state, s.physics));
             py::dict d;
             d["dM"] = r.dM;
             d["dH"] = r.dH;
             d["dPE"] = r.dPE;
             d["dC"] = r.dC;
             return d;
           })
      .def("diagnostics", [](const Simulation& s) { return diag_dict(diagnostics(s.model, s.state, s.physics)); })
      .def(
          "advance",
          [](Simulation& s, int steps, double dt, const std::string& integrator) {
            IntegratorConfig cfg;
            cfg.kind = parse_integrator(integrator);
            cfg.dt = dt;
            auto rhs = [&](const ModelState& x) { return tendencies(s.model, x, s.physics); };
            s.state = run(s.state, cfg, steps, rhs).final_state;
          },
          py::arg("steps"), py::arg("dt"), py::arg("integrator") = "rk4");

  m.def(
      "verify",
      [](const std::string& spec, std::uint64_t seed, int samples, bool time_tests) {
        VerifyOptions o{seed, samples, time_tests};
        py::list out;
        for (const auto& c : verify_all(mesh_from_spec(spec), o)) {
          py::dict d;
          d["group"] = c.group;
          d["name"] = c.name;
          d["value"] = c.value;
          d["tol"] = c.tol;
          d["pass"] = c.pass;
          d["diagnostic"] = c.diagnostic;
          out.append(d);
        }
        return out;
      },
      py::arg("mesh") = "quad:8", py::arg("seed") = 1, py::arg("samples") = 100, py::arg("time_tests") = true);

  m.def(
      "convergence",
      [](const std::string& op, const std::string& family, const std::vector<int>& sizes) {
        py::list out;
        for (const auto& r : convergence_study(op, family, sizes).rows) {
          py::dict d;
          d["n"] = r.n;
          d["h"] = r.h;
          d["l2"] = r.l2;
          d["linf"] = r.linf;
          d["order_l2"] = r.order_l2;
          d["order_linf"] = r.order_linf;
          out.append(d);
        }
        return out;
      },
      py::arg("operator"), py::arg("family") = "quad", py::arg("sizes") = std::vector<int>{8, 16, 32});
}
