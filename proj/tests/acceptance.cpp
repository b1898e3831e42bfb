// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "trisk/convergence.hpp"
#include "trisk/verify.hpp"

using namespace trisk;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = body();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < budget_s;
  bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s %d %s: %s; %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              budget_s, in_time ? "" : " over time budget");
  std::fflush(stdout);
}

const char* kMeshes[] = {"quad:8", "quad:9:0.5", "trihex:4"};

Outcome summarize(const std::function<Checks(const MeshPair&)>& f, const std::vector<std::string>& meshes) {
  double worst_ratio = 0;
  int n = 0, bad = 0;
  std::string first_bad;
  for (const auto& spec : meshes) {
    MeshPair m = mesh_from_spec(spec);
    for (const auto& c : f(m)) {
      if (c.diagnostic) continue;
      ++n;
      if (!c.pass) {
        ++bad;
        if (first_bad.empty()) first_bad = spec + " " + c.name;
      }
      if (c.tol > 0) worst_ratio = std::max(worst_ratio, c.value / c.tol);
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%d checks within tolerance, worst residual/tolerance %.2e", n - bad, n,
                worst_ratio);
  std::string d = buf;
  if (bad) d += ", first failure: " + first_bad;
  return {bad == 0, d};
}

std::vector<std::string> all_meshes() { return {std::begin(kMeshes), std::end(kMeshes)}; }

}  // namespace

int main() {
  VerifyOptions opt;

  criterion(1, "operator identities", 1.0,
            [&] { return summarize([&](const MeshPair& m) { return verify_operators(m, opt); }, all_meshes()); });

  criterion(2, "wedge identities", 5.0,
            [&] { return summarize([&](const MeshPair& m) { return verify_wedges(m, opt); }, all_meshes()); });

  criterion(3, "Casimir and energy rates", 10.0,
            [&] { return summarize([&](const MeshPair& m) { return verify_rates(m, opt); }, all_meshes()); });

  criterion(4, "uniform PV stays uniform", 5.0, [&] {
    return summarize([&](const MeshPair& m) { return verify_uniform_pv(m, opt, 100); }, {"quad:8"});
  });

  criterion(5, "steady geostrophic mode", 5.0, [&] {
    return summarize([&](const MeshPair& m) { return verify_geostrophic(m, opt, 50); }, {"quad:8", "trihex:4"});
  });

  criterion(6, "energy behaviour in time", 60.0, [&] {
    EnergyStudy st = energy_time_study(build_periodic_quad(16, 1.0), 0.4, 50, 1e-13);
    bool order_ok = std::abs(st.order - 4.0) <= 0.5;
    bool mid_ok = st.midpoint_drifts.back() < 1e-10;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "rk4 drift %.3e/%.3e/%.3e at dt %.3g/%.3g/%.3g, fitted order %.2f (want 4.0 +- 0.5)%s; "
                  "implicit midpoint drift %.3e at dt %.3g (want < 1e-10)%s",
                  st.drifts[0], st.drifts[1], st.drifts[2], st.dts[0], st.dts[1], st.dts[2], st.order,
                  order_ok ? "" : " [out of range]", st.midpoint_drifts.back(), st.dts.back(),
                  mid_ok ? "" : " [too large]");
    return Outcome{order_ok && mid_ok, buf};
  });

  criterion(7, "operator convergence", 30.0, [&] {
    std::string d;
    bool ok = true;
    auto check = [&](const std::string& op, const std::string& fam, double lo, double hi) {
      ConvergenceReport r = convergence_study(op, fam, {8, 16, 32});
      for (size_t i = 1; i < r.rows.size(); ++i) {
        double p = r.rows[i].order_l2;
        if (!(p >= lo && p <= hi)) ok = false;
      }
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s%s/%s %.2f", d.empty() ? "" : ", ", op.c_str(), fam.c_str(),
                    r.rows.back().order_l2);
      d += buf;
    };
    for (const char* op : {"div", "curl", "grad"}) check(op, "quad", 1.8, 2.2);
    for (const char* op : {"div", "curl", "grad"}) check(op, "trihex", 1.0, 1e9);
    check("quadrature", "quad", 4.0, 1e9);
    check("quadrature", "trihex", 4.0, 1e9);
    return Outcome{ok, "L2 orders " + d};
  });

  criterion(8, "mass-flux branches coincide", 1.0,
            [&] { return summarize([&](const MeshPair& m) { return verify_flux_branches(m, opt); }, all_meshes()); });

  criterion(9, "Leibniz implication chain", 10.0,
            [&] { return summarize([&](const MeshPair& m) { return verify_leibniz(m, opt); }, all_meshes()); });

  return failures ? 1 : 0;
}
