// Acceptance gate: one pass/fail line per stated criterion, exit code equals
// the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nmrsim/decoherence.hpp"
#include "nmrsim/dynamics.hpp"
#include "nmrsim/experiment.hpp"
#include "nmrsim/spin_core.hpp"
#include "nmrsim/state_prep.hpp"
#include "nmrsim/tomography_metrics.hpp"

using namespace nmrsim;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail = "") {
  if (ok) {
    std::printf("criterion %d (%s): PASS%s%s\n", idx, name,
                detail.empty() ? "" : " ", detail.c_str());
  } else {
    std::printf("criterion %d (%s): FAIL%s%s\n", idx, name,
                detail.empty() ? "" : " ", detail.c_str());
    ++failures;
  }
}

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

Matrix random_traceless(std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) m(r, c) = cdouble(dist(rng), dist(rng));
  Matrix h = 0.5 * (m + m.adjoint());
  h -= (h.trace() / 8.0) * Matrix::Identity(8, 8);
  return h;
}

void criterion_1_ghz_circuit() {
  auto start = std::chrono::steady_clock::now();
  Matrix ghz = ghz_circuit(pseudo_pure_target());
  double err = max_abs_diff(ghz, ghz_target());

  // the seven signed product-operator terms
  std::map<std::string, double> want = {
      {"zz1", 1.0}, {"1zz", 1.0}, {"z1z", 1.0}, {"xxx", 1.0},
      {"yyx", -1.0}, {"xyy", -1.0}, {"yxy", -1.0}};
  double a = pseudo_pure_scale();
  auto terms = decompose(ghz, 1e-10);
  bool terms_ok = terms.size() == want.size();
  for (const auto& t : terms) {
    auto it = want.find(t.factors);
    if (it == want.end() || std::abs(t.coefficient - it->second * a) > 1e-10)
      terms_ok = false;
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start).count();
  report(1, "GHZ circuit on the pseudo-pure state", err < 1e-10 && terms_ok && seconds < 1.0,
         fmt("(max err %.2e, ", err) + fmt("%.3f s)", seconds));
}

void criterion_2_dephasing_branches() {
  SpatialEnsemble ens = SpatialEnsemble::uniform(64);
  Matrix ghz = ghz_target();

  Matrix rho_z = selective_dephase_z(ghz, ens);
  Matrix rho_x = selective_dephase_x(ghz, ens);
  double err_z = max_abs_diff(rho_z, dephase_z_target());
  double err_x = max_abs_diff(rho_x, dephase_x_target());

  // strong-measurement equivalence: the averaged sequence equals the
  // projector-sum channel applied to the (rotated) input
  double err_pz = max_abs_diff(rho_z, projector_sum_z1(ghz));
  Matrix r = rf_rotation(3, {1}, "-y", std::numbers::pi / 2.0);
  double err_px = max_abs_diff(rho_x, projector_sum_z1(Matrix(r * ghz * r.adjoint())));

  bool ok = err_z < 1e-10 && err_x < 1e-10 && err_pz < 1e-10 && err_px < 1e-10;
  report(2, "64-slice selective dephasing along z and x", ok,
         fmt("(z err %.2e, ", err_z) + fmt("x err %.2e)", err_x));
}

void criterion_3_reduced_states() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(7) = 1.0 / std::sqrt(2.0);
  Matrix rho_ghz = psi * psi.adjoint();
  SpatialEnsemble ens = SpatialEnsemble::uniform(64);
  Matrix rho_z = selective_dephase_z(rho_ghz, ens);
  Matrix rho_x = selective_dephase_x(rho_ghz, ens);

  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 0.5;
  want(3, 3) = 0.5;
  double err = 0.0;
  for (const Matrix& rho : {rho_ghz, rho_z, rho_x})
    err = std::max(err, max_abs_diff(partial_trace(rho, {2, 3}), want));
  report(3, "spin-2,3 reduced state is the same classical mixture", err < 1e-12,
         fmt("(max err %.2e)", err));
}

void criterion_4_per_slice_propagator() {
  SpatialEnsemble ens = SpatialEnsemble::uniform(64);
  PulseSequence seq = dephase_z_sequence(1.0);
  double err = 0.0;
  for (double z : ens.positions) {
    Matrix u = compile_slice(seq, z, 3);
    double phi = 4.0 * 2.0 * std::numbers::pi * z;  // four unit-area gradients
    Matrix ref = Matrix::Zero(8, 8);
    for (int k = 0; k < 8; ++k) {
      double sign = k < 4 ? 1.0 : -1.0;  // spin-1 z eigenvalue
      ref(k, k) = std::exp(cdouble(0.0, -0.5 * phi * sign));
    }
    cdouble phase = u(0, 0) / ref(0, 0);  // allowed global phase
    err = std::max(err, std::abs(std::abs(phase) - 1.0));
    err = std::max(err, max_abs_diff(u, Matrix(phase * ref)));
  }
  report(4, "per-slice sandwich acts as a pure spin-1 z rotation", err < 1e-10,
         fmt("(max err %.2e)", err));
}

void criterion_5_pseudo_pure_pipeline() {
  std::vector<Matrix> mids;
  Matrix out = pseudo_pure_prep(thermal_deviation(SpinSystem::alanine()), nullptr, &mids);
  double err = max_abs_diff(out, pseudo_pure_target());

  double a = pseudo_pure_scale();
  Matrix want_row2 = a * embed_pauli(3, 2, 'z') +
                     (embed_pauli(3, 1, 'z') + embed_pauli(3, 3, 'z')) * projector(3, 2, +1);
  double err2 = mids.size() == 4 ? max_abs_diff(mids[1], want_row2) : 1.0;
  report(5, "four-row pseudo-pure preparation", err < 1e-10 && err2 < 1e-10,
         fmt("(final err %.2e, ", err) + fmt("row-2 err %.2e)", err2));
}

void criterion_6_tomography_round_trip() {
  double err = 0.0;
  for (const Matrix& rho : {pseudo_pure_target(), ghz_target(), dephase_z_target(),
                            dephase_x_target()}) {
    auto recon = reconstruct(full_readout_set(rho));
    err = std::max(err, max_abs_diff(recon.state, rho));
  }
  report(6, "tomography round trip on all four states", err < 1e-8,
         fmt("(max err %.2e)", err));
}

void criterion_7_correlation_metric() {
  double err_self = std::abs(attenuated_correlation(ghz_target(), ghz_target()).c - 1.0);
  double err_frac =
      std::abs(attenuated_correlation(dephase_z_target(), ghz_target()).c - 3.0 / 7.0);

  bool bounded = true;
  std::mt19937 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix p = random_traceless(rng);
    Matrix q = random_traceless(rng);
    double np = (p * p).trace().real();
    double nq = (q * q).trace().real();
    const Matrix& the = np >= nq ? p : q;
    const Matrix& exp = np >= nq ? q : p;
    if (std::abs(attenuated_correlation(exp, the).c) > 1.0 + 1e-12) bounded = false;
  }
  report(7, "attenuated correlation: unity, 3/7, bounded",
         err_self < 1e-12 && err_frac < 1e-12 && bounded,
         fmt("(self err %.2e, ", err_self) + fmt("3/7 err %.2e)", err_frac));
}

void criterion_8_relaxation_window() {
  SpinSystem sys = SpinSystem::alanine();
  Matrix ry = ghz_ry_stage();
  Matrix mid = ry * pseudo_pure_target() * ry.adjoint();
  mid = relax(mid, 0.021, sys);
  Matrix cn = ghz_cnot_stage();
  Matrix noisy = cn * mid * cn.adjoint();
  double c = attenuated_correlation(noisy, ghz_target()).c;
  double loss = 1.0 - c;
  bool ok = loss >= 0.03 && loss <= 0.05 && c >= 0.95 && c <= 0.97;
  report(8, "21 ms of T1/T2 decay costs 3-5% of the GHZ amplitude", ok,
         fmt("(retention %.6f, ", c) + fmt("loss %.2f%%)", 100.0 * loss));
}

void criterion_9_bell_precursor() {
  Eigen::VectorXcd ket = bell_precursor_ket();
  Eigen::VectorXcd want = Eigen::VectorXcd::Zero(8);
  want(0) = 1.0 / std::sqrt(2.0);
  want(3) = 1.0 / std::sqrt(2.0);
  double err = (ket - want).cwiseAbs().maxCoeff();

  Matrix u = bell_precursor_unitary();
  Matrix rho = u * pseudo_pure_target() * u.adjoint();
  Matrix target = pseudo_pure_scale() *
                  (8.0 * Matrix(want * want.adjoint()) - Matrix::Identity(8, 8));
  double err_c = std::abs(attenuated_correlation(rho, target).c - 1.0);
  report(9, "half circuit yields the spin-2,3 Bell precursor", err < 1e-12 && err_c < 1e-12,
         fmt("(ket err %.2e, ", err) + fmt("c err %.2e)", err_c));
}

}  // namespace

int main() {
  struct Entry {
    void (*fn)();
    int idx;
    const char* name;
  };
  const Entry entries[] = {
      {criterion_1_ghz_circuit, 1, "GHZ circuit on the pseudo-pure state"},
      {criterion_2_dephasing_branches, 2, "64-slice selective dephasing along z and x"},
      {criterion_3_reduced_states, 3, "spin-2,3 reduced state is the same classical mixture"},
      {criterion_4_per_slice_propagator, 4, "per-slice sandwich acts as a pure spin-1 z rotation"},
      {criterion_5_pseudo_pure_pipeline, 5, "four-row pseudo-pure preparation"},
      {criterion_6_tomography_round_trip, 6, "tomography round trip on all four states"},
      {criterion_7_correlation_metric, 7, "attenuated correlation: unity, 3/7, bounded"},
      {criterion_8_relaxation_window, 8, "21 ms of T1/T2 decay costs 3-5% of the GHZ amplitude"},
      {criterion_9_bell_precursor, 9, "half circuit yields the spin-2,3 Bell precursor"},
  };
  for (const auto& e : entries) {
    try {
      e.fn();
    } catch (const std::exception& ex) {
      report(e.idx, e.name, false, std::string("(exception: ") + ex.what() + ")");
    }
  }
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
