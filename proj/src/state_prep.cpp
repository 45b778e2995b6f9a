#include "nmrsim/state_prep.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nmrsim {

namespace {

const double kPi = std::numbers::pi;

double noise_scale(PulseNoise* noise) { return noise ? noise->scale() : 1.0; }

}  // namespace

Matrix thermal_deviation(const SpinSystem& sys) {
  sys.validate();
  long dim = 1L << sys.n;
  Matrix rho = Matrix::Zero(dim, dim);
  for (int j = 1; j <= sys.n; ++j) rho += embed_pauli(sys.n, j, 'z');
  return rho;
}

double pseudo_pure_scale() { return std::sqrt(3.0 / 32.0); }

Matrix row3_transfer_unitary(PulseNoise* noise) {
  // temporal order: x pulse on 2, coupling, y pulse on 1&2, coupling, x pulse
  // on 1; net effect swaps the z polarizations of spins 1 and 2 (up to terms
  // the later crusher removes)
  Matrix u = rf_rotation(3, {2}, "x", (kPi / 2.0) * noise_scale(noise));
  u = zz_coupling(3, 1, 2, kPi / 2.0) * u;
  u = rf_rotation(3, {1, 2}, "-y", (kPi / 2.0) * noise_scale(noise)) * u;
  u = zz_coupling(3, 1, 2, kPi / 2.0) * u;
  u = rf_rotation(3, {1}, "-x", (kPi / 2.0) * noise_scale(noise)) * u;
  return u;
}

std::vector<PrepStep> preparation_pipeline(PulseNoise* noise) {
  std::vector<PrepStep> steps;

  double theta1 = std::acos(pseudo_pure_scale());
  steps.push_back({"scale spin-2 polarization",
                   rf_rotation(3, {2}, "x", theta1 * noise_scale(noise)), true});

  steps.push_back({"empty spins 1,3 where spin 2 is down",
                   conditional_rotation(3, {1, 3}, "y",
                                        (kPi / 2.0) * noise_scale(noise), 2, -1),
                   true});

  steps.push_back({"transfer scaled polarization to spin 1",
                   row3_transfer_unitary(noise), false});

  // two-spin pseudo-pure preparation on spins 2,3: tip by pi/4, let the
  // coupling evolve, tip back by pi/6; cos(pi/4)*cos(pi/6) = 2a keeps exactly
  // the projector combination
  Matrix u4 = rf_rotation(3, {2, 3}, "x", (kPi / 4.0) * noise_scale(noise));
  u4 = zz_coupling(3, 2, 3, kPi / 2.0) * u4;
  u4 = rf_rotation(3, {2, 3}, "-y", (kPi / 6.0) * noise_scale(noise)) * u4;
  steps.push_back({"two-spin preparation on spins 2,3", u4, true});

  return steps;
}

namespace {

// post-row oracles, scaled to the input's overlap with the equilibrium state
Matrix row_oracle(int row, double s) {
  double a = pseudo_pure_scale();
  Matrix z1 = embed_pauli(3, 1, 'z');
  Matrix z2 = embed_pauli(3, 2, 'z');
  Matrix z3 = embed_pauli(3, 3, 'z');
  switch (row) {
    case 1: return s * (z1 + z3 + a * z2);
    case 2: return s * (a * z2 + (z1 + z3) * projector(3, 2, +1));
    case 4: return s * pseudo_pure_target();
    default: throw std::logic_error("row_oracle: no oracle for this row");
  }
}

}  // namespace

Matrix pseudo_pure_prep(const Matrix& rho_eq, PulseNoise* noise,
                        std::vector<Matrix>* intermediates) {
  if (spin_count(rho_eq) != 3)
    throw std::invalid_argument("pseudo_pure_prep: expects a 3-spin state");
  bool enforce = (noise == nullptr || noise->fraction == 0.0);
  // overlap with the equilibrium deviation fixes the expected scale, so the
  // oracle checks commute with rescaling the input
  Matrix eq = Matrix::Zero(8, 8);
  for (int j = 1; j <= 3; ++j) eq += embed_pauli(3, j, 'z');
  double s = (eq * rho_eq).trace().real() / (eq * eq).trace().real();

  auto steps = preparation_pipeline(noise);
  Matrix rho = rho_eq;
  for (size_t i = 0; i < steps.size(); ++i) {
    rho = steps[i].unitary * rho * steps[i].unitary.adjoint();
    if (steps[i].crush) rho = crusher_gradient(rho);
    if (intermediates) intermediates->push_back(rho);
    int row = int(i) + 1;
    if (enforce && row != 3) {
      double err = max_abs_diff(rho, row_oracle(row, s));
      if (err > 1e-10 * std::max(1.0, std::abs(s)))
        throw std::runtime_error(
            "pseudo_pure_prep: intermediate state mismatch at step " +
            std::to_string(row) + " (max deviation " + std::to_string(err) +
            "); input is not the equilibrium deviation");
    }
  }
  return rho;
}

Matrix ghz_ry_stage(PulseNoise* noise) {
  return rf_rotation(3, {2}, "y", (kPi / 2.0) * noise_scale(noise));
}

Matrix ghz_cnot_stage(PulseNoise* noise) {
  if (!noise || noise->fraction == 0.0) return cnot_pair(3);
  // the two conditional flips with independent amplitude errors; angles -pi
  // and +pi reproduce exp(+i sigma_x^1 E-^2 pi/2) and exp(-i sigma_x^3 E-^2 pi/2)
  Matrix f1 = conditional_rotation(3, {1}, "x", -kPi * noise->scale(), 2, -1);
  Matrix f3 = conditional_rotation(3, {3}, "x", kPi * noise->scale(), 2, -1);
  return f1 * f3;
}

Matrix ghz_circuit(const Matrix& rho_ini, PulseNoise* noise) {
  if (spin_count(rho_ini) != 3)
    throw std::invalid_argument("ghz_circuit: expects a 3-spin state");
  Matrix u = ghz_cnot_stage(noise) * ghz_ry_stage(noise);
  return u * rho_ini * u.adjoint();
}

Matrix bell_precursor_unitary() {
  return controlled_not(3, 2, 3) * rf_rotation(3, {2}, "y", kPi / 2.0);
}

Eigen::VectorXcd bell_precursor_ket() {
  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(8);
  ground[0] = 1.0;
  return bell_precursor_unitary() * ground;
}

Matrix pseudo_pure_target() {
  Matrix p000 = projector(3, 1, +1) * projector(3, 2, +1) * projector(3, 3, +1);
  return pseudo_pure_scale() * (8.0 * p000 - Matrix::Identity(8, 8));
}

Matrix ghz_target() {
  double a = pseudo_pure_scale();
  return a * (product_operator("zz1") + product_operator("1zz") +
              product_operator("z1z") + product_operator("xxx") -
              product_operator("yyx") - product_operator("xyy") -
              product_operator("yxy"));
}

Matrix dephase_z_target() {
  double a = pseudo_pure_scale();
  return a * (product_operator("zz1") + product_operator("1zz") +
              product_operator("z1z"));
}

Matrix dephase_x_target() {
  double a = pseudo_pure_scale();
  return a * (product_operator("1zz") + product_operator("zxx") -
              product_operator("zyy"));
}

}  // namespace nmrsim
