#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nmrsim/spin_core.hpp"

namespace nmrsim {

// Weakly coupled spin system in the rotating frame: per-spin frequency
// offsets (Hz), scalar couplings (Hz), and phenomenological T1/T2 times.
struct SpinSystem {
  int n = 0;
  Eigen::VectorXd shifts_hz;
  Eigen::MatrixXd j_hz;  // symmetric, zero diagonal
  Eigen::VectorXd t1_s;
  Eigen::VectorXd t2_s;
  double reference_mhz = 0.0;  // carrier frequency, metadata only

  void validate() const;

  // 13C-labeled alanine defaults (spin 1 = carboxyl, 2 = alpha, 3 = methyl
  // carbon, referenced to the alpha carbon).
  static SpinSystem alanine();

  // JSON: {n, shifts_hz, J_hz (upper triangle row-major), T1_s, T2_s,
  // reference_mhz (optional)}.
  static SpinSystem from_json(const std::string& text);
  static SpinSystem load(const std::string& path);
};

// H = pi * [sum_j nu_j sigma_z^j + (1/2) sum_{j<k} J_jk sigma_z^j sigma_z^k],
// angular units (rad/s); diagonal and traceless.
Matrix internal_hamiltonian(const SpinSystem& sys);

// Multiplicative RF-amplitude miscalibration: every pulse angle is scaled by
// 1 + fraction*u with u drawn uniformly from [-1, 1). fraction == 0 performs
// no draw, so the noiseless path consumes no randomness.
struct PulseNoise {
  double fraction = 0.0;
  std::mt19937_64 rng{0};
  double scale();
};

// U = exp(-i (angle/2) sum_{j in spins} sigma_axis^j); axis in
// {"x","y","-x","-y"}. All rotations follow this half-angle convention.
Matrix rf_rotation(int n, const std::vector<int>& spins, const std::string& axis,
                   double angle);

// U = exp(-i (angle/2) sum_{j in spins} sigma_axis^j * E_sign^control):
// the rotation acts on the control's E_sign subspace and is the identity on
// the opposite one.
Matrix conditional_rotation(int n, const std::vector<int>& spins,
                            const std::string& axis, double angle, int control,
                            int sign);

// Coupling propagator exp(-i (angle/2) sigma_z^j sigma_z^k) (diagonal).
Matrix zz_coupling(int n, int j, int k, double angle);

// Phase-clean controlled-NOT: E+^control + E-^control * sigma_x^target.
Matrix controlled_not(int n, int control, int target);

// The doubly controlled pair exp(i (sigma_x^1 - sigma_x^3) E-^2 pi/2): both
// spin-1 and spin-3 flips conditioned on spin 2, with the two factors' phases
// cancelling. Equals controlled_not(3,2,1) * controlled_not(3,2,3).
Matrix cnot_pair(int n = 3);

// U = exp(-i H t) for the internal Hamiltonian (diagonal).
Matrix free_evolution(const SpinSystem& sys, double t);

// Phenomenological relaxation: each off-diagonal element decays at the summed
// 1/T2_j rate of the spins whose state differs between bra and ket; the
// deviation of each diagonal z-string component decays at the summed 1/T1_j
// rate of its member spins. Trace preserving.
Matrix relax(const Matrix& rho, double t, const SpinSystem& sys);

// Pulse-sequence element; sequences are temporally ordered vectors and are
// compiled to one propagator per gradient slice by the decoherence module.
struct PulseElement {
  enum class Kind { rf, conditional, delay, gradient };
  Kind kind = Kind::rf;
  std::vector<int> spins;
  std::string axis;
  double angle = 0.0;
  int control = 0;
  int control_sign = +1;
  double duration = 0.0;  // delay, seconds
  double area = 0.0;      // gradient windings across the sample

  static PulseElement rf_pulse(std::vector<int> spins, std::string axis, double angle);
  static PulseElement conditional(std::vector<int> spins, std::string axis,
                                  double angle, int control, int sign);
  static PulseElement delay(double duration);
  static PulseElement gradient(double area);
};

using PulseSequence = std::vector<PulseElement>;

}  // namespace nmrsim
