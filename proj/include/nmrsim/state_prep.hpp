#pragma once

#include "nmrsim/decoherence.hpp"
#include "nmrsim/dynamics.hpp"
#include "nmrsim/spin_core.hpp"

namespace nmrsim {

// Equilibrium deviation state sigma_z^1 + ... + sigma_z^n (traceless,
// diagonal; physical constants set to unity).
Matrix thermal_deviation(const SpinSystem& sys);

// Amplitude of the pseudo-pure deviation: sqrt(3)/sqrt(32) ~= 0.3062. The
// full preparation keeps this fraction of each spin's equilibrium
// polarization so the surviving terms combine into a pure-state projector.
double pseudo_pure_scale();

// One row of the preparation pipeline: a composed unitary, optionally
// followed by a crusher gradient.
struct PrepStep {
  std::string label;
  Matrix unitary;
  bool crush = false;
};

// The four-stage pseudo-pure preparation:
//   1. scale spin 2 down to the target amplitude, crush the transverse rest
//   2. rotate spins 1,3 away wherever spin 2 is down, crush
//   3. exchange-style transfer of the scaled polarization from spin 2 to spin 1
//   4. two-spin pseudo-pure preparation on spins 2,3, crush
Matrix row3_transfer_unitary(PulseNoise* noise = nullptr);
std::vector<PrepStep> preparation_pipeline(PulseNoise* noise = nullptr);

// Runs the pipeline on the equilibrium deviation and returns the pseudo-pure
// ground-state deviation a*(8|000><000| - I), a = sqrt(3)/sqrt(32).
// In the noiseless path the state after rows 1, 2 and 4 is checked against
// closed-form oracles (scaled to the input, so linearity holds); a mismatch
// throws with the failing step index. `intermediates`, if given, receives the
// state after each row.
Matrix pseudo_pure_prep(const Matrix& rho_eq, PulseNoise* noise = nullptr,
                        std::vector<Matrix>* intermediates = nullptr);

// GHZ circuit pieces: R_y^2(pi/2), then the doubly controlled flip of spins
// 1 and 3 (cnot_pair).
Matrix ghz_ry_stage(PulseNoise* noise = nullptr);
Matrix ghz_cnot_stage(PulseNoise* noise = nullptr);
Matrix ghz_circuit(const Matrix& rho_ini, PulseNoise* noise = nullptr);

// Half circuit: R_y^2(pi/2) followed by the single controlled-NOT onto spin 3,
// taking |000> to |0>(|00>+|11>)/sqrt(2) (spins 2,3 in a Bell state, spin 1
// untouched).
Matrix bell_precursor_unitary();
Eigen::VectorXcd bell_precursor_ket();

// Closed-form targets used by the experiment driver and the test suites.
Matrix pseudo_pure_target();  // a*(8|000><000| - I)
Matrix ghz_target();          // a*(zz1 + 1zz + z1z + xxx - yyx - xyy - yxy)
Matrix dephase_z_target();    // a*(zz1 + 1zz + z1z)
Matrix dephase_x_target();    // a*(1zz + zxx - zyy)

}  // namespace nmrsim
