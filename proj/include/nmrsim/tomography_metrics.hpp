#pragma once

#include "nmrsim/dynamics.hpp"
#include "nmrsim/spin_core.hpp"

namespace nmrsim {

// One tomography experiment: a per-spin readout pulse choice and the
// observable (single-quantum, |m| = 1) matrix elements it exposes.
struct ReadoutRecord {
  std::string pulses;  // one char per spin: '1' (none), 'x' or 'y' (pi/2 pulse)

  struct Observation {
    int k = 0;
    int l = 0;
    cdouble value;
  };
  std::vector<Observation> observed;
};

// Applies the selected per-spin pi/2 rotations and records every element of
// the rotated matrix whose coherence order is +1 or -1 (only those produce
// detectable transverse magnetization). Miscalibration draws one amplitude
// scale per pulsed spin.
ReadoutRecord simulate_readout(const Matrix& rho, const std::string& pulses,
                               PulseNoise* noise = nullptr);

// All 3^n per-spin combinations of {'1','x','y'}, lexicographic order.
std::vector<ReadoutRecord> full_readout_set(const Matrix& rho,
                                            PulseNoise* noise = nullptr);

struct Reconstruction {
  Matrix state;
  double residual = 0.0;  // least-squares residual 2-norm
};

// Least-squares inversion of the linear map from the 4^n - 1 deviation
// coefficients to the recorded observables (ideal readout pulses assumed).
// Refuses rank-deficient record sets, naming the unresolved operator
// directions. Noiseless round trips are exact to 1e-8.
Reconstruction reconstruct(const std::vector<ReadoutRecord>& records);

struct CorrelationReport {
  double c = 0.0;
  double the_norm = 0.0;  // Tr(rho_the^2)
  double exp_norm = 0.0;  // Tr(rho_exp^2)
  std::string line() const;  // "c=<..> the_norm=<..> exp_norm=<..>"
};

// c = Tr(rho_the * rho_exp) / Tr(rho_the^2): unity for a perfect match,
// attenuated by both systematic error and net amplitude loss. |c| <= 1
// whenever Tr(rho_exp^2) <= Tr(rho_the^2) (Cauchy-Schwarz).
CorrelationReport attenuated_correlation(const Matrix& rho_exp,
                                         const Matrix& rho_the);

struct IdentityOffset {
  Matrix adjusted;
  double alpha = 0.0;
  std::string rule;
};

// Returns rho_exp + alpha*I. For a traceless target the correlation is
// independent of alpha, and maximizing it over alpha is unbounded whenever
// the target has trace; in both cases the well-posed choice is the Frobenius
// minimizer alpha = -Tr(rho_exp - rho_target)/dim, which is what is applied
// and reported.
IdentityOffset identity_offset(const Matrix& rho_exp, const Matrix& rho_target);

// Record-set serialization:
// {"n": n, "records": [{"pulses": "...", "observed": [{k,l,re,im}, ...]}]}.
std::string records_to_json(const std::vector<ReadoutRecord>& records, int n);
std::vector<ReadoutRecord> records_from_json(const std::string& text);

}  // namespace nmrsim
