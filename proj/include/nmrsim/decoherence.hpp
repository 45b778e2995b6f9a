#pragma once

#include "nmrsim/dynamics.hpp"
#include "nmrsim/spin_core.hpp"

namespace nmrsim {

// Gradient areas are measured in windings: one unit of area winds a
// single-quantum coherence through a full 2*pi of phase across the sample
// (positions span [0, 1)).
struct GradientPulse {
  double area = 1.0;
};

// Deterministic uniform slicing of the sample along the gradient axis.
struct SpatialEnsemble {
  int slices = 0;
  std::vector<double> positions;  // z values in [0, 1)

  static SpatialEnsemble uniform(int n_slices);
};

// Coherence-order filter: zeroes every element with nonzero order, keeps
// populations and zero-quantum coherences. Idempotent, trace preserving.
Matrix ideal_gradient(const Matrix& rho);

// Strong-crusher idealization: zeroes every off-diagonal element, including
// zero-quantum coherences (which a z gradient alone leaves untouched but
// chemical-shift evolution during the pulse scrambles). Used between
// preparation stages.
Matrix crusher_gradient(const Matrix& rho);

// exp(-i * 2*pi*area * z * (1/2) sum_j sigma_z^j): the diagonal propagator one
// sample slice at position z sees during a gradient pulse. An element of
// coherence order m acquires phase exp(-i * 2*pi*area * z * m).
Matrix slice_propagator(const GradientPulse& g, double z, int n);

// Compile a pulse sequence into the single propagator seen at position z.
// Elements act in vector order (index 0 first). Delays need a SpinSystem.
// rf_scales, if given, multiplies the angle of each rf/conditional element
// (one entry per such element, in order).
Matrix compile_slice(const PulseSequence& seq, double z, int n,
                     const SpinSystem* sys = nullptr,
                     const std::vector<double>* rf_scales = nullptr);

// (1/N) sum_s U_s rho U_s^dag over the ensemble positions, accumulated in
// slice order. Gradient areas must be integer windings; fractional areas are
// rejected because the uniform ensemble would not average their phases to
// zero. Pulse miscalibration draws one scale per RF element, shared by all
// slices (each slice sees the same physical pulse).
Matrix spatial_average(const PulseSequence& seq, const Matrix& rho,
                       const SpatialEnsemble& ens, const SpinSystem* sys = nullptr,
                       PulseNoise* noise = nullptr);

// The gradient/pi-pulse sandwich that dephases spin-1 coherences while
// refocusing spins 2 and 3: gradient, [pi]_x on 2, gradient, [pi]_x on 2&3,
// gradient, [pi]_-x on 2, gradient, [pi]_-x on 2&3. Each slice's net
// propagator is exp(-i * phi * sigma_z^1 / 2) with phi = 4 * 2*pi*windings*z.
PulseSequence dephase_z_sequence(double windings = 1.0);

// Ensemble-averaged selective dephasing of spin 1 along z; zeroes exactly the
// elements whose spin-1 bit differs between bra and ket (equivalent to the
// projector-sum channel E+ rho E+ + E- rho E-). Rejects slice counts that
// cannot resolve the sequence's net 4*windings turns.
Matrix selective_dephase_z(const Matrix& rho, const SpatialEnsemble& ens,
                           double windings = 1.0, PulseNoise* noise = nullptr);

// Measurement of spin 1 along x: rotate x onto z with R^1_{-y}(pi/2), then
// selective_dephase_z. The ancilla stays along z afterwards (no back-rotation).
Matrix selective_dephase_x(const Matrix& rho, const SpatialEnsemble& ens,
                           double windings = 1.0, PulseNoise* noise = nullptr);

// Reference channel for the strong-measurement equivalence.
Matrix projector_sum_z1(const Matrix& rho);

}  // namespace nmrsim
