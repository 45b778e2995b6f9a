#include "nmrsim/decoherence.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nmrsim {

namespace {

const cdouble kI(0.0, 1.0);

long round_or_reject(double area, const char* who) {
  double r = std::round(area);
  if (std::abs(area - r) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": gradient area " +
                                std::to_string(area) +
                                " is not an integer number of windings; the uniform "
                                "ensemble average would not realize a clean filter");
  return long(r);
}

}  // namespace

SpatialEnsemble SpatialEnsemble::uniform(int n_slices) {
  if (n_slices < 1)
    throw std::invalid_argument("SpatialEnsemble: slice count must be >= 1");
  SpatialEnsemble ens;
  ens.slices = n_slices;
  ens.positions.reserve(n_slices);
  for (int s = 0; s < n_slices; ++s)
    ens.positions.push_back(double(s) / double(n_slices));
  return ens;
}

Matrix ideal_gradient(const Matrix& rho) {
  int n = spin_count(rho);
  Matrix out = rho;
  for (long k = 0; k < rho.rows(); ++k)
    for (long l = 0; l < rho.cols(); ++l)
      if (coherence_order(int(k), int(l), n) != 0) out(k, l) = 0.0;
  return out;
}

Matrix crusher_gradient(const Matrix& rho) {
  (void)spin_count(rho);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  out.diagonal() = rho.diagonal();
  return out;
}

Matrix slice_propagator(const GradientPulse& g, double z, int n) {
  if (n < 1) throw std::invalid_argument("slice_propagator: n must be >= 1");
  long dim = 1L << n;
  double kappa = 2.0 * std::numbers::pi * g.area;
  Matrix u = Matrix::Zero(dim, dim);
  for (long k = 0; k < dim; ++k) {
    // eigenvalue of (1/2) sum_j sigma_z^j on |k>
    double half_mz = 0.5 * (n - 2 * std::popcount(unsigned(k)));
    u(k, k) = std::exp(-kI * kappa * z * half_mz);
  }
  return u;
}

Matrix compile_slice(const PulseSequence& seq, double z, int n,
                     const SpinSystem* sys, const std::vector<double>* rf_scales) {
  long dim = 1L << n;
  Matrix u = Matrix::Identity(dim, dim);
  size_t rf_idx = 0;
  for (const auto& e : seq) {
    double scale = 1.0;
    if (e.kind == PulseElement::Kind::rf || e.kind == PulseElement::Kind::conditional) {
      if (rf_scales) {
        if (rf_idx >= rf_scales->size())
          throw std::invalid_argument("compile_slice: rf_scales shorter than pulse count");
        scale = (*rf_scales)[rf_idx];
      }
      ++rf_idx;
    }
    Matrix step;
    switch (e.kind) {
      case PulseElement::Kind::rf:
        step = rf_rotation(n, e.spins, e.axis, e.angle * scale);
        break;
      case PulseElement::Kind::conditional:
        step = conditional_rotation(n, e.spins, e.axis, e.angle * scale, e.control,
                                    e.control_sign);
        break;
      case PulseElement::Kind::delay:
        if (!sys)
          throw std::invalid_argument("compile_slice: delay element needs a SpinSystem");
        step = free_evolution(*sys, e.duration);
        break;
      case PulseElement::Kind::gradient:
        step = slice_propagator(GradientPulse{e.area}, z, n);
        break;
    }
    u = step * u;
  }
  return u;
}

Matrix spatial_average(const PulseSequence& seq, const Matrix& rho,
                       const SpatialEnsemble& ens, const SpinSystem* sys,
                       PulseNoise* noise) {
  int n = spin_count(rho);
  if (ens.slices < 1 || int(ens.positions.size()) != ens.slices)
    throw std::invalid_argument("spatial_average: malformed ensemble");
  size_t rf_count = 0;
  for (const auto& e : seq) {
    if (e.kind == PulseElement::Kind::gradient) round_or_reject(e.area, "spatial_average");
    if (e.kind == PulseElement::Kind::rf || e.kind == PulseElement::Kind::conditional)
      ++rf_count;
  }
  std::vector<double> scales(rf_count, 1.0);
  if (noise)
    for (auto& s : scales) s = noise->scale();
  Matrix acc = Matrix::Zero(rho.rows(), rho.cols());
  for (int s = 0; s < ens.slices; ++s) {
    Matrix u = compile_slice(seq, ens.positions[s], n, sys, &scales);
    acc += u * rho * u.adjoint();
  }
  return acc / double(ens.slices);
}

PulseSequence dephase_z_sequence(double windings) {
  using PE = PulseElement;
  const double pi = std::numbers::pi;
  return {
      PE::gradient(windings), PE::rf_pulse({2}, "x", pi),
      PE::gradient(windings), PE::rf_pulse({2, 3}, "x", pi),
      PE::gradient(windings), PE::rf_pulse({2}, "-x", pi),
      PE::gradient(windings), PE::rf_pulse({2, 3}, "-x", pi),
  };
}

Matrix selective_dephase_z(const Matrix& rho, const SpatialEnsemble& ens,
                           double windings, PulseNoise* noise) {
  if (spin_count(rho) != 3)
    throw std::invalid_argument("selective_dephase_z: expects a 3-spin state");
  long w = round_or_reject(windings, "selective_dephase_z");
  // the four equal gradients accumulate 4*w turns on spin-1 coherences; if the
  // slice count divides that, every slice sees a trivial phase and nothing dephases
  if ((4 * w) % ens.slices == 0)
    throw std::invalid_argument(
        "selective_dephase_z: " + std::to_string(ens.slices) +
        " slices cannot resolve the net " + std::to_string(4 * w) +
        " windings (N divides 4*windings); spin-1 coherences would survive");
  return spatial_average(dephase_z_sequence(windings), rho, ens, nullptr, noise);
}

Matrix selective_dephase_x(const Matrix& rho, const SpatialEnsemble& ens,
                           double windings, PulseNoise* noise) {
  if (spin_count(rho) != 3)
    throw std::invalid_argument("selective_dephase_x: expects a 3-spin state");
  double scale = noise ? noise->scale() : 1.0;
  Matrix r = rf_rotation(3, {1}, "-y", (std::numbers::pi / 2.0) * scale);
  return selective_dephase_z(r * rho * r.adjoint(), ens, windings, noise);
}

Matrix projector_sum_z1(const Matrix& rho) {
  int n = spin_count(rho);
  Matrix ep = projector(n, 1, +1);
  Matrix em = projector(n, 1, -1);
  return ep * rho * ep + em * rho * em;
}

}  // namespace nmrsim
