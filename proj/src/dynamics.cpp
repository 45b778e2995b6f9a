#include "nmrsim/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nmrsim {

namespace {

const cdouble kI(0.0, 1.0);

// 2x2 rotation exp(-i (angle/2) sigma_axis) for axis in {x,y,-x,-y}
Matrix rot2(const std::string& axis, double angle) {
  double sgn = 1.0;
  char ax = axis.empty() ? '?' : axis.back();
  if (axis.size() == 2 && axis[0] == '-') sgn = -1.0;
  else if (axis.size() != 1) ax = '?';
  double c = std::cos(angle / 2.0);
  double s = sgn * std::sin(angle / 2.0);
  Matrix m(2, 2);
  if (ax == 'x') m << c, -kI * s, -kI * s, c;
  else if (ax == 'y') m << c, -s, s, c;
  else throw std::invalid_argument("rf axis must be one of x, y, -x, -y (got '" + axis + "')");
  return m;
}

void check_spins(int n, const std::vector<int>& spins, const char* who) {
  if (spins.empty())
    throw std::invalid_argument(std::string(who) + ": spin subset must be nonempty");
  for (size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] < 1 || spins[i] > n)
      throw std::invalid_argument(std::string(who) + ": spin index " +
                                  std::to_string(spins[i]) + " out of range");
    for (size_t j = 0; j < i; ++j)
      if (spins[j] == spins[i])
        throw std::invalid_argument(std::string(who) + ": duplicate spin index");
  }
}

}  // namespace

// ------------------------------------------------------------------ SpinSystem

void SpinSystem::validate() const {
  if (n < 1) throw std::invalid_argument("SpinSystem: n must be >= 1");
  if (shifts_hz.size() != n || t1_s.size() != n || t2_s.size() != n)
    throw std::invalid_argument("SpinSystem: per-spin arrays must have length n");
  if (j_hz.rows() != n || j_hz.cols() != n)
    throw std::invalid_argument("SpinSystem: J must be n x n");
  for (int j = 0; j < n; ++j) {
    if (t1_s[j] <= 0 || t2_s[j] <= 0)
      throw std::invalid_argument("SpinSystem: T1 and T2 must be positive");
    if (j_hz(j, j) != 0.0)
      throw std::invalid_argument("SpinSystem: J diagonal must be zero");
    for (int k = 0; k < n; ++k)
      if (j_hz(j, k) != j_hz(k, j))
        throw std::invalid_argument("SpinSystem: J must be symmetric");
  }
}

SpinSystem SpinSystem::alanine() {
  SpinSystem sys;
  sys.n = 3;
  sys.shifts_hz = Eigen::Vector3d(9456.5, 0.0, -2594.3);
  sys.j_hz = Eigen::Matrix3d::Zero();
  sys.j_hz(0, 1) = sys.j_hz(1, 0) = 53.7;
  sys.j_hz(0, 2) = sys.j_hz(2, 0) = -1.4;
  sys.j_hz(1, 2) = sys.j_hz(2, 1) = 34.6;
  sys.t1_s = Eigen::Vector3d(21.0, 2.5, 1.6);
  sys.t2_s = Eigen::Vector3d(0.55, 0.42, 0.80);
  sys.reference_mhz = 75.4713562;
  sys.validate();
  return sys;
}

SpinSystem SpinSystem::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("SpinSystem: parse failure: ") + e.what());
  }
  SpinSystem sys;
  sys.n = j.at("n").get<int>();
  if (sys.n < 1) throw std::runtime_error("SpinSystem: n must be >= 1");
  auto vec = [&](const char* key) {
    auto v = j.at(key).get<std::vector<double>>();
    if (int(v.size()) != sys.n)
      throw std::runtime_error(std::string("SpinSystem: ") + key + " must have n entries");
    return Eigen::Map<Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  sys.shifts_hz = vec("shifts_hz");
  sys.t1_s = vec("T1_s");
  sys.t2_s = vec("T2_s");
  auto upper = j.at("J_hz").get<std::vector<double>>();
  size_t expect = size_t(sys.n) * (sys.n - 1) / 2;
  if (upper.size() != expect)
    throw std::runtime_error("SpinSystem: J_hz must list the upper triangle row-major (" +
                             std::to_string(expect) + " values)");
  sys.j_hz = Eigen::MatrixXd::Zero(sys.n, sys.n);
  size_t idx = 0;
  for (int a = 0; a < sys.n; ++a)
    for (int b = a + 1; b < sys.n; ++b, ++idx)
      sys.j_hz(a, b) = sys.j_hz(b, a) = upper[idx];
  if (j.contains("reference_mhz")) sys.reference_mhz = j["reference_mhz"].get<double>();
  sys.validate();
  return sys;
}

SpinSystem SpinSystem::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Matrix internal_hamiltonian(const SpinSystem& sys) {
  sys.validate();
  long dim = 1L << sys.n;
  Matrix h = Matrix::Zero(dim, dim);
  for (int j = 1; j <= sys.n; ++j)
    h += std::numbers::pi * sys.shifts_hz[j - 1] * embed_pauli(sys.n, j, 'z');
  for (int j = 1; j <= sys.n; ++j)
    for (int k = j + 1; k <= sys.n; ++k)
      h += std::numbers::pi * 0.5 * sys.j_hz(j - 1, k - 1) *
           (embed_pauli(sys.n, j, 'z') * embed_pauli(sys.n, k, 'z'));
  return h;
}

// ------------------------------------------------------------------ propagators

double PulseNoise::scale() {
  if (fraction == 0.0) return 1.0;
  // top 53 bits -> [0,1), mapped to [-1,1); avoids distribution objects so the
  // stream is identical across standard library implementations
  double u = double(rng() >> 11) * 0x1.0p-53;
  return 1.0 + fraction * (2.0 * u - 1.0);
}

Matrix rf_rotation(int n, const std::vector<int>& spins, const std::string& axis,
                   double angle) {
  check_spins(n, spins, "rf_rotation");
  Matrix r = rot2(axis, angle);
  Matrix out = Matrix::Identity(1, 1);
  for (int j = 1; j <= n; ++j) {
    bool hit = std::find(spins.begin(), spins.end(), j) != spins.end();
    out = kron(out, hit ? r : Matrix(Matrix::Identity(2, 2)));
  }
  return out;
}

Matrix conditional_rotation(int n, const std::vector<int>& spins,
                            const std::string& axis, double angle, int control,
                            int sign) {
  check_spins(n, spins, "conditional_rotation");
  if (control < 1 || control > n)
    throw std::invalid_argument("conditional_rotation: control index out of range");
  if (std::find(spins.begin(), spins.end(), control) != spins.end())
    throw std::invalid_argument("conditional_rotation: control spin cannot be rotated");
  // the projector commutes with the rotation, so the exponential splits into
  // identity on one control subspace and the plain rotation on the other
  return projector(n, control, -sign) +
         projector(n, control, sign) * rf_rotation(n, spins, axis, angle);
}

Matrix zz_coupling(int n, int j, int k, double angle) {
  if (j == k) throw std::invalid_argument("zz_coupling: spins must differ");
  Matrix g = embed_pauli(n, j, 'z') * embed_pauli(n, k, 'z');
  long dim = g.rows();
  Matrix u = Matrix::Zero(dim, dim);
  for (long i = 0; i < dim; ++i)
    u(i, i) = std::exp(-kI * (angle / 2.0) * g(i, i));
  return u;
}

Matrix controlled_not(int n, int control, int target) {
  if (control == target)
    throw std::invalid_argument("controlled_not: control and target must differ");
  return projector(n, control, +1) +
         projector(n, control, -1) * embed_pauli(n, target, 'x');
}

Matrix cnot_pair(int n) {
  if (n != 3) throw std::invalid_argument("cnot_pair: defined for n = 3");
  // exp(i sigma_x^1 E-^2 pi/2) * exp(-i sigma_x^3 E-^2 pi/2) in closed form:
  // the (+i)(-i) factors cancel, leaving E+^2 + sigma_x^1 sigma_x^3 E-^2
  return projector(3, 2, +1) +
         embed_pauli(3, 1, 'x') * embed_pauli(3, 3, 'x') * projector(3, 2, -1);
}

Matrix free_evolution(const SpinSystem& sys, double t) {
  if (t < 0) throw std::invalid_argument("free_evolution: t must be >= 0");
  Matrix h = internal_hamiltonian(sys);
  long dim = h.rows();
  Matrix u = Matrix::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) u(i, i) = std::exp(-kI * h(i, i) * t);
  return u;
}

Matrix relax(const Matrix& rho, double t, const SpinSystem& sys) {
  if (t < 0) throw std::invalid_argument("relax: t must be >= 0");
  int n = spin_count(rho);
  if (n != sys.n) throw std::invalid_argument("relax: state/system spin count mismatch");
  long dim = rho.rows();
  Matrix out = rho;
  // transverse decay: summed 1/T2 over spins whose bit differs
  for (long k = 0; k < dim; ++k) {
    for (long l = 0; l < dim; ++l) {
      if (k == l) continue;
      double rate = 0.0;
      for (int j = 0; j < n; ++j) {
        long bit = 1L << (n - 1 - j);
        if ((k & bit) != (l & bit)) rate += 1.0 / sys.t2_s[j];
      }
      out(k, l) *= std::exp(-t * rate);
    }
  }
  // longitudinal decay: expand the diagonal over z-strings, decay each string
  // at the summed 1/T1 of its member spins, keep the trace component
  Eigen::VectorXcd diag(dim);
  for (long k = 0; k < dim; ++k) diag[k] = rho(k, k);
  Eigen::VectorXcd fresh = Eigen::VectorXcd::Constant(dim, rho.trace() / double(dim));
  for (long mask = 1; mask < dim; ++mask) {
    // chi_mask(k) = (-1)^popcount(k & mask) is the diagonal of the z-string
    cdouble c = 0.0;
    for (long k = 0; k < dim; ++k)
      c += diag[k] * (std::popcount(unsigned(k & mask)) % 2 ? -1.0 : 1.0);
    c /= double(dim);
    double rate = 0.0;
    for (int j = 0; j < n; ++j)
      if (mask & (1L << (n - 1 - j))) rate += 1.0 / sys.t1_s[j];
    c *= std::exp(-t * rate);
    for (long k = 0; k < dim; ++k)
      fresh[k] += c * (std::popcount(unsigned(k & mask)) % 2 ? -1.0 : 1.0);
  }
  for (long k = 0; k < dim; ++k) out(k, k) = fresh[k];
  return out;
}

// ------------------------------------------------------------------ sequences

PulseElement PulseElement::rf_pulse(std::vector<int> spins, std::string axis,
                                    double angle) {
  PulseElement e;
  e.kind = Kind::rf;
  e.spins = std::move(spins);
  e.axis = std::move(axis);
  e.angle = angle;
  return e;
}

PulseElement PulseElement::conditional(std::vector<int> spins, std::string axis,
                                       double angle, int control, int sign) {
  PulseElement e;
  e.kind = Kind::conditional;
  e.spins = std::move(spins);
  e.axis = std::move(axis);
  e.angle = angle;
  e.control = control;
  e.control_sign = sign;
  return e;
}

PulseElement PulseElement::delay(double duration) {
  PulseElement e;
  e.kind = Kind::delay;
  e.duration = duration;
  return e;
}

PulseElement PulseElement::gradient(double area) {
  PulseElement e;
  e.kind = Kind::gradient;
  e.area = area;
  return e;
}

}  // namespace nmrsim
