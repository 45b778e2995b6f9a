#include "nmrsim/tomography_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/SVD>

#include "json.hpp"

namespace nmrsim {

namespace {

Matrix readout_unitary(int n, const std::string& pulses, PulseNoise* noise) {
  if (int(pulses.size()) != n)
    throw std::invalid_argument("readout pulses must give one label per spin");
  long dim = 1L << n;
  Matrix u = Matrix::Identity(dim, dim);
  for (int j = 1; j <= n; ++j) {
    char c = pulses[j - 1];
    if (c == '1') continue;
    if (c != 'x' && c != 'y')
      throw std::invalid_argument(std::string("readout label '") + c +
                                  "' must be one of 1, x, y");
    double scale = noise ? noise->scale() : 1.0;
    u = rf_rotation(n, {j}, std::string(1, c), (std::numbers::pi / 2.0) * scale) * u;
  }
  return u;
}

std::vector<std::string> basis_labels(int n) {
  const char axes[4] = {'1', 'x', 'y', 'z'};
  long count = 1;
  for (int i = 0; i < n; ++i) count *= 4;
  std::vector<std::string> labels;
  labels.reserve(count - 1);
  for (long idx = 1; idx < count; ++idx) {
    std::string label(n, '1');
    long rem = idx;
    for (int s = n - 1; s >= 0; --s) {
      label[s] = axes[rem & 3];
      rem >>= 2;
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

}  // namespace

ReadoutRecord simulate_readout(const Matrix& rho, const std::string& pulses,
                               PulseNoise* noise) {
  int n = spin_count(rho);
  Matrix u = readout_unitary(n, pulses, noise);
  Matrix rotated = u * rho * u.adjoint();
  ReadoutRecord rec;
  rec.pulses = pulses;
  for (long k = 0; k < rotated.rows(); ++k)
    for (long l = 0; l < rotated.cols(); ++l)
      if (std::abs(coherence_order(int(k), int(l), n)) == 1)
        rec.observed.push_back({int(k), int(l), rotated(k, l)});
  return rec;
}

std::vector<ReadoutRecord> full_readout_set(const Matrix& rho, PulseNoise* noise) {
  int n = spin_count(rho);
  const char labels[3] = {'1', 'x', 'y'};
  long count = 1;
  for (int i = 0; i < n; ++i) count *= 3;
  std::vector<ReadoutRecord> records;
  records.reserve(count);
  for (long idx = 0; idx < count; ++idx) {
    std::string pulses(n, '1');
    long rem = idx;
    for (int s = n - 1; s >= 0; --s) {
      pulses[s] = labels[rem % 3];
      rem /= 3;
    }
    records.push_back(simulate_readout(rho, pulses, noise));
  }
  return records;
}

Reconstruction reconstruct(const std::vector<ReadoutRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("reconstruct: no readout records");
  int n = int(records.front().pulses.size());
  if (n < 1) throw std::invalid_argument("reconstruct: empty pulse labels");
  long dim = 1L << n;
  auto labels = basis_labels(n);
  std::vector<Matrix> basis;
  basis.reserve(labels.size());
  for (const auto& l : labels) basis.push_back(product_operator(l));
  long unknowns = long(labels.size());

  long total_obs = 0;
  for (const auto& r : records) total_obs += long(r.observed.size());
  Eigen::MatrixXd design(2 * total_obs, unknowns);
  Eigen::VectorXd target(2 * total_obs);

  long row = 0;
  for (const auto& rec : records) {
    if (int(rec.pulses.size()) != n)
      throw std::invalid_argument("reconstruct: inconsistent spin counts in records");
    Matrix u = readout_unitary(n, rec.pulses, nullptr);
    std::vector<Matrix> rotated;
    rotated.reserve(basis.size());
    for (const auto& t : basis) rotated.push_back(u * t * u.adjoint());
    for (const auto& obs : rec.observed) {
      if (obs.k < 0 || obs.l < 0 || obs.k >= dim || obs.l >= dim)
        throw std::invalid_argument("reconstruct: observation index out of range");
      for (long b = 0; b < unknowns; ++b) {
        cdouble v = rotated[b](obs.k, obs.l);
        design(row, b) = v.real();
        design(row + 1, b) = v.imag();
      }
      target[row] = obs.value.real();
      target[row + 1] = obs.value.imag();
      row += 2;
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(design,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double tol = sv.size() ? sv[0] * 1e-10 : 0.0;
  long rank = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  if (rank < unknowns) {
    std::set<std::string> unresolved;
    for (long i = rank; i < unknowns; ++i) {
      Eigen::VectorXd null_dir = svd.matrixV().col(i);
      double peak = null_dir.cwiseAbs().maxCoeff();
      for (long b = 0; b < unknowns; ++b)
        if (std::abs(null_dir[b]) >= 0.5 * peak) unresolved.insert(labels[b]);
    }
    std::string msg = "reconstruct: readout records are rank-deficient (rank " +
                      std::to_string(rank) + " of " + std::to_string(unknowns) +
                      "); unresolved operator directions:";
    for (const auto& l : unresolved) msg += " " + l;
    throw std::runtime_error(msg);
  }

  Eigen::VectorXd coeffs = svd.solve(target);
  Reconstruction out;
  out.residual = (design * coeffs - target).norm();
  out.state = Matrix::Zero(dim, dim);
  for (long b = 0; b < unknowns; ++b) out.state += coeffs[b] * basis[b];
  return out;
}

std::string CorrelationReport::line() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "c=%.9f the_norm=%.9f exp_norm=%.9f", c,
                the_norm, exp_norm);
  return buf;
}

CorrelationReport attenuated_correlation(const Matrix& rho_exp,
                                         const Matrix& rho_the) {
  if (rho_exp.rows() != rho_the.rows() || rho_exp.cols() != rho_the.cols())
    throw std::invalid_argument("attenuated_correlation: dimension mismatch");
  CorrelationReport rep;
  rep.the_norm = (rho_the * rho_the).trace().real();
  rep.exp_norm = (rho_exp * rho_exp).trace().real();
  if (rep.the_norm <= 0.0)
    throw std::invalid_argument("attenuated_correlation: zero theoretical norm");
  rep.c = (rho_the * rho_exp).trace().real() / rep.the_norm;
  return rep;
}

IdentityOffset identity_offset(const Matrix& rho_exp, const Matrix& rho_target) {
  if (rho_exp.rows() != rho_target.rows() || rho_exp.cols() != rho_target.cols())
    throw std::invalid_argument("identity_offset: dimension mismatch");
  IdentityOffset out;
  double dim = double(rho_exp.rows());
  out.alpha = -(rho_exp.trace().real() - rho_target.trace().real()) / dim;
  out.adjusted = rho_exp + out.alpha * Matrix::Identity(rho_exp.rows(), rho_exp.cols());
  out.rule = "alpha = -tr(exp - target)/dim (Frobenius minimizer; leaves the "
             "correlation against traceless targets unchanged)";
  return out;
}

std::string records_to_json(const std::vector<ReadoutRecord>& records, int n) {
  nlohmann::json j;
  j["n"] = n;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rec : records) {
    if (int(rec.pulses.size()) != n)
      throw std::invalid_argument("records_to_json: inconsistent spin counts");
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& o : rec.observed)
      obs.push_back({{"k", o.k}, {"l", o.l}, {"re", o.value.real()}, {"im", o.value.imag()}});
    arr.push_back({{"pulses", rec.pulses}, {"observed", obs}});
  }
  j["records"] = arr;
  return j.dump(2) + "\n";
}

std::vector<ReadoutRecord> records_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("records_from_json: parse failure: ") + e.what());
  }
  int n = j.at("n").get<int>();
  std::vector<ReadoutRecord> records;
  for (const auto& r : j.at("records")) {
    ReadoutRecord rec;
    rec.pulses = r.at("pulses").get<std::string>();
    if (int(rec.pulses.size()) != n)
      throw std::runtime_error("records_from_json: pulse label length mismatch");
    for (const auto& o : r.at("observed"))
      rec.observed.push_back({o.at("k").get<int>(), o.at("l").get<int>(),
                              cdouble(o.at("re").get<double>(), o.at("im").get<double>())});
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace nmrsim
