#include "nmrsim/spin_core.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nmrsim {

namespace {

const cdouble kI(0.0, 1.0);

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

void check_spin_index(int n, int j, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": spin count must be positive");
  if (j < 1 || j > n)
    throw std::invalid_argument(std::string(who) + ": spin index " + std::to_string(j) +
                                " out of range 1.." + std::to_string(n));
}

}  // namespace

int spin_count(const Matrix& A) {
  if (A.rows() != A.cols() || !is_power_of_two(A.rows()))
    throw std::invalid_argument("matrix dimension is not a power of two");
  int n = 0;
  for (long d = A.rows(); d > 1; d >>= 1) ++n;
  return n;
}

Matrix pauli(char axis) {
  Matrix m(2, 2);
  switch (axis) {
    case '1': m << 1, 0, 0, 1; break;
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -kI, kI, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default:
      throw std::invalid_argument(std::string("unknown Pauli axis '") + axis + "'");
  }
  return m;
}

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Matrix embed_pauli(int n, int j, char axis) {
  check_spin_index(n, j, "embed_pauli");
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 1; k <= n; ++k)
    out = kron(out, k == j ? pauli(axis) : pauli('1'));
  return out;
}

Matrix projector(int n, int j, int sign) {
  check_spin_index(n, j, "projector");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("projector: sign must be +1 or -1");
  long dim = 1L << n;
  return (Matrix::Identity(dim, dim) + double(sign) * embed_pauli(n, j, 'z')) / 2.0;
}

Matrix product_operator(const std::string& factors) {
  if (factors.empty())
    throw std::invalid_argument("product_operator: empty label");
  Matrix out = Matrix::Identity(1, 1);
  for (char c : factors) out = kron(out, pauli(c));
  return out;
}

std::vector<ProductOperatorTerm> decompose(const Matrix& A, double threshold) {
  int n = spin_count(A);
  double herm = hermiticity_error(A);
  if (herm > 1e-10)
    throw std::invalid_argument(
        "decompose: input is not Hermitian (max |A - A^dag| = " + std::to_string(herm) +
        "); coefficients would be complex");
  const char axes[4] = {'1', 'x', 'y', 'z'};
  long dim = A.rows();
  long count = 1;
  for (int i = 0; i < n; ++i) count *= 4;
  std::vector<ProductOperatorTerm> terms;
  for (long idx = 0; idx < count; ++idx) {
    std::string label(n, '1');
    long rem = idx;
    for (int s = n - 1; s >= 0; --s) {
      label[s] = axes[rem & 3];
      rem >>= 2;
    }
    Matrix T = product_operator(label);
    double c = (T * A).trace().real() / double(dim);
    if (std::abs(c) >= threshold) terms.push_back({c, label});
  }
  return terms;
}

Matrix recompose(int n, const std::vector<ProductOperatorTerm>& terms) {
  long dim = 1L << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (int(t.factors.size()) != n)
      throw std::invalid_argument("recompose: label '" + t.factors +
                                  "' does not match spin count " + std::to_string(n));
    out += t.coefficient * product_operator(t.factors);
  }
  return out;
}

int coherence_order(int k, int l, int n) {
  long dim = 1L << n;
  if (k < 0 || l < 0 || k >= dim || l >= dim)
    throw std::invalid_argument("coherence_order: basis index out of range");
  return std::popcount(unsigned(l)) - std::popcount(unsigned(k));
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep) {
  int n = spin_count(rho);
  std::vector<bool> kept(n + 1, false);
  for (size_t i = 0; i < keep.size(); ++i) {
    int j = keep[i];
    if (j < 1 || j > n)
      throw std::invalid_argument("partial_trace: spin index " + std::to_string(j) +
                                  " out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep list must be strictly increasing");
    kept[j] = true;
  }
  int nk = int(keep.size());
  long dk = 1L << nk;
  long dt = 1L << (n - nk);
  // split a basis index into (kept bits, traced bits), both in original spin order
  auto split = [&](long idx) {
    long k = 0, t = 0;
    for (int j = 1; j <= n; ++j) {
      int bit = int((idx >> (n - j)) & 1);
      if (kept[j]) k = (k << 1) | bit;
      else t = (t << 1) | bit;
    }
    return std::pair<long, long>(k, t);
  };
  // inverse map: combine kept/traced sub-indices back into a full index
  std::vector<long> full(dk * dt);
  for (long idx = 0; idx < (1L << n); ++idx) {
    auto [k, t] = split(idx);
    full[k * dt + t] = idx;
  }
  Matrix out = Matrix::Zero(dk, dk);
  for (long a = 0; a < dk; ++a)
    for (long b = 0; b < dk; ++b)
      for (long t = 0; t < dt; ++t)
        out(a, b) += rho(full[a * dt + t], full[b * dt + t]);
  return out;
}

double hermiticity_error(const Matrix& A) {
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  if (A.size() == 0) return 0.0;
  return (A - B).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- serialization

std::string matrix_to_json(const Matrix& A) {
  nlohmann::json j;
  j["dim"] = A.rows();
  nlohmann::json entries = nlohmann::json::array();
  for (long r = 0; r < A.rows(); ++r)
    for (long c = 0; c < A.cols(); ++c)
      entries.push_back({A(r, c).real(), A(r, c).imag()});
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

Matrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("matrix_from_json: parse failure: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("entries"))
    throw std::runtime_error("matrix_from_json: missing 'dim' or 'entries'");
  long dim = j["dim"].get<long>();
  if (!is_power_of_two(dim))
    throw std::runtime_error("matrix_from_json: dim must be a power of two");
  const auto& entries = j["entries"];
  if (long(entries.size()) != dim * dim)
    throw std::runtime_error("matrix_from_json: expected " + std::to_string(dim * dim) +
                             " entries, got " + std::to_string(entries.size()));
  Matrix A(dim, dim);
  long idx = 0;
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c, ++idx)
      A(r, c) = cdouble(entries[idx][0].get<double>(), entries[idx][1].get<double>());
  return A;
}

std::string matrix_to_csv(const Matrix& A) {
  std::string out;
  char buf[64];
  for (long r = 0; r < A.rows(); ++r) {
    for (long c = 0; c < A.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", A(r, c).real(), A(r, c).imag());
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    rows.push_back(std::move(vals));
  }
  long dim = long(rows.size());
  if (dim == 0 || !is_power_of_two(dim))
    throw std::runtime_error("matrix_from_csv: row count must be a power of two");
  Matrix A(dim, dim);
  for (long r = 0; r < dim; ++r) {
    if (long(rows[r].size()) != 2 * dim)
      throw std::runtime_error("matrix_from_csv: row " + std::to_string(r) +
                               " must have " + std::to_string(2 * dim) + " columns");
    for (long c = 0; c < dim; ++c)
      A(r, c) = cdouble(rows[r][2 * c], rows[r][2 * c + 1]);
  }
  return A;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void save_matrix_json(const std::string& path, const Matrix& A) { spit(path, matrix_to_json(A)); }
Matrix load_matrix_json(const std::string& path) { return matrix_from_json(slurp(path)); }
void save_matrix_csv(const std::string& path, const Matrix& A) { spit(path, matrix_to_csv(A)); }
Matrix load_matrix_csv(const std::string& path) { return matrix_from_csv(slurp(path)); }

Matrix load_matrix(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return load_matrix_csv(path);
  return load_matrix_json(path);
}

}  // namespace nmrsim
