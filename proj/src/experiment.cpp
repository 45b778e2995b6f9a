#include "nmrsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nmrsim {

void EraserConfig::validate() const {
  if (slices < 1)
    throw std::invalid_argument("EraserConfig: slices must be >= 1");
  if (miscal < 0.0 || miscal > 0.2)
    throw std::invalid_argument("EraserConfig: miscal must lie in [0, 0.2]");
  if (ghz_prep_seconds < 0.0)
    throw std::invalid_argument("EraserConfig: ghz_prep_seconds must be >= 0");
}

std::string expansion_text(const Matrix& A, double threshold) {
  auto terms = decompose(A, threshold);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
    if (ma != mb) return ma > mb;
    return a.factors < b.factors;
  });
  std::string out;
  char buf[64];
  for (const auto& t : terms) {
    std::snprintf(buf, sizeof(buf), "%+.15g %s\n", t.coefficient, t.factors.c_str());
    out += buf;
  }
  return out;
}

std::string bar_csv(const Matrix& A) {
  int n = spin_count(A);
  long dim = A.rows();
  auto label = [&](long k) {
    std::string s(n, '0');
    for (int j = 0; j < n; ++j)
      if (k & (1L << (n - 1 - j))) s[j] = '1';
    return s;
  };
  std::string out = "state";
  for (long c = 0; c < dim; ++c) out += "," + label(c);
  out += '\n';
  char buf[64];
  for (long r = 0; r < dim; ++r) {
    out += label(r);
    for (long c = 0; c < dim; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", A(r, c).real());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EraserResult run_eraser(const EraserConfig& config) {
  config.validate();
  EraserResult result;
  result.system = config.spin_system_path.empty()
                      ? SpinSystem::alanine()
                      : SpinSystem::load(config.spin_system_path);
  if (result.system.n != 3)
    throw std::invalid_argument("run_eraser: the experiment needs a 3-spin system");

  PulseNoise noise{config.miscal, std::mt19937_64(config.seed)};
  PulseNoise* np = config.miscal > 0.0 ? &noise : nullptr;

  // preparation and GHZ circuit; relaxation, when enabled, acts across the
  // circuit's duration (dominated by the coupling delays between the pulses)
  Matrix rho_ini = pseudo_pure_prep(thermal_deviation(result.system), np);
  Matrix ry = ghz_ry_stage(np);
  Matrix mid = ry * rho_ini * ry.adjoint();
  if (config.relaxation) mid = relax(mid, config.ghz_prep_seconds, result.system);
  Matrix cn = ghz_cnot_stage(np);
  Matrix rho_ghz = cn * mid * cn.adjoint();

  SpatialEnsemble ens = SpatialEnsemble::uniform(config.slices);
  Matrix rho_z = selective_dephase_z(rho_ghz, ens, config.windings, np);
  Matrix rho_x = selective_dephase_x(rho_ghz, ens, config.windings, np);

  struct Checkpoint {
    const char* name;
    Matrix state;
    Matrix target;
  };
  std::vector<Checkpoint> checkpoints = {
      {"rho_ini", rho_ini, pseudo_pure_target()},
      {"rho_ghz", rho_ghz, ghz_target()},
      {"rho_z", rho_z, dephase_z_target()},
      {"rho_x", rho_x, dephase_x_target()},
  };

  std::vector<std::vector<ReadoutRecord>> record_sets;
  for (auto& cp : checkpoints) {
    auto records = full_readout_set(cp.state, np);
    auto recon = reconstruct(records);
    StateArtifact art;
    art.name = cp.name;
    art.direct = cp.state;
    art.reconstructed = recon.state;
    art.tomo_residual = recon.residual;
    art.report = attenuated_correlation(cp.state, cp.target);
    result.report_lines.push_back(std::string(cp.name) + ": " + art.report.line());
    result.states.push_back(std::move(art));
    record_sets.push_back(std::move(records));
  }

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    auto emit = [&](const std::string& name, const std::string& text) {
      std::string path = (fs::path(config.out_dir) / name).string();
      write_text(path, text);
      result.files_written.push_back(path);
    };
    std::string correlations, tomo_summary;
    char buf[160];
    for (size_t i = 0; i < result.states.size(); ++i) {
      const auto& art = result.states[i];
      emit(art.name + ".json", matrix_to_json(art.direct));
      emit(art.name + ".csv", matrix_to_csv(art.direct));
      emit(art.name + "_tomo.json", matrix_to_json(art.reconstructed));
      emit(art.name + "_tomo.csv", matrix_to_csv(art.reconstructed));
      emit(art.name + "_records.json", records_to_json(record_sets[i], 3));
      emit(art.name + "_expansion.txt", expansion_text(art.direct));
      emit(art.name + "_bars.csv", bar_csv(art.direct));
      correlations += art.name + ": " + art.report.line() + "\n";
      std::snprintf(buf, sizeof(buf), "%s: residual=%.3e max_diff_vs_direct=%.3e\n",
                    art.name.c_str(), art.tomo_residual,
                    max_abs_diff(art.reconstructed, art.direct));
      tomo_summary += buf;
    }
    emit("correlations.txt", correlations);
    emit("tomo_summary.txt", tomo_summary);
    nlohmann::json cfg;
    cfg["spin_system_path"] = config.spin_system_path;
    cfg["slices"] = config.slices;
    cfg["windings"] = config.windings;
    cfg["relaxation"] = config.relaxation;
    cfg["miscal"] = config.miscal;
    cfg["seed"] = config.seed;
    cfg["ghz_prep_seconds"] = config.ghz_prep_seconds;
    emit("run_config.json", cfg.dump(2) + "\n");
  }
  return result;
}

}  // namespace nmrsim
