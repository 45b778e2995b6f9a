#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nmrsim/decoherence.hpp"
#include "nmrsim/dynamics.hpp"
#include "nmrsim/spin_core.hpp"
#include "nmrsim/state_prep.hpp"
#include "nmrsim/tomography_metrics.hpp"

namespace nmrsim {

struct EraserConfig {
  std::string spin_system_path;  // empty: built-in alanine values
  int slices = 64;
  double windings = 1.0;
  bool relaxation = false;       // apply T1/T2 decay across the GHZ stage
  double miscal = 0.0;           // RF amplitude error fraction, in [0, 0.2]
  std::uint64_t seed = 0;        // RNG seed for the miscalibration draws
  std::string out_dir;           // empty: compute only, write nothing
  double ghz_prep_seconds = 0.021;

  void validate() const;
};

// One checkpoint of the experiment: the simulator's state, its tomographic
// reconstruction, and the correlation against the closed-form target.
struct StateArtifact {
  std::string name;
  Matrix direct;
  Matrix reconstructed;
  double tomo_residual = 0.0;
  CorrelationReport report;  // direct vs target
};

struct EraserResult {
  SpinSystem system;
  std::vector<StateArtifact> states;       // rho_ini, rho_ghz, rho_z, rho_x
  std::vector<std::string> report_lines;   // "<name>: c=... the_norm=... exp_norm=..."
  std::vector<std::string> files_written;
};

// Full experiment: pseudo-pure preparation, GHZ circuit (optionally with
// relaxation across its duration and RF miscalibration), then the two
// dephasing branches. When out_dir is set, writes per state: the matrix
// (JSON + CSV), the tomographic reconstruction (JSON + CSV), the readout
// records (JSON), the product-operator expansion (text), bar-plot data
// (CSV, rows labeled 000..111), plus correlations.txt, tomo_summary.txt and
// run_config.json. Deterministic: identical configs give byte-identical files.
EraserResult run_eraser(const EraserConfig& config);

// Product-operator expansion, one term per line, sorted by descending
// |coefficient| then lexicographic label.
std::string expansion_text(const Matrix& A, double threshold = 1e-12);

// Real parts with basis-state row/column labels, for bar-chart tools.
std::string bar_csv(const Matrix& A);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace nmrsim
