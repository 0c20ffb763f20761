#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dkpair/grid.hpp"
#include "dkpair/model.hpp"

namespace dkpair::cli {

struct PairConfig {
  std::string cycle = "ch2";
  // hamiltonian: flatten(H) (x) rho with base -1 (x) rho; unitary: [[0, U*], [U, 0]]
  // with base sigma_x.
  std::string cls = "hamiltonian";
  std::vector<int> axes;
};

struct FloquetConfig {
  std::optional<double> phase0;
  std::optional<double> phase1;
  std::string strategy = "decoupled";
  std::vector<std::string> contractions;
};

struct DriveSegmentConfig {
  double duration = 0.0;
  TightBindingModel hoppings;
  std::optional<TightBindingModel> offdiagonal;
};

struct ModelConfig {
  std::string origin;
  std::string digest;
  int dimension = 0;
  int matrix_size = 0;
  std::vector<AxisKind> axis_kinds;
  TightBindingModel hoppings;
  bool spin_doubling = false;
  std::optional<TightBindingModel> offdiagonal;
  std::optional<RealStructureSpec> real_structure;
  PairConfig pair;
  std::vector<DriveSegmentConfig> drive;
  FloquetConfig floquet;
  std::optional<int> grid;
  std::optional<int> tgrid;
  std::optional<double> tol;
  std::vector<std::string> warnings;

  // Hamiltonian after spin doubling and off-diagonal terms.
  TightBindingModel full_model() const;
  TightBindingModel segment_model(std::size_t j) const;
  int full_matrix_size() const { return spin_doubling ? 2 * matrix_size : matrix_size; }
  // n points per momentum axis, nt per time axis.
  TorusGrid make_grid(int n, int nt) const;
};

ModelConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ModelConfig load_config(const std::string& path);

// FNV-1a, 64 bit, as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace dkpair::cli
