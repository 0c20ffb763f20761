#pragma once

#include <string>
#include <vector>

#include "dkpair/kclass.hpp"

namespace dkpair {

// Samples of a matrix field on [1/2, 1] x T^2: nt uniform times including both
// ends, an n1 x n2 momentum grid and m x m matrices.
struct ContractionGrid {
  int nt = 0;
  int n1 = 0;
  int n2 = 0;
  int m = 0;
  std::vector<cplx> data;  // order (t, k1, k2, row, col)

  cplx& at(int t, int i1, int i2, int r, int c);
  cplx at(int t, int i1, int i2, int r, int c) const;
};

enum class GridFileMode { Text, Binary };

ContractionGrid read_contraction_grid(const std::string& path);
void write_contraction_grid(const std::string& path, const ContractionGrid& g, GridFileMode mode);

ContractionGrid to_contraction_grid(const std::vector<AlgElement>& samples);
std::vector<AlgElement> from_contraction_grid(const ContractionGrid& g);
// Uniform-sample loop segment on [1/2, 1].
LoopSegment contraction_segment(const ContractionGrid& g);

}  // namespace dkpair
