#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "srkit/image.hpp"

namespace srkit {

// Undirected pixel-grid graph. Edges are stored once as ordered pairs
// (i, j) with i < j, in a canonical order: horizontal edges row-major,
// then vertical edges row-major, then (8-connectivity only) the down-right
// and down-left diagonal families, each row-major.
struct GridGraph {
  int height = 0;
  int width = 0;
  int connectivity = 4;  // 4 or 8

  struct Edge {
    PixelIndex i;
    PixelIndex j;
  };
  std::vector<Edge> edges;

  std::size_t node_count() const {
    return std::size_t(height) * std::size_t(width);
  }
  std::size_t edge_count() const { return edges.size(); }
};

// Compressed sparse row matrix; column indices strictly increase within a
// row and no explicit zeros are stored.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::size_t> row_ptr;  // length rows + 1
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::size_t nonzeros() const { return val.size(); }
  void matvec(std::span<const double> x, std::span<double> out) const;
};

GridGraph build_grid_graph(int height, int width, int connectivity);

// Closed-form |E| for a height x width grid at the given connectivity.
std::size_t expected_edge_count(int height, int width, int connectivity);

// Incidence matrix B: |E| x N, +1 at column i and -1 at column j of each
// edge, so (B v)_e = v_i - v_j.
SparseMatrix incidence_matrix(const GridGraph& g);

// Graph Laplacian L = B^T B = D - A, N x N, symmetric.
SparseMatrix laplacian(const GridGraph& g);

// Matrix-free L*v over the canonical edge order:
// out[i] += v[i]-v[j]; out[j] += v[j]-v[i] per edge. The accumulation
// order is fixed, so results are bit-for-bit reproducible.
void laplacian_apply(const GridGraph& g, std::span<const double> v,
                     std::span<double> out);

// Debug dump of the edge list as "i,j" rows.
void write_edge_csv(const GridGraph& g, std::ostream& out);

}  // namespace srkit
