#include "srkit/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace srkit {

void SparseMatrix::matvec(std::span<const double> x,
                          std::span<double> out) const {
  if (int(x.size()) != cols || int(out.size()) != rows)
    throw std::invalid_argument("SparseMatrix::matvec: dimension mismatch");
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      acc += val[k] * x[col[k]];
    out[r] = acc;
  }
}

std::size_t expected_edge_count(int height, int width, int connectivity) {
  const std::size_t h = std::size_t(height), w = std::size_t(width);
  std::size_t count = h * (w - 1) + w * (h - 1);
  if (connectivity == 8) count += 2 * (h - 1) * (w - 1);
  return count;
}

GridGraph build_grid_graph(int height, int width, int connectivity) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("build_grid_graph: zero dimension");
  if (connectivity != 4 && connectivity != 8)
    throw std::invalid_argument("build_grid_graph: connectivity must be 4 or 8");

  GridGraph g;
  g.height = height;
  g.width = width;
  g.connectivity = connectivity;
  g.edges.reserve(expected_edge_count(height, width, connectivity));

  auto idx = [width](int r, int c) { return PixelIndex(r * width + c); };

  // horizontal, row-major
  for (int r = 0; r < height; ++r)
    for (int c = 0; c + 1 < width; ++c)
      g.edges.push_back({idx(r, c), idx(r, c + 1)});
  // vertical, row-major
  for (int r = 0; r + 1 < height; ++r)
    for (int c = 0; c < width; ++c)
      g.edges.push_back({idx(r, c), idx(r + 1, c)});
  if (connectivity == 8) {
    // down-right diagonals, then down-left; i < j holds in both families
    for (int r = 0; r + 1 < height; ++r)
      for (int c = 0; c + 1 < width; ++c)
        g.edges.push_back({idx(r, c), idx(r + 1, c + 1)});
    for (int r = 0; r + 1 < height; ++r)
      for (int c = 1; c < width; ++c)
        g.edges.push_back({idx(r, c), idx(r + 1, c - 1)});
  }
  return g;
}

SparseMatrix incidence_matrix(const GridGraph& g) {
  SparseMatrix b;
  b.rows = int(g.edge_count());
  b.cols = int(g.node_count());
  b.row_ptr.resize(b.rows + 1);
  b.col.reserve(2 * g.edge_count());
  b.val.reserve(2 * g.edge_count());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    b.row_ptr[e] = 2 * e;
    b.col.push_back(g.edges[e].i);
    b.val.push_back(1.0);
    b.col.push_back(g.edges[e].j);
    b.val.push_back(-1.0);
  }
  b.row_ptr[b.rows] = 2 * g.edge_count();
  return b;
}

SparseMatrix laplacian(const GridGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::int32_t>> adj(n);
  std::vector<std::int32_t> degree(n, 0);
  for (const auto& e : g.edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
    ++degree[e.i];
    ++degree[e.j];
  }

  SparseMatrix l;
  l.rows = int(n);
  l.cols = int(n);
  l.row_ptr.resize(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    std::sort(adj[r].begin(), adj[r].end());
    // diagonal stored only when nonzero (degree 0 happens on 1x1 grids)
    const std::size_t row_nnz = adj[r].size() + (degree[r] > 0 ? 1 : 0);
    l.row_ptr[r + 1] = l.row_ptr[r] + row_nnz;
  }
  l.col.resize(l.row_ptr[n]);
  l.val.resize(l.row_ptr[n]);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t k = l.row_ptr[r];
    bool diag_emitted = degree[r] == 0;
    for (std::int32_t nbr : adj[r]) {
      if (!diag_emitted && nbr > std::int32_t(r)) {
        l.col[k] = std::int32_t(r);
        l.val[k] = double(degree[r]);
        ++k;
        diag_emitted = true;
      }
      l.col[k] = nbr;
      l.val[k] = -1.0;
      ++k;
    }
    if (!diag_emitted) {
      l.col[k] = std::int32_t(r);
      l.val[k] = double(degree[r]);
    }
  }
  return l;
}

void laplacian_apply(const GridGraph& g, std::span<const double> v,
                     std::span<double> out) {
  if (v.size() != g.node_count() || out.size() != g.node_count())
    throw std::invalid_argument("laplacian_apply: length mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& e : g.edges) {
    const double d = v[e.i] - v[e.j];
    out[e.i] += d;
    out[e.j] -= d;
  }
}

void write_edge_csv(const GridGraph& g, std::ostream& out) {
  out << "i,j\n";
  for (const auto& e : g.edges) out << e.i << "," << e.j << "\n";
}

}  // namespace srkit
