#include <doctest.h>

#include <set>
#include <sstream>

#include "srkit/graph.hpp"
#include "testutil.hpp"

using namespace srkit;

TEST_CASE("1x2 grid has the single horizontal edge") {
  const GridGraph g = build_grid_graph(1, 2, 4);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].i == 0);
  CHECK(g.edges[0].j == 1);
}

TEST_CASE("2x2 grid: canonical edge order") {
  const GridGraph g = build_grid_graph(2, 2, 4);
  REQUIRE(g.edges.size() == 4);
  const std::vector<std::pair<int, int>> expected = {
      {0, 1}, {2, 3}, {0, 2}, {1, 3}};
  for (std::size_t e = 0; e < expected.size(); ++e) {
    CHECK(g.edges[e].i == expected[e].first);
    CHECK(g.edges[e].j == expected[e].second);
  }
}

TEST_CASE("3x3 grid edge count matches hand enumeration") {
  CHECK(build_grid_graph(3, 3, 4).edges.size() == 12);  // 3*2 + 3*2
}

TEST_CASE("edge counts match closed form and brute force on [1,8]^2") {
  for (int conn : {4, 8})
    for (int h = 1; h <= 8; ++h)
      for (int w = 1; w <= 8; ++w) {
        const GridGraph g = build_grid_graph(h, w, conn);
        CHECK(g.edges.size() == expected_edge_count(h, w, conn));
        CHECK(g.edges.size() == testutil::brute_force_edge_count(h, w, conn));
        // ordered pairs, no duplicates, valid indices
        std::set<std::pair<int, int>> seen;
        for (const auto& e : g.edges) {
          CHECK(e.i < e.j);
          CHECK(e.i >= 0);
          CHECK(e.j < int(g.node_count()));
          CHECK(seen.insert({e.i, e.j}).second);
        }
      }
}

TEST_CASE("grid graph rejects zero dimensions and bad connectivity") {
  CHECK_THROWS(build_grid_graph(0, 3, 4));
  CHECK_THROWS(build_grid_graph(3, 0, 4));
  CHECK_THROWS(build_grid_graph(3, 3, 5));
}

TEST_CASE("incidence matrix: one edge, matvec, zero row sums") {
  const GridGraph g12 = build_grid_graph(1, 2, 4);
  const SparseMatrix b12 = incidence_matrix(g12);
  const auto dense = testutil::dense_from_sparse(b12);
  REQUIRE(dense.size() == 1);
  CHECK(dense[0][0] == 1.0);
  CHECK(dense[0][1] == -1.0);

  // 2x2, v = (0,1,0,1): B v = (-1,-1,0,0) in canonical edge order
  const GridGraph g22 = build_grid_graph(2, 2, 4);
  const SparseMatrix b22 = incidence_matrix(g22);
  const std::vector<double> v = {0, 1, 0, 1};
  std::vector<double> bv(4);
  b22.matvec(v, bv);
  CHECK(bv == std::vector<double>{-1, -1, 0, 0});

  // every row of B sums to zero
  for (int conn : {4, 8}) {
    const GridGraph g = build_grid_graph(5, 4, conn);
    const SparseMatrix b = incidence_matrix(g);
    for (const auto& row : testutil::dense_from_sparse(b)) {
      double sum = 0.0;
      for (double x : row) sum += x;
      CHECK(sum == 0.0);
    }
  }
}

TEST_CASE("laplacian of 1x2 grid") {
  const SparseMatrix l = laplacian(build_grid_graph(1, 2, 4));
  const auto d = testutil::dense_from_sparse(l);
  CHECK(d[0][0] == 1.0);
  CHECK(d[0][1] == -1.0);
  CHECK(d[1][0] == -1.0);
  CHECK(d[1][1] == 1.0);
}

TEST_CASE("laplacian equals dense B^T B for small grids") {
  for (int conn : {4, 8})
    for (auto [h, w] : {std::pair{2, 2}, {3, 4}, {1, 5}, {4, 3}}) {
      const GridGraph g = build_grid_graph(h, w, conn);
      const auto b = testutil::dense_from_sparse(incidence_matrix(g));
      const auto btb = testutil::dense_btb(b, int(g.node_count()));
      const auto l = testutil::dense_from_sparse(laplacian(g));
      for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = 0; j < l.size(); ++j)
          CHECK(l[i][j] == btb[i][j]);
    }
}

TEST_CASE("2x2 laplacian: degree diagonal, -1 exactly on edges") {
  const auto d = testutil::dense_from_sparse(laplacian(build_grid_graph(2, 2, 4)));
  for (int i = 0; i < 4; ++i) CHECK(d[i][i] == 2.0);
  CHECK(d[0][1] == -1.0);
  CHECK(d[2][3] == -1.0);
  CHECK(d[0][2] == -1.0);
  CHECK(d[1][3] == -1.0);
  CHECK(d[0][3] == 0.0);
  CHECK(d[1][2] == 0.0);
}

TEST_CASE("degree structure: interior 4, edge 3, corner 2") {
  const GridGraph g = build_grid_graph(5, 6, 4);
  const auto d = testutil::dense_from_sparse(laplacian(g));
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 6; ++c) {
      const int borders = (r == 0 || r == 4 ? 1 : 0) + (c == 0 || c == 5 ? 1 : 0);
      CHECK(d[r * 6 + c][r * 6 + c] == 4.0 - borders);
    }
}

TEST_CASE("laplacian is exactly symmetric and annihilates constants") {
  for (int conn : {4, 8}) {
    const GridGraph g = build_grid_graph(7, 5, conn);
    const auto d = testutil::dense_from_sparse(laplacian(g));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        CHECK(d[i][j] == d[j][i]);

    const std::vector<double> ones(g.node_count(), 1.0);
    std::vector<double> lv(g.node_count());
    laplacian(g).matvec(ones, lv);
    for (double x : lv) CHECK(x == 0.0);
  }
}

TEST_CASE("quadratic form is nonnegative on random vectors") {
  const GridGraph g = build_grid_graph(6, 6, 4);
  const SparseMatrix l = laplacian(g);
  SplitMix64 rng(17);
  std::vector<double> v(g.node_count()), lv(g.node_count());
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& x : v) x = rng.next_double() * 2.0 - 1.0;
    l.matvec(v, lv);
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) q += v[i] * lv[i];
    CHECK(q >= 0.0);
  }
}

TEST_CASE("laplacian_apply: anchors and explicit-sparse oracle") {
  // constant vector lies in the kernel
  const GridGraph g33 = build_grid_graph(3, 3, 4);
  std::vector<double> constant(9, 0.7), out(9);
  laplacian_apply(g33, constant, out);
  for (double x : out) CHECK(x == 0.0);

  // 1x2, v = (1,0) -> (1,-1)
  const GridGraph g12 = build_grid_graph(1, 2, 4);
  std::vector<double> v12 = {1, 0}, out12(2);
  laplacian_apply(g12, v12, out12);
  CHECK(out12 == std::vector<double>{1, -1});

  // random 8x8 plane: matrix-free equals explicit sparse within 1e-12
  for (int conn : {4, 8}) {
    const GridGraph g = build_grid_graph(8, 8, conn);
    const SparseMatrix l = laplacian(g);
    SplitMix64 rng(3);
    std::vector<double> v(64), a(64), b(64);
    for (auto& x : v) x = rng.next_double();
    laplacian_apply(g, v, a);
    l.matvec(v, b);
    for (int i = 0; i < 64; ++i) {
      const double scale = std::max(1.0, std::abs(b[i]));
      CHECK(std::abs(a[i] - b[i]) / scale <= 1e-12);
    }
  }

  CHECK_THROWS(laplacian_apply(g33, std::vector<double>(5), out));
}

TEST_CASE("v^T L v three ways agrees to 1e-10 on random 16x16 input") {
  for (int conn : {4, 8}) {
    const GridGraph g = build_grid_graph(16, 16, conn);
    const SparseMatrix l = laplacian(g);
    SplitMix64 rng(23);
    std::vector<double> v(g.node_count());
    for (auto& x : v) x = rng.next_double();

    double edge_sum = 0.0;
    for (const auto& e : g.edges) {
      const double d = v[e.i] - v[e.j];
      edge_sum += d * d;
    }

    std::vector<double> lv(v.size());
    l.matvec(v, lv);
    double quad = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) quad += v[i] * lv[i];

    laplacian_apply(g, v, lv);
    double matfree = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) matfree += v[i] * lv[i];

    CHECK(std::abs(edge_sum - quad) / edge_sum <= 1e-10);
    CHECK(std::abs(edge_sum - matfree) / edge_sum <= 1e-10);
  }
}

TEST_CASE("edge CSV dump") {
  std::ostringstream out;
  write_edge_csv(build_grid_graph(1, 3, 4), out);
  CHECK(out.str() == "i,j\n0,1\n1,2\n");
}

TEST_CASE("sparse rows keep strictly increasing columns, no explicit zeros") {
  for (int conn : {4, 8}) {
    const GridGraph g = build_grid_graph(4, 5, conn);
    for (const SparseMatrix& m : {incidence_matrix(g), laplacian(g)}) {
      for (int r = 0; r < m.rows; ++r)
        for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
          CHECK(m.val[k] != 0.0);
          if (k + 1 < m.row_ptr[r + 1]) CHECK(m.col[k] < m.col[k + 1]);
        }
    }
  }
}
