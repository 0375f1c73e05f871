#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "infsl/error.hpp"
#include "infsl/operators.hpp"
#include "infsl/solvers.hpp"
#include "support.hpp"

using namespace infsl;

namespace {

BoundaryData bd_of(std::vector<std::size_t> idx, std::vector<double> vals) {
  return BoundaryData{std::move(idx), std::move(vals)};
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Random Dirichlet data on `count` distinct nodes.
BoundaryData random_boundary(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BoundaryData bd;
  bd.indices = all;
  for (std::size_t t = 0; t < count; ++t) bd.values.push_back(u(rng));
  return bd;
}

// Connected K-NN instances, skipping seeds whose graph falls apart.
std::vector<Graph> connected_knn_instances(std::size_t count, std::size_t n_max) {
  std::vector<Graph> out;
  for (std::uint64_t seed = 0; out.size() < count; ++seed) {
    const std::size_t n = 20 + seed % (n_max - 19);
    Graph g = knn_graph(test::uniform_points(n, 2, seed), 5, GaussianSelfTuning{});
    if (g.num_components() == 1) out.push_back(std::move(g));
  }
  return out;
}

Eigen::MatrixXd dense_laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
    L(i, j) -= e.weight;
    L(j, i) -= e.weight;
    L(i, i) += e.weight;
    L(j, j) += e.weight;
  }
  return L;
}

// Harmonic extension by a dense solve of L_ff u_f = -L_fb g.
std::vector<double> dense_harmonic(const Graph& g, const BoundaryData& bd) {
  const Eigen::MatrixXd L = dense_laplacian(g);
  std::vector<int> role(g.size(), -1);
  for (std::size_t t = 0; t < bd.indices.size(); ++t) role[bd.indices[t]] = static_cast<int>(t);
  std::vector<Eigen::Index> free_nodes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (role[i] < 0) free_nodes.push_back(static_cast<Eigen::Index>(i));
  }
  const auto m = static_cast<Eigen::Index>(free_nodes.size());
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) A(a, b) = L(free_nodes[a], free_nodes[b]);
    for (std::size_t t = 0; t < bd.indices.size(); ++t) {
      rhs(a) -= L(free_nodes[a], static_cast<Eigen::Index>(bd.indices[t])) * bd.values[t];
    }
  }
  const Eigen::VectorXd uf = A.lu().solve(rhs);
  std::vector<double> u(g.size());
  for (std::size_t t = 0; t < bd.indices.size(); ++t) u[bd.indices[t]] = bd.values[t];
  for (Eigen::Index a = 0; a < m; ++a) u[static_cast<std::size_t>(free_nodes[a])] = uf(a);
  return u;
}

// Solves [L d; d^T 0][u; mu] = [b; 0] for one source column.
Eigen::VectorXd dense_poisson(const Graph& g, const Eigen::VectorXd& b) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  A.topLeftCorner(n, n) = dense_laplacian(g);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, n) = g.degree(static_cast<std::size_t>(i));
    A(n, i) = g.degree(static_cast<std::size_t>(i));
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = b;
  const Eigen::VectorXd x = A.fullPivLu().solve(rhs);
  return x.head(n);
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("lipschitz: symmetric path") {
    const auto r = lipschitz_solve(test::unit_path(3), bd_of({0, 2}, {0.0, 1.0}), SolverConfig{});
    CHECK(r.converged);
    CHECK(r.u[1] == doctest::Approx(0.5));
  }

  TEST_CASE("lipschitz: uneven path against brute-force minimization") {
    const Graph g = test::positioned_path({0.0, 1.0, 3.0});
    const double oracle = test::brute_force_lipschitz_value({0.0, 1.0}, {1.0, 2.0}, 0.0, 1.0, 300000);
    CHECK(std::abs(oracle - 1.0 / 3.0) < 1e-5);
    for (LengthMode mode : {LengthMode::graph_length, LengthMode::euclidean}) {
      SolverConfig cfg;
      cfg.length_mode = mode;
      const auto r = lipschitz_solve(g, bd_of({0, 2}, {0.0, 1.0}), cfg);
      CHECK(r.converged);
      CHECK(std::abs(r.u[1] - oracle) < 1e-5);
      CHECK(std::abs(r.u[1] - 1.0 / 3.0) <= 10 * cfg.tol);
    }
  }

  TEST_CASE("lipschitz: every node labeled") {
    const auto bd = bd_of({0, 1, 2}, {0.3, -1.0, 2.0});
    const auto r = lipschitz_solve(test::unit_path(3), bd, SolverConfig{});
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.u == bd.values);
  }

  TEST_CASE("lipschitz: degree-one node takes its neighbor's value") {
    const auto r = lipschitz_solve(test::unit_path(4), bd_of({0, 2}, {0.0, 1.0}), SolverConfig{});
    CHECK(r.u[3] == doctest::Approx(1.0));
    CHECK(r.u[1] == doctest::Approx(0.5));
  }

  TEST_CASE("lipschitz: pair selection follows the largest slope") {
    // center 0 with leaves at distances 1 (value 0), 1 (value 1), 4 (value 10)
    const std::vector<Edge> e{{0, 1, 1.0, 1.0}, {0, 2, 1.0, 1.0}, {0, 3, 1.0 / 16.0, 4.0}};
    const Graph g = Graph::from_edges(4, e);
    const auto r = lipschitz_solve(g, bd_of({1, 2, 3}, {0.0, 1.0, 10.0}), SolverConfig{});
    // slopes: (1,2): 1/2, (1,3): 10/5 = 2, (2,3): 9/5 -> pair (1,3): (4*0 + 1*10)/5 = 2
    const double oracle = test::brute_force_lipschitz_value({0.0, 1.0, 10.0}, {1.0, 1.0, 4.0}, 0.0, 10.0, 1000000);
    CHECK(r.u[0] == doctest::Approx(2.0));
    CHECK(std::abs(r.u[0] - oracle) < 1e-4);
  }

  TEST_CASE("lipschitz: errors") {
    const std::vector<Edge> e{{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}};
    const Graph two = Graph::from_edges(4, e);
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({0}, {1.0}), SolverConfig{}), IllPosedProblem);
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({}, {}), SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({2, 0}, {1.0, 0.0}), SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({0, 9}, {1.0, 0.0}), SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({0, 2}, {NAN, 0.0}), SolverConfig{}), InvalidArgument);
    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({0, 2}, {1.0, 0.0}), bad), InvalidArgument);
    bad = SolverConfig{};
    bad.max_iter = 0;
    CHECK_THROWS_AS(lipschitz_solve(two, bd_of({0, 2}, {1.0, 0.0}), bad), InvalidArgument);
  }

  TEST_CASE("lipschitz: iteration cap returns the iterate unconverged") {
    SolverConfig cfg;
    cfg.max_iter = 2;
    const auto r = lipschitz_solve(test::unit_path(30), bd_of({0, 29}, {0.0, 1.0}), cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.u.size() == 30);
  }

  TEST_CASE("evolution: examples") {
    const std::vector<double> zero3(3, 0.0);
    const auto p = evolution_solve(test::unit_path(3), bd_of({0, 2}, {0.0, 1.0}), zero3, SolverConfig{});
    CHECK(p.converged);
    CHECK(std::abs(p.u[1] - 0.5) <= 10 * 1e-6);

    const std::vector<double> zero4(4, 0.0);
    const auto s = evolution_solve(test::star(3), bd_of({1, 2, 3}, {0.0, 0.0, 1.0}), zero4, SolverConfig{});
    CHECK(s.converged);
    CHECK(std::abs(s.u[0] - 0.5) <= 10 * 1e-6);
  }

  TEST_CASE("evolution: boundary entries of u0 are overwritten") {
    const std::vector<double> u0{5.0, 5.0, 5.0};
    const auto r = evolution_solve(test::unit_path(3), bd_of({0, 2}, {0.0, 1.0}), u0, SolverConfig{});
    CHECK(r.u[0] == 0.0);
    CHECK(r.u[2] == 1.0);
  }

  TEST_CASE("evolution: agrees with lipschitz on a random 50-node graph") {
    Graph g;
    for (std::uint64_t seed = 100;; ++seed) {
      g = knn_graph(test::uniform_points(50, 2, seed), 6, GaussianSelfTuning{});
      if (g.num_components() == 1) break;
    }
    const BoundaryData bd = random_boundary(50, 5, 3);
    const SolverConfig cfg;
    const auto a = lipschitz_solve(g, bd, cfg);
    const auto b = evolution_solve(g, bd, std::vector<double>(50, 0.0), cfg);
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(sup_diff(a.u, b.u) <= 10 * cfg.tol);
  }

  TEST_CASE("evolution: time step limits") {
    const Graph g = test::unit_path(3);
    CHECK(evolution_step_bound(g) == doctest::Approx(1.0));
    SolverConfig cfg;
    cfg.dt = 1.5;
    CHECK_THROWS_AS(evolution_solve(g, bd_of({0, 2}, {0.0, 1.0}), std::vector<double>(3, 0.0), cfg),
                    InvalidArgument);
    cfg.dt = 0.5;
    const auto r = evolution_solve(g, bd_of({0, 2}, {0.0, 1.0}), std::vector<double>(3, 0.0), cfg);
    CHECK(r.converged);
    CHECK(r.u[1] == doctest::Approx(0.5));
    cfg.dt = -1.0;
    CHECK_THROWS_AS(evolution_solve(g, bd_of({0, 2}, {0.0, 1.0}), std::vector<double>(3, 0.0), cfg),
                    InvalidArgument);
    CHECK_THROWS_AS(evolution_solve(g, bd_of({0, 2}, {0.0, 1.0}), std::vector<double>(2, 0.0), SolverConfig{}),
                    InvalidArgument);
  }

  TEST_CASE("laplace: examples") {
    const SolverConfig cfg;
    CHECK(laplace_solve(test::unit_path(3), bd_of({0, 2}, {0.0, 1.0}), cfg).u[1] == doctest::Approx(0.5));
    CHECK(laplace_solve(test::star(3), bd_of({1, 2, 3}, {0.0, 0.0, 3.0}), cfg).u[0] == doctest::Approx(1.0));
    const Graph w = test::path_graph({1.0, 3.0}, {1.0, 1.0});
    CHECK(laplace_solve(w, bd_of({0, 2}, {0.0, 1.0}), cfg).u[1] == doctest::Approx(0.75));
  }

  TEST_CASE("laplace: isolated unlabeled node is rejected") {
    const std::vector<Edge> e{{0, 1, 1.0, 1.0}};
    const Graph g = Graph::from_edges(3, e);
    CHECK_THROWS_AS(laplace_solve(g, bd_of({0}, {1.0}), SolverConfig{}), IllPosedProblem);
  }

  TEST_CASE("laplace: matches a dense linear solve") {
    SolverConfig cfg;
    cfg.tol = 1e-9;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Graph g = test::random_connected_graph(40, 60, seed);
      const BoundaryData bd = random_boundary(40, 4, seed + 50);
      const auto r = laplace_solve(g, bd, cfg);
      CHECK(r.converged);
      CHECK(sup_diff(r.u, dense_harmonic(g, bd)) <= 10 * cfg.tol);
      std::vector<char> fixed(g.size(), 0);
      for (std::size_t i : bd.indices) fixed[i] = 1;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!fixed[i]) CHECK(std::abs(graph_laplacian(g, r.u, i)) <= cfg.tol * g.max_degree());
      }
    }
  }

  TEST_CASE("poisson: complete graph on three nodes") {
    std::vector<Edge> e{{0, 1, 1.0, 1.0}, {0, 2, 1.0, 1.0}, {1, 2, 1.0, 1.0}};
    const Graph g = Graph::from_edges(3, e);
    LabelField b(3, 2);
    b(0, 0) = 0.5;
    b(0, 1) = -0.5;
    b(1, 0) = -0.5;
    b(1, 1) = 0.5;
    const SolverConfig cfg;
    const auto r = poisson_solve(g, b, cfg);
    CHECK(r.converged);
    for (std::size_t c = 0; c < 2; ++c) {
      Eigen::VectorXd bc(3);
      for (std::size_t i = 0; i < 3; ++i) bc(static_cast<Eigen::Index>(i)) = b(i, c);
      const Eigen::VectorXd oracle = dense_poisson(g, bc);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(r.u(i, c) - oracle(static_cast<Eigen::Index>(i))) <= 10 * cfg.tol);
        CHECK(std::abs(r.u(i, c) - b(i, c) / 3.0) <= 10 * cfg.tol);
      }
    }
    CHECK(std::abs(r.u(2, 0)) <= 10 * cfg.tol);
    CHECK(std::abs(r.u(2, 1)) <= 10 * cfg.tol);
  }

  TEST_CASE("poisson: zero sources give zero") {
    const Graph g = test::random_connected_graph(20, 20, 4);
    const auto r = poisson_solve(g, LabelField(20, 3, 0.0), SolverConfig{});
    CHECK(r.converged);
    for (double v : r.u.data()) CHECK(v == 0.0);
  }

  TEST_CASE("poisson: residual, mean constraint and dense oracle") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const Graph g = test::random_connected_graph(30, 40, seed);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      LabelField b(30, 2, 0.0);
      for (std::size_t c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < 30; i += 3) {
          b(i, c) = u(rng);
          sum += b(i, c);
        }
        b(29, c) = -sum;
      }
      SolverConfig cfg;
      cfg.tol = 1e-10;
      const auto r = poisson_solve(g, b, cfg);
      REQUIRE(r.converged);
      for (std::size_t c = 0; c < 2; ++c) {
        const auto col = r.u.column(c);
        double mean = 0.0;
        for (std::size_t i = 0; i < 30; ++i) mean += g.degree(i) * col[i];
        CHECK(std::abs(mean) <= cfg.tol);
        double res = 0.0;
        for (std::size_t i = 0; i < 30; ++i) {
          res = std::max(res, std::abs(graph_laplacian(g, col, i) - b(i, c)));
        }
        CHECK(res <= cfg.tol * g.max_degree());
        Eigen::VectorXd bc(30);
        for (std::size_t i = 0; i < 30; ++i) bc(static_cast<Eigen::Index>(i)) = b(i, c);
        const Eigen::VectorXd oracle = dense_poisson(g, bc);
        for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(col[i] - oracle(static_cast<Eigen::Index>(i))) <= 1e-6);
      }
    }
  }

  TEST_CASE("poisson: errors") {
    const std::vector<Edge> e{{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}};
    CHECK_THROWS_AS(poisson_solve(Graph::from_edges(4, e), LabelField(4, 1), SolverConfig{}), IllPosedProblem);
    LabelField b(3, 1, 0.0);
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(poisson_solve(test::unit_path(3), b, SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(poisson_solve(test::unit_path(3), LabelField(4, 1), SolverConfig{}), InvalidArgument);
  }

  TEST_CASE("p-laplace: p = 2 matches laplace") {
    const SolverConfig cfg;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Graph g = test::random_connected_graph(30, 40, seed);
      const BoundaryData bd = random_boundary(30, 4, seed);
      const auto a = p_laplace_solve(g, bd, 2.0, cfg);
      const auto b = laplace_solve(g, bd, cfg);
      CHECK(a.converged);
      CHECK(sup_diff(a.u, b.u) <= 10 * cfg.tol);
    }
  }

  TEST_CASE("p-laplace: large p approaches the lipschitz value") {
    const Graph g = test::positioned_path({0.0, 1.0, 3.0});
    const auto bd = bd_of({0, 2}, {0.0, 1.0});
    const auto lip = lipschitz_solve(g, bd, SolverConfig{});
    const auto r = p_laplace_solve(g, bd, 100.0, SolverConfig{});
    CHECK(r.converged);
    CHECK(std::abs(r.u[1] - lip.u[1]) <= 0.02);
  }

  TEST_CASE("p-laplace: constants and errors") {
    const Graph g = test::random_connected_graph(15, 10, 2);
    for (double p : {2.0, 3.0, 10.0}) {
      const auto r = p_laplace_solve(g, bd_of({0, 5, 9}, {0.7, 0.7, 0.7}), p, SolverConfig{});
      for (double v : r.u) CHECK(std::abs(v - 0.7) <= 10 * 1e-6);
    }
    CHECK_THROWS_AS(p_laplace_solve(g, bd_of({0}, {1.0}), 1.5, SolverConfig{}), InvalidArgument);
    CHECK_THROWS_AS(p_laplace_solve(g, bd_of({0}, {1.0}), INFINITY, SolverConfig{}), InvalidArgument);
  }

  TEST_CASE("maximum principle for every dirichlet solver") {
    const SolverConfig cfg;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const Graph g = test::random_connected_graph(35, 50, seed);
      const BoundaryData bd = random_boundary(35, 5, seed + 9);
      const double lo = *std::min_element(bd.values.begin(), bd.values.end());
      const double hi = *std::max_element(bd.values.begin(), bd.values.end());
      const std::vector<SolveResult> results{
          lipschitz_solve(g, bd, cfg), evolution_solve(g, bd, std::vector<double>(35, 0.0), cfg),
          laplace_solve(g, bd, cfg), p_laplace_solve(g, bd, 4.0, cfg)};
      for (const auto& r : results) {
        REQUIRE(r.converged);
        for (double v : r.u) {
          CHECK(v >= lo - cfg.tol);
          CHECK(v <= hi + cfg.tol);
        }
      }
    }
  }

  TEST_CASE("lipschitz fixed point zeroes the infinity laplacian") {
    const SolverConfig cfg;
    for (const Graph& g : connected_knn_instances(20, 100)) {
      const BoundaryData bd = random_boundary(g.size(), 4, g.size());
      const auto r = lipschitz_solve(g, bd, cfg);
      REQUIRE(r.converged);
      const auto lap = apply_free(g, r.u, bd.indices, [](const Graph& gg, std::span<const double> u, std::size_t i) {
        return infinity_laplacian(gg, u, i);
      });
      for (double v : lap) CHECK(std::abs(v) <= 10 * cfg.tol);
    }
  }

  TEST_CASE("lipschitz and evolution agree on 50 instances") {
    const SolverConfig cfg;
    std::size_t seed = 0;
    for (const Graph& g : connected_knn_instances(50, 100)) {
      const BoundaryData bd = random_boundary(g.size(), 3 + seed % 4, seed);
      ++seed;
      const auto a = lipschitz_solve(g, bd, cfg);
      const auto b = evolution_solve(g, bd, std::vector<double>(g.size(), 0.0), cfg);
      REQUIRE(a.converged);
      REQUIRE(b.converged);
      CHECK(sup_diff(a.u, b.u) <= 10 * cfg.tol);
    }
  }

  TEST_CASE("lipschitz is monotone in the boundary data") {
    const SolverConfig cfg;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const Graph g = test::random_connected_graph(40, 60, seed);
      BoundaryData lo = random_boundary(40, 6, seed);
      BoundaryData hi = lo;
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> bump(0.0, 0.5);
      for (double& v : hi.values) v += bump(rng);
      const auto a = lipschitz_solve(g, lo, cfg);
      const auto b = lipschitz_solve(g, hi, cfg);
      for (std::size_t i = 0; i < 40; ++i) CHECK(a.u[i] <= b.u[i] + 10 * cfg.tol);
    }
  }

  TEST_CASE("lipschitz on a path is affine in arc length") {
    const SolverConfig cfg;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> step(0.2, 2.0);
      std::vector<double> x{0.0};
      for (int t = 0; t < 15; ++t) x.push_back(x.back() + step(rng));
      const Graph g = test::positioned_path(x);
      const auto r = lipschitz_solve(g, bd_of({0, 15}, {-1.0, 2.0}), cfg);
      REQUIRE(r.converged);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double affine = -1.0 + 3.0 * x[i] / x.back();
        CHECK(std::abs(r.u[i] - affine) <= 10 * cfg.tol);
      }
    }
  }
}
