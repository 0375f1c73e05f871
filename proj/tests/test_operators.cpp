#include <doctest.h>

#include <cmath>
#include <random>

#include "infsl/error.hpp"
#include "infsl/operators.hpp"
#include "support.hpp"

using namespace infsl;

namespace {

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("graph laplacian examples") {
    const Graph p = test::unit_path(3);
    const std::vector<double> bump{0.0, 1.0, 0.0};
    CHECK(graph_laplacian(p, bump, 1) == 2.0);
    const std::vector<double> c(3, 4.2);
    for (std::size_t i = 0; i < 3; ++i) CHECK(graph_laplacian(p, c, i) == 0.0);
    const Graph w = test::path_graph({2.0, 3.0}, {1.0, 1.0});
    const std::vector<double> u{0.0, 1.0, 5.0};
    CHECK(graph_laplacian(w, u, 1) == doctest::Approx(-10.0));
  }

  TEST_CASE("upwind gradient norms") {
    const Graph p = test::unit_path(3);
    const std::vector<double> lin{0.0, 0.5, 1.0};
    CHECK(upwind_grad_norm(p, lin, 1, Upwind::ascent, kInfinity) == doctest::Approx(0.5));
    CHECK(upwind_grad_norm(p, lin, 1, Upwind::descent, kInfinity) == doctest::Approx(0.5));
    CHECK(upwind_grad_norm(p, lin, 1, Upwind::descent, 2.0) == doctest::Approx(0.5));
    CHECK(upwind_grad_norm(p, lin, 1, Upwind::ascent, 2.0) == doctest::Approx(0.5));
    const std::vector<double> c(3, -2.0);
    for (double q : {0.5, 1.0, 2.0, 7.0, kInfinity}) {
      CHECK(upwind_grad_norm(p, c, 1, Upwind::ascent, q) == 0.0);
      CHECK(upwind_grad_norm(p, c, 1, Upwind::descent, q) == 0.0);
    }
    CHECK_THROWS_AS(upwind_grad_norm(p, lin, 1, Upwind::ascent, 0.0), InvalidArgument);
    CHECK_THROWS_AS(upwind_grad_norm(p, lin, 1, Upwind::ascent, -1.0), InvalidArgument);
  }

  TEST_CASE("weighted upwind norm uses sqrt(w)") {
    const Graph s = test::path_graph({4.0, 9.0}, {0.5, 1.0 / 3.0});
    const std::vector<double> u{1.0, 0.0, 1.0};
    // ascent terms: 2*1 and 3*1
    CHECK(upwind_grad_norm(s, u, 1, Upwind::ascent, kInfinity) == doctest::Approx(3.0));
    CHECK(upwind_grad_norm(s, u, 1, Upwind::ascent, 2.0) == doctest::Approx(std::sqrt(13.0)));
    CHECK(upwind_grad_norm(s, u, 1, Upwind::descent, 2.0) == 0.0);
  }

  TEST_CASE("infinity laplacian examples") {
    const Graph p = test::unit_path(3);
    const std::vector<double> lin{0.0, 0.5, 1.0};
    CHECK(infinity_laplacian(p, lin, 1) == 0.0);
    const std::vector<double> step{0.0, 0.0, 1.0};
    CHECK(infinity_laplacian(p, step, 1) == doctest::Approx(0.5));
    const Graph heavy = test::path_graph({4.0, 4.0}, {0.5, 0.5});
    const std::vector<double> q{0.0, 0.25, 1.0};
    CHECK(infinity_laplacian(heavy, q, 1) == doctest::Approx(0.5));
  }

  TEST_CASE("p-laplacian examples") {
    const Graph p = test::unit_path(3);
    const std::vector<double> bump{0.0, 1.0, 0.0};
    CHECK(p_laplacian(p, bump, 1, 2.0) == doctest::Approx(2.0));
    const std::vector<double> lin{0.0, 0.5, 1.0};
    CHECK(p_laplacian(p, lin, 1, 3.0) == doctest::Approx(0.0));
    const std::vector<double> c(3, 0.3);
    for (double q : {1.0, 1.5, 2.0, 3.0, 10.0}) CHECK(p_laplacian(p, c, 1, q) == 0.0);
    CHECK_THROWS_AS(p_laplacian(p, c, 1, 0.5), InvalidArgument);
  }

  TEST_CASE("holder infinity laplacian examples") {
    const Graph p = test::unit_path(3);
    const std::vector<double> lin{0.0, 0.5, 1.0};
    CHECK(holder_infinity(p, lin, 1, 1.0) == doctest::Approx(0.0));
    const std::vector<double> step{0.0, 0.0, 1.0};
    CHECK(holder_infinity(p, step, 1, 0.0) == doctest::Approx(1.0));
    const Graph uneven = test::path_graph({1.0, 0.25}, {1.0, 2.0});
    CHECK(holder_infinity(uneven, lin, 1, 1.0) == doctest::Approx(-0.25));
    CHECK_THROWS_AS(holder_infinity(p, lin, 1, 1.5), InvalidArgument);
    CHECK_THROWS_AS(holder_infinity(p, lin, 1, -0.1), InvalidArgument);
  }

  TEST_CASE("argument errors") {
    const Graph p = test::unit_path(3);
    const std::vector<double> u{0.0, 1.0, 2.0};
    const std::vector<double> short_u{0.0, 1.0};
    CHECK_THROWS_AS(graph_laplacian(p, u, 3), InvalidArgument);
    CHECK_THROWS_AS(graph_laplacian(p, short_u, 0), InvalidArgument);
    CHECK_THROWS_AS(infinity_laplacian(p, u, 7), InvalidArgument);
    CHECK_THROWS_AS(p_laplacian(p, short_u, 0, 2.0), InvalidArgument);

    const std::vector<Edge> e{{0, 1, 1.0, 1.0}};
    const Graph iso = Graph::from_edges(3, e);
    CHECK_THROWS_AS(infinity_laplacian(iso, u, 2), IllPosedProblem);
    CHECK_THROWS_AS(holder_infinity(iso, u, 2, 0.5), IllPosedProblem);
  }

  TEST_CASE("p = 2 matches the graph laplacian on random instances") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Graph g = test::random_connected_graph(25, 40, seed);
      const auto u = random_field(g.size(), seed + 1000);
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(p_laplacian(g, u, i, 2.0) - graph_laplacian(g, u, i)) <= 1e-12);
      }
    }
  }

  TEST_CASE("infinity laplacian is half the difference of the upwind norms") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Graph g = test::random_connected_graph(30, 50, seed);
      const auto u = random_field(g.size(), seed);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = upwind_grad_norm(g, u, i, Upwind::ascent, kInfinity);
        const double d = upwind_grad_norm(g, u, i, Upwind::descent, kInfinity);
        CHECK(infinity_laplacian(g, u, i) == 0.5 * (a - d));
      }
    }
  }

  TEST_CASE("translation, homogeneity and sign flip") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Graph g = test::random_connected_graph(20, 30, seed);
      const auto u = random_field(g.size(), seed + 7);
      std::vector<double> shifted = u, scaled = u, flipped = u;
      const double c = 2.5;
      for (double& x : shifted) x += 3.0;
      for (double& x : scaled) x *= c;
      for (double& x : flipped) x = -x;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double li = infinity_laplacian(g, u, i);
        const double lg = graph_laplacian(g, u, i);
        const double lh = holder_infinity(g, u, i, 0.5);
        const double lp = p_laplacian(g, u, i, 3.0);

        CHECK(infinity_laplacian(g, shifted, i) == doctest::Approx(li).epsilon(1e-12).scale(1.0));
        CHECK(graph_laplacian(g, shifted, i) == doctest::Approx(lg).epsilon(1e-12).scale(10.0));
        CHECK(holder_infinity(g, shifted, i, 0.5) == doctest::Approx(lh).epsilon(1e-12).scale(10.0));
        CHECK(p_laplacian(g, shifted, i, 3.0) == doctest::Approx(lp).epsilon(1e-12).scale(10.0));

        CHECK(infinity_laplacian(g, scaled, i) == doctest::Approx(c * li).epsilon(1e-12));
        CHECK(graph_laplacian(g, scaled, i) == doctest::Approx(c * lg).epsilon(1e-12));
        CHECK(holder_infinity(g, scaled, i, 0.5) == doctest::Approx(c * lh).epsilon(1e-12));
        CHECK(p_laplacian(g, scaled, i, 3.0) == doctest::Approx(c * c * lp).epsilon(1e-12));

        CHECK(infinity_laplacian(g, flipped, i) == doctest::Approx(-li).epsilon(1e-14));
        CHECK(graph_laplacian(g, flipped, i) == doctest::Approx(-lg).epsilon(1e-14));
        CHECK(holder_infinity(g, flipped, i, 0.5) == doctest::Approx(-lh).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("apply_free skips fixed nodes") {
    const Graph p = test::unit_path(4);
    const std::vector<double> u{0.0, 0.0, 1.0, 1.0};
    const std::vector<std::size_t> fixed{0, 3};
    const auto out = apply_free(p, u, fixed, [](const Graph& g, std::span<const double> v, std::size_t i) {
      return infinity_laplacian(g, v, i);
    });
    CHECK(out == std::vector<double>{0.0, 0.5, -0.5, 0.0});
  }
}
