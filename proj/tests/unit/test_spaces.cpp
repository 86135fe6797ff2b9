#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "besov/errors.hpp"
#include "besov/fourier.hpp"
#include "besov/io.hpp"
#include "besov/norms.hpp"
#include "support.hpp"

using namespace besov;
using testing::random_function;

TEST_CASE("grid rejects invalid shapes") {
  CHECK_THROWS_AS(GridSpec(1, 6), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(1, 2), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(0, 8), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(1, 8, 0.0), InvalidArgument);
  GridSpec g(2, 8, 2.0);
  CHECK(g.nodes() == 64);
  CHECK(g.cell_measure(Domain::physical) == doctest::Approx(1.0 / 16));
  CHECK(g.cell_measure(Domain::frequency) == doctest::Approx(0.25));
}

TEST_CASE("frequency lattice is j / L in FFT order") {
  GridSpec g(1, 8, 2.0);
  std::vector<double> expect = {0, 0.5, 1, 1.5, -2, -1.5, -1, -0.5};
  for (std::size_t i = 0; i < 8; ++i) CHECK(g.frequency(i, 0) == expect[i]);
}

TEST_CASE("lp norm of a constant") {
  GridSpec g(1, 4);
  GridFunction f(g, 1);
  for (auto& v : f.samples()) v = 2.0;
  auto x = ValueSpace::hilbert(1);
  for (double p : {1.0, 2.0, 3.0, kInf}) CHECK(lp_norm(f, p, x) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("lp norm of an indicator of measure one half") {
  GridFunction f(GridSpec(1, 4), 1, {1.0, 1.0, 0.0, 0.0}, Domain::physical);
  CHECK(lp_norm(f, 2.0, ValueSpace::hilbert(1)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("lp norm matches a long double loop") {
  std::mt19937_64 rng(1);
  GridSpec g(2, 16, 1.5);
  auto f = random_function(g, 3, rng);
  for (double px : {1.0, 2.0, 3.0, kInf}) {
    auto x = ValueSpace::lp(px, 3);
    long double acc = 0.0L;
    for (std::size_t node = 0; node < g.nodes(); ++node) {
      long double n = 0.0L;
      if (std::isinf(px)) {
        for (auto v : f.value(node)) n = std::max<long double>(n, std::abs(v));
      } else {
        for (auto v : f.value(node)) n += std::pow((long double)std::abs(v), (long double)px);
        n = std::pow(n, 1.0L / px);
      }
      acc += std::pow(n, 3.0L);
    }
    long double oracle = std::pow(acc * (1.5L / 16) * (1.5L / 16), 1.0L / 3);
    CHECK(lp_norm(f, 3.0, x) == doctest::Approx(double(oracle)).epsilon(1e-13));
  }
}

TEST_CASE("lp norm rejects a dimension mismatch") {
  GridFunction f(GridSpec(1, 4), 2);
  CHECK_THROWS_AS(lp_norm(f, 2.0, ValueSpace::hilbert(3)), InvalidArgument);
}

TEST_CASE("weak norm of a single-level function") {
  GridFunction f(GridSpec(1, 8), 1);
  f(1, 0) = 3.0;
  f(4, 0) = -3.0;
  CHECK(weak_lp_norm(f, 2.0, ValueSpace::hilbert(1)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(weak_lp_norm(GridFunction(GridSpec(1, 8), 1), 2.0, ValueSpace::hilbert(1)) == 0.0);
}

TEST_CASE("weak norm of a two-level step function against a dense height sweep") {
  GridSpec g(1, 16);
  GridFunction f(g, 1);
  for (int i = 0; i < 3; ++i) f(i, 0) = 5.0;
  for (int i = 3; i < 11; ++i) f(i, 0) = 1.0;
  auto x = ValueSpace::hilbert(1);
  for (double a : {1.0, 1.5, 3.0}) {
    double oracle = 0.0;
    for (int i = 1; i < 600000; ++i) {
      double alpha = i * 1e-5;
      double mu = 0.0;
      for (std::size_t node = 0; node < g.nodes(); ++node)
        if (std::abs(f(node, 0)) > alpha) mu += 1.0 / 16;
      oracle = std::max(oracle, alpha * std::pow(mu, 1.0 / a));
    }
    CHECK(weak_lp_norm(f, a, x) == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(weak_lp_norm(f, a, x) >= oracle);
  }
}

TEST_CASE("dft of a constant and of a single exponential") {
  GridSpec g(2, 8, 2.0);
  GridFunction c(g, 1);
  for (auto& v : c.samples()) v = cplx(1.5, -0.5);
  auto ch = dft(c);
  CHECK(ch.domain() == Domain::frequency);
  CHECK(std::abs(ch(0, 0) - cplx(1.5, -0.5) * 4.0) < 1e-13);
  for (std::size_t node = 1; node < g.nodes(); ++node) CHECK(std::abs(ch(node, 0)) < 1e-13);

  std::vector<int> j = {3, -2};
  auto e = GridFunction::from_function(g, 1, [&](std::span<const double> x, std::span<cplx> out) {
    out[0] = std::polar(1.0, 2.0 * M_PI * (j[0] * x[0] + j[1] * x[1]) / 2.0);
  });
  auto eh = dft(e);
  auto spike = g.node_of(j);
  for (std::size_t node = 0; node < g.nodes(); ++node)
    CHECK(std::abs(eh(node, 0) - (node == spike ? cplx(4.0) : cplx(0.0))) < 1e-12);
}

TEST_CASE("dft round trip and Parseval on random functions") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    int d = testing::pick(rng, 1, 3);
    int n = 1 << testing::pick(rng, 2, d == 3 ? 4 : 6);
    GridSpec g(d, n, testing::uniform(rng, 0.3, 4.0));
    int dim = testing::pick(rng, 1, 3);
    auto f = random_function(g, dim, rng);
    auto back = idft(dft(f));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.samples().size(); ++i) {
      err = std::max(err, std::abs(back.samples()[i] - f.samples()[i]));
      scale = std::max(scale, std::abs(f.samples()[i]));
    }
    CHECK(err / scale < 1e-12);
    auto x = ValueSpace::hilbert(dim);
    CHECK(testing::rel_diff(lp_norm(f, 2.0, x), lp_norm(dft(f), 2.0, x)) < 1e-10);
  }
}

TEST_CASE("dft rejects the wrong domain") {
  GridFunction f(GridSpec(1, 8), 1, Domain::frequency);
  CHECK_THROWS(dft(f));
  CHECK_THROWS(idft(GridFunction(GridSpec(1, 8), 1)));
}

TEST_CASE("property: Hoelder monotonicity on the unit torus") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    GridSpec g(testing::pick(rng, 1, 2), 1 << testing::pick(rng, 2, 5));
    int dim = testing::pick(rng, 1, 3);
    auto x = ValueSpace::lp(std::vector<double>{1.0, 2.0, 3.5, kInf}[testing::pick(rng, 0, 3)], dim);
    auto f = random_function(g, dim, rng);
    double p = testing::uniform(rng, 1.0, 6.0), q = testing::uniform(rng, p, 12.0);
    CHECK(lp_norm(f, p, x) <= lp_norm(f, q, x) * (1 + 1e-12));
    CHECK(lp_norm(f, q, x) <= lp_norm(f, kInf, x) * (1 + 1e-12));
  }
}

TEST_CASE("property: weak norm is dominated by the strong norm") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    GridSpec g(testing::pick(rng, 1, 2), 1 << testing::pick(rng, 2, 5), testing::uniform(rng, 0.5, 3.0));
    auto f = random_function(g, 2, rng);
    // Sparse supports make the comparison sharp.
    for (std::size_t node = 0; node < g.nodes(); ++node)
      if (testing::uniform(rng, 0, 1) < 0.7) f(node, 0) = f(node, 1) = 0.0;
    double a = testing::uniform(rng, 1.0, 5.0);
    auto x = ValueSpace::lp(testing::uniform(rng, 1.0, 4.0), 2);
    CHECK(weak_lp_norm(f, a, x) <= lp_norm(f, a, x) * (1 + 1e-12));
  }
}

TEST_CASE("property: norms are absolutely homogeneous") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    GridSpec g(1, 1 << testing::pick(rng, 2, 7));
    auto f = random_function(g, 2, rng);
    cplx c = std::polar(testing::uniform(rng, 0.01, 100.0), testing::uniform(rng, 0.0, 6.28));
    auto x = ValueSpace::lp(testing::uniform(rng, 1.0, 5.0), 2);
    auto cf = c * f;
    double p = testing::uniform(rng, 1.0, 8.0);
    CHECK(testing::rel_diff(lp_norm(cf, p, x), std::abs(c) * lp_norm(f, p, x)) < 1e-12);
    CHECK(testing::rel_diff(weak_lp_norm(cf, p, x), std::abs(c) * weak_lp_norm(f, p, x)) < 1e-12);
  }
}

TEST_CASE("value spaces: lp norms and known constants") {
  auto x = ValueSpace::lp(3.0, 2);
  std::vector<cplx> v = {cplx(3, 4), 1.0};
  CHECK(x.norm(v) == doctest::Approx(std::cbrt(126.0)));
  auto h = ValueSpace::hilbert(4);
  CHECK(h.is_hilbert());
  CHECK(*h.type_constant(2.0) == 1.0);
  CHECK(*h.cotype_constant(2.0) == 1.0);
  CHECK(*x.type_constant(1.0) == 1.0);
  CHECK(*x.cotype_constant(kInf) == 1.0);
  CHECK_FALSE(x.cotype_constant(2.0).has_value());
  auto back = ValueSpace::from_json(x.with_type(1.5, 1.2).to_json());
  CHECK(back.dim() == 2);
  CHECK(back.exponent() == 3.0);
  CHECK(*back.type_constant(1.5) == 1.2);
}

TEST_CASE("property: custom norm oracles are spot-checked for homogeneity and the triangle inequality") {
  auto x = ValueSpace::custom(
      3,
      [](std::span<const cplx> v) { return std::abs(v[0]) + 2.0 * std::hypot(std::abs(v[1]), std::abs(v[2])); },
      "weighted");
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<cplx> a(3), b(3), s(3), ca(3);
    cplx c(normal(rng), normal(rng));
    for (int i = 0; i < 3; ++i) {
      a[i] = cplx(normal(rng), normal(rng));
      b[i] = cplx(normal(rng), normal(rng));
      s[i] = a[i] + b[i];
      ca[i] = c * a[i];
    }
    CHECK(x.norm(s) <= x.norm(a) + x.norm(b) + 1e-12);
    CHECK(testing::rel_diff(x.norm(ca), std::abs(c) * x.norm(a)) < 1e-12);
  }
}

TEST_CASE("grid function serialization round trip") {
  std::mt19937_64 rng(7);
  GridSpec g(2, 4, 3.0);
  auto f = random_function(g, 2, rng, Domain::frequency);
  auto j = grid_function_to_json(f);
  CHECK(j["d"] == 2);
  CHECK(j["N"] == 4);
  CHECK(j["value_dim"] == 2);
  CHECK(j["domain_tag"] == "frequency");
  auto back = grid_function_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.grid() == g);
  CHECK(back.domain() == Domain::frequency);
  CHECK(back.samples() == f.samples());

  GridFunction s(GridSpec(1, 4), 1, {1.0, cplx(0, 2), 3.0, 4.0}, Domain::physical);
  auto csv = grid_function_to_csv(s);
  CHECK(csv.rfind("x,re,im\n", 0) == 0);
  CHECK(csv.find("0.25,0,2\n") != std::string::npos);
  CHECK_THROWS(grid_function_to_csv(f));
}

TEST_CASE("atomic write replaces the target in one step") {
  auto dir = std::filesystem::temp_directory_path() / "besov_io_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "out.json";
  atomic_write(path, "first");
  atomic_write(path, "second");
  CHECK(read_file(path) == "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}
