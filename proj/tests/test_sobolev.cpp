#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hallmhd/errors.hpp"
#include "hallmhd/gronwall.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/probes.hpp"
#include "hallmhd/random.hpp"
#include "hallmhd/sobolev.hpp"

using namespace hallmhd;

namespace {

SpectralScalar cos_x1(const GridPtr& g) {
  return to_spectral(sample(g, [](double x, double, double) { return std::cos(x); }));
}

SpectralVector as_vector(const SpectralScalar& f) {
  SpectralVector v(f.grid_ptr());
  std::copy(f.data().begin(), f.data().end(), v[0].begin());
  return v;
}

}  // namespace

TEST_CASE("homogeneous norms") {
  auto g = Grid::make(3, 16);
  SpectralVector zero(g);
  for (double s : {-1.0, 0.0, 0.5, 2.0}) CHECK(hs_norm(zero, s) == 0.0);
  auto c = cos_x1(g);
  for (double s : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    CHECK(hs_norm(c, s) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(hs_norm(as_vector(c), s) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  auto f = random_vector(g, 1, 5, 1, 3, false);
  const auto p = to_physical(f);
  CHECK(hs_norm(f, 0.0) == doctest::Approx(std::sqrt(grid_inner(p, p))).epsilon(1e-13));
  auto h = random_vector(g, 1, 5, 1, 4, false);
  CHECK(hs_norm(-2.5 * f, 1.5) == doctest::Approx(2.5 * hs_norm(f, 1.5)).epsilon(1e-14));
  CHECK(hs_norm(f + h, 0.5) <= hs_norm(f, 0.5) + hs_norm(h, 0.5));
  CHECK(hs_inner(f, f, 0.5) == doctest::Approx(hs_norm(f, 0.5) * hs_norm(f, 0.5)).epsilon(1e-13));
  f[0][0] = 2.0;
  CHECK_THROWS_AS(hs_norm(f, -1.0), DomainError);
  f[0][1] = NAN;
  CHECK_THROWS_AS(hs_norm(f, 1.0), NumericError);
}

TEST_CASE("norm equivalence is an identity for divergence-free fields") {
  auto g = Grid::make(3, 16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto b = random_vector(g, 1, 5, 0, seed, true);
    for (double s : {0.0, 0.5, 1.0}) {
      double grad2 = 0.0;
      for (int j = 0; j < 3; ++j) grad2 += std::pow(hs_norm(partial(b, j), s), 2);
      CHECK(std::sqrt(grad2) == doctest::Approx(hs_norm(curl3(b), s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("interpolation inequality") {
  auto g = Grid::make(3, 16);
  auto f = random_vector(g, 1, 5, 0, 8, true);
  auto r0 = interpolation_check(f, 0.2, 1.7, 0.0);
  CHECK(r0.lhs == doctest::Approx(r0.rhs).epsilon(1e-14));
  SpectralVector single(g);
  single[1][std::size_t(g->index_of(2, 1, 1))] = Complex(0.4, 0.1);
  for (double th : {0.1, 0.5, 0.9}) {
    auto r = interpolation_check(single, 0.0, 2.0, th);
    CHECK(r.holds);
    CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-13));
  }
  SpectralVector two(g);
  two[0][std::size_t(g->index_of(0, 0, 1))] = 1.0;
  two[0][std::size_t(g->index_of(0, 1, 2))] = 1.0;
  auto r = interpolation_check(two, 0.0, 1.0, 0.5);
  // brute force: |k|^2 in {1, 5}, both off the self-conjugate plane (weight 2)
  const double lhs = std::sqrt(2.0 * 1.0 + 2.0 * std::sqrt(5.0));
  const double rhs = std::pow(4.0, 0.25) * std::pow(2.0 + 10.0, 0.25);
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(rhs).epsilon(1e-14));
  CHECK(r.lhs < r.rhs);
  CHECK_THROWS_AS(interpolation_check(f, 0, 1, 1.5), ArgumentError);
}

TEST_CASE("Lebesgue norms of a cosine") {
  auto g = Grid::make(3, 16);
  auto c = cos_x1(g);
  CHECK(lp_norm(c, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(lp_norm(c, 4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-13));
  CHECK(lp_norm(c, 6.0) == doctest::Approx(std::pow(5.0 / 16.0, 1.0 / 6.0)).epsilon(1e-14));
  CHECK(lp_norm(c, INFINITY) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(as_vector(c), 4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(c, 0.5), ArgumentError);
}

TEST_CASE("embedding probe on a single mode") {
  const double exact = std::pow(5.0 / 16.0, 1.0 / 6.0) * std::sqrt(2.0);
  for (std::uint64_t seed : {1, 2, 99}) {
    ProbeConfig cfg;
    cfg.n = 16;
    cfg.samples = 3;
    cfg.seed = seed;
    cfg.single_mode = true;
    auto r = inequality_probe("em", cfg);
    CHECK(r.max_ratio == doctest::Approx(exact).epsilon(1e-12));
  }
  auto g = Grid::make(3, 16);
  CHECK_FALSE(probe_ratio("em", SpectralScalar(g)).has_value());
  CHECK_THROWS_AS(inequality_probe("nope", ProbeConfig{}), ArgumentError);
}

TEST_CASE("Gagliardo-Nirenberg probe is resolution stable") {
  ProbeConfig cfg;
  cfg.samples = 100;
  cfg.n = 32;
  auto a = inequality_probe("gn1", cfg);
  cfg.n = 64;
  auto b = inequality_probe("gn1", cfg);
  CHECK(std::isfinite(a.max_ratio));
  CHECK(a.samples == 100);
  CHECK(a.max_ratio / b.max_ratio < 2.0);
  CHECK(b.max_ratio / a.max_ratio < 2.0);
  std::ostringstream os;
  a.write_csv(os);
  CHECK(os.str().find("gn1,max,") != std::string::npos);
}

TEST_CASE("Kato-Ponce probe") {
  KatoPonceExponents e;
  ProbeConfig cfg;
  cfg.n = 16;
  cfg.samples = 4;
  auto sym = kato_ponce_probe(e, cfg, true);
  CHECK(std::isfinite(sym.commutator.max_ratio));
  CHECK(sym.commutator.max_ratio > 0.0);
  CHECK(std::isfinite(sym.product.max_ratio));

  auto g = Grid::make(3, 16);
  SpectralScalar f(g), h(g);
  f[std::size_t(g->index_of(1, 0, 0))] = 0.5;
  h[std::size_t(g->index_of(0, 2, 0))] = 0.5;
  enforce_hermitian(*g, f.data());
  enforce_hermitian(*g, h.data());
  auto q = kato_ponce_ratios(f, h, e);
  REQUIRE(q.commutator.has_value());
  CHECK(std::isfinite(*q.commutator));

  KatoPonceExponents bad;
  bad.p1 = INFINITY;
  bad.p3 = INFINITY;
  bad.p2 = bad.p4 = 2.0;
  CHECK_THROWS_AS(kato_ponce_ratios(f, h, bad), ArgumentError);
  KatoPonceExponents wrong;
  wrong.p2 = 3.0;
  CHECK_THROWS_AS(kato_ponce_ratios(f, h, wrong), ArgumentError);
  h[0] = 1.0;
  CHECK_THROWS_AS(kato_ponce_ratios(f, h, e), DomainError);
}

TEST_CASE("Gronwall verifier closed-form traces") {
  GronwallTrace tr;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.01 * i;
    tr.t.push_back(t);
    tr.x.push_back(0.5 * std::exp(-t));
    tr.d.push_back(std::sqrt(2.0) * 0.5 * std::exp(-t));
    tr.w.push_back(0.0);
  }
  tr.c = 0.5;
  tr.alpha = 1.0;
  auto r = gronwall_verify(tr);
  CHECK(r.smallness);
  CHECK(r.bound_holds);
  CHECK(r.margin > 0.0);

  // W = 0 and the integrated energy inequality holds by construction
  GronwallTrace flat;
  flat.t = {0.0, 1.0, 2.0, 3.0};
  flat.x = {1.0, 0.8, 0.7, 0.7};
  flat.d = {0.6, 0.6, 0.0, 0.0};
  flat.w = {0.0, 0.0, 0.0, 0.0};
  flat.c = 0.1;
  auto f = gronwall_verify(flat);
  CHECK(f.bound_holds);

  tr.c = 2.0;
  auto v = gronwall_verify(tr);
  CHECK_FALSE(v.smallness);
  CHECK_FALSE(v.bound_asserted);

  CHECK_THROWS_AS(gronwall_verify(GronwallTrace{}), ArgumentError);
}
