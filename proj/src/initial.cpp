#include "hallmhd/initial.hpp"

#include <cmath>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random.hpp"

namespace hallmhd {

namespace {

SpectralVector tidy(SpectralVector f) {
  f = dealias(leray_project(f));
  zero_mean(f);
  enforce_hermitian(f);
  f.set_divfree(true);
  return f;
}

std::pair<SpectralVector, SpectralVector> taylor_green(const GridPtr& g) {
  using std::cos, std::sin;
  if (g->dim() == 3) {
    auto u = to_spectral(sample(
        g, [](double x, double y, double z) { return sin(x) * cos(y) * cos(z); },
        [](double x, double y, double z) { return -cos(x) * sin(y) * cos(z); },
        [](double, double, double) { return 0.0; }));
    auto b = to_spectral(sample(
        g, [](double x, double y, double z) { return cos(x) * sin(y) * sin(z); },
        [](double x, double y, double z) { return sin(x) * cos(y) * sin(z); },
        [](double x, double y, double z) { return -2.0 * sin(x) * sin(y) * cos(z); }));
    return {u, b};
  }
  auto u = to_spectral(sample(
      g, [](double x, double y, double) { return sin(x) * cos(y); },
      [](double x, double y, double) { return -cos(x) * sin(y); },
      [](double x, double y, double) { return cos(x) * cos(y); }));
  auto b = to_spectral(sample(
      g, [](double, double y, double) { return -sin(y); }, [](double x, double, double) { return sin(2.0 * x); },
      [](double x, double y, double) { return sin(x) * sin(y); }));
  return {u, b};
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + salt;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SpectralVector normalized_random(const GridPtr& g, const InitialSpec& s, std::uint64_t salt) {
  auto f = tidy(random_vector(g, s.lo, s.hi, s.slope, mix(s.seed, salt), true));
  const double n = l2_norm(f);
  if (n == 0.0) throw ConfigError("random_band: band [lo, hi] holds no retained modes");
  f *= s.amplitude / n;
  return f;
}

}  // namespace

SpectralVector beltrami_field(const GridPtr& g) {
  using std::cos, std::sin;
  if (g->dim() == 3) {
    return tidy(to_spectral(sample(
        g, [](double, double y, double z) { return sin(z) + cos(y); },
        [](double x, double, double z) { return sin(x) + cos(z); },
        [](double x, double y, double) { return sin(y) + cos(x); })));
  }
  return tidy(to_spectral(sample(
      g, [](double, double y, double) { return cos(y); }, [](double x, double, double) { return sin(x); },
      [](double x, double y, double) { return sin(y) + cos(x); })));
}

State make_initial(const GridPtr& g, const InitialSpec& s, const PhysicalParams& p, Formulation f) {
  if (s.kind != "zero" && !(s.amplitude > 0.0)) throw ConfigError("initial data: amplitude must be positive");
  SpectralVector u(g, true), b(g, true);
  if (s.kind == "beltrami") {
    b = beltrami_field(g);
    b *= s.amplitude;
  } else if (s.kind == "random_band") {
    u = normalized_random(g, s, 1);
    b = normalized_random(g, s, 2);
  } else if (s.kind == "taylor_green") {
    auto [tu, tb] = taylor_green(g);
    u = tidy(tu);
    b = tidy(tb);
    u *= s.amplitude;
    b *= s.amplitude;
  } else if (s.kind != "zero") {
    throw ConfigError("unknown initial data kind: " + s.kind);
  }
  std::optional<SpectralVector> v;
  if (f == Formulation::Extended) {
    v = u;
    v->axpy(-p.eps, curl(b));
  }
  return State(std::move(u), std::move(b), std::move(v));
}

}  // namespace hallmhd
