#include "hallmhd/probes.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random.hpp"
#include "hallmhd/sobolev.hpp"

namespace hallmhd {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t sample_seed(std::uint64_t seed, int i) {
  // splitmix64 step so neighbouring samples get unrelated streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * std::uint64_t(i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SpectralScalar draw(const GridPtr& g, const ProbeConfig& cfg, std::uint64_t seed) {
  if (cfg.single_mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    SpectralScalar f(g);
    f[g->index_of(1, 0, 0)] = 0.5 * std::polar(1.0, phase(rng));
    enforce_hermitian(*g, f.data());
    return f;
  }
  return random_scalar(g, 1.0, cfg.band_fraction * g->n(), cfg.slope, seed);
}

std::optional<double> ratio(double lhs, double rhs) {
  if (!(rhs > 0.0)) return std::nullopt;
  return lhs / rhs;
}

// |grad f| sampled on the 2x grid
PhysicalScalar grad_magnitude(const SpectralScalar& f, const GridPtr& fine) {
  const auto grad = to_physical(pad(gradient(f), fine));
  PhysicalScalar out(fine);
  for (std::size_t i = 0; i < fine->real_size(); ++i)
    out[i] = std::sqrt(grad[0][i] * grad[0][i] + grad[1][i] * grad[1][i] + grad[2][i] * grad[2][i]);
  return out;
}

void finish(ProbeReport& r) {
  r.max_ratio = 0.0;
  for (double x : r.ratios) r.max_ratio = std::max(r.max_ratio, x);
  if (!std::isfinite(r.max_ratio)) throw NumericError("probe " + r.id + ": non-finite ratio");
}

}  // namespace

void ProbeReport::write_csv(std::ostream& os) const {
  os << "inequality_id,sample_index,ratio\n";
  for (std::size_t i = 0; i < ratios.size(); ++i) os << id << ',' << i << ',' << fmt(ratios[i]) << '\n';
  os << id << ",max," << fmt(max_ratio) << '\n';
}

std::vector<std::string> probe_ids() { return {"em", "gn1", "gn2", "product"}; }

int probe_dim(const std::string& id) {
  if (id == "gn1") return 2;
  if (id == "em" || id == "gn2" || id == "product") return 3;
  throw ArgumentError("unknown inequality id: " + id);
}

std::optional<double> probe_ratio(const std::string& id, const SpectralScalar& a, const SpectralScalar* b) {
  if (a.grid().dim() != probe_dim(id)) throw ShapeError("probe " + id + ": wrong grid dimension");
  if (id == "em") return ratio(lp_norm(a, 6.0), hs_norm(a, 1.0));
  if (id == "gn1") return ratio(lp_norm(a, 4.0), std::sqrt(hs_norm(a, 0.0) * hs_norm(a, 1.0)));
  if (id == "gn2") {
    return ratio(lp_norm(a, std::numeric_limits<double>::infinity()), std::sqrt(hs_norm(a, 1.0) * hs_norm(a, 2.0)));
  }
  const SpectralScalar& bb = b ? *b : a;
  require_same_grid(a.grid(), bb.grid(), "product probe");
  // The product has twice the band; the 2x grid resolves it and |ab|^2 exactly.
  const auto fine = Grid::make(a.grid().dim(), 2 * a.grid().n());
  const auto pa = to_physical(pad(a, fine));
  const auto pb = to_physical(pad(bb, fine));
  PhysicalScalar prod(fine);
  for (std::size_t i = 0; i < fine->real_size(); ++i) prod[i] = pa[i] * pb[i];
  return ratio(lp_norm_samples(prod, 2.0), hs_norm(a, 0.5) * hs_norm(bb, 1.0));
}

ProbeReport inequality_probe(const std::string& id, const ProbeConfig& cfg) {
  const int dim = probe_dim(id);
  if (cfg.samples < 1) throw ArgumentError("inequality_probe: need at least one sample");
  const auto g = Grid::make(dim, cfg.n);
  ProbeReport r;
  r.id = id;
  r.n = cfg.n;
  for (int i = 0; i < cfg.samples; ++i) {
    const auto a = draw(g, cfg, sample_seed(cfg.seed, 2 * i));
    std::optional<double> q;
    if (id == "product") {
      const auto b = draw(g, cfg, sample_seed(cfg.seed, 2 * i + 1));
      q = probe_ratio(id, a, &b);
    } else {
      q = probe_ratio(id, a);
    }
    ++r.samples;
    if (q) {
      r.ratios.push_back(*q);
    } else {
      ++r.skipped;
    }
  }
  finish(r);
  return r;
}

KatoPonceRatios kato_ponce_ratios(const SpectralScalar& f, const SpectralScalar& g, const KatoPonceExponents& e) {
  const double ps[] = {e.p, e.p1, e.p2, e.p3, e.p4};
  for (double p : ps)
    if (!(p > 1.0) || std::isinf(p)) throw ArgumentError("kato_ponce: exponents must lie in (1, inf)");
  if (!(e.s > 0.0)) throw ArgumentError("kato_ponce: need s > 0");
  const double inv = 1.0 / e.p;
  if (std::abs(inv - 1.0 / e.p1 - 1.0 / e.p2) > 1e-12 || std::abs(inv - 1.0 / e.p3 - 1.0 / e.p4) > 1e-12) {
    throw ArgumentError("kato_ponce: need 1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4");
  }
  require_same_grid(f.grid(), g.grid(), "kato_ponce");
  const double scale = std::max(l2_norm(f), l2_norm(g));
  if (std::abs(f[0]) > 1e-12 * scale || std::abs(g[0]) > 1e-12 * scale) {
    throw DomainError("kato_ponce: f and g must be mean free");
  }

  const auto fine = Grid::make(f.grid().dim(), 2 * f.grid().n());
  const auto F = pad(f, fine), G = pad(g, fine);
  const auto pf = to_physical(F), pg = to_physical(G);
  PhysicalScalar prod(fine);
  for (std::size_t i = 0; i < fine->real_size(); ++i) prod[i] = pf[i] * pg[i];
  const auto lam_fg = to_physical(apply_lambda(to_spectral(prod), e.s));
  const auto lam_g = to_physical(apply_lambda(G, e.s));
  const auto lam_f = to_physical(apply_lambda(F, e.s));
  PhysicalScalar comm(fine);
  for (std::size_t i = 0; i < fine->real_size(); ++i) comm[i] = lam_fg[i] - pf[i] * lam_g[i];

  const double lam_f_p3 = lp_norm_samples(lam_f, e.p3);
  const double g_p4 = lp_norm_samples(pg, e.p4);
  KatoPonceRatios r;
  r.commutator = ratio(lp_norm_samples(comm, e.p),
                       lp_norm_samples(grad_magnitude(f, fine), e.p1) *
                               lp_norm_samples(to_physical(apply_lambda(G, e.s - 1.0)), e.p2) +
                           lam_f_p3 * g_p4);
  r.product = ratio(lp_norm_samples(lam_fg, e.p),
                    lp_norm_samples(pf, e.p1) * lp_norm_samples(lam_g, e.p2) + lam_f_p3 * g_p4);
  return r;
}

KatoPonceReport kato_ponce_probe(const KatoPonceExponents& e, const ProbeConfig& cfg, bool symmetric) {
  if (cfg.samples < 1) throw ArgumentError("kato_ponce_probe: need at least one sample");
  const auto g = Grid::make(3, cfg.n);
  KatoPonceReport rep;
  rep.commutator.id = "kato-ponce-commutator";
  rep.product.id = "kato-ponce-product";
  rep.commutator.n = rep.product.n = cfg.n;
  for (int i = 0; i < cfg.samples; ++i) {
    const auto f = draw(g, cfg, sample_seed(cfg.seed, 2 * i));
    const auto h = symmetric ? f : draw(g, cfg, sample_seed(cfg.seed, 2 * i + 1));
    const auto q = kato_ponce_ratios(f, h, e);
    for (auto [rep_i, val] : {std::pair{&rep.commutator, q.commutator}, std::pair{&rep.product, q.product}}) {
      ++rep_i->samples;
      if (val) {
        rep_i->ratios.push_back(*val);
      } else {
        ++rep_i->skipped;
      }
    }
  }
  finish(rep.commutator);
  finish(rep.product);
  return rep;
}

}  // namespace hallmhd
