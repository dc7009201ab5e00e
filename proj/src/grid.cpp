#include "hallmhd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

std::shared_ptr<const Grid> Grid::make(int dim, int n) {
  if (dim != 2 && dim != 3) throw ArgumentError("grid dimension must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw ArgumentError("grid size must be even and >= 8, got " + std::to_string(n));
  static std::mutex cache_mutex;
  // Grids are kept for the life of the process: rebuilding the wavenumber
  // tables and FFTW plans of an oversampled grid costs more than most transforms.
  static std::map<std::pair<int, int>, std::shared_ptr<const Grid>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{dim, n}];
  if (slot) return slot;
  std::shared_ptr<const Grid> g(new Grid(dim, n));
  slot = g;
  return g;
}

Grid::Grid(int dim, int n) : dim_(dim), n_(n), cutoff_((n - 1) / 3) {
  const int nh = n / 2 + 1;
  real_size_ = dim == 3 ? std::size_t(n) * n * n : std::size_t(n) * n;
  spec_size_ = dim == 3 ? std::size_t(n) * n * nh : std::size_t(n) * nh;
  kx_.resize(spec_size_);
  ky_.resize(spec_size_);
  kz_.resize(spec_size_);
  k2_.resize(spec_size_);
  weight_.resize(spec_size_);
  mask_.resize(spec_size_);
  nyq_.resize(spec_size_);
  for (std::size_t idx = 0; idx < spec_size_; ++idx) {
    const auto [a, b, c] = lattice(idx);
    kx_[idx] = a;
    ky_[idx] = b;
    kz_[idx] = c;
    k2_[idx] = double(a) * a + double(b) * b + double(c) * c;
    const int last = dim == 3 ? c : b;
    weight_[idx] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    const int m = std::max({std::abs(a), std::abs(b), std::abs(c)});
    mask_[idx] = m <= cutoff_ ? 1 : 0;
    nyq_[idx] = (a == -n / 2 || b == -n / 2 || b == n / 2 || c == n / 2) ? 1 : 0;
  }

  RealArray r(real_size_);
  SpectralArray s(spec_size_);
  auto* rp = r.data();
  auto* sp = reinterpret_cast<fftw_complex*>(s.data());
  std::lock_guard lock(planner_mutex());
  if (dim == 3) {
    plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, rp, sp, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_3d(n, n, n, sp, rp, FFTW_ESTIMATE);
  } else {
    plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, rp, sp, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_2d(n, n, sp, rp, FFTW_ESTIMATE);
  }
  if (plan_fwd_ == nullptr || plan_inv_ == nullptr) throw Error("FFTW plan creation failed");
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan_fwd_);
  fftw_destroy_plan(plan_inv_);
}

double Grid::kmax() const {
  return std::sqrt(double(dim_)) * cutoff_;
}

std::array<int, 3> Grid::lattice(std::size_t idx) const {
  const std::size_t nh = n_ / 2 + 1;
  if (dim_ == 3) {
    const int c = int(idx % nh);
    const int b = int((idx / nh) % n_);
    const int a = int(idx / (nh * n_));
    return {signed_wavenumber(a, n_), signed_wavenumber(b, n_), c};
  }
  const int b = int(idx % nh);
  const int a = int(idx / nh);
  return {signed_wavenumber(a, n_), b, 0};
}

std::ptrdiff_t Grid::index_of(int k1, int k2, int k3) const {
  const int nh = n_ / 2 + 1;
  auto wrap = [this](int k) { return k < 0 ? k + n_ : k; };
  if (dim_ == 3) {
    if (k3 < 0 || k3 >= nh || k1 < -n_ / 2 || k1 >= n_ / 2 || k2 < -n_ / 2 || k2 >= n_ / 2) return -1;
    return (std::ptrdiff_t(wrap(k1)) * n_ + wrap(k2)) * nh + k3;
  }
  if (k3 != 0 || k2 < 0 || k2 >= nh || k1 < -n_ / 2 || k1 >= n_ / 2) return -1;
  return std::ptrdiff_t(wrap(k1)) * nh + k2;
}

double Grid::coord(int i) const {
  return 2.0 * std::numbers::pi * i / n_;
}

void Grid::forward(std::span<const double> phys, std::span<Complex> spec) const {
  if (phys.size() != real_size_ || spec.size() != spec_size_) {
    throw ShapeError("forward transform: size mismatch");
  }
  // r2c does not modify its input; unaligned callers go through a copy.
  thread_local RealArray in_scratch;
  thread_local SpectralArray out_scratch;
  const double* in = phys.data();
  if (fftw_alignment_of(const_cast<double*>(in)) != 0) {
    in_scratch.assign(phys.begin(), phys.end());
    in = in_scratch.data();
  }
  const bool out_aligned = fftw_alignment_of(reinterpret_cast<double*>(spec.data())) == 0;
  if (!out_aligned) out_scratch.resize(spec_size_);
  Complex* out = out_aligned ? spec.data() : out_scratch.data();
  fftw_execute_dft_r2c(plan_fwd_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  if (!out_aligned) std::copy(out_scratch.begin(), out_scratch.end(), spec.begin());
  const double scale = 1.0 / double(real_size_);
  for (auto& c : spec) c *= scale;
}

void Grid::inverse(std::span<const Complex> spec, std::span<double> phys) const {
  if (phys.size() != real_size_ || spec.size() != spec_size_) {
    throw ShapeError("inverse transform: size mismatch");
  }
  // c2r destroys its input.
  thread_local SpectralArray scratch;
  thread_local RealArray out_scratch;
  scratch.assign(spec.begin(), spec.end());
  const bool out_aligned = fftw_alignment_of(phys.data()) == 0;
  if (!out_aligned) out_scratch.resize(real_size_);
  double* out = out_aligned ? phys.data() : out_scratch.data();
  fftw_execute_dft_c2r(plan_inv_, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  if (!out_aligned) std::copy(out_scratch.begin(), out_scratch.end(), phys.begin());
}

}  // namespace hallmhd
