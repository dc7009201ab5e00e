#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <fftw3.h>

namespace hallmhd {

using Complex = std::complex<double>;

/// Allocator backed by fftw_malloc so that every array handed to the
/// transforms has the alignment the plans were created with.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept {
    return true;
  }
};

using SpectralArray = std::vector<Complex, FftwAllocator<Complex>>;
using RealArray = std::vector<double, FftwAllocator<double>>;

using Vec3 = std::array<double, 3>;

/// Periodic grid on [0, 2pi)^dim with n points per axis.
///
/// Spectral coefficients use the real-to-complex half layout: the last axis
/// stores wavenumbers 0..n/2, the other axes store 0..n/2-1, -n/2..-1.
/// Wavevectors are always 3-vectors; on a 2D lattice the third entry is 0,
/// which makes the 2.5D operators (tilde-curl, tilde-div) the 3D symbols
/// restricted to k3 = 0.
///
/// Forward transforms carry the factor n^-dim, so the grid mean of |f|^2
/// equals the sum of |f_k|^2 over the full lattice.
class Grid {
 public:
  /// Grids are cached per (dim, n); plans are created once.
  static std::shared_ptr<const Grid> make(int dim, int n);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t real_size() const { return real_size_; }
  std::size_t spec_size() const { return spec_size_; }

  /// Largest |k_i| kept by the two-thirds mask (3 K < n).
  int dealias_cutoff() const { return cutoff_; }
  /// Largest |k| among retained modes.
  double kmax() const;

  Vec3 k(std::size_t idx) const { return {kx_[idx], ky_[idx], kz_[idx]}; }
  double k2(std::size_t idx) const { return k2_[idx]; }
  std::span<const double> kx() const { return kx_; }
  std::span<const double> ky() const { return ky_; }
  std::span<const double> kz() const { return kz_; }
  std::span<const double> k2() const { return k2_; }
  /// Multiplicity of a stored coefficient in the full lattice (1 on the
  /// self-conjugate planes of the half axis, 2 elsewhere).
  std::span<const double> weight() const { return weight_; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  bool retained(std::size_t idx) const { return mask_[idx] != 0; }
  /// Wavevector used by first-derivative symbols: zero on any Nyquist plane,
  /// where ik would break Hermitian symmetry.
  Vec3 dk(std::size_t idx) const { return nyq_[idx] ? Vec3{0, 0, 0} : k(idx); }
  bool nyquist(std::size_t idx) const { return nyq_[idx] != 0; }

  /// Integer lattice coordinates of a stored coefficient.
  std::array<int, 3> lattice(std::size_t idx) const;
  /// Stored index of lattice wavevector k, or -1 when k is not in the half
  /// layout (negative last component) or out of range.
  std::ptrdiff_t index_of(int k1, int k2, int k3 = 0) const;

  /// Physical coordinate of grid point i along any axis.
  double coord(int i) const;

  void forward(std::span<const double> phys, std::span<Complex> spec) const;
  void inverse(std::span<const Complex> spec, std::span<double> phys) const;

 private:
  Grid(int dim, int n);

  int dim_;
  int n_;
  int cutoff_;
  std::size_t real_size_;
  std::size_t spec_size_;
  std::vector<double> kx_, ky_, kz_, k2_, weight_;
  std::vector<std::uint8_t> mask_, nyq_;
  fftw_plan plan_fwd_ = nullptr;
  fftw_plan plan_inv_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace hallmhd
