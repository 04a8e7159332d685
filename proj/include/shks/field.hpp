#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "shks/grid.hpp"

namespace shks {

using Complex = std::complex<double>;

/// A real scalar field on a torus grid, held as Fourier coefficients under
/// the convention f(x) = sum_k fhat(k) e^{i k.x} (no volume factor).
///
/// Coefficients are stored for every lattice wavenumber in FFT order; a
/// field representing real data satisfies fhat(-k) = conj(fhat(k)).  The
/// coefficient at the unmatched Nyquist wavenumber M/2 is real for real data
/// and stands for the cosine mode; differentiation drops it.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, std::vector<Complex> coeffs);

  static SpectralField constant(const TorusGrid& grid, double value);
  /// Forward transform of f sampled at the grid points.
  static SpectralField sample(const TorusGrid& grid,
                              const std::function<double(std::span<const double>)>& f);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex coeff(std::span<const int> k) const { return coeffs_[grid_.flat_index(k)]; }
  Complex coeff(std::initializer_list<int> k) const {
    return coeff(std::span<const int>(k.begin(), k.size()));
  }
  double mean() const noexcept { return coeffs_[0].real(); }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double factor, SpectralField f);

/// Largest |fhat(k) - conj(fhat(-k))| and the pair where it occurs.
struct HermitianDefect {
  double max_defect = 0.0;
  std::vector<int> k;
  std::vector<int> minus_k;
};

HermitianDefect hermitian_defect(const SpectralField& field);

/// True when every coefficient is finite.
bool is_finite(const SpectralField& field);

/// Samples (length M^d, row-major) to coefficients.  Rejects non-finite
/// samples, naming the first offending index.
SpectralField forward_transform(const TorusGrid& grid, std::span<const double> values);

/// Coefficients to real samples.  An imaginary residue above 1e-10 (relative
/// to max(1, max|sample|)) means the field is not Hermitian; the error names
/// the worst wavenumber pair.
std::vector<double> inverse_transform(const SpectralField& field);

/// Applies (1 + |k|^2)^{exponent/2}.
SpectralField bessel_multiplier(const SpectralField& field, double exponent);

/// One field per axis, coefficients i k_j fhat(k) (zero where k_j = M/2).
std::vector<SpectralField> gradient(const SpectralField& field);

/// (sum_k (1+|k|^2)^s |fhat(k)|^2)^{1/2}
double sobolev_norm(const SpectralField& field, double s);

/// Re sum_k (1+|k|^2)^s a(k) conj(b(k)); equals (Lambda^s a, Lambda^s b) in
/// the coefficient pairing that defines sobolev_norm.
double sobolev_inner(const SpectralField& a, const SpectralField& b, double s);

/// max_x |u(x)| + max_j max_x |d_j u(x)| over grid points.
double w1inf_norm(const SpectralField& field);

/// Keeps coefficients with max_j |k_j| <= n.  Requires 1 <= n <= M/2.
SpectralField galerkin_project(const SpectralField& field, int n);

/// 2/3 rule: zeroes coefficients with any |k_j| > floor(M/3).
SpectralField dealias(const SpectralField& field);

/// Debug dump: one row per wavenumber, columns k0[,k1...],re,im.
void write_field_csv(std::ostream& out, const SpectralField& field);

namespace detail {

/// Real part of the inverse transform without the symmetry audit.
/// `scratch` must hold grid.size() complex values.
void real_samples(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> out,
                  std::span<Complex> scratch);

/// (1+|k|^2)^{exponent/2} for every flat index.
std::vector<double> bessel_weights(const TorusGrid& grid, double exponent);

}  // namespace detail

}  // namespace shks
