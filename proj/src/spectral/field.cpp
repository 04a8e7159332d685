#include "shks/field.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "shks/error.hpp"
#include "shks/fft.hpp"
#include "shks/simd/kernels.hpp"

namespace shks {

namespace {

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw Error("fields live on different grids");
}

std::string format_k(std::span<const int> k) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ')';
  return os.str();
}

}  // namespace

SpectralField::SpectralField(TorusGrid grid) : grid_(std::move(grid)), coeffs_(grid_.size()) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw Error("coefficient count " + std::to_string(coeffs_.size()) + " does not match grid size " +
                std::to_string(grid_.size()));
  }
}

SpectralField SpectralField::constant(const TorusGrid& grid, double value) {
  SpectralField f(grid);
  f.coeffs_[0] = value;
  return f;
}

SpectralField SpectralField::sample(const TorusGrid& grid,
                                    const std::function<double(std::span<const double>)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(grid.point(i));
  return forward_transform(grid, values);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double factor, SpectralField f) { return f *= factor; }

HermitianDefect hermitian_defect(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  const auto c = field.coeffs();
  HermitianDefect out;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = std::abs(c[i] - std::conj(c[g.partner(i)]));
    if (d > out.max_defect) {
      out.max_defect = d;
      worst = i;
    }
  }
  const auto k = g.wavevector(worst);
  const auto mk = g.wavevector(g.partner(worst));
  out.k.assign(k.begin(), k.end());
  out.minus_k.assign(mk.begin(), mk.end());
  return out;
}

bool is_finite(const SpectralField& field) {
  const auto c = field.coeffs();
  return simd::active_kernels().all_finite(reinterpret_cast<const double*>(c.data()), 2 * c.size());
}

SpectralField forward_transform(const TorusGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw Error("expected " + std::to_string(grid.size()) + " samples, got " +
                std::to_string(values.size()));
  }
  std::vector<Complex> in(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFiniteError("non-finite sample at index " + std::to_string(i), std::nan(""));
    }
    in[i] = values[i];
  }
  std::vector<Complex> out(values.size());
  fft::forward(grid.dimension(), grid.points(), in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= scale;
    // Exact Hermitian pairing; the FFT leaves round-off asymmetry otherwise.
    const std::size_t p = grid.partner(i);
    if (p < i) {
      const Complex avg = 0.5 * (out[i] + std::conj(out[p]));
      out[i] = avg;
      out[p] = std::conj(avg);
    } else if (p == i) {
      out[i] = out[i].real();
    }
  }
  return SpectralField(grid, std::move(out));
}

std::vector<double> inverse_transform(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  std::vector<Complex> out(g.size());
  fft::inverse(g.dimension(), g.points(), field.coeffs().data(), out.data());
  std::vector<double> values(out.size());
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    values[i] = out[i].real();
    max_re = std::max(max_re, std::fabs(out[i].real()));
    max_im = std::max(max_im, std::fabs(out[i].imag()));
  }
  if (max_im > 1e-10 * std::max(1.0, max_re)) {
    const HermitianDefect d = hermitian_defect(field);
    std::ostringstream os;
    os << "field is not Hermitian: imaginary residue " << max_im << ", worst pair k=" << format_k(d.k)
       << " / -k=" << format_k(d.minus_k) << " (defect " << d.max_defect << ")";
    throw Error(os.str());
  }
  return values;
}

namespace detail {

void real_samples(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> out,
                  std::span<Complex> scratch) {
  fft::inverse(grid.dimension(), grid.points(), coeffs.data(), scratch.data());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = scratch[i].real();
}

std::vector<double> bessel_weights(const TorusGrid& grid, double exponent) {
  const auto k2 = grid.k_squared();
  std::vector<double> w(k2.size());
  const double half = 0.5 * exponent;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(1.0 + k2[i], half);
  return w;
}

}  // namespace detail

SpectralField bessel_multiplier(const SpectralField& field, double exponent) {
  SpectralField out = field;
  const auto w = detail::bessel_weights(field.grid(), exponent);
  simd::active_kernels().scale_by_real(out.coeffs().data(), w.data(), w.size());
  return out;
}

std::vector<SpectralField> gradient(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  const int d = g.dimension();
  const int nyq = g.points() / 2;
  std::vector<SpectralField> out(d, SpectralField(g));
  const auto c = field.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto k = g.wavevector(i);
    for (int a = 0; a < d; ++a) {
      out[a].coeffs()[i] = k[a] == nyq ? Complex(0.0) : Complex(0.0, k[a]) * c[i];
    }
  }
  return out;
}

double sobolev_norm(const SpectralField& field, double s) {
  const auto w = detail::bessel_weights(field.grid(), 2.0 * s);
  return std::sqrt(simd::active_kernels().weighted_energy(field.coeffs().data(), w.data(), w.size()));
}

double sobolev_inner(const SpectralField& a, const SpectralField& b, double s) {
  require_same_grid(a.grid(), b.grid());
  const auto w = detail::bessel_weights(a.grid(), 2.0 * s);
  return simd::active_kernels().weighted_inner(a.coeffs().data(), b.coeffs().data(), w.data(), w.size());
}

double w1inf_norm(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  const auto& k = simd::active_kernels();
  std::vector<Complex> scratch(g.size());
  std::vector<double> values(g.size());
  detail::real_samples(g, field.coeffs(), values, scratch);
  const double sup = k.max_abs(values.data(), values.size());
  double grad_sup = 0.0;
  for (const SpectralField& component : gradient(field)) {
    detail::real_samples(g, component.coeffs(), values, scratch);
    grad_sup = std::max(grad_sup, k.max_abs(values.data(), values.size()));
  }
  return sup + grad_sup;
}

SpectralField galerkin_project(const SpectralField& field, int n) {
  const TorusGrid& g = field.grid();
  if (n < 1 || n > g.points() / 2) {
    throw ConfigError("galerkin.n: projection level " + std::to_string(n) + " outside [1, M/2=" +
                      std::to_string(g.points() / 2) + "]");
  }
  SpectralField out = field;
  const auto kmax = g.k_max_abs();
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (kmax[i] > n) c[i] = 0.0;
  }
  return out;
}

SpectralField dealias(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  const int limit = g.dealias_limit();
  SpectralField out = field;
  const auto kmax = g.k_max_abs();
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (kmax[i] > limit) c[i] = 0.0;
  }
  return out;
}

void write_field_csv(std::ostream& out, const SpectralField& field) {
  const TorusGrid& g = field.grid();
  for (int a = 0; a < g.dimension(); ++a) out << 'k' << a << ',';
  out << "re,im\n";
  const auto c = field.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int k : g.wavevector(i)) out << k << ',';
    out << c[i].real() << ',' << c[i].imag() << '\n';
  }
}

}  // namespace shks
