#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "shks/simd/kernels.hpp"

using namespace shks::simd;

namespace {

const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 1001};

std::vector<double> reals(std::size_t n, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<Complex> complexes(std::size_t n, std::mt19937_64& rng) {
  const auto re = reals(n, rng), im = reals(n, rng);
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
  return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool same_bits(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)) == 0);
}

}  // namespace

TEST_CASE("active table is one of the variants") {
  const KernelTable& active = active_kernels();
  const bool is_scalar = &active == &scalar_kernels();
  const bool is_avx2 = avx2_kernels() != nullptr && &active == avx2_kernels();
  CHECK((is_scalar || is_avx2));
  MESSAGE("active kernels: " << std::string(active.name));
}

TEST_CASE("scalar kernels match their definitions") {
  const KernelTable& k = scalar_kernels();
  std::mt19937_64 rng(1);
  for (std::size_t n : kLengths) {
    const auto x = reals(n, rng), y = reals(n, rng), z = reals(n, rng), w = reals(n, rng, 0.0, 3.0);
    const auto a = complexes(n, rng), b = complexes(n, rng);

    double energy = 0.0, inner = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      energy += w[i] * std::norm(a[i]);
      inner += w[i] * (a[i] * std::conj(b[i])).real();
      mx = std::max(mx, std::abs(x[i]));
    }
    CHECK(k.weighted_energy(a.data(), w.data(), n) == doctest::Approx(energy).epsilon(1e-13));
    CHECK(k.weighted_inner(a.data(), b.data(), w.data(), n) == doctest::Approx(inner).epsilon(1e-12));
    CHECK(k.max_abs(x.data(), n) == mx);

    auto c = a;
    k.scale_by_real(c.data(), w.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(c[i] == a[i] * w[i]);

    std::vector<double> out(n);
    k.assemble_drift(out.data(), x.data(), y.data(), z.data(), 0.7, 1.3, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = x[i];
      const double expect = (0.7 - 2.0 * 1.3 * u) * z[i] + (0.7 * u - 1.3 * u * u) * (y[i] - u);
      CHECK(out[i] == doctest::Approx(expect).epsilon(1e-14));
    }
    k.logistic_flux(out.data(), x.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx((x[i] - x[i] * x[i]) * y[i]).epsilon(1e-14));
    k.combine3(out.data(), x.data(), y.data(), -0.25, z.data(), 1.5, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(x[i] - 0.25 * y[i] + 1.5 * z[i]).epsilon(1e-14));
    auto acc = x;
    k.multiply_accumulate(acc.data(), y.data(), z.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(acc[i] == x[i] + y[i] * z[i]);
  }
}

TEST_CASE("all_finite detects NaN and infinities anywhere") {
  for (const KernelTable* k : {&scalar_kernels(), avx2_kernels()}) {
    if (k == nullptr) continue;
    for (std::size_t n : {1u, 4u, 7u, 33u}) {
      for (std::size_t pos = 0; pos < n; ++pos) {
        for (double bad : {std::nan(""), double(INFINITY), -double(INFINITY)}) {
          std::vector<double> v(n, 1e300);
          v[pos] = bad;
          CHECK_FALSE(k->all_finite(v.data(), n));
        }
      }
      std::vector<double> ok(n, -1e308);
      CHECK(k->all_finite(ok.data(), n));
    }
  }
}

TEST_CASE("AVX2 kernels are bitwise identical to the scalar reference") {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 not available; equivalence check skipped");
    return;
  }
  const KernelTable& s = scalar_kernels();
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    for (std::size_t n : kLengths) {
      const auto x = reals(n, rng), y = reals(n, rng), z = reals(n, rng), w = reals(n, rng, 0.0, 1e3);
      const auto a = complexes(n, rng), b = complexes(n, rng);
      const double alpha = reals(1, rng)[0], beta = reals(1, rng)[0];

      CHECK(same_bits(s.weighted_energy(a.data(), w.data(), n), v->weighted_energy(a.data(), w.data(), n)));
      CHECK(same_bits(s.weighted_inner(a.data(), b.data(), w.data(), n),
                      v->weighted_inner(a.data(), b.data(), w.data(), n)));
      CHECK(same_bits(s.max_abs(x.data(), n), v->max_abs(x.data(), n)));

      auto cs = a, cv = a;
      s.scale_by_real(cs.data(), w.data(), n);
      v->scale_by_real(cv.data(), w.data(), n);
      CHECK(same_bits(cs, cv));

      std::vector<double> os(n), ov(n);
      s.assemble_drift(os.data(), x.data(), y.data(), z.data(), alpha, beta, n);
      v->assemble_drift(ov.data(), x.data(), y.data(), z.data(), alpha, beta, n);
      CHECK(same_bits(os, ov));

      s.logistic_flux(os.data(), x.data(), y.data(), n);
      v->logistic_flux(ov.data(), x.data(), y.data(), n);
      CHECK(same_bits(os, ov));

      s.combine3(os.data(), x.data(), y.data(), alpha, z.data(), beta, n);
      v->combine3(ov.data(), x.data(), y.data(), alpha, z.data(), beta, n);
      CHECK(same_bits(os, ov));

      auto as = x, av = x;
      s.multiply_accumulate(as.data(), y.data(), z.data(), n);
      v->multiply_accumulate(av.data(), y.data(), z.data(), n);
      CHECK(same_bits(as, av));

      CHECK(s.all_finite(x.data(), n) == v->all_finite(x.data(), n));
    }
  }
}
