#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "pilotwave/constants.hpp"
#include "pilotwave/core_model.hpp"
#include "pilotwave/kernels.hpp"
#include "pilotwave/montecarlo.hpp"

using namespace pilotwave;

namespace {

constexpr double kPi = constants::pi;

double uniform01(std::uint64_t seed, std::uint64_t i) {
  return static_cast<double>(rng::mix_at(seed, i) >> 11) * 0x1.0p-53;
}

// Dense random grid plus adversarial points near removable singularities.
std::vector<double> theta_grid(double half_width, std::size_t n_random,
                               std::uint64_t seed) {
  std::vector<double> g;
  g.reserve(n_random + 200);
  for (std::size_t i = 0; i < n_random; ++i)
    g.push_back((2.0 * uniform01(seed, i) - 1.0) * half_width);
  const double offsets[] = {0.0,    1e-12,  1e-9,   9.9e-9, 1.01e-8,
                            1.1e-8, 5e-8,   1e-6,   1e-3};
  for (int m = -12; m <= 12; ++m)
    for (double off : offsets) {
      g.push_back(m * kPi + off);
      g.push_back(m * kPi - off);
    }
  return g;
}

void check_close(const std::vector<double>& got, const std::vector<double>& ref,
                 double tol) {
  REQUIRE(got.size() == ref.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double err =
        std::fabs(got[i] - ref[i]) / std::max(1.0, std::fabs(ref[i]));
    worst = std::max(worst, err);
  }
  CHECK(worst <= tol);
}

}  // namespace

TEST_CASE("scalar envelope kernel matches the point function exactly") {
  const auto grid = theta_grid(50.0, 4096, 11);
  std::vector<double> out(grid.size());
  kern::scalar_kernels().envelope_grid(grid.data(), out.data(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(out[i] == single_slit_intensity(grid[i]));
}

TEST_CASE("scalar grating kernel matches the point function exactly") {
  const auto grid = theta_grid(50.0, 4096, 12);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = 2.0 * grid[i];
  for (int n : {1, 2, 3, 5}) {
    std::vector<double> out(grid.size());
    kern::scalar_kernels().grating_grid(grid.data(), phi.data(), n, out.data(),
                                        grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(out[i] == multi_slit_intensity(grid[i], phi[i], n));
  }
}

TEST_CASE("envelope values stay within [0, 1] and peak at zero") {
  const auto grid = theta_grid(300.0, 20000, 13);
  std::vector<double> out(grid.size());
  kern::scalar_kernels().envelope_grid(grid.data(), out.data(), grid.size());
  for (double v : out) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(single_slit_intensity(0.0) == 1.0);
}

TEST_CASE("avx2 transcendental kernels agree with the scalar reference") {
  const kern::Kernels* avx2 = kern::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable; scalar fallback covers this host");
    return;
  }
  const auto& sc = kern::scalar_kernels();
  const auto grid = theta_grid(300.0, 20000, 14);
  const std::size_t n = grid.size();

  std::vector<double> a(n), b(n);
  sc.envelope_grid(grid.data(), a.data(), n);
  avx2->envelope_grid(grid.data(), b.data(), n);
  check_close(b, a, 1e-13);

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = 2.0 * grid[i];
  for (int slits : {2, 3, 5}) {
    sc.grating_grid(grid.data(), phi.data(), slits, a.data(), n);
    avx2->grating_grid(grid.data(), phi.data(), slits, b.data(), n);
    check_close(b, a, 1e-13);
  }

  std::vector<double> intensity(n);
  for (std::size_t i = 0; i < n; ++i) intensity[i] = uniform01(15, i);
  // interference nodes feed in intensities this small on real grids, and the
  // transform must stay relatively accurate there, not flush to zero
  const double tiny[] = {1e-33, 1e-20, 1e-16, 1e-12, 1e-8,
                         9e-4,  1.1e-3, 0.0009765625};
  for (std::size_t i = 0; i < std::size(tiny); ++i) intensity[i] = tiny[i];
  for (double beta : {0.0, 0.01, 0.2, 0.5, 1.0}) {
    sc.sed_transform_grid(intensity.data(), beta, a.data(), n);
    avx2->sed_transform_grid(intensity.data(), beta, b.data(), n);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double tol = 1e-13 * std::fabs(a[i]);  // relative even at nodes
      CHECK(std::fabs(a[i] - b[i]) <= tol);
    }
  }
}

TEST_CASE("avx2 arithmetic kernels are bit-identical to scalar") {
  const kern::Kernels* avx2 = kern::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable; scalar fallback covers this host");
    return;
  }
  const auto& sc = kern::scalar_kernels();
  const std::size_t n = 4099;  // deliberately not a multiple of the lane width
  std::vector<double> model(n), data(n), w(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    model[i] = uniform01(21, i);
    data[i] = uniform01(22, i);
    w[i] = 1.0 + uniform01(23, i) * 1e6;
  }
  sc.weighted_sq_residual(model.data(), data.data(), w.data(), a.data(), n);
  avx2->weighted_sq_residual(model.data(), data.data(), w.data(), b.data(), n);
  CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

  CHECK(sc.max_value(model.data(), n) == avx2->max_value(model.data(), n));
  CHECK(sc.max_value(model.data(), 3) == avx2->max_value(model.data(), 3));

  std::vector<double> x(100'003);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = -std::log(uniform01(24, i) + 1e-300);
  std::vector<double> thr(31);
  for (std::size_t j = 0; j < thr.size(); ++j)
    thr[j] = static_cast<double>(j) * 0.02;
  std::vector<std::uint64_t> ca(thr.size(), 0), cb(thr.size(), 0);
  sc.trap_count(x.data(), x.size(), thr.data(), thr.size(), ca.data());
  avx2->trap_count(x.data(), x.size(), thr.data(), thr.size(), cb.data());
  CHECK(ca == cb);
}

TEST_CASE("trap counting agrees with a sort-and-search oracle") {
  std::vector<double> x(50'001);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = -std::log(uniform01(31, i) + 1e-300);
  std::vector<double> thr = {0.0, 1e-6, 0.01, 0.1, 0.3, 0.5, 0.9, 2.0, 40.0};

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> expected(thr.size());
  for (std::size_t j = 0; j < thr.size(); ++j)
    expected[j] = static_cast<std::uint64_t>(
        std::upper_bound(sorted.begin(), sorted.end(), thr[j]) - sorted.begin());

  for (const kern::Kernels* k : {&kern::scalar_kernels(), kern::avx2_kernels()}) {
    if (k == nullptr) continue;
    std::vector<std::uint64_t> counts(thr.size(), 0);
    k->trap_count(x.data(), x.size(), thr.data(), thr.size(), counts.data());
    CHECK(counts == expected);
  }
}

TEST_CASE("trap counts accumulate across calls") {
  const auto& K = kern::active();
  std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> thr = {0.35};
  std::vector<std::uint64_t> counts = {5};
  K.trap_count(x.data(), x.size(), thr.data(), 1, counts.data());
  CHECK(counts[0] == 5 + 3);
}

TEST_CASE("active backend is one of the registered implementations") {
  const auto& K = kern::active();
  const bool is_scalar = &K == &kern::scalar_kernels();
  const bool is_avx2 = kern::avx2_kernels() != nullptr && &K == kern::avx2_kernels();
  CHECK((is_scalar || is_avx2));
  CHECK(K.name != nullptr);
}
