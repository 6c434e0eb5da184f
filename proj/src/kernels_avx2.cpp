// AVX2 backend. Compiled with -mavx2 only on x86-64; entered only after a
// runtime cpuid check in the dispatcher. trap_count, weighted_sq_residual and
// max_value use the same exactly rounded per-element operations as the scalar
// reference and stay bit-identical to it; the transcendental kernels use the
// vector sin/exp below and agree with libm to a few ulp.

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "pilotwave/kernels.hpp"

namespace pilotwave::kern {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);
const __m256d kOne = _mm256_set1_pd(1.0);

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(kSignMask, x); }

// --- sin over |x| <~ 1e6 ------------------------------------------------
// Quadrant reduction y = x - j*pi/2 with a three-part Cody-Waite constant,
// then odd/even Taylor polynomials on |y| <= pi/4.

const __m256d kTwoOverPi = _mm256_set1_pd(0.63661977236758134308);
const __m256d kPio2A = _mm256_set1_pd(1.57079632673412561417e+00);
const __m256d kPio2B = _mm256_set1_pd(6.07710050630396597660e-11);
const __m256d kPio2C = _mm256_set1_pd(2.02226624871116645580e-21);

inline __m256d poly_sin(__m256d y, __m256d z) {
  // sin(y) = y * (1 + z*S(z)), z = y^2
  __m256d s = _mm256_set1_pd(-7.6471637318198164759e-13);
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(1.6059043836821614599e-10));
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(-2.5052108385441718775e-8));
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(2.7557319223985890653e-6));
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(-1.9841269841269841270e-4));
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(8.3333333333333333333e-3));
  s = _mm256_add_pd(_mm256_mul_pd(s, z), _mm256_set1_pd(-1.6666666666666666667e-1));
  return _mm256_add_pd(y, _mm256_mul_pd(_mm256_mul_pd(y, z), s));
}

inline __m256d poly_cos(__m256d z) {
  // cos(y) = 1 + z*C(z), z = y^2
  __m256d c = _mm256_set1_pd(4.7794773323873852974e-14);
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(-1.1470745597729724714e-11));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(2.0876756987868098979e-9));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(-2.7557319223985890653e-7));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(2.4801587301587301587e-5));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(-1.3888888888888888889e-3));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(4.1666666666666666667e-2));
  c = _mm256_add_pd(_mm256_mul_pd(c, z), _mm256_set1_pd(-0.5));
  return _mm256_add_pd(kOne, _mm256_mul_pd(z, c));
}

inline __m256d sin_pd(__m256d x) {
  const __m256d jd =
      _mm256_round_pd(_mm256_mul_pd(x, kTwoOverPi),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d y = _mm256_sub_pd(x, _mm256_mul_pd(jd, kPio2A));
  y = _mm256_sub_pd(y, _mm256_mul_pd(jd, kPio2B));
  y = _mm256_sub_pd(y, _mm256_mul_pd(jd, kPio2C));

  const __m128i j = _mm256_cvtpd_epi32(jd);
  const __m128i one32 = _mm_set1_epi32(1);
  const __m128i use_cos32 = _mm_cmpeq_epi32(_mm_and_si128(j, one32), one32);
  const __m128i negate32 =
      _mm_cmpeq_epi32(_mm_and_si128(_mm_srai_epi32(j, 1), one32), one32);
  const __m256d use_cos = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(use_cos32));
  const __m256d negate = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(negate32));

  const __m256d z = _mm256_mul_pd(y, y);
  __m256d r = _mm256_blendv_pd(poly_sin(y, z), poly_cos(z), use_cos);
  return _mm256_xor_pd(r, _mm256_and_pd(negate, kSignMask));
}

// --- exp over [-708, 708] -----------------------------------------------
// e^x = 2^n * e^r with n = round(x/ln2), |r| <= ln2/2, Taylor degree 13.

const __m256d kLog2E = _mm256_set1_pd(1.4426950408889634074);
const __m256d kLn2Hi = _mm256_set1_pd(6.93145751953125e-1);
const __m256d kLn2Lo = _mm256_set1_pd(1.42860682030941723212e-6);

inline __m256d exp_pd(__m256d x) {
  x = _mm256_max_pd(_mm256_min_pd(x, _mm256_set1_pd(708.0)),
                    _mm256_set1_pd(-708.0));
  const __m256d nd =
      _mm256_round_pd(_mm256_mul_pd(x, kLog2E),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(nd, kLn2Hi));
  r = _mm256_sub_pd(r, _mm256_mul_pd(nd, kLn2Lo));

  __m256d p = _mm256_set1_pd(1.6059043836821614599e-10);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(2.0876756987868098979e-9));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(2.5052108385441718775e-8));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(2.7557319223985890653e-7));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(2.7557319223985890653e-6));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(2.4801587301587301587e-5));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(1.9841269841269841270e-4));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(1.3888888888888888889e-3));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(8.3333333333333333333e-3));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(4.1666666666666666667e-2));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(1.6666666666666666667e-1));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(0.5));
  p = _mm256_add_pd(_mm256_mul_pd(p, r), kOne);
  p = _mm256_add_pd(_mm256_mul_pd(p, r), kOne);

  const __m128i n32 = _mm256_cvtpd_epi32(nd);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// --- grid kernels ---------------------------------------------------------

const __m256d kSingularEps = _mm256_set1_pd(1e-8);
const __m256d kPi = _mm256_set1_pd(3.14159265358979323846);

inline __m256d envelope_pd(__m256d theta) {
  const __m256d near0 = _mm256_cmp_pd(abs_pd(theta), kSingularEps, _CMP_LT_OQ);
  const __m256d s = _mm256_div_pd(sin_pd(theta), theta);
  const __m256d v = _mm256_min_pd(_mm256_mul_pd(s, s), kOne);
  return _mm256_blendv_pd(v, kOne, near0);
}

inline __m256d interference_pd(__m256d phi, __m256d nd) {
  const __m256d m = _mm256_round_pd(_mm256_div_pd(phi, kPi),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d delta = _mm256_sub_pd(phi, _mm256_mul_pd(m, kPi));
  const __m256d at_peak = _mm256_cmp_pd(abs_pd(delta), kSingularEps, _CMP_LT_OQ);
  const __m256d sn = sin_pd(_mm256_mul_pd(nd, phi));
  const __m256d sd = _mm256_mul_pd(nd, sin_pd(phi));
  const __m256d r = _mm256_div_pd(sn, sd);
  const __m256d v = _mm256_min_pd(_mm256_mul_pd(r, r), kOne);
  return _mm256_blendv_pd(v, kOne, at_peak);
}

void envelope_grid(const double* theta, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, envelope_pd(_mm256_loadu_pd(theta + i)));
  if (i < n) {
    double tb[4] = {0, 0, 0, 0};
    double ob[4];
    for (std::size_t k = i; k < n; ++k) tb[k - i] = theta[k];
    _mm256_storeu_pd(ob, envelope_pd(_mm256_loadu_pd(tb)));
    for (std::size_t k = i; k < n; ++k) out[k] = ob[k - i];
  }
}

void grating_grid(const double* theta, const double* phi, int n_slits,
                  double* out, std::size_t n) {
  if (n_slits == 1) {
    envelope_grid(theta, out, n);
    return;
  }
  const __m256d nd = _mm256_set1_pd(static_cast<double>(n_slits));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = envelope_pd(_mm256_loadu_pd(theta + i));
    const __m256d f = interference_pd(_mm256_loadu_pd(phi + i), nd);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(e, f));
  }
  if (i < n) {
    double tb[4] = {0, 0, 0, 0};
    double pb[4] = {0, 0, 0, 0};
    double ob[4];
    for (std::size_t k = i; k < n; ++k) {
      tb[k - i] = theta[k];
      pb[k - i] = phi[k];
    }
    const __m256d e = envelope_pd(_mm256_loadu_pd(tb));
    const __m256d f = interference_pd(_mm256_loadu_pd(pb), nd);
    _mm256_storeu_pd(ob, _mm256_mul_pd(e, f));
    for (std::size_t k = i; k < n; ++k) out[k] = ob[k - i];
  }
}

// 1 - e^(-t) with expm1-grade accuracy: below kSmallT the subtraction from 1
// loses every significant bit (interference nodes feed in t ~ 1e-33), so a
// short alternating series takes over there.
static inline __m256d one_minus_exp_neg_pd(__m256d t) {
  const __m256d neg_t = _mm256_xor_pd(t, _mm256_set1_pd(-0.0));
  const __m256d direct = _mm256_sub_pd(kOne, exp_pd(neg_t));
  const __m256d kSmallT = _mm256_set1_pd(0.0009765625);  // 2^-10
  __m256d p = _mm256_set1_pd(-1.0 / 120.0);
  p = _mm256_add_pd(_mm256_mul_pd(p, t), _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, t), _mm256_set1_pd(-1.0 / 6.0));
  p = _mm256_add_pd(_mm256_mul_pd(p, t), _mm256_set1_pd(0.5));
  p = _mm256_sub_pd(kOne, _mm256_mul_pd(p, t));
  const __m256d series = _mm256_mul_pd(t, p);
  const __m256d small = _mm256_cmp_pd(t, kSmallT, _CMP_LT_OQ);
  return _mm256_blendv_pd(direct, series, small);
}

void sed_transform_grid(const double* intensity, double beta_e0, double* out,
                        std::size_t n) {
  const __m256d b = _mm256_set1_pd(beta_e0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(b, _mm256_loadu_pd(intensity + i));
    _mm256_storeu_pd(out + i, one_minus_exp_neg_pd(t));
  }
  for (; i < n; ++i) out[i] = -std::expm1(-beta_e0 * intensity[i]);
}

void weighted_sq_residual(const double* model, const double* data,
                          const double* w, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_sub_pd(_mm256_loadu_pd(model + i), _mm256_loadu_pd(data + i));
    _mm256_storeu_pd(
        out + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(r, r)));
  }
  for (; i < n; ++i) {
    const double r = model[i] - data[i];
    out[i] = w[i] * (r * r);
  }
}

void trap_count(const double* x, std::size_t n, const double* thresholds,
                std::size_t n_bins, std::uint64_t* counts) {
  for (std::size_t j = 0; j < n_bins; ++j) {
    const __m256d thr = _mm256_set1_pd(thresholds[j]);
    std::uint64_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d le = _mm256_cmp_pd(_mm256_loadu_pd(x + i), thr, _CMP_LE_OQ);
      c += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(le)));
    }
    for (; i < n; ++i) c += (x[i] <= thresholds[j]) ? 1u : 0u;
    counts[j] += c;
  }
}

double max_value(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
      if (x[i] > m) m = x[i];
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d m2 = _mm_max_pd(lo, hi);
  m2 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
  double m = _mm_cvtsd_f64(m2);
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

extern const Kernels g_avx2_kernels = {
    envelope_grid, grating_grid, sed_transform_grid,
    weighted_sq_residual, trap_count, max_value, "avx2"};

}  // namespace pilotwave::kern

#endif  // __AVX2__
