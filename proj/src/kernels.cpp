#include "assettax/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define ASSETTAX_HAVE_AVX2_BUILD 1
#endif

namespace assettax::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace {

void exp_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void log_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void pow_v_scalar(const double* x, double p, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i], p);
}

void captured_share_v_scalar(const double* t, double rho, double* out,
                             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = t[i] / (t[i] + rho);
}

RowBest utility_row_max_scalar(const double* s, const double* prize,
                               std::size_t n, double base, double h2_coeff,
                               double h2_exp) {
  RowBest best{-HUGE_VAL, 0};
  for (std::size_t j = 0; j < n; ++j) {
    const double u = base + prize[j] - h2_coeff * std::pow(s[j], h2_exp);
    if (u > best.value) best = {u, j};
  }
  return best;
}

const Ops kScalarOps{
    "scalar",          exp_v_scalar,     log_v_scalar,
    pow_v_scalar,      captured_share_v_scalar, utility_row_max_scalar,
};

}  // namespace

// ---------------------------------------------------------------------------
// AVX2+FMA kernels. exp/log follow the usual range-reduction + polynomial
// scheme; pow composes them. Subnormal exp results flush to zero.
// ---------------------------------------------------------------------------

#if defined(ASSETTAX_HAVE_AVX2_BUILD)

namespace {

#define AVX2_FN __attribute__((target("avx2,fma")))

// ln2 split so e * kLn2Hi + e * kLn2Lo reconstructs e * ln2 to ~double-double.
constexpr double kLn2Hi = 0x1.62e42fefa39efp-1;
constexpr double kLn2Lo = 0x1.abc9e3b39803fp-56;
constexpr double kLog2E = 1.4426950408889634074;
constexpr double kExpMax = 709.782712893383996;   // above: overflow to inf
constexpr double kExpMin = -708.396418532264106;  // below: flush to zero
constexpr double kSqrt2 = 1.4142135623730951;

// Integral |v| < 2^31 per lane -> int64 lanes.
AVX2_FN inline __m256i integral_pd_to_epi64(__m256d v) {
  return _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(v));
}

// 2^n per lane for integral n in [-1022, 1024], built as 2^(n/2) * 2^(n-n/2)
// so the n = 1024 edge stays representable.
AVX2_FN inline __m256d pow2_split(__m256d n, __m256d* second) {
  const __m256d half = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d rest = _mm256_sub_pd(n, half);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 =
      _mm256_slli_epi64(_mm256_add_epi64(integral_pd_to_epi64(half), bias), 52);
  const __m256i e2 =
      _mm256_slli_epi64(_mm256_add_epi64(integral_pd_to_epi64(rest), bias), 52);
  *second = _mm256_castsi256_pd(e2);
  return _mm256_castsi256_pd(e1);
}

AVX2_FN inline __m256d exp_pd(__m256d x) {
  const __m256d over = _mm256_cmp_pd(x, _mm256_set1_pd(kExpMax), _CMP_GT_OQ);
  const __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(kExpMin), _CMP_LT_OQ);
  const __m256d isnan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);

  __m256d xc = _mm256_min_pd(x, _mm256_set1_pd(kExpMax));
  xc = _mm256_max_pd(xc, _mm256_set1_pd(kExpMin));

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(xc, _mm256_set1_pd(kLog2E)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  // exp(r) on |r| <= ln2/2 as sum r^k/k!, k = 0..13.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  __m256d s2;
  const __m256d s1 = pow2_split(n, &s2);
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);

  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), under);
  result = _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), over);
  result = _mm256_blendv_pd(result, x, isnan);
  return result;
}

AVX2_FN inline __m256d log_pd(__m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d is_zero = _mm256_cmp_pd(x, zero, _CMP_EQ_OQ);
  const __m256d is_neg = _mm256_cmp_pd(x, zero, _CMP_LT_OQ);
  const __m256d is_inf =
      _mm256_cmp_pd(x, _mm256_set1_pd(HUGE_VAL), _CMP_EQ_OQ);
  const __m256d isnan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);

  // Pre-scale subnormals so the exponent field is usable.
  const __m256d tiny = _mm256_set1_pd(2.2250738585072014e-308);
  const __m256d is_sub = _mm256_and_pd(_mm256_cmp_pd(x, zero, _CMP_GT_OQ),
                                       _mm256_cmp_pd(x, tiny, _CMP_LT_OQ));
  const __m256d xs = _mm256_blendv_pd(
      x, _mm256_mul_pd(x, _mm256_set1_pd(0x1p54)), is_sub);
  const __m256d eadj =
      _mm256_and_pd(_mm256_set1_pd(54.0), is_sub);

  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i expo = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                        _mm256_set1_epi64x(0x7FF));
  // Biased exponents are small ints; gather the low dwords and convert.
  const __m256i gather = _mm256_permutevar8x32_epi32(
      expo, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
  __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(gather));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  e = _mm256_sub_pd(e, eadj);

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Shift m into [sqrt(1/2), sqrt(2)).
  const __m256d ge = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), ge);
  e = _mm256_add_pd(e, _mm256_and_pd(_mm256_set1_pd(1.0), ge));

  // log m = 2 atanh(t), t = (m-1)/(m+1), |t| <= 0.1716.
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d t =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d u = _mm256_mul_pd(t, t);
  __m256d q = _mm256_set1_pd(1.0 / 19.0);
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 17.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 15.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 13.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 11.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 9.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 7.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 5.0));
  q = _mm256_fmadd_pd(q, u, _mm256_set1_pd(1.0 / 3.0));

  const __m256d two_t = _mm256_add_pd(t, t);
  __m256d r = _mm256_fmadd_pd(_mm256_mul_pd(two_t, u), q,
                              _mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo)));
  r = _mm256_add_pd(r, two_t);
  __m256d result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), r);

  result = _mm256_blendv_pd(result, _mm256_set1_pd(-HUGE_VAL), is_zero);
  result = _mm256_blendv_pd(
      result, _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()),
      is_neg);
  result = _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), is_inf);
  result = _mm256_blendv_pd(result, x, isnan);
  return result;
}

AVX2_FN void exp_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

AVX2_FN void log_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, log_pd(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = std::log(x[i]);
}

AVX2_FN void pow_v_avx2(const double* x, double p, double* out,
                        std::size_t n) {
  if (p == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0;
    return;
  }
  const __m256d vp = _mm256_set1_pd(p);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lx = log_pd(_mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, exp_pd(_mm256_mul_pd(vp, lx)));
  }
  for (; i < n; ++i) out[i] = std::pow(x[i], p);
}

AVX2_FN void captured_share_v_avx2(const double* t, double rho, double* out,
                                   std::size_t n) {
  const __m256d vr = _mm256_set1_pd(rho);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vt = _mm256_loadu_pd(t + i);
    _mm256_storeu_pd(out + i, _mm256_div_pd(vt, _mm256_add_pd(vt, vr)));
  }
  for (; i < n; ++i) out[i] = t[i] / (t[i] + rho);
}

AVX2_FN RowBest utility_row_max_avx2(const double* s, const double* prize,
                                     std::size_t n, double base,
                                     double h2_coeff, double h2_exp) {
  RowBest out{-HUGE_VAL, 0};
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vc = _mm256_set1_pd(h2_coeff);
  const __m256d vp = _mm256_set1_pd(h2_exp);
  __m256d best = _mm256_set1_pd(-HUGE_VAL);
  __m256i best_idx = _mm256_setzero_si256();
  __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i four = _mm256_set1_epi64x(4);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sv = _mm256_loadu_pd(s + i);
    const __m256d h2 =
        _mm256_mul_pd(vc, exp_pd(_mm256_mul_pd(vp, log_pd(sv))));
    const __m256d u = _mm256_add_pd(
        vbase, _mm256_sub_pd(_mm256_loadu_pd(prize + i), h2));
    const __m256d gt = _mm256_cmp_pd(u, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, u, gt);
    best_idx = _mm256_blendv_epi8(best_idx, idx, _mm256_castpd_si256(gt));
    idx = _mm256_add_epi64(idx, four);
  }
  if (i != 0) {
    alignas(32) double bv[4];
    alignas(32) long long bi[4];
    _mm256_store_pd(bv, best);
    _mm256_store_si256(reinterpret_cast<__m256i*>(bi), best_idx);
    for (int k = 0; k < 4; ++k) {
      const auto cand = static_cast<std::size_t>(bi[k]);
      if (bv[k] > out.value ||
          (bv[k] == out.value && out.value != -HUGE_VAL && cand < out.index)) {
        out = {bv[k], cand};
      }
    }
  }
  for (; i < n; ++i) {
    const double u = base + prize[i] - h2_coeff * std::pow(s[i], h2_exp);
    if (u > out.value) out = {u, i};
  }
  return out;
}

#undef AVX2_FN

const Ops kAvx2Ops{
    "avx2",        exp_v_avx2,     log_v_avx2,
    pow_v_avx2,    captured_share_v_avx2, utility_row_max_avx2,
};

}  // namespace

#endif  // ASSETTAX_HAVE_AVX2_BUILD

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

const Ops& scalar() { return kScalarOps; }

const Ops* avx2() {
#if defined(ASSETTAX_HAVE_AVX2_BUILD)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &kAvx2Ops;
  }
#endif
  return nullptr;
}

namespace {

std::atomic<const Ops*> g_forced{nullptr};

const Ops* auto_select() {
  if (const char* env = std::getenv("ASSETTAX_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
    if (std::strcmp(env, "avx2") == 0) {
      if (const Ops* p = avx2()) return p;
    }
  }
  if (const Ops* p = avx2()) return p;
  return &kScalarOps;
}

}  // namespace

const Ops& active() {
  if (const Ops* f = g_forced.load(std::memory_order_relaxed)) return *f;
  static const Ops* selected = auto_select();
  return *selected;
}

bool force(const char* name) {
  if (name == nullptr || *name == '\0') {
    g_forced.store(nullptr, std::memory_order_relaxed);
    return true;
  }
  if (std::strcmp(name, "scalar") == 0) {
    g_forced.store(&kScalarOps, std::memory_order_relaxed);
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const Ops* p = avx2()) {
      g_forced.store(p, std::memory_order_relaxed);
      return true;
    }
  }
  return false;
}

}  // namespace assettax::kernels
