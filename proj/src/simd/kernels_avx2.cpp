// Compiled with -mavx2 -mfma; only reached when the CPU reports both.
#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "qbl/simd/dispatch.hpp"
#include "qbl/vec3.hpp"

namespace qbl::simd::avx2 {

namespace {
inline bool loc(double x, int n, int& i, double& t) {
  if (!(x >= 0 && x <= n - 1)) return false;
  i = static_cast<int>(x);
  t = x - i;
  if (i == n - 1) {
    i = n - 2;
    t = 1.0;
  }
  return true;
}

inline __m256d cr4(double t) {
  double t2 = t * t, t3 = t2 * t;
  return _mm256_set_pd(0.5 * (t3 - t2), 0.5 * (-3 * t3 + 4 * t2 + t), 0.5 * (3 * t3 - 5 * t2 + 2),
                       0.5 * (-t3 + 2 * t2 - t));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
}  // namespace

double tricubic(const double* pad, int n, double x, double y, double z) {
  int ix, iy, iz;
  double tx, ty, tz;
  if (!loc(x, n, ix, tx) || !loc(y, n, iy, ty) || !loc(z, n, iz, tz)) return 0.0;
  const std::size_t S = n + 3, SS = S * S;
  const double* base = pad + ix + S * (iy + S * iz);
  __m256d wy = cr4(ty), wz = cr4(tz), wx = cr4(tx);
  alignas(32) double wys[4], wzs[4];
  _mm256_store_pd(wys, wy);
  _mm256_store_pd(wzs, wz);
  __m256d by0 = _mm256_set1_pd(wys[0]), by1 = _mm256_set1_pd(wys[1]), by2 = _mm256_set1_pd(wys[2]),
          by3 = _mm256_set1_pd(wys[3]);
  __m256d acc = _mm256_setzero_pd();
  for (int c = 0; c < 4; ++c) {
    const double* pc = base + c * SS;
    __m256d r = _mm256_mul_pd(_mm256_loadu_pd(pc), by0);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(pc + S), by1, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(pc + 2 * S), by2, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(pc + 3 * S), by3, r);
    acc = _mm256_fmadd_pd(r, _mm256_set1_pd(wzs[c]), acc);
  }
  return hsum(_mm256_mul_pd(acc, wx));
}

#include "engine.inl"

void landau_convolve(const LandauArgs& A, std::size_t begin, std::size_t end) {
  const int n = A.n;
  const std::size_t nn = n, N = nn * nn * nn, M = 2 * nn - 1, T = M * M * M;
  const double* t[6];
  for (int c = 0; c < 6; ++c) t[c] = A.tab + c * T;
  const std::size_t nv = nn & ~std::size_t(3);
  for (std::size_t p = begin; p < end; ++p) {
    std::size_t p1 = p % nn, p2 = (p / nn) % nn, p3 = p / (nn * nn);
    __m256d va[6], vb[3];
    for (auto& v : va) v = _mm256_setzero_pd();
    for (auto& v : vb) v = _mm256_setzero_pd();
    double sa[6] = {0, 0, 0, 0, 0, 0}, sb[3] = {0, 0, 0};
    for (std::size_t k3 = 0; k3 < nn; ++k3)
      for (std::size_t k2 = 0; k2 < nn; ++k2) {
        std::size_t row = ((p3 + nn - 1 - k3) * M + (p2 + nn - 1 - k2)) * M + (nn - 1 - p1);
        std::size_t q0 = (k3 * nn + k2) * nn;
        std::size_t k1 = 0;
        for (; k1 < nv; k1 += 4) {
          std::size_t r = row + k1, q = q0 + k1;
          __m256d gv = _mm256_loadu_pd(A.g + q);
          __m256d d0 = _mm256_loadu_pd(A.dg[0] + q), d1 = _mm256_loadu_pd(A.dg[1] + q),
                  d2 = _mm256_loadu_pd(A.dg[2] + q);
          __m256d a11 = _mm256_loadu_pd(t[0] + r), a12 = _mm256_loadu_pd(t[1] + r),
                  a13 = _mm256_loadu_pd(t[2] + r), a22 = _mm256_loadu_pd(t[3] + r),
                  a23 = _mm256_loadu_pd(t[4] + r), a33 = _mm256_loadu_pd(t[5] + r);
          va[0] = _mm256_fmadd_pd(a11, gv, va[0]);
          va[1] = _mm256_fmadd_pd(a12, gv, va[1]);
          va[2] = _mm256_fmadd_pd(a13, gv, va[2]);
          va[3] = _mm256_fmadd_pd(a22, gv, va[3]);
          va[4] = _mm256_fmadd_pd(a23, gv, va[4]);
          va[5] = _mm256_fmadd_pd(a33, gv, va[5]);
          vb[0] = _mm256_fmadd_pd(a11, d0, _mm256_fmadd_pd(a12, d1, _mm256_fmadd_pd(a13, d2, vb[0])));
          vb[1] = _mm256_fmadd_pd(a12, d0, _mm256_fmadd_pd(a22, d1, _mm256_fmadd_pd(a23, d2, vb[1])));
          vb[2] = _mm256_fmadd_pd(a13, d0, _mm256_fmadd_pd(a23, d1, _mm256_fmadd_pd(a33, d2, vb[2])));
        }
        for (; k1 < nn; ++k1) {
          std::size_t r = row + k1, q = q0 + k1;
          double gv = A.g[q], d0 = A.dg[0][q], d1 = A.dg[1][q], d2 = A.dg[2][q];
          double a11 = t[0][r], a12 = t[1][r], a13 = t[2][r], a22 = t[3][r], a23 = t[4][r],
                 a33 = t[5][r];
          sa[0] += a11 * gv;
          sa[1] += a12 * gv;
          sa[2] += a13 * gv;
          sa[3] += a22 * gv;
          sa[4] += a23 * gv;
          sa[5] += a33 * gv;
          sb[0] += a11 * d0 + a12 * d1 + a13 * d2;
          sb[1] += a12 * d0 + a22 * d1 + a23 * d2;
          sb[2] += a13 * d0 + a23 * d1 + a33 * d2;
        }
      }
    for (int c = 0; c < 6; ++c) A.A[c * N + p] = hsum(va[c]) + sa[c];
    for (int c = 0; c < 3; ++c) A.b[c * N + p] = hsum(vb[c]) + sb[c];
  }
}

}  // namespace qbl::simd::avx2
