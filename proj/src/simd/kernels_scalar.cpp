#include <cmath>
#include <cstdint>

#include "qbl/simd/dispatch.hpp"
#include "qbl/vec3.hpp"

namespace qbl::simd::scalar {

namespace {
inline void cr(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}
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
}  // namespace

double tricubic(const double* pad, int n, double x, double y, double z) {
  int ix, iy, iz;
  double tx, ty, tz;
  if (!loc(x, n, ix, tx) || !loc(y, n, iy, ty) || !loc(z, n, iz, tz)) return 0.0;
  double wx[4], wy[4], wz[4];
  cr(tx, wx);
  cr(ty, wy);
  cr(tz, wz);
  const std::size_t S = n + 3;
  const double* base = pad + ix + S * (iy + S * iz);
  double acc[4] = {0, 0, 0, 0};
  for (int c = 0; c < 4; ++c) {
    const double* pc = base + c * S * S;
    double r[4] = {0, 0, 0, 0};
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) r[a] += wy[b] * pc[b * S + a];
    for (int a = 0; a < 4; ++a) acc[a] += wz[c] * r[a];
  }
  return (wx[0] * acc[0] + wx[1] * acc[1]) + (wx[2] * acc[2] + wx[3] * acc[3]);
}

#include "engine.inl"

void landau_convolve(const LandauArgs& A, std::size_t begin, std::size_t end) {
  const int n = A.n;
  const std::size_t nn = n, N = nn * nn * nn, M = 2 * nn - 1, T = M * M * M;
  const double* t[6];
  for (int c = 0; c < 6; ++c) t[c] = A.tab + c * T;
  for (std::size_t p = begin; p < end; ++p) {
    std::size_t p1 = p % nn, p2 = (p / nn) % nn, p3 = p / (nn * nn);
    double a[6] = {0, 0, 0, 0, 0, 0}, b[3] = {0, 0, 0};
    for (std::size_t k3 = 0; k3 < nn; ++k3)
      for (std::size_t k2 = 0; k2 < nn; ++k2) {
        std::size_t row = ((p3 + nn - 1 - k3) * M + (p2 + nn - 1 - k2)) * M + (nn - 1 - p1);
        std::size_t q0 = (k3 * nn + k2) * nn;
        for (std::size_t k1 = 0; k1 < nn; ++k1) {
          std::size_t r = row + k1, q = q0 + k1;
          double gv = A.g[q], d0 = A.dg[0][q], d1 = A.dg[1][q], d2 = A.dg[2][q];
          double a11 = t[0][r], a12 = t[1][r], a13 = t[2][r], a22 = t[3][r], a23 = t[4][r],
                 a33 = t[5][r];
          a[0] += a11 * gv;
          a[1] += a12 * gv;
          a[2] += a13 * gv;
          a[3] += a22 * gv;
          a[4] += a23 * gv;
          a[5] += a33 * gv;
          b[0] += a11 * d0 + a12 * d1 + a13 * d2;
          b[1] += a12 * d0 + a22 * d1 + a23 * d2;
          b[2] += a13 * d0 + a23 * d1 + a33 * d2;
        }
      }
    for (int c = 0; c < 6; ++c) A.A[c * N + p] = a[c];
    for (int c = 0; c < 3; ++c) A.b[c * N + p] = b[c];
  }
}

}  // namespace qbl::simd::scalar
