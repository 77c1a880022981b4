#pragma once

#include <array>
#include <cmath>

namespace qbl {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Row-major 3x3.
using Mat3 = std::array<double, 9>;

inline Mat3 outer(const Vec3& a, const Vec3& b) {
  return {a.x * b.x, a.x * b.y, a.x * b.z, a.y * b.x, a.y * b.y,
          a.y * b.z, a.z * b.x, a.z * b.y, a.z * b.z};
}

inline double frobenius(const Mat3& m) {
  double s = 0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

inline Vec3 matvec(const Mat3& m, const Vec3& v) {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

// Orthonormal pair (e1, e2) completing zhat. e1 = zhat x e3 direction, falling back
// to e1 = x-axis x zhat when zhat is parallel to e3. The choice commutes with
// rotations about the third axis, which the lattice-rotation tests rely on.
inline void transverse_frame(const Vec3& zhat, Vec3& e1, Vec3& e2) {
  Vec3 c{zhat.y, -zhat.x, 0.0};  // zhat x e3
  double cn = std::sqrt(c.x * c.x + c.y * c.y);
  if (cn < 1e-12) {
    c = cross(Vec3{1, 0, 0}, zhat);
    cn = norm(c);
  }
  e1 = c / cn;
  e2 = cross(zhat, e1);
}

}  // namespace qbl
