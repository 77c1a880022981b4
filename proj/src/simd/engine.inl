// Collision sweep shared by the per-ISA translation units. The including file opens
// its own namespace and defines tricubic() before including this.

inline void cr_weights(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

// Cell index and fraction; false when outside the node hull [0, n-1].
inline bool locate(double x, int n, int& i, double& t) {
  if (!(x >= 0 && x <= n - 1)) return false;
  i = static_cast<int>(x);
  t = x - i;
  if (i == n - 1) {
    i = n - 2;
    t = 1.0;
  }
  return true;
}

inline double trilinear(const double* pad, int n, double x, double y, double z) {
  int ix, iy, iz;
  double tx, ty, tz;
  if (!locate(x, n, ix, tx) || !locate(y, n, iy, ty) || !locate(z, n, iz, tz)) return 0.0;
  const std::size_t S = n + 3;
  const double* b = pad + (ix + 1) + S * ((iy + 1) + S * (iz + 1));
  double c00 = b[0] + tx * (b[1] - b[0]);
  double c10 = b[S] + tx * (b[S + 1] - b[S]);
  double c01 = b[S * S] + tx * (b[S * S + 1] - b[S * S]);
  double c11 = b[S * S + S] + tx * (b[S * S + S + 1] - b[S * S + S]);
  double c0 = c00 + ty * (c10 - c00), c1 = c01 + ty * (c11 - c01);
  return c0 + tz * (c1 - c0);
}

inline double interp(const SweepArgs& A, const double* pad, double x, double y, double z) {
  return A.tricubic ? tricubic(pad, A.n, x, y, z) : trilinear(pad, A.n, x, y, z);
}

struct PairGeom {
  double c[3], d[3];
  double E[3 * 64];
};

inline bool pair_geometry(const SweepArgs& A, int p1, int p2, int p3, int q1, int q2, int q3,
                          PairGeom& G, std::int32_t& nb, std::int32_t& ne) {
  int d1 = p1 - q1, d2 = p2 - q2, d3 = p3 - q3;
  int m = d1 * d1 + d2 * d2 + d3 * d3;
  if (m == 0) return false;
  nb = A.table->begin[m];
  ne = A.table->begin[m + 1];
  if (nb == ne) return false;
  double rm = std::sqrt(static_cast<double>(m));
  G.d[0] = d1;
  G.d[1] = d2;
  G.d[2] = d3;
  G.c[0] = 0.5 * (p1 + q1);
  G.c[1] = 0.5 * (p2 + q2);
  G.c[2] = 0.5 * (p3 + q3);
  Vec3 zh{d1 / rm, d2 / rm, d3 / rm}, e1, e2;
  transverse_frame(zh, e1, e2);
  for (int j = 0; j < A.n_phi; ++j) {
    double cp = A.cos_phi[j], sp = A.sin_phi[j];
    G.E[3 * j + 0] = cp * e1.x + sp * e2.x;
    G.E[3 * j + 1] = cp * e1.y + sp * e2.y;
    G.E[3 * j + 2] = cp * e1.z + sp * e2.z;
  }
  return true;
}

template <SweepMode M>
std::uint64_t sweep_impl(const SweepArgs& A, std::size_t begin, std::size_t end) {
  const int n = A.n;
  const std::size_t nn = n;
  const double se = A.s_eps3;
  const int comp = A.component - 1;
  std::uint64_t pairs = 0;
  PairGeom G;
  for (std::size_t p = begin; p < end; ++p) {
    int p1 = static_cast<int>(p % nn), p2 = static_cast<int>((p / nn) % nn),
        p3 = static_cast<int>(p / (nn * nn));
    double h0 = A.h[p];
    double r0 = A.rho ? A.rho[p] : 0.0;
    double acc = 0, acc2 = 0;
    for (std::size_t qi = 0; qi < A.n_vstar; ++qi) {
      std::size_t q = static_cast<std::size_t>(A.vstar[qi]);
      int q1 = static_cast<int>(q % nn), q2 = static_cast<int>((q / nn) % nn),
          q3 = static_cast<int>(q / (nn * nn));
      std::int32_t nb, ne;
      if (!pair_geometry(A, p1, p2, p3, q1, q2, q3, G, nb, ne)) continue;
      ++pairs;
      double gq = A.g[q];
      double rq = A.rho ? A.rho[q] : 0.0;
      double pacc = 0, pacc2 = 0;
      for (std::int32_t k = nb; k < ne; ++k) {
        const TableNode& nd = A.table->nodes[k];
        double w;
        if constexpr (M == SweepMode::Bilinear) {
          w = nd.w[comp];
          if (w == 0) continue;
        } else {
          w = nd.w[0] + nd.w[1] + nd.w[2];
        }
        double ad0 = nd.a * G.d[0], ad1 = nd.a * G.d[1], ad2 = nd.a * G.d[2];
        double nacc = 0, nacc2 = 0;
        for (int j = 0; j < A.n_phi; ++j) {
          double y0 = ad0 + nd.b * G.E[3 * j], y1 = ad1 + nd.b * G.E[3 * j + 1],
                 y2 = ad2 + nd.b * G.E[3 * j + 2];
          double xp0 = G.c[0] + y0, xp1 = G.c[1] + y1, xp2 = G.c[2] + y2;
          double xs0 = G.c[0] - y0, xs1 = G.c[1] - y1, xs2 = G.c[2] - y2;
          if constexpr (M == SweepMode::UU || M == SweepMode::GainLoss) {
            double fp = interp(A, A.pad_h, xp0, xp1, xp2);
            double fs = interp(A, A.pad_g, xs0, xs1, xs2);
            double gain = fs * fp * (1 + se * gq) * (1 + se * h0);
            double loss = gq * h0 * (1 + se * fs) * (1 + se * fp);
            if constexpr (M == SweepMode::UU) {
              nacc += gain - loss;
            } else {
              nacc += gain;
              nacc2 += loss;
            }
          } else if constexpr (M == SweepMode::Bilinear) {
            double hp = interp(A, A.pad_h, xp0, xp1, xp2);
            double gs = interp(A, A.pad_g, xs0, xs1, xs2);
            nacc += gs * hp - gq * h0;
          } else {
            double hp = interp(A, A.pad_h, xp0, xp1, xp2);
            double gs = interp(A, A.pad_g, xs0, xs1, xs2);
            double rp = A.pad_rho == A.pad_h ? hp : interp(A, A.pad_rho, xp0, xp1, xp2);
            double rs = A.pad_rho == A.pad_g ? gs : interp(A, A.pad_rho, xs0, xs1, xs2);
            nacc += gs * hp * (r0 + rq) - gq * h0 * (rp + rs);
          }
        }
        pacc += w * nacc;
        if constexpr (M == SweepMode::GainLoss) pacc2 += w * nacc2;
      }
      acc += pacc;
      acc2 += pacc2;
    }
    A.out[p] = acc;
    if constexpr (M == SweepMode::GainLoss) A.out2[p] = acc2;
  }
  return pairs;
}

std::uint64_t collision_sweep(const SweepArgs& A, std::size_t begin, std::size_t end) {
  switch (A.mode) {
    case SweepMode::UU: return sweep_impl<SweepMode::UU>(A, begin, end);
    case SweepMode::GainLoss: return sweep_impl<SweepMode::GainLoss>(A, begin, end);
    case SweepMode::Bilinear: return sweep_impl<SweepMode::Bilinear>(A, begin, end);
    case SweepMode::Cubic: return sweep_impl<SweepMode::Cubic>(A, begin, end);
  }
  return 0;
}

std::uint64_t weak_sweep(const WeakArgs& W, std::size_t begin, std::size_t end) {
  const SweepArgs& A = W.base;
  const int n = A.n;
  const std::size_t nn = n;
  const double se = A.s_eps3, L = W.L, hs = W.hstep;
  const auto& phi = *W.phi;
  std::uint64_t pairs = 0;
  PairGeom G;
  for (std::size_t pi = begin; pi < end; ++pi) {
    std::size_t p = static_cast<std::size_t>(A.vstar[pi]);
    int p1 = static_cast<int>(p % nn), p2 = static_cast<int>((p / nn) % nn),
        p3 = static_cast<int>(p / (nn * nn));
    double f0 = A.h[p], phi0 = W.phi_nodes[p];
    double acc = 0, sc = 0;
    for (std::size_t qi = 0; qi < A.n_vstar; ++qi) {
      std::size_t q = static_cast<std::size_t>(A.vstar[qi]);
      int q1 = static_cast<int>(q % nn), q2 = static_cast<int>((q / nn) % nn),
          q3 = static_cast<int>(q / (nn * nn));
      std::int32_t nb, ne;
      if (!pair_geometry(A, p1, p2, p3, q1, q2, q3, G, nb, ne)) continue;
      ++pairs;
      double fq = A.g[q], phiq = W.phi_nodes[q];
      double ff = f0 * fq;
      for (std::int32_t k = nb; k < ne; ++k) {
        const TableNode& nd = A.table->nodes[k];
        double w = nd.w[0] + nd.w[1] + nd.w[2];
        double ad0 = nd.a * G.d[0], ad1 = nd.a * G.d[1], ad2 = nd.a * G.d[2];
        for (int j = 0; j < A.n_phi; ++j) {
          double y0 = ad0 + nd.b * G.E[3 * j], y1 = ad1 + nd.b * G.E[3 * j + 1],
                 y2 = ad2 + nd.b * G.E[3 * j + 2];
          double xp0 = G.c[0] + y0, xp1 = G.c[1] + y1, xp2 = G.c[2] + y2;
          double xs0 = G.c[0] - y0, xs1 = G.c[1] - y1, xs2 = G.c[2] - y2;
          double fp = interp(A, A.pad_h, xp0, xp1, xp2);
          double fs = interp(A, A.pad_g, xs0, xs1, xs2);
          double phip = phi(-L + hs * xp0, -L + hs * xp1, -L + hs * xp2);
          double phis = phi(-L + hs * xs0, -L + hs * xs1, -L + hs * xs2);
          double t = w * ff * (1 + se * fp) * (1 + se * fs);
          acc += t * (0.5 * ((phip + phis) - (phi0 + phiq)));
          sc += std::abs(t) * 0.5 * (std::abs(phip) + std::abs(phis) + std::abs(phi0) + std::abs(phiq));
        }
      }
    }
    W.out[pi] = acc;
    W.scale[pi] = sc;
  }
  return pairs;
}
