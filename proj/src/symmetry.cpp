#include "emtw/symmetry.hpp"

#include <cmath>

#include "emtw/errors.hpp"

namespace emtw {

namespace {

// Periodic bilinear sample of one component plane at physical point (x, y).
double bilinear(const Grid2D& g, const double* f, double x, double y) {
    double fi = (x + g.extent1()) / g.h;
    double fj = (y + g.extent2()) / g.h;
    int i0 = static_cast<int>(std::floor(fi));
    int j0 = static_cast<int>(std::floor(fj));
    double tx = fi - i0, ty = fj - j0;
    int i1 = g.wrap1(i0 + 1), j1 = g.wrap2(j0 + 1);
    i0 = g.wrap1(i0);
    j0 = g.wrap2(j0);
    return (1.0 - tx) * ((1.0 - ty) * f[g.idx(i0, j0)] + ty * f[g.idx(i0, j1)]) +
           tx * ((1.0 - ty) * f[g.idx(i1, j0)] + ty * f[g.idx(i1, j1)]);
}

}  // namespace

Field6 so2_act(double angle, const Field6& u) {
    const Grid2D& g = u.grid;
    Field6 out(g);
    double c = std::cos(angle), s = std::sin(angle);
    for (int i = 0; i < g.n1; ++i) {
        double x = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y = g.x2(j);
            // g^{-1} x rotates by -angle
            double xr = c * x + s * y;
            double yr = -s * x + c * y;
            double v[6];
            for (int cc = 0; cc < 6; ++cc) v[cc] = bilinear(g, u.comp(cc), xr, yr);
            out.at(0, i, j) = c * v[0] - s * v[1];
            out.at(1, i, j) = s * v[0] + c * v[1];
            out.at(2, i, j) = v[2];
            out.at(3, i, j) = c * v[3] - s * v[4];
            out.at(4, i, j) = s * v[3] + c * v[4];
            out.at(5, i, j) = v[5];
        }
    }
    return out;
}

Field6 symmetrize_so2(const Field6& u, int m) {
    if (m < 8) throw ConfigError("symmetrize_so2: need at least 8 rotations");
    Field6 acc(u.grid);
    for (int j = 0; j < m; ++j) {
        Field6 r = so2_act(2.0 * M_PI * j / m, u);
        axpy(1.0, r, acc);
    }
    scale(acc, 1.0 / m);
    return acc;
}

double equivariance_residual(const Field6& u) {
    double nu = norm_l2(u);
    if (nu == 0.0) return 0.0;
    Field6 avg = symmetrize_so2(u, 8);
    axpy(-1.0, u, avg);
    return norm_l2(avg) / nu;
}

namespace {

// Quadratic extrapolation to r = 0 through bins 1..3 of a profile.
void extrapolate_origin(RadialProfile& p) {
    if (p.size() < 4) return;
    double r1 = p.r[1], r2 = p.r[2], r3 = p.r[3];
    double v1 = p.value[1], v2 = p.value[2], v3 = p.value[3];
    double l1 = (0 - r2) * (0 - r3) / ((r1 - r2) * (r1 - r3));
    double l2 = (0 - r1) * (0 - r3) / ((r2 - r1) * (r2 - r3));
    double l3 = (0 - r1) * (0 - r2) / ((r3 - r1) * (r3 - r2));
    p.value[0] = l1 * v1 + l2 * v2 + l3 * v3;
}

}  // namespace

Field6 RtzSplit::lemma_rho() const {
    Field6 out = u_rho;
    const std::size_t n = out.npoints();
    for (int c = 3; c < 6; ++c)
        for (std::size_t m = 0; m < n; ++m)
            out.comp(c)[m] = ut_rho.comp(c)[m] + ut_tau.comp(c)[m] + ut_zeta.comp(c)[m];
    return out;
}

RtzSplit decompose_rtz(const Field6& u) {
    const Grid2D& g = u.grid;
    RtzSplit sp;
    sp.u_rho = Field6(g);
    sp.u_tau = Field6(g);
    sp.u_zeta = Field6(g);
    sp.ut_rho = Field6(g);
    sp.ut_tau = Field6(g);
    sp.ut_zeta = Field6(g);
    sp.a_rho = ScalarPlane(g);
    sp.a_tau = ScalarPlane(g);
    sp.a_zeta = ScalarPlane(g);
    sp.at_rho = ScalarPlane(g);
    sp.at_tau = ScalarPlane(g);
    sp.at_zeta = ScalarPlane(g);

    for (int i = 0; i < g.n1; ++i) {
        double x = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y = g.x2(j);
            double r = std::sqrt(x * x + y * y);
            std::size_t m = g.idx(i, j);
            double U1 = u.comp(0)[m], U2 = u.comp(1)[m], U3 = u.comp(2)[m];
            double T1 = u.comp(3)[m], T2 = u.comp(4)[m], T3 = u.comp(5)[m];
            sp.a_zeta.data[m] = U3;
            sp.at_zeta.data[m] = T3;
            sp.u_zeta.comp(2)[m] = U3;
            sp.ut_zeta.comp(5)[m] = T3;
            if (r == 0.0) {
                // in-plane direction undefined at the origin: whole in-plane
                // vector goes to the rho part (continuum coefficients vanish)
                sp.u_rho.comp(0)[m] = U1;
                sp.u_rho.comp(1)[m] = U2;
                sp.ut_rho.comp(3)[m] = T1;
                sp.ut_rho.comp(4)[m] = T2;
                continue;
            }
            double arho = (U1 * x + U2 * y) / r;
            double atau = (-U1 * y + U2 * x) / r;
            double brho = (T1 * x + T2 * y) / r;
            double btau = (-T1 * y + T2 * x) / r;
            sp.a_rho.data[m] = arho;
            sp.a_tau.data[m] = atau;
            sp.at_rho.data[m] = brho;
            sp.at_tau.data[m] = btau;
            double tau1 = -atau * y / r, tau2 = atau * x / r;
            sp.u_tau.comp(0)[m] = tau1;
            sp.u_tau.comp(1)[m] = tau2;
            // rho part by subtraction so the recomposition is exact
            sp.u_rho.comp(0)[m] = U1 - tau1;
            sp.u_rho.comp(1)[m] = U2 - tau2;
            double ttau1 = -btau * y / r, ttau2 = btau * x / r;
            sp.ut_tau.comp(3)[m] = ttau1;
            sp.ut_tau.comp(4)[m] = ttau2;
            sp.ut_rho.comp(3)[m] = T1 - ttau1;
            sp.ut_rho.comp(4)[m] = T2 - ttau2;
        }
    }

    sp.p_rho = radial_bin(sp.a_rho);
    sp.p_tau = radial_bin(sp.a_tau);
    sp.p_zeta = radial_bin(sp.a_zeta);
    sp.pt_rho = radial_bin(sp.at_rho);
    sp.pt_tau = radial_bin(sp.at_tau);
    sp.pt_zeta = radial_bin(sp.at_zeta);
    extrapolate_origin(sp.p_rho);
    extrapolate_origin(sp.p_tau);
    extrapolate_origin(sp.pt_rho);
    extrapolate_origin(sp.pt_tau);

    sp.equivariance_res = equivariance_residual(u);
    sp.equivariance_warning = sp.equivariance_res > 1e-6;
    return sp;
}

Field6 project_S(const Field6& u) {
    const Grid2D& g = u.grid;
    Field6 out = u;
    for (int i = 0; i < g.n1; ++i) {
        double x = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y = g.x2(j);
            double r2 = x * x + y * y;
            if (r2 == 0.0) continue;
            std::size_t m = g.idx(i, j);
            double U1 = u.comp(0)[m], U2 = u.comp(1)[m];
            double atau_r = (-U1 * y + U2 * x) / r2;  // a_tau / r
            out.comp(0)[m] = U1 + atau_r * y;
            out.comp(1)[m] = U2 - atau_r * x;
        }
    }
    return out;
}

Field6 project_S_tilde(const Field6& u) {
    const Grid2D& g = u.grid;
    Field6 out = u;
    for (int i = 0; i < g.n1; ++i) {
        double x = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y = g.x2(j);
            double r2 = x * x + y * y;
            if (r2 == 0.0) continue;
            std::size_t m = g.idx(i, j);
            double T1 = u.comp(3)[m], T2 = u.comp(4)[m];
            double btau_r = (-T1 * y + T2 * x) / r2;
            out.comp(3)[m] = T1 + btau_r * y;
            out.comp(4)[m] = T2 - btau_r * x;
        }
    }
    return out;
}

double tau_fraction(const Field6& u) {
    RtzSplit sp = decompose_rtz(u);
    auto wsum = [](const RadialProfile& p) {
        double s = 0.0;
        for (std::size_t b = 0; b < p.size(); ++b) s += p.count[b] * p.value[b] * p.value[b];
        return s;
    };
    double tau = wsum(sp.p_tau) + wsum(sp.pt_tau);
    double all = tau + wsum(sp.p_rho) + wsum(sp.p_zeta) + wsum(sp.pt_rho) + wsum(sp.pt_zeta);
    if (all == 0.0) return 0.0;
    return std::sqrt(tau / all);
}

Field6 field_from_radial(const Grid2D& g, const RadialFn& a_rho, const RadialFn& a_tau,
                         const RadialFn& a_zeta, const RadialFn& at_rho, const RadialFn& at_tau,
                         const RadialFn& at_zeta) {
    Field6 u(g);
    for (int i = 0; i < g.n1; ++i) {
        double x = g.x1(i);
        for (int j = 0; j < g.n2; ++j) {
            double y = g.x2(j);
            double r = std::sqrt(x * x + y * y);
            std::size_t m = g.idx(i, j);
            if (r > 0.0) {
                double cr = x / r, sr = y / r;
                double ar = a_rho ? a_rho(r) : 0.0;
                double at = a_tau ? a_tau(r) : 0.0;
                double br = at_rho ? at_rho(r) : 0.0;
                double bt = at_tau ? at_tau(r) : 0.0;
                u.comp(0)[m] = ar * cr - at * sr;
                u.comp(1)[m] = ar * sr + at * cr;
                u.comp(3)[m] = br * cr - bt * sr;
                u.comp(4)[m] = br * sr + bt * cr;
            }
            u.comp(2)[m] = a_zeta ? a_zeta(r) : 0.0;
            u.comp(5)[m] = at_zeta ? at_zeta(r) : 0.0;
        }
    }
    return u;
}

}  // namespace emtw
