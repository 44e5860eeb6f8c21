#include "emtw/operators.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "emtw/errors.hpp"

namespace emtw {

namespace {

inline int up(const Grid2D& g, int i) { return i + 1 == g.n1 ? 0 : i + 1; }
inline int dn(const Grid2D& g, int i) { return i == 0 ? g.n1 - 1 : i - 1; }
inline int rt(const Grid2D& g, int j) { return j + 1 == g.n2 ? 0 : j + 1; }
inline int lf(const Grid2D& g, int j) { return j == 0 ? g.n2 - 1 : j - 1; }

void d_x(const Grid2D& g, const double* f, double* out) {
    const double c = 1.0 / (2.0 * g.h);
    for (int i = 0; i < g.n1; ++i) {
        const double* fp = f + g.idx(up(g, i), 0);
        const double* fm = f + g.idx(dn(g, i), 0);
        double* o = out + g.idx(i, 0);
        for (int j = 0; j < g.n2; ++j) o[j] = (fp[j] - fm[j]) * c;
    }
}

void d_y(const Grid2D& g, const double* f, double* out) {
    const double c = 1.0 / (2.0 * g.h);
    for (int i = 0; i < g.n1; ++i) {
        const double* row = f + g.idx(i, 0);
        double* o = out + g.idx(i, 0);
        for (int j = 0; j < g.n2; ++j) o[j] = (row[rt(g, j)] - row[lf(g, j)]) * c;
    }
}

// FFT workspace for the shifted wide-Laplacian solves, cached per grid.
struct FftWs {
    Grid2D grid;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    explicit FftWs(const Grid2D& g) : grid(g) {
        real = fftw_alloc_real(g.size());
        cplx = fftw_alloc_complex(static_cast<std::size_t>(g.n1) * (g.n2 / 2 + 1));
        fwd = fftw_plan_dft_r2c_2d(g.n1, g.n2, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(g.n1, g.n2, cplx, real, FFTW_ESTIMATE);
    }
    ~FftWs() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
    FftWs(const FftWs&) = delete;
    FftWs& operator=(const FftWs&) = delete;
};

std::mutex g_fft_mutex;

FftWs& fft_ws(const Grid2D& g) {
    static std::map<std::pair<int, int>, std::unique_ptr<FftWs>> cache;
    auto key = std::make_pair(g.n1, g.n2);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftWs>(g)).first;
    if (it->second->grid.h != g.h) it->second->grid = g;  // spacing enters symbols only
    return *it->second;
}

// out = (-Lap_wide + k^2)^{-1} rhs for one scalar plane; caller holds the
// fft mutex.
void solve_plane_locked(FftWs& ws, const Grid2D& g, double k, const double* rhs, double* out) {
    const std::size_t n = g.size();
    for (std::size_t m = 0; m < n; ++m) ws.real[m] = rhs[m];
    fftw_execute(ws.fwd);
    const int nc = g.n2 / 2 + 1;
    const double norm = 1.0 / (static_cast<double>(g.n1) * g.n2);
    for (int m1 = 0; m1 < g.n1; ++m1) {
        double s1 = std::sin(2.0 * M_PI * m1 / g.n1) / g.h;
        for (int m2 = 0; m2 < nc; ++m2) {
            double s2 = std::sin(2.0 * M_PI * m2 / g.n2) / g.h;
            double denom = s1 * s1 + s2 * s2 + k * k;
            double f = norm / denom;
            ws.cplx[static_cast<std::size_t>(m1) * nc + m2][0] *= f;
            ws.cplx[static_cast<std::size_t>(m1) * nc + m2][1] *= f;
        }
    }
    fftw_execute(ws.bwd);
    for (std::size_t m = 0; m < n; ++m) out[m] = ws.real[m];
}

}  // namespace

Field6 circ_grad(const ScalarPair& p, double k) {
    if (k == 0.0) throw ConfigError("circ_grad: wave number k must be nonzero");
    const Grid2D& g = p.grid;
    Field6 out(g);
    d_x(g, p.a.data(), out.comp(0));
    d_y(g, p.a.data(), out.comp(1));
    d_x(g, p.at.data(), out.comp(3));
    d_y(g, p.at.data(), out.comp(4));
    const std::size_t n = g.size();
    for (std::size_t m = 0; m < n; ++m) {
        out.comp(2)[m] = k * p.at[m];
        out.comp(5)[m] = -k * p.a[m];
    }
    return out;
}

Field6 circ_curl(const Field6& u, double k) {
    if (k == 0.0) throw ConfigError("circ_curl: wave number k must be nonzero");
    const Grid2D& g = u.grid;
    Field6 out(g);
    const std::size_t n = g.size();
    std::vector<double> t1(n), t2(n);

    // rows 1-2: dy b3 - k bt2, k bt1 - dx b3
    d_y(g, u.comp(2), t1.data());
    d_x(g, u.comp(2), t2.data());
    for (std::size_t m = 0; m < n; ++m) {
        out.comp(0)[m] = t1[m] - k * u.comp(4)[m];
        out.comp(1)[m] = k * u.comp(3)[m] - t2[m];
    }
    // row 3: dx b2 - dy b1
    d_x(g, u.comp(1), t1.data());
    d_y(g, u.comp(0), t2.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(2)[m] = t1[m] - t2[m];
    // rows 4-5: dy bt3 + k b2, -k b1 - dx bt3
    d_y(g, u.comp(5), t1.data());
    d_x(g, u.comp(5), t2.data());
    for (std::size_t m = 0; m < n; ++m) {
        out.comp(3)[m] = t1[m] + k * u.comp(1)[m];
        out.comp(4)[m] = -k * u.comp(0)[m] - t2[m];
    }
    // row 6: dx bt2 - dy bt1
    d_x(g, u.comp(4), t1.data());
    d_y(g, u.comp(3), t2.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(5)[m] = t1[m] - t2[m];
    return out;
}

Field6 apply_L_stencil(const Field6& u, double k) {
    if (k == 0.0) throw ConfigError("apply_L: wave number k must be nonzero");
    const Grid2D& g = u.grid;
    Field6 out(g);
    const double ik2 = 1.0 / (4.0 * g.h * g.h);
    const double k2 = k * k;
    const std::size_t n = g.size();

    auto dxx = [&](const double* f, double* o) {
        for (int i = 0; i < g.n1; ++i) {
            const double* fp = f + g.idx(up(g, up(g, i)), 0);
            const double* fm = f + g.idx(dn(g, dn(g, i)), 0);
            const double* f0 = f + g.idx(i, 0);
            double* oo = o + g.idx(i, 0);
            for (int j = 0; j < g.n2; ++j) oo[j] = (fp[j] - 2.0 * f0[j] + fm[j]) * ik2;
        }
    };
    auto dyy = [&](const double* f, double* o) {
        for (int i = 0; i < g.n1; ++i) {
            const double* f0 = f + g.idx(i, 0);
            double* oo = o + g.idx(i, 0);
            for (int j = 0; j < g.n2; ++j)
                oo[j] = (f0[rt(g, rt(g, j))] - 2.0 * f0[j] + f0[lf(g, lf(g, j))]) * ik2;
        }
    };
    auto dxy = [&](const double* f, double* o) {
        for (int i = 0; i < g.n1; ++i) {
            const double* fp = f + g.idx(up(g, i), 0);
            const double* fm = f + g.idx(dn(g, i), 0);
            double* oo = o + g.idx(i, 0);
            for (int j = 0; j < g.n2; ++j) {
                int jr = rt(g, j), jl = lf(g, j);
                oo[j] = (fp[jr] - fp[jl] - fm[jr] + fm[jl]) * ik2;
            }
        }
    };

    std::vector<double> ta(n), tb(n), tc(n);
    // row 1: (-dyy + k^2) U1 + dxy U2 + k dx Ut3
    dyy(u.comp(0), ta.data());
    dxy(u.comp(1), tb.data());
    d_x(g, u.comp(5), tc.data());
    for (std::size_t m = 0; m < n; ++m)
        out.comp(0)[m] = -ta[m] + k2 * u.comp(0)[m] + tb[m] + k * tc[m];
    // row 2: dxy U1 + (-dxx + k^2) U2 + k dy Ut3
    dxy(u.comp(0), ta.data());
    dxx(u.comp(1), tb.data());
    d_y(g, u.comp(5), tc.data());
    for (std::size_t m = 0; m < n; ++m)
        out.comp(1)[m] = ta[m] - tb[m] + k2 * u.comp(1)[m] + k * tc[m];
    // row 3: -(dxx + dyy) U3 + k dx Ut1 + k dy Ut2
    dxx(u.comp(2), ta.data());
    dyy(u.comp(2), tb.data());
    d_x(g, u.comp(3), tc.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(2)[m] = -ta[m] - tb[m] + k * tc[m];
    d_y(g, u.comp(4), tc.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(2)[m] += k * tc[m];
    // row 4: -k dx U3 + (-dyy + k^2) Ut1 + dxy Ut2
    d_x(g, u.comp(2), ta.data());
    dyy(u.comp(3), tb.data());
    dxy(u.comp(4), tc.data());
    for (std::size_t m = 0; m < n; ++m)
        out.comp(3)[m] = -k * ta[m] - tb[m] + k2 * u.comp(3)[m] + tc[m];
    // row 5: -k dy U3 + dxy Ut1 + (-dxx + k^2) Ut2
    d_y(g, u.comp(2), ta.data());
    dxy(u.comp(3), tb.data());
    dxx(u.comp(4), tc.data());
    for (std::size_t m = 0; m < n; ++m)
        out.comp(4)[m] = -k * ta[m] + tb[m] - tc[m] + k2 * u.comp(4)[m];
    // row 6: -k dx U1 - k dy U2 - (dxx + dyy) Ut3
    d_x(g, u.comp(0), ta.data());
    d_y(g, u.comp(1), tb.data());
    dxx(u.comp(5), tc.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(5)[m] = -k * ta[m] - k * tb[m] - tc[m];
    dyy(u.comp(5), tc.data());
    for (std::size_t m = 0; m < n; ++m) out.comp(5)[m] -= tc[m];
    return out;
}

Field6 apply_L_curlcurl(const Field6& u, double k) { return circ_curl(circ_curl(u, k), k); }

Matrix6 symbol_L(double xi1, double xi2, double k) {
    Matrix6 M{};
    double q1 = xi1 * xi1, q2 = xi2 * xi2, q = q1 + q2, k2 = k * k, m12 = -xi1 * xi2;
    M[0][0] = q2 + k2;
    M[0][1] = m12;
    M[0][5] = k * xi1;
    M[1][0] = m12;
    M[1][1] = q1 + k2;
    M[1][5] = k * xi2;
    M[2][2] = q;
    M[2][3] = k * xi1;
    M[2][4] = k * xi2;
    M[3][2] = k * xi1;
    M[3][3] = q2 + k2;
    M[3][4] = m12;
    M[4][2] = k * xi2;
    M[4][3] = m12;
    M[4][4] = q1 + k2;
    M[5][0] = k * xi1;
    M[5][1] = k * xi2;
    M[5][5] = q;
    return M;
}

std::array<double, 6> symbol_eigenvalues(double xi1, double xi2, double k) {
    Matrix6 M = symbol_L(xi1, xi2, k);
    Eigen::Matrix<double, 6, 6> A;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) A(i, j) = M[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(A);
    std::array<double, 6> ev{};
    for (int i = 0; i < 6; ++i) ev[i] = es.eigenvalues()(i);
    return ev;
}

double discrete_freq(const Grid2D& g, int axis, int m) {
    int n = axis == 0 ? g.n1 : g.n2;
    return std::sin(2.0 * M_PI * m / n) / g.h;
}

void divergences(const Field6& u, double k, ScalarPlane& d1, ScalarPlane& d2) {
    const Grid2D& g = u.grid;
    d1 = ScalarPlane(g);
    d2 = ScalarPlane(g);
    const std::size_t n = g.size();
    std::vector<double> ta(n), tb(n);
    d_x(g, u.comp(0), ta.data());
    d_y(g, u.comp(1), tb.data());
    for (std::size_t m = 0; m < n; ++m) d1.data[m] = ta[m] + tb[m] + k * u.comp(5)[m];
    d_x(g, u.comp(3), ta.data());
    d_y(g, u.comp(4), tb.data());
    for (std::size_t m = 0; m < n; ++m) d2.data[m] = ta[m] + tb[m] - k * u.comp(2)[m];
}

ScalarPair circ_grad_adjoint(const Field6& u, double k) {
    ScalarPlane d1, d2;
    divergences(u, k, d1, d2);
    ScalarPair out(u.grid);
    for (std::size_t m = 0; m < out.a.size(); ++m) {
        out.a[m] = -d1.data[m];
        out.at[m] = -d2.data[m];
    }
    return out;
}

ScalarPair solve_shifted_laplace(const ScalarPair& rhs, double k) {
    if (k == 0.0) throw ConfigError("solve_shifted_laplace: k must be nonzero");
    ScalarPair out(rhs.grid);
    std::lock_guard<std::mutex> lock(g_fft_mutex);
    FftWs& ws = fft_ws(rhs.grid);
    solve_plane_locked(ws, rhs.grid, k, rhs.a.data(), out.a.data());
    solve_plane_locked(ws, rhs.grid, k, rhs.at.data(), out.at.data());
    return out;
}

HelmholtzParts helmholtz_split(const Field6& u, double k) {
    if (k == 0.0) throw ConfigError("helmholtz_split: k must be nonzero");
    HelmholtzParts parts;
    ScalarPair rhs = circ_grad_adjoint(u, k);  // = (-div1, -div2)
    parts.potentials = solve_shifted_laplace(rhs, k);
    parts.w = circ_grad(parts.potentials, k);
    parts.v = u;
    axpy(-1.0, parts.w, parts.v);
    return parts;
}

Field6 project_V(const Field6& u, double k) {
    HelmholtzParts parts = helmholtz_split(u, k);
    return std::move(parts.v);
}

double bilinear_bL(const Field6& u, const Field6& v, double k) {
    check_same_grid(u.grid, v.grid, "bilinear_bL");
    Field6 cu = circ_curl(u, k);
    Field6 cv = circ_curl(v, k);
    return inner_l2(cu, cv);
}

double vnorm_sq(const Field6& u, double k) {
    const Grid2D& g = u.grid;
    const std::size_t n = g.size();
    std::vector<double> ta(n), tb(n);
    double s = 0.0;
    for (int c = 0; c < 6; ++c) {
        d_x(g, u.comp(c), ta.data());
        d_y(g, u.comp(c), tb.data());
        const double* f = u.comp(c);
        for (std::size_t m = 0; m < n; ++m)
            s += ta[m] * ta[m] + tb[m] * tb[m] + k * k * f[m] * f[m];
    }
    return s * g.cell_area();
}

double vdual_norm(const Field6& gfield, double k) {
    const Grid2D& g = gfield.grid;
    std::vector<double> z(g.size());
    double s = 0.0;
    std::lock_guard<std::mutex> lock(g_fft_mutex);
    FftWs& ws = fft_ws(g);
    for (int c = 0; c < 6; ++c) {
        solve_plane_locked(ws, g, k, gfield.comp(c), z.data());
        const double* f = gfield.comp(c);
        for (std::size_t m = 0; m < g.size(); ++m) s += z[m] * f[m];
    }
    return std::sqrt(std::max(0.0, s * g.cell_area()));
}

}  // namespace emtw
