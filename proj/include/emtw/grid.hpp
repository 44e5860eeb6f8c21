// Uniform periodic 2D grid and the field containers used throughout:
// 6-component real fields u = (U, Utilde), scalar potential pairs, and
// radial profiles extracted by azimuthal binning.
#ifndef EMTW_GRID_HPP
#define EMTW_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace emtw {

// Periodic box [-R, R)^2 with R = n*h/2, points x_i = -R + i*h.
struct Grid2D {
    int n1 = 0;
    int n2 = 0;
    double h = 0.0;

    Grid2D() = default;
    Grid2D(int n1_, int n2_, double h_) : n1(n1_), n2(n2_), h(h_) {
        if (n1 < 16 || n2 < 16) throw std::invalid_argument("Grid2D: need at least 16 points per axis");
        if (h <= 0.0) throw std::invalid_argument("Grid2D: spacing must be positive");
    }
    static Grid2D square(int n, double extent) { return Grid2D(n, n, 2.0 * extent / n); }

    double extent1() const { return 0.5 * n1 * h; }
    double extent2() const { return 0.5 * n2 * h; }
    double x1(int i) const { return -extent1() + i * h; }
    double x2(int j) const { return -extent2() + j * h; }

    int wrap1(int i) const { i %= n1; return i < 0 ? i + n1 : i; }
    int wrap2(int j) const { j %= n2; return j < 0 ? j + n2 : j; }

    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n2 + j; }

    double cell_area() const { return h * h; }

    bool operator==(const Grid2D&) const = default;
};

// One real value per grid point.
struct ScalarPlane {
    Grid2D grid;
    std::vector<double> data;

    ScalarPlane() = default;
    explicit ScalarPlane(const Grid2D& g) : grid(g), data(g.size(), 0.0) {}

    double& at(int i, int j) { return data[grid.idx(i, j)]; }
    double at(int i, int j) const { return data[grid.idx(i, j)]; }
};

// Potential pair (alpha, alpha_tilde) feeding the circ-gradient.
struct ScalarPair {
    Grid2D grid;
    std::vector<double> a;   // alpha
    std::vector<double> at;  // alpha tilde

    ScalarPair() = default;
    explicit ScalarPair(const Grid2D& g) : grid(g), a(g.size(), 0.0), at(g.size(), 0.0) {}
};

// Six real components per point, component-major storage.
// Ordering (U1,U2,U3,Ut1,Ut2,Ut3) matches the column order of the
// curl-curl operator matrix.
struct Field6 {
    Grid2D grid;
    std::vector<double> data;  // 6 * grid.size()

    Field6() = default;
    explicit Field6(const Grid2D& g) : grid(g), data(6 * g.size(), 0.0) {}

    double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * grid.size(); }
    const double* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * grid.size(); }

    double& at(int c, int i, int j) { return comp(c)[grid.idx(i, j)]; }
    double at(int c, int i, int j) const { return comp(c)[grid.idx(i, j)]; }

    std::size_t npoints() const { return grid.size(); }
};

void check_same_grid(const Grid2D& a, const Grid2D& b, const std::string& where);

// Vector-space helpers (h^2-weighted inner products).
Field6& axpy(double alpha, const Field6& x, Field6& y);  // y += alpha*x
Field6& scale(Field6& x, double alpha);
double inner_l2(const Field6& a, const Field6& b);  // h^2 sum over points & comps
double norm_l2(const Field6& a);
double norm_inf(const Field6& a);
double inner_l2(const ScalarPair& a, const ScalarPair& b);
double norm_l2(const ScalarPair& a);
ScalarPair& axpy(double alpha, const ScalarPair& x, ScalarPair& y);
ScalarPair& scale(ScalarPair& x, double alpha);
bool all_finite(const Field6& a);

// Radial profile on bins of width equal to the source grid spacing;
// value = azimuthal mean per bin, stddev recorded as an equivariance
// diagnostic.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> value;
    std::vector<double> stddev;
    std::vector<int> count;

    std::size_t size() const { return r.size(); }
    // Linear interpolation in r; constant extrapolation beyond the last bin.
    double eval(double rr) const;
    // d(value)/dr by centered differences on the bin mesh.
    double deriv(double rr) const;
};

// Bin a scalar plane azimuthally: bin j collects points with
// |x| in [(j-1/2)h, (j+1/2)h).
RadialProfile radial_bin(const ScalarPlane& plane);

}  // namespace emtw

#endif
