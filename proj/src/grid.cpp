#include "emtw/grid.hpp"

#include <algorithm>
#include <cmath>

namespace emtw {

void check_same_grid(const Grid2D& a, const Grid2D& b, const std::string& where) {
    if (!(a == b)) throw std::invalid_argument(where + ": grid mismatch");
}

Field6& axpy(double alpha, const Field6& x, Field6& y) {
    check_same_grid(x.grid, y.grid, "axpy");
    for (std::size_t m = 0; m < y.data.size(); ++m) y.data[m] += alpha * x.data[m];
    return y;
}

Field6& scale(Field6& x, double alpha) {
    for (double& v : x.data) v *= alpha;
    return x;
}

double inner_l2(const Field6& a, const Field6& b) {
    check_same_grid(a.grid, b.grid, "inner_l2");
    double s = 0.0;
    for (std::size_t m = 0; m < a.data.size(); ++m) s += a.data[m] * b.data[m];
    return s * a.grid.cell_area();
}

double norm_l2(const Field6& a) { return std::sqrt(inner_l2(a, a)); }

double norm_inf(const Field6& a) {
    double s = 0.0;
    for (double v : a.data) s = std::max(s, std::abs(v));
    return s;
}

double inner_l2(const ScalarPair& a, const ScalarPair& b) {
    check_same_grid(a.grid, b.grid, "inner_l2(pair)");
    double s = 0.0;
    for (std::size_t m = 0; m < a.a.size(); ++m) s += a.a[m] * b.a[m] + a.at[m] * b.at[m];
    return s * a.grid.cell_area();
}

double norm_l2(const ScalarPair& a) { return std::sqrt(inner_l2(a, a)); }

ScalarPair& axpy(double alpha, const ScalarPair& x, ScalarPair& y) {
    check_same_grid(x.grid, y.grid, "axpy(pair)");
    for (std::size_t m = 0; m < y.a.size(); ++m) {
        y.a[m] += alpha * x.a[m];
        y.at[m] += alpha * x.at[m];
    }
    return y;
}

ScalarPair& scale(ScalarPair& x, double alpha) {
    for (double& v : x.a) v *= alpha;
    for (double& v : x.at) v *= alpha;
    return x;
}

bool all_finite(const Field6& a) {
    for (double v : a.data)
        if (!std::isfinite(v)) return false;
    return true;
}

double RadialProfile::eval(double rr) const {
    if (r.empty()) return 0.0;
    if (rr <= r.front()) return value.front();
    if (rr >= r.back()) return value.back();
    auto it = std::upper_bound(r.begin(), r.end(), rr);
    std::size_t k = static_cast<std::size_t>(it - r.begin());
    double t = (rr - r[k - 1]) / (r[k] - r[k - 1]);
    return (1.0 - t) * value[k - 1] + t * value[k];
}

double RadialProfile::deriv(double rr) const {
    if (r.size() < 2) return 0.0;
    auto it = std::upper_bound(r.begin(), r.end(), rr);
    std::size_t k = static_cast<std::size_t>(it - r.begin());
    if (k == 0) k = 1;
    if (k >= r.size()) k = r.size() - 1;
    std::size_t lo = k - 1, hi = k;
    if (k + 1 < r.size() && k >= 1) {
        // centered estimate around the bracketing interval
        lo = k - 1;
        hi = k + 1 <= r.size() - 1 ? k + 1 : k;
    }
    return (value[hi] - value[lo]) / (r[hi] - r[lo]);
}

RadialProfile radial_bin(const ScalarPlane& plane) {
    const Grid2D& g = plane.grid;
    double rmax = std::hypot(g.extent1(), g.extent2());
    int nbins = static_cast<int>(std::floor(rmax / g.h)) + 2;
    std::vector<double> sum(nbins, 0.0), sumsq(nbins, 0.0);
    std::vector<int> cnt(nbins, 0);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double rr = std::sqrt(g.x1(i) * g.x1(i) + g.x2(j) * g.x2(j));
            int b = static_cast<int>(std::floor(rr / g.h + 0.5));
            if (b >= nbins) b = nbins - 1;
            double v = plane.at(i, j);
            sum[b] += v;
            sumsq[b] += v * v;
            cnt[b] += 1;
        }
    }
    RadialProfile p;
    for (int b = 0; b < nbins; ++b) {
        if (cnt[b] == 0) continue;
        double mean = sum[b] / cnt[b];
        double var = std::max(0.0, sumsq[b] / cnt[b] - mean * mean);
        p.r.push_back(b * g.h);
        p.value.push_back(mean);
        p.stddev.push_back(std::sqrt(var));
        p.count.push_back(cnt[b]);
    }
    return p;
}

}  // namespace emtw
