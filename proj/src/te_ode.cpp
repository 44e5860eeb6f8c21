#include "emtw/te_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emtw/errors.hpp"

namespace emtw {

namespace {

template <class R>
inline R rabs(R x) {
    return x < R(0) ? -x : x;
}

template <class R>
struct State {
    R b, db;  // beta, beta'
};

// RHS of the first-order system.  The standard form carries beta'/r; the
// printed-form flag swaps in beta/r.
template <class R>
inline State<R> rhs(R r, const State<R>& y, double cubic, bool printed) {
    State<R> d;
    d.b = y.db;
    R fr = printed ? y.b / r : y.db / r;
    d.db = -fr + y.b / (r * r) - R(cubic) * y.b * y.b * y.b + y.b;
    return d;
}

// Dormand-Prince 5(4) step; returns the 5th-order update and the embedded
// error estimate.
template <class R>
void dopri5_step(R r, const State<R>& y, R h, double cubic, bool printed, State<R>& out,
                 State<R>& err) {
    auto f = [cubic, printed](R rr, const State<R>& yy) { return rhs(rr, yy, cubic, printed); };
    State<R> k1 = f(r, y);
    auto adv = [&](std::initializer_list<std::pair<R, const State<R>*>> terms, R c) {
        State<R> z{y.b, y.db};
        for (auto& t : terms) {
            z.b += h * t.first * t.second->b;
            z.db += h * t.first * t.second->db;
        }
        return f(r + c * h, z);
    };
    State<R> k2 = adv({{R(1.0 / 5.0), &k1}}, R(1.0 / 5.0));
    State<R> k3 = adv({{R(3.0 / 40.0), &k1}, {R(9.0 / 40.0), &k2}}, R(3.0 / 10.0));
    State<R> k4 = adv({{R(44.0 / 45.0), &k1}, {R(-56.0 / 15.0), &k2}, {R(32.0 / 9.0), &k3}},
                      R(4.0 / 5.0));
    State<R> k5 = adv({{R(19372.0 / 6561.0), &k1},
                       {R(-25360.0 / 2187.0), &k2},
                       {R(64448.0 / 6561.0), &k3},
                       {R(-212.0 / 729.0), &k4}},
                      R(8.0 / 9.0));
    State<R> k6 = adv({{R(9017.0 / 3168.0), &k1},
                       {R(-355.0 / 33.0), &k2},
                       {R(46732.0 / 5247.0), &k3},
                       {R(49.0 / 176.0), &k4},
                       {R(-5103.0 / 18656.0), &k5}},
                      R(1));
    out.b = y.b + h * (R(35.0 / 384.0) * k1.b + R(500.0 / 1113.0) * k3.b + R(125.0 / 192.0) * k4.b +
                       R(-2187.0 / 6784.0) * k5.b + R(11.0 / 84.0) * k6.b);
    out.db = y.db + h * (R(35.0 / 384.0) * k1.db + R(500.0 / 1113.0) * k3.db +
                         R(125.0 / 192.0) * k4.db + R(-2187.0 / 6784.0) * k5.db +
                         R(11.0 / 84.0) * k6.db);
    State<R> k7 = f(r + h, out);
    // 4th-order solution for the error estimate
    R b4b = y.b + h * (R(5179.0 / 57600.0) * k1.b + R(7571.0 / 16695.0) * k3.b +
                       R(393.0 / 640.0) * k4.b + R(-92097.0 / 339200.0) * k5.b +
                       R(187.0 / 2100.0) * k6.b + R(1.0 / 40.0) * k7.b);
    R b4d = y.db + h * (R(5179.0 / 57600.0) * k1.db + R(7571.0 / 16695.0) * k3.db +
                        R(393.0 / 640.0) * k4.db + R(-92097.0 / 339200.0) * k5.db +
                        R(187.0 / 2100.0) * k6.db + R(1.0 / 40.0) * k7.db);
    err.b = out.b - b4b;
    err.db = out.db - b4d;
}

struct TrajOpts {
    bool store = true;
};

// Adaptive integration; optionally stores the trajectory at accepted nodes.
// The segment [r0, 1e-3] is filled from the Frobenius series
//   beta = s r + a3 r^3 + a5 r^5,  a3 = s/8,  a5 = (a3 - c s^3)/24,
// which is exact to roundoff there and keeps the 1/r terms of the equation
// well conditioned for the collocation check.
template <class R>
void integrate_impl(R s, const ShootingProblem& prob, Trajectory* store) {
    R a3 = s / R(8);
    R a5 = (a3 - R(prob.cubic_coeff) * s * s * s) / R(24);
    auto series_b = [&](R rr) { return s * rr + a3 * rr * rr * rr + a5 * rr * rr * rr * rr * rr; };
    auto series_db = [&](R rr) {
        return s + R(3) * a3 * rr * rr + R(5) * a5 * rr * rr * rr * rr;
    };
    double r_start = prob.printed_form ? prob.r0 : std::min(1e-3, 0.5 * prob.r_max);
    if (prob.r0 > r_start) r_start = prob.r0;

    R r = R(r_start);
    State<R> y;
    y.b = series_b(r);
    y.db = series_db(r);
    if (prob.printed_form) {
        // the printed equation has an r^phi Frobenius branch, phi golden
        double phi = 0.5 * (1.0 + std::sqrt(5.0));
        double b0 = static_cast<double>(s) * std::pow(prob.r0, phi);
        y.b = R(b0);
        y.db = R(b0 * phi / prob.r0);
        r = R(prob.r0);
    }
    if (store) {
        store->r.clear();
        store->beta.clear();
        store->dbeta.clear();
        store->blew_up = false;
        if (!prob.printed_form && r_start > prob.r0) {
            const int J = 24;
            for (int j = 0; j < J; ++j) {
                double rr = prob.r0 * std::pow(r_start / prob.r0, double(j) / J);
                store->r.push_back(rr);
                store->beta.push_back(static_cast<double>(series_b(R(rr))));
                store->dbeta.push_back(static_cast<double>(series_db(R(rr))));
            }
        }
        store->r.push_back(static_cast<double>(r));
        store->beta.push_back(static_cast<double>(y.b));
        store->dbeta.push_back(static_cast<double>(y.db));
    }
    double h = static_cast<double>(r) * 0.1;
    bool blew = false;
    int guard = 0;
    while (static_cast<double>(r) < prob.r_max) {
        if (++guard > 2000000) throw NumericError("integrate_te: step guard exceeded");
        if (static_cast<double>(r) + h > prob.r_max) h = prob.r_max - static_cast<double>(r);
        State<R> ynew, err;
        dopri5_step(r, y, R(h), prob.cubic_coeff, prob.printed_form, ynew, err);
        double sb = prob.abs_tol + prob.rel_tol * std::max(std::abs(static_cast<double>(y.b)),
                                                           std::abs(static_cast<double>(ynew.b)));
        double sd = prob.abs_tol + prob.rel_tol * std::max(std::abs(static_cast<double>(y.db)),
                                                           std::abs(static_cast<double>(ynew.db)));
        double e = std::max(std::abs(static_cast<double>(err.b)) / sb,
                            std::abs(static_cast<double>(err.db)) / sd);
        if (e <= 1.0) {
            r = r + R(h);
            y = ynew;
            if (store) {
                store->r.push_back(static_cast<double>(r));
                store->beta.push_back(static_cast<double>(y.b));
                store->dbeta.push_back(static_cast<double>(y.db));
            }
            if (rabs(y.b) > R(prob.blowup)) {
                blew = true;
                break;
            }
        }
        double fac = e > 0.0 ? 0.9 * std::pow(e, -0.2) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        h = std::min(h * fac, prob.max_step);
    }
    if (store) {
        store->blew_up = blew;
        double bl = store->beta.back();
        store->terminal_sign = bl > 0.0 ? 1 : (bl < 0.0 ? -1 : 0);
    }
}

// Light probe: zero count and terminal sign.
template <class R>
std::pair<int, int> probe(R s, const ShootingProblem& prob) {
    Trajectory t;
    integrate_impl<R>(s, prob, &t);
    return {count_sign_changes(t), t.terminal_sign};
}

}  // namespace

Trajectory integrate_te(double s, const ShootingProblem& prob) {
    Trajectory t;
    integrate_impl<double>(s, prob, &t);
    return t;
}

double Trajectory::eval(double rr) const {
    if (r.empty()) return 0.0;
    if (rr <= r.front()) return beta.front();
    if (rr >= r.back()) return beta.back();
    auto it = std::upper_bound(r.begin(), r.end(), rr);
    std::size_t k = static_cast<std::size_t>(it - r.begin());
    double h = r[k] - r[k - 1], t = (rr - r[k - 1]) / h;
    double b0 = beta[k - 1], b1 = beta[k], d0 = dbeta[k - 1] * h, d1 = dbeta[k] * h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * b0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * b1 +
           (t3 - t2) * d1;
}

double Trajectory::eval_deriv(double rr) const {
    if (r.empty()) return 0.0;
    if (rr <= r.front()) return dbeta.front();
    if (rr >= r.back()) return dbeta.back();
    auto it = std::upper_bound(r.begin(), r.end(), rr);
    std::size_t k = static_cast<std::size_t>(it - r.begin());
    double h = r[k] - r[k - 1], t = (rr - r[k - 1]) / h;
    double b0 = beta[k - 1], b1 = beta[k], d0 = dbeta[k - 1], d1 = dbeta[k];
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * b0 / h + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * b1 / h +
            (3 * t2 - 2 * t) * d1);
}

namespace {

// Sign changes with a relative amplitude floor: a crossing counts only when
// the trajectory re-exceeds the floor with the opposite sign, so roundoff
// jitter in the decayed tail is ignored.
std::vector<std::pair<std::size_t, std::size_t>> crossing_ranges(const Trajectory& traj) {
    double bmax = 0.0;
    for (double v : traj.beta) bmax = std::max(bmax, std::abs(v));
    double floor_ = 1e-9 * bmax;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int sign = 0;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < traj.r.size(); ++k) {
        double v = traj.beta[k];
        if (std::abs(v) < floor_) continue;
        int s = v > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign) out.push_back({idx, k});
        sign = s;
        idx = k;
    }
    return out;
}

}  // namespace

std::vector<double> zero_locations(const Trajectory& traj) {
    std::vector<double> zs;
    for (auto [a, b] : crossing_ranges(traj)) {
        // locate the adjacent node pair with the actual sign flip
        std::size_t j = a;
        while (j + 1 <= b && !(traj.beta[j] * traj.beta[j + 1] < 0.0)) ++j;
        if (j + 1 > b) {
            zs.push_back(0.5 * (traj.r[a] + traj.r[b]));
            continue;
        }
        double lo = traj.r[j], hi = traj.r[j + 1];
        bool up = traj.beta[j + 1] > 0.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            double v = traj.eval(mid);
            if ((v > 0.0) == up)
                hi = mid;
            else
                lo = mid;
            if (hi - lo < 1e-8) break;
        }
        zs.push_back(0.5 * (lo + hi));
    }
    return zs;
}

int count_sign_changes(const Trajectory& traj) {
    return static_cast<int>(crossing_ranges(traj).size());
}

int count_deriv_zeros(const Trajectory& traj) {
    double bmax = 0.0;
    for (double v : traj.beta) bmax = std::max(bmax, std::abs(v));
    double floor_ = 1e-9 * bmax;
    // cut the decayed tail: last node where |beta| is above the floor
    std::size_t last = 0;
    for (std::size_t k = 0; k < traj.r.size(); ++k)
        if (std::abs(traj.beta[k]) >= floor_) last = k;
    int n = 0;
    double prev = 0.0;
    bool have = false;
    for (std::size_t k = 0; k <= last; ++k) {
        double v = traj.dbeta[k];
        if (v == 0.0) continue;
        if (have && v * prev < 0.0) ++n;
        prev = v;
        have = true;
    }
    return n;
}

double ode_residual_sup(const Trajectory& traj, const ShootingProblem& prob) {
    auto acc = [&](double r, double b, double db) {
        double fr = prob.printed_form ? b / r : db / r;
        return -fr + b / (r * r) - prob.cubic_coeff * b * b * b + b;
    };
    double sup = 0.0;
    for (std::size_t k = 1; k < traj.r.size(); ++k) {
        double h = traj.r[k] - traj.r[k - 1];
        if (h <= 0.0) continue;
        double b0 = traj.beta[k - 1], b1 = traj.beta[k];
        double d0 = traj.dbeta[k - 1], d1 = traj.dbeta[k];
        double a0 = acc(traj.r[k - 1], b0, d0), a1 = acc(traj.r[k], b1, d1);
        // quintic Hermite defect at interior points
        for (double t : {0.25, 0.5, 0.75}) {
            double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
            // quintic Hermite basis (value, deriv, accel at both ends)
            double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
            double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
            double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
            double H3 = 0.5 * t3 - t4 + 0.5 * t5;
            double H4 = -4 * t3 + 7 * t4 - 3 * t5;
            double H5 = 10 * t3 - 15 * t4 + 6 * t5;
            double b = H0 * b0 + H1 * h * d0 + H2 * h * h * a0 + H3 * h * h * a1 + H4 * h * d1 +
                       H5 * b1;
            double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
            double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
            double dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
            double dH3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
            double dH4 = -12 * t2 + 28 * t3 - 15 * t4;
            double dH5 = 30 * t2 - 60 * t3 + 30 * t4;
            double db = (dH0 * b0 + dH5 * b1) / h + dH1 * d0 + dH4 * d1 +
                        h * (dH2 * a0 + dH3 * a1);
            double d2H0 = -60 * t + 180 * t2 - 120 * t3;
            double d2H1 = -36 * t + 96 * t2 - 60 * t3;
            double d2H2 = 1 - 9 * t + 18 * t2 - 10 * t3;
            double d2H3 = 3 * t - 12 * t2 + 10 * t3;
            double d2H4 = -24 * t + 84 * t2 - 60 * t3;
            double d2H5 = 60 * t - 180 * t2 + 120 * t3;
            double d2b = (d2H0 * b0 + d2H5 * b1) / (h * h) + (d2H1 * d0 + d2H4 * d1) / h +
                         d2H2 * a0 + d2H3 * a1;
            double r = traj.r[k - 1] + t * h;
            sup = std::max(sup, std::abs(d2b - acc(r, b, db)));
        }
    }
    return sup;
}

namespace {

struct Bracket {
    double lo = 0.0, hi = 0.0;
};

// Find slope intervals where the zero count steps from n to n+1.
std::vector<Bracket> scan_brackets(int n, const ShootingProblem& prob) {
    ShootingProblem coarse = prob;
    coarse.rel_tol = std::max(prob.rel_tol, 1e-8);
    std::vector<Bracket> out;
    double lmin = std::log(prob.slope_min), lmax = std::log(prob.slope_max);
    int N = prob.scan_points;
    double sprev = std::exp(lmin);
    int zprev = probe<double>(sprev, coarse).first;
    for (int i = 1; i <= N; ++i) {
        double s = std::exp(lmin + (lmax - lmin) * i / N);
        int z = probe<double>(s, coarse).first;
        if (zprev <= n && z >= n + 1) {
            // subdivide multi-jumps until the n -> n+1 transition brackets
            double lo = sprev, hi = s;
            int zlo = zprev, zhi = z;
            while (zhi > zlo + 1 && hi - lo > 1e-12 * hi) {
                double mid = std::sqrt(lo * hi);
                int zm = probe<double>(mid, coarse).first;
                if (zm <= n) {
                    lo = mid;
                    zlo = zm;
                } else {
                    hi = mid;
                    zhi = zm;
                }
            }
            if (zlo == n && zhi == n + 1) out.push_back({lo, hi});
        }
        sprev = s;
        zprev = z;
    }
    return out;
}

// Double-precision bisection on the zero count at full tolerance.
double refine_bracket_double(int n, Bracket br, const ShootingProblem& prob) {
    auto zcount_d = [&](double s) { return probe<double>(s, prob).first; };
    if (!(zcount_d(br.lo) <= n && zcount_d(br.hi) >= n + 1)) {
        double width = br.hi - br.lo;
        br.lo -= 5.0 * width;
        br.hi += 5.0 * width;
        if (!(zcount_d(br.lo) <= n && zcount_d(br.hi) >= n + 1))
            throw NumericError("find_nodal: bracket lost at full tolerance");
    }
    double lo = br.lo, hi = br.hi;
    while (hi - lo > 4e-16 * hi) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (zcount_d(mid) <= n)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Continue the bisection in quad precision so the accepted trajectory can
// track the decaying branch all the way to r_max (a double-width bracket
// leaves ~1e-16 e^r contamination in the tail).
__float128 refine_bracket_quad(int n, double star, const ShootingProblem& prob) {
    ShootingProblem qprob = prob;
    qprob.abs_tol = 1e-24;
    __float128 qlo = star * (1.0 - 2e-13), qhi = star * (1.0 + 2e-13);
    int widen = 0;
    while (!(probe<__float128>(qlo, qprob).first <= n &&
             probe<__float128>(qhi, qprob).first >= n + 1)) {
        __float128 w = qhi - qlo;
        qlo -= 5 * w;
        qhi += 5 * w;
        if (++widen > 12) throw NumericError("find_nodal: quad bracket lost");
    }
    for (int it = 0; it < 140; ++it) {
        if (qhi - qlo <= 1e-33 * qhi) break;
        __float128 mid = (qlo + qhi) / 2;
        if (mid == qlo || mid == qhi) break;
        if (probe<__float128>(mid, qprob).first <= n)
            qlo = mid;
        else
            qhi = mid;
    }
    return (qlo + qhi) / 2;
}

}  // namespace

NodalSolution find_nodal(int n, const ShootingProblem& prob) {
    if (n < 0) throw ConfigError("find_nodal: n must be nonnegative");
    ShootingProblem work = prob;
    NodalSolution sol;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<Bracket> brs = scan_brackets(n, work);
        if (brs.empty()) {
            std::ostringstream os;
            os << "find_nodal: no slope bracket with " << n << " -> " << n + 1
               << " zero transition in [" << work.slope_min << ", " << work.slope_max
               << "] over " << work.scan_points << " scan points";
            throw NumericError(os.str());
        }
        // refine candidates in double, merge branches closer than 1e-6 rel
        std::vector<double> stars;
        for (const Bracket& b : brs) stars.push_back(refine_bracket_double(n, b, work));
        std::sort(stars.begin(), stars.end());
        std::vector<double> merged;
        for (double s : stars)
            if (merged.empty() || s - merged.back() > 1e-6 * s) merged.push_back(s);

        __float128 qstar = refine_bracket_quad(n, merged.front(), work);
        ShootingProblem qprob = work;
        qprob.abs_tol = 1e-24;
        integrate_impl<__float128>(qstar, qprob, &sol.traj);
        sol.slope_star = static_cast<double>(qstar);
        sol.zeros = count_sign_changes(sol.traj);
        sol.deriv_zeros = count_deriv_zeros(sol.traj);
        sol.zero_locs = zero_locations(sol.traj);
        sol.residual = ode_residual_sup(sol.traj, work);
        sol.beta_rmax = std::abs(sol.traj.beta.back());
        sol.converged = !sol.traj.blew_up && sol.zeros == n && sol.deriv_zeros == n + 1 &&
                        sol.beta_rmax < 1e-8;
        if (sol.beta_rmax < 1e-8) break;
        work.r_max *= 2.0;  // truncation radius too small for this state
    }
    return sol;
}

Field6 te_field_from_profile(const NodalSolution& sol, const Grid2D& grid) {
    if (grid.extent1() > sol.traj.r_end() + 1e-12 || grid.extent2() > sol.traj.r_end() + 1e-12)
        throw ConfigError("te_field_from_profile: grid extent exceeds the profile range");
    Field6 u(grid);
    for (int i = 0; i < grid.n1; ++i) {
        double x = grid.x1(i);
        for (int j = 0; j < grid.n2; ++j) {
            double y = grid.x2(j);
            double r = std::sqrt(x * x + y * y);
            if (r == 0.0 || r > sol.traj.r_end()) continue;
            double br = sol.traj.eval(r) / r;
            std::size_t m = grid.idx(i, j);
            u.comp(0)[m] = -br * y;
            u.comp(1)[m] = br * x;
        }
    }
    return u;
}

}  // namespace emtw
