#include "emtw/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "emtw/errors.hpp"

namespace emtw {

namespace {

// 16-point Gauss-Legendre rule on [-1,1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double gl_panel(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i) s += kGLw[i] * f(mid + rad * kGLx[i]);
    return s * rad;
}

// Integral of x^{q-1} ln(1+x) over [1, s], octave panels so that relative
// accuracy holds across many decades.
double logtype_tail_integral(double q, double s) {
    auto f = [q](double x) { return std::pow(x, q - 1.0) * std::log1p(x); };
    double total = 0.0, a = 1.0;
    while (a < s) {
        double b = std::min(2.0 * a, s);
        total += gl_panel(f, a, b);
        a = b;
    }
    return total;
}

}  // namespace

NFunction NFunction::power(double p) {
    if (p <= 1.0) throw ConfigError("NFunction::power: exponent must exceed 1");
    NFunction nf;
    nf.kind = NKind::Power;
    nf.p = nf.q = p;
    nf.name = "power(" + std::to_string(p) + ")";
    nf.eval_ = [p](double t) { return std::pow(std::abs(t), p); };
    nf.deriv_ = [p](double t) {
        double s = std::abs(t);
        double d = p * std::pow(s, p - 1.0);
        return t < 0 ? -d : d;
    };
    return nf;
}

NFunction NFunction::power_over_p(double p) {
    if (p <= 1.0) throw ConfigError("NFunction::power_over_p: exponent must exceed 1");
    NFunction nf;
    nf.kind = NKind::Power;
    nf.p = nf.q = p;
    nf.name = "power_over_p(" + std::to_string(p) + ")";
    nf.eval_ = [p](double t) { return std::pow(std::abs(t), p) / p; };
    nf.deriv_ = [p](double t) {
        double s = std::abs(t);
        double d = std::pow(s, p - 1.0);
        return t < 0 ? -d : d;
    };
    return nf;
}

NFunction NFunction::log_type(double p, double q) {
    if (p <= 2.0 || q <= 2.0) throw ConfigError("NFunction::log_type: requires p, q > 2");
    NFunction nf;
    nf.kind = NKind::LogType;
    nf.p = p;
    nf.q = q;
    nf.name = "log_type(" + std::to_string(p) + "," + std::to_string(q) + ")";
    const double ln2 = std::log(2.0);
    nf.eval_ = [p, q, ln2](double t) {
        double s = std::abs(t);
        if (s <= 1.0) return ln2 * std::pow(s, p) / p;
        return ln2 / p + logtype_tail_integral(q, s);
    };
    nf.deriv_ = [p, q, ln2](double t) {
        double s = std::abs(t);
        double d = s <= 1.0 ? ln2 * std::pow(s, p - 1.0) : std::pow(s, q - 1.0) * std::log1p(s);
        return t < 0 ? -d : d;
    };
    return nf;
}

NFunction NFunction::kerr() {
    NFunction nf = power(4.0);
    nf.kind = NKind::Kerr;
    nf.name = "kerr";
    return nf;
}

NFunction NFunction::custom(std::string name, std::function<double(double)> eval,
                            std::function<double(double)> deriv) {
    NFunction nf;
    nf.kind = NKind::Custom;
    nf.name = std::move(name);
    nf.eval_ = std::move(eval);
    nf.deriv_ = std::move(deriv);
    return nf;
}

double NFunction::operator()(double t) const { return eval_(t); }
double NFunction::deriv(double t) const { return deriv_(t); }

double eval_phi(const NFunction& nf, double t) {
    if (!std::isfinite(t)) throw DomainError("eval_phi: non-finite argument");
    return nf(t);
}

namespace {

// Solve Phi'(t*) = s for s >= 0 by bracketing + bisection (Phi' is
// increasing on [0, inf) for a strictly convex N-function).
double invert_phi_prime(const NFunction& nf, double s) {
    if (s <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (nf.deriv(hi) < s) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 1200 || !std::isfinite(hi)) {
            std::ostringstream os;
            os << "complementary: bracket expansion failed for s=" << s << " (hi=" << hi
               << ", Phi'(hi)=" << nf.deriv(hi) << ")";
            throw NumericError(os.str());
        }
    }
    if (lo == 0.0) {
        lo = hi * 0.5;
        while (lo > 0.0 && nf.deriv(lo) > s) lo *= 0.5;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (nf.deriv(mid) < s)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double complementary(const NFunction& nf, double s) {
    if (!std::isfinite(s)) throw DomainError("complementary: non-finite argument");
    double a = std::abs(s);
    if (a == 0.0) return 0.0;
    double tstar = invert_phi_prime(nf, a);
    return a * tstar - nf(tstar);
}

NFunction complementary_nfunction(const NFunction& nf) {
    NFunction base = nf;
    return NFunction::custom(
        "complementary(" + nf.name + ")",
        [base](double s) { return complementary(base, s); },
        [base](double s) {
            double t = invert_phi_prime(base, std::abs(s));
            return s < 0 ? -t : t;
        });
}

std::vector<double> condition_sample_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return g;
}

Delta2Report check_delta2(const NFunction& nf, const std::vector<double>& grid) {
    Delta2Report rep;
    double K = 0.0, kappa = 0.0;
    for (double t : grid) {
        double phi = nf(t);
        if (!(phi > 0.0)) throw NumericError("check_delta2: Phi(t) <= 0 at positive sample t=" + std::to_string(t));
        K = std::max(K, nf(2.0 * t) / phi);
        kappa = std::max(kappa, t * nf.deriv(t) / phi);
    }
    rep.K = K;
    rep.kappa = kappa;
    rep.holds = std::isfinite(K) && std::isfinite(kappa);
    return rep;
}

Nabla2Report check_nabla2(const NFunction& nf, const std::vector<double>& grid) {
    Nabla2Report rep;
    double kp = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        double phi = nf(t);
        if (!(phi > 0.0)) throw NumericError("check_nabla2: Phi(t) <= 0 at positive sample t=" + std::to_string(t));
        kp = std::min(kp, t * nf.deriv(t) / phi);
    }
    rep.kappa_prime = kp;
    rep.holds = kp > 1.0 + 1e-6;
    return rep;
}

double orlicz_modular(const NFunction& nf, const Field6& u, double alpha) {
    const std::size_t n = u.npoints();
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        double sq = 0.0;
        for (int c = 0; c < 6; ++c) {
            double v = u.data[c * n + m];
            sq += v * v;
        }
        s += nf(std::sqrt(sq) / alpha);
    }
    return s * u.grid.cell_area();
}

double luxemburg_norm(const NFunction& nf, const Field6& u) {
    if (!all_finite(u)) throw DomainError("luxemburg_norm: non-finite field");
    double umax = norm_inf(u);
    if (umax == 0.0) return 0.0;
    double hi = umax;  // expand until modular <= 1
    int guard = 0;
    while (orlicz_modular(nf, u, hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 600) throw NumericError("luxemburg_norm: no upper bracket");
    }
    double lo = 0.5 * hi;
    guard = 0;
    while (orlicz_modular(nf, u, lo) < 1.0) {
        hi = lo;
        lo *= 0.5;
        if (++guard > 2000 || lo < 1e-300) {
            // modular < 1 for every alpha probed; the infimum is 0 only for u = 0,
            // otherwise keep the smallest bracket found
            break;
        }
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double rho = orlicz_modular(nf, u, mid);
        if (std::abs(rho - 1.0) <= 1e-10) return mid;
        if (rho > 1.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double Nonlinearity::F(const double* u) const {
    double sq = 0.0;
    for (int c = 0; c < 6; ++c) sq += u[c] * u[c];
    return F_(std::sqrt(sq));
}

void Nonlinearity::f(const double* u, double* out) const {
    double sq = 0.0;
    for (int c = 0; c < 6; ++c) sq += u[c] * u[c];
    double s = std::sqrt(sq);
    if (s == 0.0) {
        for (int c = 0; c < 6; ++c) out[c] = 0.0;
        return;
    }
    double g = dF_(s) / s;
    for (int c = 0; c < 6; ++c) out[c] = g * u[c];
}

void Nonlinearity::df(const double* u, const double* v, double* out) const {
    double sq = 0.0;
    for (int c = 0; c < 6; ++c) sq += u[c] * u[c];
    double s = std::sqrt(sq);
    if (s == 0.0) {
        // f'(0) = 0 by (F1)
        for (int c = 0; c < 6; ++c) out[c] = 0.0;
        return;
    }
    double g = dF_(s) / s;           // tangential multiplier
    double radial = ddF_(s) - g;      // extra along u-hat
    double uv = 0.0;
    for (int c = 0; c < 6; ++c) uv += u[c] * v[c];
    double coef = radial * uv / sq;
    for (int c = 0; c < 6; ++c) out[c] = g * v[c] + coef * u[c];
}

Nonlinearity make_kerr_nonlinearity(double omega, double chi3) {
    if (omega <= 0.0 || chi3 <= 0.0)
        throw ConfigError("make_kerr_nonlinearity: omega and chi3 must be positive");
    Nonlinearity nl;
    nl.name = "kerr";
    nl.phi = NFunction::kerr();
    nl.gamma = 4.0;
    double a = omega * omega * chi3;
    nl.c1 = a / 8.0;
    nl.c2 = a / 8.0;
    nl.F_ = [a](double s) { return a * s * s * s * s / 8.0; };
    nl.dF_ = [a](double s) { return a * s * s * s / 2.0; };
    nl.ddF_ = [a](double s) { return 1.5 * a * s * s; };
    return nl;
}

Nonlinearity make_power_nonlinearity(double p) {
    if (p <= 2.0) throw ConfigError("make_power_nonlinearity: requires p > 2");
    Nonlinearity nl;
    nl.name = "power(" + std::to_string(p) + ")";
    nl.phi = NFunction::power_over_p(p);
    nl.gamma = p;
    nl.c1 = 1.0;
    nl.c2 = 1.0;
    nl.F_ = [p](double s) { return std::pow(s, p) / p; };
    nl.dF_ = [p](double s) { return std::pow(s, p - 1.0); };
    nl.ddF_ = [p](double s) { return (p - 1.0) * std::pow(s, p - 2.0); };
    return nl;
}

Nonlinearity make_logtype_nonlinearity(double p, double q) {
    Nonlinearity nl;
    nl.name = "log_type(" + std::to_string(p) + "," + std::to_string(q) + ")";
    nl.phi = NFunction::log_type(p, q);
    nl.gamma = std::min(p, q);
    nl.c1 = 1.0;
    nl.c2 = 1.0;
    NFunction phi = nl.phi;
    const double ln2 = std::log(2.0);
    nl.F_ = [phi](double s) { return phi(s); };
    nl.dF_ = [phi](double s) { return phi.deriv(s); };
    nl.ddF_ = [p, q, ln2](double s) {
        if (s <= 1.0) return ln2 * (p - 1.0) * std::pow(s, p - 2.0);
        return (q - 1.0) * std::pow(s, q - 2.0) * std::log1p(s) + std::pow(s, q - 1.0) / (1.0 + s);
    };
    return nl;
}

NFunctionReport check_nfunction(const NFunction& nf) {
    NFunctionReport rep;
    auto grid = condition_sample_grid();
    rep.zero_at_zero = nf(0.0) == 0.0;
    for (double t : grid) {
        if (std::abs(nf(-t) - nf(t)) > 1e-12 * std::max(1.0, nf(t))) rep.even_ok = false;
        if (!(nf(t) > 0.0)) rep.positive = false;
    }
    // convexity on sampled pairs
    for (std::size_t i = 0; i + 2 < grid.size(); i += 3) {
        double a = grid[i], b = grid[i + 2];
        if (nf(0.5 * (a + b)) > 0.5 * (nf(a) + nf(b)) + 1e-12 * (nf(a) + nf(b)))
            rep.convex = false;
    }
    double t0 = 1e-6, t1 = 1e6;
    rep.sublinear_at_zero = nf(t0) / t0 < 1e-3;
    rep.superlinear_at_inf = nf(t1) / t1 > 1e3;
    rep.n2_ok = nf(t0) / (t0 * t0) < 1e-3;
    rep.n3_ok = nf(t1) / (t1 * t1) > 1e3;
    return rep;
}

NonlinearityReport check_nonlinearity(const Nonlinearity& nl, int nsamples, unsigned seed) {
    NonlinearityReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> logmag(-6.0, 4.0);

    double z[6] = {0, 0, 0, 0, 0, 0};
    if (nl.F(z) != 0.0) rep.f0_ok = false;

    for (int n = 0; n < nsamples; ++n) {
        double u[6], v[6], fu[6];
        double mag = std::pow(10.0, logmag(rng));
        double sq = 0.0;
        for (int c = 0; c < 6; ++c) {
            u[c] = unif(rng);
            sq += u[c] * u[c];
        }
        double s = std::sqrt(sq);
        for (int c = 0; c < 6; ++c) u[c] *= mag / std::max(s, 1e-300);
        s = mag;

        double Fu = nl.F(u);
        nl.f(u, fu);
        double fdotu = 0.0, fnorm = 0.0;
        for (int c = 0; c < 6; ++c) {
            fdotu += fu[c] * u[c];
            fnorm += fu[c] * fu[c];
        }
        fnorm = std::sqrt(fnorm);

        if (Fu < 0.0) rep.f0_ok = false;
        // convexity via midpoints against a second sample
        for (int c = 0; c < 6; ++c) v[c] = unif(rng) * mag;
        double mid[6];
        for (int c = 0; c < 6; ++c) mid[c] = 0.5 * (u[c] + v[c]);
        double lhs = nl.F(mid), rhs = 0.5 * (Fu + nl.F(v));
        if (lhs > rhs + 1e-10 * std::max(1.0, rhs)) rep.f0_ok = false;

        if (fnorm > nl.c1 * (1.0 + nl.phi.deriv(s)) * (1.0 + 1e-10)) rep.f2_ok = false;

        double ar = fdotu / nl.gamma - Fu;
        if (ar < -1e-10 * std::max(1.0, std::abs(Fu))) rep.f3_ok = false;
        rep.worst_f3_gap = std::min(rep.worst_f3_gap, ar);
        if (Fu < nl.c2 * nl.phi(s) * (1.0 - 1e-10)) rep.f3_ok = false;

        // radiality: value depends on |u| only
        double e1[6] = {s, 0, 0, 0, 0, 0};
        if (std::abs(nl.F(e1) - Fu) > 1e-10 * std::max(1.0, std::abs(Fu))) rep.radial_ok = false;
    }

    // (F1): |f(u)|/|u| -> 0 along a shrinking sequence
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1e-2, 1e-4, 1e-6, 1e-8}) {
        double u[6] = {s, 0, 0, 0, 0, 0}, fu[6];
        nl.f(u, fu);
        double ratio = std::abs(fu[0]) / s;
        if (ratio > prev * 1.5 + 1e-12) rep.f1_ok = false;
        prev = ratio;
    }
    if (prev > 1e-6) rep.f1_ok = false;
    return rep;
}

}  // namespace emtw
