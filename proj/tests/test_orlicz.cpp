#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "emtw/errors.hpp"
#include "emtw/orlicz.hpp"

using namespace emtw;

namespace {

// Independent quadrature oracle (adaptive Simpson), used to pin values the
// library computes by Gauss-Legendre panels.
double simpson(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 0) {
    double c = 0.5 * (a + b);
    double whole = simpson(f, a, b);
    double left = simpson(f, a, c), right = simpson(f, c, b);
    if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, c, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, c, b, 0.5 * tol, depth + 1);
}

Field6 random_field(const Grid2D& g, unsigned seed, double amp = 1.0) {
    Field6 u(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-amp, amp);
    for (double& v : u.data) v = unif(rng);
    return u;
}

}  // namespace

TEST_CASE("eval_phi basics") {
    auto p4 = NFunction::power_over_p(4.0);
    CHECK(eval_phi(p4, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(eval_phi(p4, -2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(eval_phi(p4, 0.0) == 0.0);
    auto lt = NFunction::log_type(3.0, 3.0);
    CHECK(eval_phi(lt, 0.0) == 0.0);
    CHECK_THROWS_AS(eval_phi(p4, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("log-type value against quadrature oracle and closed form") {
    auto lt = NFunction::log_type(3.0, 3.0);
    auto integrand = [](double s) {
        return s <= 1.0 ? s * s * std::log(2.0) : s * s * std::log1p(s);
    };
    double oracle = adaptive_simpson(integrand, 0.0, 2.0, 1e-13);
    CHECK(lt(2.0) == doctest::Approx(oracle).epsilon(1e-10));
    // closed form for p=q=3: ln2/3 + [3 ln 3 - (2/3) ln 2 - 11/18]
    double closed = 3.0 * std::log(3.0) - std::log(2.0) / 3.0 - 11.0 / 18.0;
    CHECK(lt(2.0) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("complementary function") {
    auto quad = NFunction::custom(
        "t^2/2", [](double t) { return 0.5 * t * t; }, [](double t) { return t; });
    CHECK(complementary(quad, 3.0) == doctest::Approx(4.5).epsilon(1e-12));
    auto p4 = NFunction::power_over_p(4.0);
    CHECK(complementary(p4, 1.0) == doctest::Approx(0.75).epsilon(1e-12));

    // grid-search oracle for the log-type Legendre value at s = 2
    auto lt = NFunction::log_type(3.0, 3.0);
    double s = 2.0;
    double best = 0.0, bestt = 0.0;
    for (int i = 0; i <= 2000000; ++i) {
        double t = 1e3 * i / 2000000.0;
        double v = s * t - lt(t);
        if (v > best) {
            best = v;
            bestt = t;
        }
    }
    // golden refinement around the best grid point
    double lo = bestt - 1e-3, hi = bestt + 1e-3;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (s * m1 - lt(m1) < s * m2 - lt(m2))
            lo = m1;
        else
            hi = m2;
    }
    double tref = 0.5 * (lo + hi);
    double oracle = s * tref - lt(tref);
    CHECK(complementary(lt, 2.0) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("delta2 and nabla2 constants") {
    auto grid = condition_sample_grid();
    auto r4 = check_delta2(NFunction::power(4.0), grid);
    CHECK(r4.holds);
    CHECK(r4.K == doctest::Approx(16.0).epsilon(1e-10));
    CHECK(r4.kappa == doctest::Approx(4.0).epsilon(1e-10));
    auto r3 = check_delta2(NFunction::power(3.0), grid);
    CHECK(r3.K == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(r3.kappa == doctest::Approx(3.0).epsilon(1e-10));

    auto lt = check_delta2(NFunction::log_type(3.0, 3.0), grid);
    CHECK(lt.holds);
    CHECK(lt.kappa <= 4.0);

    auto n4 = check_nabla2(NFunction::power(4.0), grid);
    CHECK(n4.holds);
    CHECK(n4.kappa_prime == doctest::Approx(4.0).epsilon(1e-10));
    auto n2 = check_nabla2(NFunction::power(2.0), grid);
    CHECK(n2.holds);
    CHECK(n2.kappa_prime == doctest::Approx(2.0).epsilon(1e-10));
    auto nlt = check_nabla2(NFunction::log_type(3.0, 3.0), grid);
    CHECK(nlt.holds);
    CHECK(nlt.kappa_prime >= 3.0 - 1e-9);
}

TEST_CASE("luxemburg norm equals Lp norm for the pure power gauge") {
    Grid2D g(32, 32, 0.2);
    Field6 u = random_field(g, 7);
    auto p4 = NFunction::power(4.0);
    double lux = luxemburg_norm(p4, u);
    // direct quadrature of the L4 norm
    double s = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        double sq = 0.0;
        for (int c = 0; c < 6; ++c) {
            double v = u.data[c * g.size() + m];
            sq += v * v;
        }
        s += sq * sq;
    }
    double l4 = std::pow(s * g.cell_area(), 0.25);
    CHECK(lux == doctest::Approx(l4).epsilon(1e-8));

    Field6 z(g);
    CHECK(luxemburg_norm(p4, z) == 0.0);
}

TEST_CASE("luxemburg norm log-type vs alpha-scan oracle") {
    Grid2D g(32, 32, 0.3);
    Field6 u(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double r2 = g.x1(i) * g.x1(i) + g.x2(j) * g.x2(j);
            u.at(0, i, j) = 2.0 * std::exp(-r2);
            u.at(4, i, j) = -std::exp(-0.5 * r2);
        }
    auto lt = NFunction::log_type(3.0, 3.0);
    double lux = luxemburg_norm(lt, u);
    // monotone alpha-scan oracle: rho(alpha) decreasing, locate rho = 1
    double lo = 1e-3, hi = 1e3;
    for (int it = 0; it < 80; ++it) {
        double mid = std::sqrt(lo * hi);
        if (orlicz_modular(lt, u, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double oracle = std::sqrt(lo * hi);
    CHECK(lux == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("luxemburg norm triangle inequality and homogeneity") {
    Grid2D g(32, 32, 0.2);
    auto lt = NFunction::log_type(3.0, 4.0);
    for (unsigned seed = 1; seed <= 5; ++seed) {
        Field6 a = random_field(g, seed), b = random_field(g, seed + 100);
        double na = luxemburg_norm(lt, a), nb = luxemburg_norm(lt, b);
        Field6 sum = a;
        axpy(1.0, b, sum);
        CHECK(luxemburg_norm(lt, sum) <= na + nb + 1e-8 * (na + nb));
        Field6 sa = a;
        scale(sa, -2.5);
        CHECK(luxemburg_norm(lt, sa) == doctest::Approx(2.5 * na).epsilon(1e-8));
    }
}

TEST_CASE("kerr nonlinearity") {
    auto nl = make_kerr_nonlinearity(1.0, 1.0);
    double u[6] = {1, 0, 0, 0, 0, 0}, fu[6];
    CHECK(nl.F(u) == doctest::Approx(0.125).epsilon(1e-15));
    nl.f(u, fu);
    CHECK(fu[0] == doctest::Approx(0.5).epsilon(1e-15));
    for (int c = 1; c < 6; ++c) CHECK(fu[c] == 0.0);
    double z[6] = {0, 0, 0, 0, 0, 0};
    nl.f(z, fu);
    CHECK(nl.F(z) == 0.0);
    for (int c = 0; c < 6; ++c) CHECK(fu[c] == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int n = 0; n < 100; ++n) {
        double v[6];
        for (int c = 0; c < 6; ++c) v[c] = unif(rng);
        nl.f(v, fu);
        double fdotu = 0.0;
        for (int c = 0; c < 6; ++c) fdotu += fu[c] * v[c];
        CHECK(fdotu == doctest::Approx(4.0 * nl.F(v)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_kerr_nonlinearity(-1.0, 1.0), ConfigError);
}

TEST_CASE("young identity and kappa bound") {
    auto grid = condition_sample_grid(1e-4, 1e4, 161);
    for (auto nf : {NFunction::power(4.0), NFunction::power_over_p(3.0),
                    NFunction::log_type(3.0, 3.5)}) {
        double kappa = check_delta2(nf, condition_sample_grid()).kappa;
        for (double t : grid) {
            double lhs = complementary(nf, nf.deriv(t));
            double rhs = t * nf.deriv(t) - nf(t);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
            CHECK(lhs <= (kappa - 1.0) * nf(t) * (1.0 + 1e-8) + 1e-300);
        }
    }
}

TEST_CASE("double Legendre duality recovers Phi") {
    for (auto nf : {NFunction::power(4.0), NFunction::log_type(3.0, 3.0)}) {
        auto psi = complementary_nfunction(nf);
        for (double t : condition_sample_grid(1e-3, 1e3, 61)) {
            double back = complementary(psi, nf.deriv(t) >= 0 ? t : t);
            // complementary of psi evaluated at t
            back = complementary(psi, t);
            CHECK(back == doctest::Approx(nf(t)).epsilon(1e-6));
        }
    }
}

TEST_CASE("growth sandwich Phi <= C (t^2 + t^P)") {
    auto grid = condition_sample_grid();
    struct Case {
        NFunction nf;
        double P;
    };
    std::vector<Case> cases;
    cases.push_back({NFunction::kerr(), 4.0});
    cases.push_back({NFunction::power_over_p(3.0), 3.0});
    cases.push_back({NFunction::log_type(3.0, 3.0), 4.0});  // ln(1+t) <= t lifts q to q+1
    for (auto& c : cases) {
        double C = 0.0;
        for (double t : grid) C = std::max(C, c.nf(t) / (t * t + std::pow(t, c.P)));
        CHECK(std::isfinite(C));
        for (double t : grid) CHECK(c.nf(t) <= C * (t * t + std::pow(t, c.P)) * (1.0 + 1e-12));
    }
}

TEST_CASE("N-function invariants for built-ins") {
    for (auto nf : {NFunction::power(4.0), NFunction::power_over_p(3.0), NFunction::kerr(),
                    NFunction::log_type(3.0, 3.0), NFunction::log_type(2.5, 4.0)}) {
        auto rep = check_nfunction(nf);
        CHECK(rep.ok());
    }
}

TEST_CASE("(F0)-(F3) hold for all built-in nonlinearities") {
    for (auto nl : {make_kerr_nonlinearity(1.0, 1.0), make_kerr_nonlinearity(2.0, 0.5),
                    make_power_nonlinearity(4.0), make_power_nonlinearity(3.0),
                    make_logtype_nonlinearity(3.0, 3.0)}) {
        auto rep = check_nonlinearity(nl, 10000);
        CHECK(rep.ok());
    }
}
