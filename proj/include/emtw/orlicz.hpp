// N-functions, complementary (Legendre-type) functions, doubling-condition
// checks, Luxemburg norms, and the concrete nonlinearities driving the
// solver.
#ifndef EMTW_ORLICZ_HPP
#define EMTW_ORLICZ_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "emtw/grid.hpp"

namespace emtw {

enum class NKind { Power, LogType, Kerr, Custom };

// Even convex Phi with Phi(t)/t -> 0 at 0 and -> infinity at infinity.
class NFunction {
public:
    NKind kind = NKind::Custom;
    std::string name;
    double p = 0.0;  // growth exponent(s) where applicable
    double q = 0.0;

    // Phi(t) = |t|^p  (Luxemburg norm equals the L^p norm)
    static NFunction power(double p);
    // Phi(t) = |t|^p / p  (the convention used by the power nonlinearity)
    static NFunction power_over_p(double p);
    // Phi = F from the piecewise log-weighted example: Phi'(t) = t^{p-1} ln 2
    // on |t|<=1 and t^{q-1} ln(1+t) on |t|>1 (odd extension).
    static NFunction log_type(double p, double q);
    // Phi(t) = t^4, the N-function controlling the Kerr nonlinearity.
    static NFunction kerr();
    static NFunction custom(std::string name, std::function<double(double)> eval,
                            std::function<double(double)> deriv);

    double operator()(double t) const;  // Phi(t), even
    double deriv(double t) const;       // Phi'(t), odd

private:
    std::function<double(double)> eval_;
    std::function<double(double)> deriv_;
};

// Phi(t); domain error on non-finite t.
double eval_phi(const NFunction& nf, double t);

// Psi(s) = sup_{t>=0} (s t - Phi(t)) evaluated via safeguarded root-finding
// on Phi'(t*) = |s|.
double complementary(const NFunction& nf, double s);
// The complementary function as an NFunction (kind Custom); its derivative
// is the inverse function of Phi'.
NFunction complementary_nfunction(const NFunction& nf);

// 481 log-spaced points spanning [1e-6, 1e6] by default.
std::vector<double> condition_sample_grid(double lo = 1e-6, double hi = 1e6, int n = 481);

struct Delta2Report {
    bool holds = false;
    double K = 0.0;      // sup Phi(2t)/Phi(t)
    double kappa = 0.0;  // sup t Phi'(t)/Phi(t)
};
struct Nabla2Report {
    bool holds = false;
    double kappa_prime = 0.0;  // inf t Phi'(t)/Phi(t)
};

Delta2Report check_delta2(const NFunction& nf, const std::vector<double>& grid);
Nabla2Report check_nabla2(const NFunction& nf, const std::vector<double>& grid);

// inf{alpha > 0 : h^2 sum Phi(|u|/alpha) <= 1}; 0 for the zero field.
double luxemburg_norm(const NFunction& nf, const Field6& u);
// The modular rho(alpha) = h^2 sum Phi(|u|/alpha), exposed for diagnostics.
double orlicz_modular(const NFunction& nf, const Field6& u, double alpha);

// Nonlinearity F: R^6 -> R acting radially through s = |u|, with
// f = F' and the (F0)-(F3) constants attached.
class Nonlinearity {
public:
    std::string name;
    NFunction phi;
    double gamma = 0.0;  // superquadraticity exponent, > 2
    double c1 = 0.0;     // growth constant in |f(u)| <= c1 (1 + Phi'(|u|))
    double c2 = 0.0;     // lower constant in F(u) >= c2 Phi(|u|)

    double F_radial(double s) const { return F_(s); }    // F at |u| = s
    double dF_radial(double s) const { return dF_(s); }  // d/ds
    double ddF_radial(double s) const { return ddF_(s); }

    double F(const double* u) const;              // u points at 6 doubles
    void f(const double* u, double* out) const;   // gradient of F
    // Jacobian f'(u) applied to a direction v; PSD for convex F.
    void df(const double* u, const double* v, double* out) const;

    std::function<double(double)> F_, dF_, ddF_;
};

// F(u) = omega^2 chi3 |u|^4 / 8 so that f(u) = omega^2 chi(|u|^2/2) u with
// the cubic Kerr susceptibility chi(s) = chi3 * s.
Nonlinearity make_kerr_nonlinearity(double omega, double chi3);
// F(u) = |u|^p / p.
Nonlinearity make_power_nonlinearity(double p);
// F = Phi from the log-weighted example.
Nonlinearity make_logtype_nonlinearity(double p, double q);

struct NFunctionReport {
    bool even_ok = true;
    bool zero_at_zero = true;
    bool positive = true;
    bool convex = true;
    bool sublinear_at_zero = true;    // Phi(t)/t -> 0
    bool superlinear_at_inf = true;   // Phi(t)/t -> inf
    bool n2_ok = true;                // Phi(t)/t^2 -> 0 at 0
    bool n3_ok = true;                // Phi(t)/t^2 -> inf at inf
    bool ok() const {
        return even_ok && zero_at_zero && positive && convex && sublinear_at_zero &&
               superlinear_at_inf && n2_ok && n3_ok;
    }
};
NFunctionReport check_nfunction(const NFunction& nf);

struct NonlinearityReport {
    bool f0_ok = true;   // convex, nonnegative, F(0)=0
    bool f1_ok = true;   // f(u) = o(|u|)
    bool f2_ok = true;   // |f(u)| <= c1 (1 + Phi'(|u|))
    bool f3_ok = true;   // <f(u),u>/gamma >= F(u) >= c2 Phi(|u|)
    bool radial_ok = true;
    double worst_f3_gap = 0.0;
    bool ok() const { return f0_ok && f1_ok && f2_ok && f3_ok && radial_ok; }
};
NonlinearityReport check_nonlinearity(const Nonlinearity& nl, int nsamples = 10000,
                                      unsigned seed = 12345);

}  // namespace emtw

#endif
