// Shooting solver for the nodal boundary-value problem
//   beta'' + beta'/r - beta/r^2 + beta^3 - beta = 0,  beta(0)=beta(inf)=0,
// producing TE-mode profiles with a prescribed number of interior zeros.
#ifndef EMTW_TE_ODE_HPP
#define EMTW_TE_ODE_HPP

#include <vector>

#include "emtw/grid.hpp"

namespace emtw {

struct ShootingProblem {
    double r_max = 30.0;
    double r0 = 1e-6;        // series start; beta ~ s r + (s/8) r^3
    double rel_tol = 1e-10;  // integrator relative tolerance
    double abs_tol = 1e-16;
    double max_step = 0.1;
    double blowup = 1e3;
    double slope_min = 1e-4;
    double slope_max = 1e2;
    int scan_points = 400;     // coarse bracketing scan resolution
    double cubic_coeff = 1.0;  // 0 switches the nonlinearity off (diagnostics)
    // Integrate the equation as printed, with beta/r in place of beta'/r.
    // Comparison hook only; the TE derivation gives beta'/r.
    bool printed_form = false;
};

struct Trajectory {
    std::vector<double> r, beta, dbeta;
    bool blew_up = false;
    int terminal_sign = 0;  // sign of beta at blow-up or at r_max

    double r_end() const { return r.empty() ? 0.0 : r.back(); }
    // Cubic Hermite dense output.
    double eval(double rr) const;
    double eval_deriv(double rr) const;
};

// Adaptive RK45 integration from r0 with two-term series initial data.
Trajectory integrate_te(double s, const ShootingProblem& prob);

// Strict sign changes of beta on (r0, r_end), each localized to 1e-8.
int count_sign_changes(const Trajectory& traj);
std::vector<double> zero_locations(const Trajectory& traj);
// Sign changes of beta' over the region where |beta| is above a relative
// floor (the far tail is excluded to avoid counting roundoff jitter).
int count_deriv_zeros(const Trajectory& traj);

// Collocation defect of a trajectory: quintic-Hermite reconstruction with
// nodal beta'' from the equation, defect evaluated between nodes, sup norm.
double ode_residual_sup(const Trajectory& traj, const ShootingProblem& prob);

struct NodalSolution {
    Trajectory traj;
    double slope_star = 0.0;
    int zeros = 0;
    int deriv_zeros = 0;
    double residual = 0.0;      // collocation defect sup
    double beta_rmax = 0.0;     // terminal amplitude
    bool converged = false;
    std::vector<double> zero_locs;
};

// Locate the slope whose trajectory decays with precisely n interior zeros.
// Bisection refines in double and then in quad precision, so the accepted
// trajectory follows the decaying branch all the way to r_max.
NodalSolution find_nodal(int n, const ShootingProblem& prob);

// Lift: U = (beta(r)/r) (-x2, x1, 0), Utilde = 0.  Requires the grid axis
// extent not to exceed r_max; beta is taken as 0 beyond r_max (decayed).
Field6 te_field_from_profile(const NodalSolution& sol, const Grid2D& grid);

}  // namespace emtw

#endif
