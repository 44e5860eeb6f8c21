// SO(2) group action on 6-component fields, the rho/tau/zeta decomposition
// of equivariant profiles, the S and S-tilde involutions, and radial profile
// extraction by azimuthal binning.
#ifndef EMTW_SYMMETRY_HPP
#define EMTW_SYMMETRY_HPP

#include <functional>

#include "emtw/grid.hpp"

namespace emtw {

// (g*u)(x) = gtilde u(g^{-1} x) with gtilde = diag(g, 1, g, 1); off-grid
// samples by periodic bilinear interpolation.
Field6 so2_act(double angle, const Field6& u);

// Group average over m equally spaced rotations (m >= 8).
Field6 symmetrize_so2(const Field6& u, int m);

// |u - average|_2 / |u|_2 with an 8-fold average; 0 for equivariant fields
// up to interpolation error.
double equivariance_residual(const Field6& u);

struct RtzSplit {
    // Pure parts of the first profile (tilde components zero) and of the
    // tilde profile (first components zero); u = sum of all six parts
    // exactly by construction.
    Field6 u_rho, u_tau, u_zeta;
    Field6 ut_rho, ut_tau, ut_zeta;

    // Pointwise coefficient planes: a_rho = (U1 x1 + U2 x2)/|x| etc.
    ScalarPlane a_rho, a_tau, a_zeta;
    ScalarPlane at_rho, at_tau, at_zeta;

    // Azimuthal bin means of the coefficient planes; stddev doubles as an
    // equivariance diagnostic.  The origin bin of the rho/tau profiles is
    // filled by quadratic extrapolation.
    RadialProfile p_rho, p_tau, p_zeta;
    RadialProfile pt_rho, pt_tau, pt_zeta;

    bool equivariance_warning = false;
    double equivariance_res = 0.0;

    // The literal convention of the decomposition lemma: the full tilde
    // profile rides with the rho part, u_rho_lemma = (U_rho, Utilde).
    Field6 lemma_rho() const;
};

RtzSplit decompose_rtz(const Field6& u);

// (u + Su)/2 where S u = u_rho - u_tau + u_zeta: removes the tau part of
// the first profile.  Idempotent; orthogonal projection in L2.
Field6 project_S(const Field6& u);
// Mirror for the tilde profile.
Field6 project_S_tilde(const Field6& u);

// tau fraction of both profiles measured on the azimuthally binned
// coefficients: |tau bins|_2 / |all bins|_2 (weighted by bin counts).
double tau_fraction(const Field6& u);

// Build an equivariant field from radial coefficient functions:
// U = ar(r) rhat + at(r) that + az(r) zhat, similarly the tilde profile.
using RadialFn = std::function<double(double)>;
Field6 field_from_radial(const Grid2D& g, const RadialFn& a_rho, const RadialFn& a_tau,
                         const RadialFn& a_zeta, const RadialFn& at_rho, const RadialFn& at_tau,
                         const RadialFn& at_zeta);

}  // namespace emtw

#endif
