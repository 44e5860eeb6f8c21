// Discrete circ-gradient, circ-curl, the curl-curl operator L, its Fourier
// symbol, and the Helmholtz-type splitting of grid fields into the
// divergence-constrained part V and the gradient-type kernel part W.
//
// All stencils are 2nd-order central differences with periodic wrap, so the
// complex identity curl(grad) = 0 holds to machine precision and L equals
// curl o curl exactly.
#ifndef EMTW_OPERATORS_HPP
#define EMTW_OPERATORS_HPP

#include <array>

#include "emtw/grid.hpp"

namespace emtw {

// (dx a, dy a, k at, dx at, dy at, -k a).  Requires k != 0.
Field6 circ_grad(const ScalarPair& p, double k);

// (dy b3 - k bt2, k bt1 - dx b3, dx b2 - dy b1,
//  dy bt3 + k b2, -k b1 - dx bt3, dx bt2 - dy bt1).
Field6 circ_curl(const Field6& u, double k);

// Direct 6x6 stencil of the displayed operator matrix (wide 2h second
// differences so the factorization through circ_curl is exact).
Field6 apply_L_stencil(const Field6& u, double k);
// circ_curl(circ_curl(u)).
Field6 apply_L_curlcurl(const Field6& u, double k);
inline Field6 apply_L(const Field6& u, double k) { return apply_L_stencil(u, k); }

// Real symmetric Fourier symbol at frequency xi in the cos/sin-paired
// convention: u = (A cos(xi.x), At sin(xi.x)) maps to (M A cos, M At sin).
// Eigenvalues are {0 x2, |xi|^2 + k^2 x4}.
using Matrix6 = std::array<std::array<double, 6>, 6>;
Matrix6 symbol_L(double xi1, double xi2, double k);
// Ascending eigenvalues of symbol_L.
std::array<double, 6> symbol_eigenvalues(double xi1, double xi2, double k);

// Discrete wavenumber of the central-difference stencil for integer mode m:
// sin(2 pi m / n) / h.
double discrete_freq(const Grid2D& g, int axis, int m);

// Divergence-type quantities defining the space V:
//   div1 u = dx u1 + dy u2 + k u6,   div2 u = dx u4 + dy u5 - k u3.
void divergences(const Field6& u, double k, ScalarPlane& d1, ScalarPlane& d2);
// Negative divergences as a ScalarPair: the L2-adjoint of circ_grad.
ScalarPair circ_grad_adjoint(const Field6& u, double k);

struct HelmholtzParts {
    Field6 v;              // divergence-constrained part
    Field6 w;              // circ_grad(potentials)
    ScalarPair potentials;
};

// Solves (-Lap_wide + k^2) a = -div1 u (and tilde) by FFT diagonalization
// and returns w = circ_grad(a, at), v = u - w.  The wide Laplacian is the
// composition of the same first-difference stencils, so div(v) vanishes to
// roundoff.
HelmholtzParts helmholtz_split(const Field6& u, double k);

// Projection onto V: u - circ_grad(potentials(u)).
Field6 project_V(const Field6& u, double k);

// Solve (-Lap_wide + k^2) out = rhs componentwise for a scalar pair.
ScalarPair solve_shifted_laplace(const ScalarPair& rhs, double k);

// b_L(u,v) = h^2 sum < curl u, curl v >.
double bilinear_bL(const Field6& u, const Field6& v, double k);

// Discrete V-norm squared: sum over components of |D u_c|_2^2 + k^2 |u_c|_2^2.
double vnorm_sq(const Field6& u, double k);

// Dual (negative-order) norm of a V-gradient: |(-Lap_wide + k^2)^(-1/2) g|_2
// computed by FFT, used for Cerami residuals.
double vdual_norm(const Field6& g, double k);

}  // namespace emtw

#endif
