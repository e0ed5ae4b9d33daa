#pragma once

#include <optional>

#include "urigid/framework.hpp"
#include "urigid/gale.hpp"

namespace urigid {

/// Nonzero symmetric r x r matrix with d^T Phi d = 0 for every edge
/// direction d = p^i - p^j.
struct QuadricWitness {
  Matrix phi;
};

/// Coefficients y_kl on the missing edges, aligned with Graph::non_edges().
struct MissingEdgeCoeffs {
  Vector y;
};

/// q = A p + b.
struct AffineMotion {
  Matrix A;
  Vector b;
};

/// n x (n-1) matrix with V^T e = 0 and V^T V = I.
struct ProjectionV {
  Matrix V;
};

struct AffineFlex {
  AffineMotion motion;
  Configuration flexed;
  double t = 0.0;
};

/// Number of free entries of a symmetric r x r matrix.
inline int sym_dim(int r) { return r * (r + 1) / 2; }

/// Packs the upper triangle (row-major) of a symmetric matrix.
Vector pack_symmetric(const Matrix& phi);
Matrix unpack_symmetric(const Vector& coeffs, int r);

/// m x r(r+1)/2 matrix; row k holds the quadratic-form coefficients of edge
/// direction d: d_a^2 on diagonal slots, 2 d_a d_b on off-diagonal slots.
Matrix edge_quadric_system(const Framework& fw);

/// Unit-Frobenius Phi from the smallest-singular-value kernel direction of
/// edge_quadric_system, first nonzero entry positive; none if the kernel is
/// trivial.
std::optional<QuadricWitness> detect_quadric_at_infinity(const Framework& fw,
                                                         const Tolerances& tol = {});

/// max over edges of |d^T Phi d| / (|Phi|_F * max |d|^2).
double quadric_residual(const Framework& fw, const Matrix& phi);

/// Householder completion of e / sqrt(n). Throws Error for n < 2.
ProjectionV build_projection_V(int n);

/// Symmetric n x n matrix: y on non-edges, zero on edges and diagonal.
Matrix assemble_E(const Framework& fw, const MissingEdgeCoeffs& y);

/// ((n-1) r̄) x m̄ matrix of y -> vec(V^T E(y) Z) (column-major vec).
/// Throws Error for complete graphs.
Matrix missing_edge_system(const Framework& fw, const Matrix& Z);
Matrix missing_edge_system(const Framework& fw, const Matrix& Z, const ProjectionV& V);

/// (n r̄) x m̄ matrix of y -> vec(E(y) Z_hat). Throws Error for complete
/// graphs or when Z_hat breaks the canonical zero pattern.
Matrix missing_edge_system_canonical(const Framework& fw, const CanonicalGaleMatrix& zhat);

/// Builds the flex q = A p with A = sqrt(I + t Phi), t = 1 / (2 max|eig Phi|).
/// Edge lengths are preserved and A is symmetric positive definite, A != I.
AffineFlex flex_motion_from_quadric(const Framework& fw, const QuadricWitness& w,
                                    const Tolerances& tol = {});

}  // namespace urigid
