#include "urigid/affine.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace urigid {

Vector pack_symmetric(const Matrix& phi) {
  const int r = static_cast<int>(phi.rows());
  Vector out(sym_dim(r));
  int slot = 0;
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) out(slot++) = phi(a, b);
  return out;
}

Matrix unpack_symmetric(const Vector& coeffs, int r) {
  if (coeffs.size() != sym_dim(r)) throw Error("unpack_symmetric: wrong coefficient count");
  Matrix phi(r, r);
  int slot = 0;
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) {
      phi(a, b) = coeffs(slot);
      phi(b, a) = coeffs(slot);
      ++slot;
    }
  return phi;
}

Matrix edge_quadric_system(const Framework& fw) {
  const int r = fw.dimension();
  const auto& edges = fw.graph().edges();
  const auto& p = fw.config().points();
  Matrix sys(static_cast<Eigen::Index>(edges.size()), sym_dim(r));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Vector d = p.col(edges[k].first) - p.col(edges[k].second);
    int slot = 0;
    for (int a = 0; a < r; ++a)
      for (int b = a; b < r; ++b)
        sys(static_cast<Eigen::Index>(k), slot++) = (a == b ? 1.0 : 2.0) * d(a) * d(b);
  }
  return sys;
}

std::optional<QuadricWitness> detect_quadric_at_infinity(const Framework& fw, const Tolerances& tol) {
  const Matrix kernel = nullspace_basis(edge_quadric_system(fw), tol);
  if (kernel.cols() == 0) return std::nullopt;
  Matrix phi = unpack_symmetric(kernel.col(kernel.cols() - 1), fw.dimension());
  phi /= phi.norm();
  const double cutoff = tol.rank_rtol;
  for (Eigen::Index a = 0; a < phi.rows(); ++a) {
    for (Eigen::Index b = 0; b < phi.cols(); ++b) {
      if (std::abs(phi(a, b)) > cutoff) {
        if (phi(a, b) < 0.0) phi = -phi;
        return QuadricWitness{phi};
      }
    }
  }
  return QuadricWitness{phi};
}

double quadric_residual(const Framework& fw, const Matrix& phi) {
  const double fro = phi.norm();
  if (fro == 0.0) return std::numeric_limits<double>::infinity();
  const auto& p = fw.config().points();
  double worst = 0.0;
  double longest = 0.0;
  for (const auto& [i, j] : fw.graph().edges()) {
    const Vector d = p.col(i) - p.col(j);
    worst = std::max(worst, std::abs(d.dot(phi * d)));
    longest = std::max(longest, d.squaredNorm());
  }
  return longest == 0.0 ? 0.0 : worst / (fro * longest);
}

ProjectionV build_projection_V(int n) {
  if (n < 2) throw Error("build_projection_V: n must be at least 2");
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  v(0) -= 1.0;
  const Matrix h = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
  return {h.rightCols(n - 1)};
}

Matrix assemble_E(const Framework& fw, const MissingEdgeCoeffs& y) {
  const auto missing = fw.graph().non_edges();
  if (y.y.size() != static_cast<Eigen::Index>(missing.size()))
    throw Error("assemble_E: y has " + std::to_string(y.y.size()) + " entries but the graph has " +
                std::to_string(missing.size()) + " missing edges");
  const int n = fw.num_nodes();
  Matrix e = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < missing.size(); ++k) {
    const auto [i, j] = missing[k];
    e(i, j) = e(j, i) = y.y(static_cast<Eigen::Index>(k));
  }
  return e;
}

namespace {

void require_missing_edges(const Framework& fw, const char* what) {
  if (fw.graph().is_complete())
    throw Error(std::string(what) + ": graph is complete, there are no missing edges");
}

void require_rows(const Framework& fw, const Matrix& Z, const char* what) {
  if (Z.rows() != fw.num_nodes() || Z.cols() < 1)
    throw Error(std::string(what) + ": Gale matrix has the wrong shape");
}

}  // namespace

Matrix missing_edge_system(const Framework& fw, const Matrix& Z) {
  return missing_edge_system(fw, Z, build_projection_V(fw.num_nodes()));
}

Matrix missing_edge_system(const Framework& fw, const Matrix& Z, const ProjectionV& V) {
  require_missing_edges(fw, "missing_edge_system");
  require_rows(fw, Z, "missing_edge_system");
  const auto missing = fw.graph().non_edges();
  const Eigen::Index n1 = V.V.cols();
  const Eigen::Index rbar = Z.cols();
  Matrix sys(n1 * rbar, static_cast<Eigen::Index>(missing.size()));
  Matrix block(n1, rbar);
  for (std::size_t k = 0; k < missing.size(); ++k) {
    const auto [i, j] = missing[k];
    // E^{ij} Z has Z's row j in row i and Z's row i in row j.
    block.noalias() = V.V.row(i).transpose() * Z.row(j);
    block.noalias() += V.V.row(j).transpose() * Z.row(i);
    sys.col(static_cast<Eigen::Index>(k)) = block.reshaped();
  }
  return sys;
}

Matrix missing_edge_system_canonical(const Framework& fw, const CanonicalGaleMatrix& zhat) {
  require_missing_edges(fw, "missing_edge_system_canonical");
  const Matrix& z = zhat.Z;
  require_rows(fw, z, "missing_edge_system_canonical");
  const int n = fw.num_nodes();
  const int r = fw.dimension();
  const int rbar = static_cast<int>(z.cols());
  if (rbar != n - 1 - r) throw Error("missing_edge_system_canonical: Gale matrix has the wrong shape");
  for (int j = 0; j < rbar; ++j)
    for (int i : fw.graph().non_neighbors(r + 1 + j))
      if (z(i, j) != 0.0)
        throw Error("missing_edge_system_canonical: Z_hat is not canonical (nonzero at row " +
                    std::to_string(i + 1) + ", column " + std::to_string(j + 1) + ")");
  const auto missing = fw.graph().non_edges();
  Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(n) * rbar, static_cast<Eigen::Index>(missing.size()));
  for (std::size_t k = 0; k < missing.size(); ++k) {
    const auto [i, j] = missing[k];
    const auto col = static_cast<Eigen::Index>(k);
    for (int c = 0; c < rbar; ++c) {
      sys(static_cast<Eigen::Index>(c) * n + i, col) = z(j, c);
      sys(static_cast<Eigen::Index>(c) * n + j, col) = z(i, c);
    }
  }
  return sys;
}

AffineFlex flex_motion_from_quadric(const Framework& fw, const QuadricWitness& w, const Tolerances& tol) {
  const int r = fw.dimension();
  const Matrix& phi = w.phi;
  if (phi.rows() != r || phi.cols() != r) throw Error("flex_motion_from_quadric: Phi has the wrong shape");
  require_finite(phi, "flex_motion_from_quadric");
  if (phi.norm() == 0.0) throw Error("flex_motion_from_quadric: Phi is zero");
  if (max_abs(phi - phi.transpose()) > tol.residual_atol * phi.norm())
    throw Error("flex_motion_from_quadric: Phi is not symmetric");
  const double res = quadric_residual(fw, phi);
  if (res > tol.residual_atol)
    throw Error("flex_motion_from_quadric: Phi does not annihilate the edge directions (residual " +
                std::to_string(res) + ")");

  const SymEigen eig = sym_eigen(phi, tol);
  const double radius = eig.values.cwiseAbs().maxCoeff();
  const double t = 1.0 / (2.0 * radius);
  const Matrix sym = 0.5 * (phi + phi.transpose());
  const Matrix a = psd_sqrt(Matrix::Identity(r, r) + t * sym, tol);
  Matrix q = a * fw.config().points();
  return {AffineMotion{a, Vector::Zero(r)}, Configuration(std::move(q)), t};
}

}  // namespace urigid
