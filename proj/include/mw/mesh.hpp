#pragma once

#include <array>
#include <string>
#include <vector>

#include "mw/domain.hpp"
#include "mw/immersion.hpp"

namespace mw {

/// {1 <= |z| <= rho_max} minus puncture disks, with z ~ -z on |z| = 1.
struct FundamentalDomain {
  Domain domain;
  double rho_max = 8.0;

  bool contains(cplx z) const;
  /// The representative of the orbit {z, I(z)} with |z| >= 1.
  cplx representative(cplx z) const;
  /// Image of a seam point under the identification.
  static cplx seam_partner(cplx z) { return -z; }
};

FundamentalDomain fundamental_domain(const Domain& d, double rho_max = 8.0);

struct QuotientMesh {
  std::vector<cplx> params;                       ///< domain point per vertex
  std::vector<RVec> images;                       ///< full X value per vertex
  std::vector<std::array<double, 3>> positions;   ///< projected coordinates
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::pair<int, int>> seam;          ///< (kept vertex, merged partner grid index)
  std::array<int, 3> projection{0, 1, 2};
  double seam_discrepancy = 0.0;                  ///< max |X(z) - X(-z)| / max(1, |X|) on the seam

  bool empty() const { return triangles.empty() || positions.empty(); }
};

/// Default coordinates kept for an n-dimensional image: the first three for
/// n = 3, the last three otherwise.
std::array<int, 3> default_projection(int n);

/// Geometric radial grading 1 = r_0 < ... < r_{n_rho-1} = rho_max and
/// n_theta angles; ring 0 keeps n_theta/2 vertices after welding.
QuotientMesh triangulate_and_weld(const FundamentalDomain& region, const Surface& x, int n_rho, int n_theta,
                                  std::array<int, 3> projection, double seam_tol = 1e-8);
QuotientMesh triangulate_and_weld(const FundamentalDomain& region, const Surface& x, int n_rho, int n_theta);

struct MeshTopology {
  bool edge_manifold = false;
  int vertices = 0, edges = 0, faces = 0;
  int boundary_edges = 0;
  int euler = 0;
  int parity_conflicts = 0;
  bool orientable = true;
};

MeshTopology analyze_topology(const QuotientMesh& m);

std::string obj_text(const QuotientMesh& m);
std::string ply_text(const QuotientMesh& m);
void export_obj(const QuotientMesh& m, const std::string& path);
void export_ply(const QuotientMesh& m, const std::string& path);

}  // namespace mw
