#include "mw/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "mw/error.hpp"

namespace mw {

bool FundamentalDomain::contains(cplx z) const {
  const double r = std::abs(z);
  return r >= 1.0 - 1e-14 && r <= rho_max * (1.0 + 1e-14) && domain.contains(z);
}

cplx FundamentalDomain::representative(cplx z) const { return std::abs(z) >= 1.0 ? z : involution(z); }

FundamentalDomain fundamental_domain(const Domain& d, double rho_max) {
  if (!(rho_max > 1.0)) throw ConfigError("fundamental domain needs rho_max > 1");
  return FundamentalDomain{d, rho_max};
}

std::array<int, 3> default_projection(int n) {
  if (n < 3) throw ArgumentError("mesh projection needs at least 3 coordinates");
  if (n == 3) return {0, 1, 2};
  return {n - 3, n - 2, n - 1};
}

QuotientMesh triangulate_and_weld(const FundamentalDomain& region, const Surface& x, int n_rho, int n_theta) {
  return triangulate_and_weld(region, x, n_rho, n_theta, default_projection(x.dim()));
}

QuotientMesh triangulate_and_weld(const FundamentalDomain& region, const Surface& x, int n_rho, int n_theta,
                                  std::array<int, 3> projection, double seam_tol) {
  if (n_rho < 8 || n_theta < 8) throw ArgumentError("mesh resolution must be at least 8x8");
  if (n_theta % 2 != 0) throw ArgumentError("mesh angular resolution must be even");
  const int n = x.dim();
  for (int c : projection)
    if (c < 0 || c >= n) throw ArgumentError("projection coordinate out of range");

  std::vector<double> radii(n_rho), angles(n_theta);
  for (int i = 0; i < n_rho; ++i) radii[i] = std::pow(region.rho_max, static_cast<double>(i) / (n_rho - 1));
  for (int j = 0; j < n_theta; ++j) angles[j] = 2.0 * kPi * j / n_theta;
  const std::vector<RVec> vals = x.sample_polar(radii, angles);

  const int half = n_theta / 2;
  auto grid = [n_theta](int i, int j) { return i * n_theta + ((j % n_theta) + n_theta) % n_theta; };
  // Welded index of each grid vertex: ring 0 folds onto its first half.
  auto weld = [&](int i, int j) {
    j = ((j % n_theta) + n_theta) % n_theta;
    if (i == 0 && j >= half) j -= half;
    return grid(i, j);
  };

  QuotientMesh m;
  m.projection = projection;
  double seam = 0.0;
  for (int j = 0; j < half; ++j) {
    const RVec& a = vals[grid(0, j)];
    const RVec& b = vals[grid(0, j + half)];
    if (!a.allFinite() || !b.allFinite()) continue;
    seam = std::max(seam, (a - b).norm() / std::max(1.0, a.norm()));
  }
  m.seam_discrepancy = seam;
  if (!(seam < seam_tol)) {
    std::ostringstream os;
    os << "seam mismatch " << seam << " exceeds " << seam_tol << ": the map is not involution-invariant";
    throw ValidationError(os.str());
  }

  auto usable = [&](int g) { return region.contains(std::polar(radii[g / n_theta], angles[g % n_theta])) &&
                                    vals[g].allFinite(); };
  // Cells whose sector holds a puncture are dropped even when no vertex is excluded.
  auto covers_puncture = [&](int i, int j) {
    for (cplx q : region.domain.special_points()) {
      const double r = std::abs(q);
      if (r < radii[i] || r > radii[i + 1]) continue;
      const double t = std::remainder(std::arg(q) - angles[j], 2.0 * kPi);
      const double span = 2.0 * kPi / n_theta;
      if (t >= 0.0 && t <= span) return true;
    }
    return false;
  };
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i + 1 < n_rho; ++i)
    for (int j = 0; j < n_theta; ++j) {
      if (covers_puncture(i, j)) continue;
      const int a = weld(i, j), b = weld(i, j + 1), c = weld(i + 1, j + 1), d = weld(i + 1, j);
      for (const std::array<int, 3>& t : {std::array<int, 3>{a, b, c}, std::array<int, 3>{a, c, d}})
        if (usable(t[0]) && usable(t[1]) && usable(t[2])) tris.push_back(t);
    }

  std::vector<int> index(vals.size(), -1);
  for (std::size_t g = 0; g < vals.size(); ++g) {
    if (g < static_cast<std::size_t>(n_theta) && static_cast<int>(g) >= half) continue;
    if (!usable(static_cast<int>(g))) continue;
    index[g] = static_cast<int>(m.params.size());
    m.params.push_back(std::polar(radii[g / n_theta], angles[g % n_theta]));
    m.images.push_back(vals[g]);
    m.positions.push_back({vals[g][projection[0]], vals[g][projection[1]], vals[g][projection[2]]});
  }
  for (int j = 0; j < half; ++j)
    if (index[grid(0, j)] >= 0) m.seam.emplace_back(index[grid(0, j)], grid(0, j + half));
  for (const auto& t : tris) m.triangles.push_back({index[t[0]], index[t[1]], index[t[2]]});
  return m;
}

MeshTopology analyze_topology(const QuotientMesh& m) {
  MeshTopology top;
  top.vertices = static_cast<int>(m.positions.size());
  top.faces = static_cast<int>(m.triangles.size());
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < top.faces; ++f)
    for (int k = 0; k < 3; ++k) {
      int a = m.triangles[f][k], b = m.triangles[f][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_faces[{a, b}].push_back(f);
    }
  top.edges = static_cast<int>(edge_faces.size());
  top.edge_manifold = true;
  for (const auto& [e, fs] : edge_faces) {
    if (fs.size() == 1) ++top.boundary_edges;
    if (fs.size() > 2 || e.first == e.second) top.edge_manifold = false;
  }
  top.euler = top.vertices - top.edges + top.faces;

  // Propagate orientations over the dual graph; flip[f] reverses triangle f.
  auto direction = [&](int f, int a, int b) {
    const auto& t = m.triangles[f];
    for (int k = 0; k < 3; ++k)
      if (t[k] == a && t[(k + 1) % 3] == b) return 1;
    return -1;
  };
  std::vector<int> flip(top.faces, 0);
  std::vector<bool> seen(top.faces, false);
  std::map<std::pair<int, int>, bool> conflict;
  for (int s = 0; s < top.faces; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        int a = m.triangles[f][k], b = m.triangles[f][(k + 1) % 3];
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        for (int g : edge_faces[key]) {
          if (g == f) continue;
          // Consistent orientations traverse a shared edge in opposite directions.
          const int want = (direction(f, a, b) * (flip[f] ? -1 : 1) == direction(g, a, b)) ? 1 : 0;
          if (!seen[g]) {
            seen[g] = true;
            flip[g] = want;
            q.push(g);
          } else if (flip[g] != want) {
            conflict[key] = true;
          }
        }
      }
    }
  }
  top.parity_conflicts = static_cast<int>(conflict.size());
  top.orientable = top.parity_conflicts == 0;
  return top;
}

namespace {

void append(std::string& s, const char* fmt, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  s += buf;
}

void require_nonempty(const QuotientMesh& m) {
  if (m.empty()) throw ValidationError("cannot export an empty mesh");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing", path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path, path);
}

}  // namespace

std::string obj_text(const QuotientMesh& m) {
  require_nonempty(m);
  std::string s = "o quotient\n";
  for (const auto& p : m.positions) append(s, "v %.9g %.9g %.9g\n", p[0], p[1], p[2]);
  for (const auto& t : m.triangles) s += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " +
                                        std::to_string(t[2] + 1) + "\n";
  return s;
}

std::string ply_text(const QuotientMesh& m) {
  require_nonempty(m);
  std::string s = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(m.positions.size()) +
                  "\nproperty double x\nproperty double y\nproperty double z\nelement face " +
                  std::to_string(m.triangles.size()) + "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& p : m.positions) append(s, "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
  for (const auto& t : m.triangles)
    s += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  return s;
}

void export_obj(const QuotientMesh& m, const std::string& path) { write_file(path, obj_text(m)); }
void export_ply(const QuotientMesh& m, const std::string& path) { write_file(path, ply_text(m)); }

}  // namespace mw
