#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mw/error.hpp"
#include "mw/mesh.hpp"
#include "support.hpp"

using namespace mw;

namespace {

const FunctionSurface& mobius_surface() {
  static const FunctionSurface x(4, [](cplx z) { return mwtest::mobius_closed_form(z); });
  return x;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) { return std::string(MW_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("fundamental domain") {
  const FundamentalDomain f = fundamental_domain(Domain::punctured_plane(), 4.0);
  CHECK(f.contains(2.0));
  CHECK(f.contains(1.0));
  CHECK_FALSE(f.contains(0.5));
  CHECK_FALSE(f.contains(5.0));
  CHECK(std::abs(f.representative(0.5) - cplx(-2.0)) < 1e-15);
  CHECK(f.representative(cplx(0.0, 3.0)) == cplx(0.0, 3.0));
  CHECK(FundamentalDomain::seam_partner(cplx(0.6, 0.8)) == cplx(-0.6, -0.8));
  CHECK_THROWS_AS(fundamental_domain(Domain::punctured_plane(), 1.0), ConfigError);
  const FundamentalDomain p = fundamental_domain(Domain::with_pairs({cplx(2.0)}), 4.0);
  CHECK_FALSE(p.contains(2.0));
  CHECK(p.contains(3.0));
}

TEST_CASE("default projection") {
  CHECK(default_projection(3) == std::array<int, 3>{0, 1, 2});
  CHECK(default_projection(4) == std::array<int, 3>{1, 2, 3});
  CHECK_THROWS_AS(default_projection(2), ArgumentError);
}

TEST_CASE("welded mesh of the R^4 surface is a Moebius band") {
  const FundamentalDomain f = fundamental_domain(Domain::punctured_plane(), 8.0);
  const QuotientMesh m = triangulate_and_weld(f, mobius_surface(), 64, 128);
  CHECK(m.positions.size() == 64 * 128 - 64);
  CHECK(m.params.size() == m.positions.size());
  CHECK(m.seam.size() == 64);
  CHECK(m.triangles.size() == 2 * 63 * 128);
  CHECK(m.seam_discrepancy < 1e-12);
  CHECK(m.projection == std::array<int, 3>{1, 2, 3});
  CHECK(std::abs(std::abs(m.params.back()) - 8.0) < 1e-12);
  for (const auto& t : m.triangles)
    for (int v : t) CHECK((v >= 0 && v < static_cast<int>(m.positions.size())));

  const MeshTopology t = analyze_topology(m);
  CHECK(t.edge_manifold);
  CHECK(t.euler == 0);
  CHECK_FALSE(t.orientable);
  CHECK(t.parity_conflicts > 0);
  CHECK(t.boundary_edges == 128);  // the single outer boundary circle
  CHECK(t.vertices - t.edges + t.faces == t.euler);
}

TEST_CASE("punctured fundamental domain loses a disk") {
  const FundamentalDomain f = fundamental_domain(Domain::with_pairs({cplx(2.0)}), 4.0);
  const QuotientMesh m = triangulate_and_weld(f, mobius_surface(), 48, 96);
  const MeshTopology t = analyze_topology(m);
  CHECK(t.edge_manifold);
  CHECK(t.euler == -1);
  CHECK_FALSE(t.orientable);
  for (const cplx& z : m.params) CHECK(f.contains(z));
}

TEST_CASE("a surface that is not I-invariant fails to weld") {
  const FunctionSurface plain(3, [](cplx z) {
    RVec v(3);
    v << z.real(), z.imag(), 0.0;
    return v;
  });
  CHECK_THROWS_AS(triangulate_and_weld(fundamental_domain(Domain::punctured_plane()), plain, 16, 32), ValidationError);
}

TEST_CASE("resolution and projection errors") {
  const FundamentalDomain f = fundamental_domain(Domain::punctured_plane());
  CHECK_THROWS_AS(triangulate_and_weld(f, mobius_surface(), 4, 32), ArgumentError);
  CHECK_THROWS_AS(triangulate_and_weld(f, mobius_surface(), 16, 33), ArgumentError);
  CHECK_THROWS_AS(triangulate_and_weld(f, mobius_surface(), 16, 32, {0, 1, 4}), ArgumentError);
}

TEST_CASE("an orientable hand-built mesh") {
  QuotientMesh m;
  m.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.params = {0.0, 1.0, cplx(1, 1), cplx(0, 1)};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  const MeshTopology t = analyze_topology(m);
  CHECK(t.orientable);
  CHECK(t.parity_conflicts == 0);
  CHECK(t.euler == 1);
  CHECK(t.boundary_edges == 4);
  CHECK(t.edge_manifold);
  m.triangles.push_back({0, 2, 1});
  CHECK_FALSE(analyze_topology(m).edge_manifold);
}

TEST_CASE("exports") {
  const FundamentalDomain f = fundamental_domain(Domain::punctured_plane(), 4.0);
  const QuotientMesh m = triangulate_and_weld(f, mobius_surface(), 8, 16);
  const std::string obj = obj_text(m);
  CHECK(obj.rfind("o quotient\n", 0) == 0);
  std::istringstream in(obj);
  std::string line;
  int v = 0, faces = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) {
      ++faces;
      std::istringstream fs(line.substr(2));
      int a, b, c;
      fs >> a >> b >> c;
      CHECK(std::min({a, b, c}) >= 1);
      CHECK(std::max({a, b, c}) <= static_cast<int>(m.positions.size()));
    }
  }
  CHECK(v == static_cast<int>(m.positions.size()));
  CHECK(faces == static_cast<int>(m.triangles.size()));

  const std::string ply = ply_text(m);
  CHECK(ply.rfind("ply\nformat ascii 1.0\n", 0) == 0);
  CHECK(ply.find("element vertex " + std::to_string(m.positions.size())) != std::string::npos);
  CHECK(ply.find("element face " + std::to_string(m.triangles.size())) != std::string::npos);

  export_obj(m, tmp_path("a.obj"));
  export_obj(triangulate_and_weld(f, mobius_surface(), 8, 16), tmp_path("b.obj"));
  CHECK(slurp(tmp_path("a.obj")) == obj);
  CHECK(slurp(tmp_path("a.obj")) == slurp(tmp_path("b.obj")));
  export_ply(m, tmp_path("a.ply"));
  CHECK(slurp(tmp_path("a.ply")) == ply);
  std::remove(tmp_path("a.obj").c_str());
  std::remove(tmp_path("b.obj").c_str());
  std::remove(tmp_path("a.ply").c_str());
}

TEST_CASE("export errors") {
  const FundamentalDomain f = fundamental_domain(Domain::punctured_plane(), 4.0);
  const QuotientMesh m = triangulate_and_weld(f, mobius_surface(), 8, 16);
  try {
    export_obj(m, "/nonexistent-dir/x.obj");
    FAIL("expected an io error");
  } catch (const IoError& e) {
    CHECK(e.path() == "/nonexistent-dir/x.obj");
  }
  CHECK_THROWS_AS(export_ply(m, "/nonexistent-dir/x.ply"), IoError);
  CHECK_THROWS_AS(export_obj(QuotientMesh{}, tmp_path("empty.obj")), ValidationError);
}
