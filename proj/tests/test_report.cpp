#include <doctest.h>

#include "zeropack/report.hpp"

using namespace zeropack;

TEST_CASE("polynomial JSON round trip") {
  const ComplexPolynomial p({{1.5, -2.0}, {0.0, 0.25}});
  const Json j = polynomial_to_json(p);
  CHECK(j.dump() == "[[1.5,-2.0],[0.0,0.25]]");
  CHECK(polynomial_from_json(j) == p);
  CHECK(polynomial_from_json(Json::parse("[1, 2]")) == ComplexPolynomial({1.0, 2.0}));
  CHECK(polynomial_from_json(Json::parse(R"({"minimizer": [[0, 1]]})")) == ComplexPolynomial({cplx{0, 1}}));
  CHECK_THROWS_AS(polynomial_from_json(Json::parse("[]")), InvalidArgumentError);
  CHECK_THROWS_AS(polynomial_from_json(Json::parse("[[1, 2, 3]]")), InvalidArgumentError);
  CHECK_THROWS_AS(polynomial_from_json(Json::parse(R"({"x": 1})")), InvalidArgumentError);
}

TEST_CASE("gap report fields follow the geometry") {
  GapReport rep;
  rep.geometry = Geometry::planar;
  Json j = to_json(rep);
  CHECK_FALSE(j.contains("sigma_sq_estimate"));
  rep.geometry = Geometry::hyperbolic;
  rep.sigma_sq_estimate = 0.9;
  j = to_json(rep);
  CHECK(j.at("sigma_sq_estimate") == 0.9);
  for (const char* key : {"geometry", "param", "delta", "degree", "rho_unstarred", "rho_starred_nu", "gap",
                          "dbar_lhs", "dbar_rhs", "boundary_mass_l1", "boundary_mass_l2", "version",
                          "grid_resolution"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("version string") {
  const std::string v = version();
  CHECK(v.rfind("0.", 0) == 0);
}
