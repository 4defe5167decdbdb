#include "doctest.h"
#include "gtr/verify.hpp"

using namespace gtr;

namespace {

const Point kZero = Point::finite(0);
const char* kAiry = "dx = z dz; dy = dz; keys = [0]";
const char* kCubic = "dx = z^2 dz; dy = dz; keys = [0]";
const char* kBessel = "dx = z dz; dy = -1/z^2 dz; keys = [0]";

}  // namespace

TEST_CASE("loop equations") {
  for (const char* text : {kAiry, kCubic, "dx = z + z^2 dz; dy = dz; keys = [-1, 0]"}) {
    GeneralizedTR e(parse_curve(text));
    VerificationReport r = loop_suite(e, 2);
    CHECK_MESSAGE(r.passed(), text);
  }
}

TEST_CASE("linear loop equation on Airy") {
  GeneralizedTR e(parse_curve(kAiry));
  e.get(1, 1);
  VerificationReport r = loop_check(e.curve(), e, kZero, 1, 0, 0);
  CHECK(r.passed());
  CHECK(r.params["r"] == 2);
}

TEST_CASE("loop equations with a shifted primitive") {
  GeneralizedTR e(parse_curve(kCubic));
  e.get(0, 4);
  CHECK(loop_check(e.curve(), e, kZero, 0, 2, 3, Rational(7, 5)).passed());
  CHECK(loop_check(e.curve(), e, kZero, 1, 1, 3, Rational(-2)).passed());
}

TEST_CASE("negative control") {
  GeneralizedTR e(parse_curve(kAiry));
  for (auto [g, n] : {std::pair{0, 2}, {1, 0}, {1, 1}}) {
    VerificationReport r = loop_negative_control(e, kZero, g, n);
    CHECK(r.passed());
    CHECK(r.params["runs"].size() >= 2);
  }
  // A perturbed cell is caught directly.
  MultiDifferential w = e.get(1, 1);
  w.add({PoleIndex{kZero, 3}}, Rational(1));
  ReplacedCell cells(e, 1, 1, w.tensor());
  VerificationReport r = loop_check(e.curve(), cells, kZero, 1, 0, 1);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.witnesses[0]["exponent"] == -3);
}

TEST_CASE("loop hypotheses") {
  GeneralizedTR e(parse_curve(kBessel));
  e.get(1, 1);
  CHECK_THROWS_WITH_AS(loop_check(e.curve(), e, kZero, 1, 0, 1), doctest::Contains("HypothesisViolated"), Error);
  CHECK(loop_suite(e, 2).verdict == Verdict::NotApplicable);
  CHECK_FALSE(loop_applicable(parse_curve(kAiry), Point::finite(1)));
}

TEST_CASE("determinantal identities") {
  for (const char* text : {kAiry, kBessel, "dx = -z^-3 dz; dy = -z^-2 dz; keys = [inf]"}) {
    SpectralCurve c = parse_curve(text);
    Cells cells = generalized_tr(c, 3);
    CHECK_MESSAGE(determinantal_check(c, cells, 3, 3).passed(), text);
  }
}

TEST_CASE("cyclic sum reproduces omega^(1)_2") {
  SpectralCurve c = parse_curve(kAiry);
  Cells cells = generalized_tr(c, 2);
  BAKernel K = ba_kernel(c, cells, 2);
  CHECK(K.h[0] == MPoly{{{0, 0}, Rational(1)}});
  MultiDifferential w = cyclic_sum(K, 2, 2);
  CHECK(w.coefficient({PoleIndex{kZero, 1}, PoleIndex{kZero, 5}}) == Rational(1, 8));
  CHECK(w.coefficient({PoleIndex{kZero, 3}, PoleIndex{kZero, 3}}) == Rational(1, 24));
  CHECK(w == cells.at({1, 2}));
  CHECK(cyclic_sum(K, 2, 1).is_zero());
}

TEST_CASE("determinantal check catches a wrong cell") {
  SpectralCurve c = parse_curve(kAiry);
  Cells cells = generalized_tr(c, 2);
  cells.at({0, 4}).add_symmetric({PoleIndex{kZero, 1}, PoleIndex{kZero, 1}, PoleIndex{kZero, 1}, PoleIndex{kZero, 1}},
                                 Rational(1));
  VerificationReport r = determinantal_check(c, cells, 4, 2);
  CHECK(r.verdict == Verdict::Fail);
}

TEST_CASE("determinantal check needs one pole point") {
  SpectralCurve c = parse_curve("dx = z + z^2 dz; dy = dz; keys = [-1, 0]");
  CHECK(determinantal_check(c, generalized_tr(c, 1), 2, 1).verdict == Verdict::NotApplicable);
}

TEST_CASE("engine comparison") {
  CHECK(compare_engines(parse_curve(kAiry), 3).passed());
  VerificationReport r = compare_engines(parse_curve(kBessel), 3);
  CHECK(r.verdict == Verdict::NotApplicable);
}

TEST_CASE("symmetry check") {
  SpectralCurve c = parse_curve(kAiry);
  Cells cells = generalized_tr(c, 3);
  CHECK(symmetry_check(c, cells).passed());
  cells.at({1, 2}).add({PoleIndex{kZero, 1}, PoleIndex{kZero, 3}}, Rational(1));
  VerificationReport r = symmetry_check(c, cells);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.witnesses[0]["defect"] == "1");
}

TEST_CASE("dual checks") {
  SpectralCurve airy = parse_curve(kAiry);
  CHECK(dual_trivial_check(airy, generalized_tr(airy, 2), 2).passed());
  SpectralCurve mixed = parse_curve("dx = z - 1 dz; dy = z + 1 dz; keys = [1]");
  Cells omega = generalized_tr(mixed, 2);
  CHECK(dual_trivial_check(mixed, omega, 2).verdict == Verdict::NotApplicable);
  auto reports = dual_checks(mixed, omega, 2);
  REQUIRE(reports.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK_MESSAGE(reports[i].passed(), reports[i].check);
}
