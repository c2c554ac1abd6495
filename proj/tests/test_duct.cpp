#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ductflow/duct.hpp"
#include "ductflow/pchip.hpp"

using namespace ductflow;

TEST_CASE("preset profile values") {
  const DuctProfile e1 = DuctProfile::exp1();
  ProfileSample s = e1.eval(1.0);
  CHECK(s.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.da == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.k == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.dk == doctest::Approx(-3.0).epsilon(1e-15));

  const DuctProfile e2 = DuctProfile::exp2();
  s = e2.eval(1.0);
  CHECK(s.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.da == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.k == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.dk == doctest::Approx(-2.0).epsilon(1e-15));

  const DuctProfile sph = DuctProfile::spherical(3, 1.0, 4.0);
  s = sph.eval(2.0);
  CHECK(s.a == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s.da == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s.k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.dk == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("presets keep k = a'/a and monotone-decreasing k") {
  for (const DuctProfile& p :
       {DuctProfile::exp1(), DuctProfile::exp2(),
        DuctProfile::spherical(3, 1.0, DuctProfile::kInfiniteEnd)}) {
    double prev_k = 1e300;
    for (double x : linspace(1.0, 10.0, 181)) {
      const ProfileSample s = p.eval(x);
      CHECK(s.k == doctest::Approx(s.da / s.a).epsilon(1e-12));
      CHECK(s.k > 0.0);
      CHECK(s.dk < 0.0);
      CHECK(s.k < prev_k);
      prev_k = s.k;
    }
  }
}

TEST_CASE("domain checking") {
  const DuctProfile e1 = DuctProfile::exp1(1.0, 10.0);
  CHECK_THROWS_AS(e1.eval(0.2), std::domain_error);
  CHECK_THROWS_AS(e1.eval(10.5), std::domain_error);
  CHECK(e1.eval(10.0).a > 0.0);
  CHECK_FALSE(e1.half_line());
  CHECK(DuctProfile::exp1().half_line());
}

TEST_CASE("shape condition k1 on the presets") {
  const auto grid = linspace(1.0, 10.0, 901);
  const double b = -2.0;

  // brute-force oracle: k'/k^2 <= 1/((2-delta) b) pointwise
  for (const DuctProfile& p : {DuctProfile::exp1(), DuctProfile::exp2()}) {
    for (double x : grid) {
      const ProfileSample s = p.eval(x);
      CHECK(s.dk / (s.k * s.k) <= 1.0 / ((2.0 - 1.0) * b));
    }
    const K1Verdict v = check_k1(p, 1.0, grid, b);
    CHECK(v.pass);
    CHECK(v.margin > 0.0);
  }
}

TEST_CASE("k1 rejects increasing k with a witness") {
  // k(x) = x (a = e^{x^2/2 - 1/2}); violates any decreasing-k consequence
  const DuctProfile bad(1.0, 10.0, [](double x) {
    ProfileSample s;
    s.a = std::exp(0.5 * (x * x - 1.0));
    s.da = x * s.a;
    s.k = x;
    s.dk = 1.0;
    return s;
  });
  const auto grid = linspace(1.0, 10.0, 91);
  const K1Verdict v = check_k1(bad, 1.0, grid, -2.0);
  CHECK_FALSE(v.pass);
  CHECK(v.witness_x == doctest::Approx(1.0));  // first violation
  CHECK(v.lhs == doctest::Approx(1.0));
  CHECK(v.rhs == doctest::Approx(-0.5));

  CHECK_FALSE(check_k1_search(bad, grid, -2.0).has_value());
  CHECK(check_k1_search(DuctProfile::exp1(), grid, -2.0).has_value());

  CHECK_THROWS_AS(check_k1(bad, 2.5, grid, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(check_k1(bad, 1.0, std::span<const double>{}, -2.0),
                  std::invalid_argument);
}

TEST_CASE("tail integrability of k") {
  const IntegrabilityVerdict v1 = check_k_integrability(DuctProfile::exp1());
  CHECK(v1.applicable);
  CHECK(v1.pass);
  CHECK(v1.integral == doctest::Approx(std::log(2.0)).epsilon(1e-6));

  const IntegrabilityVerdict v2 = check_k_integrability(DuctProfile::exp2());
  CHECK(v2.pass);
  CHECK(v2.integral == doctest::Approx(1.0).epsilon(1e-6));

  // constant k = 1: a = e^{x-1} grows without bound
  const DuctProfile flat(1.0, DuctProfile::kInfiniteEnd, [](double x) {
    const double a = std::exp(x - 1.0);
    return ProfileSample{a, a, 1.0, 0.0};
  });
  const IntegrabilityVerdict v3 = check_k_integrability(flat);
  CHECK(v3.applicable);
  CHECK_FALSE(v3.pass);

  const IntegrabilityVerdict v4 =
      check_k_integrability(DuctProfile::exp1(1.0, 10.0));
  CHECK_FALSE(v4.applicable);
  CHECK(v4.pass);  // vacuous on finite domains
}

namespace {

DuctProfile tabulated_exp1(double lo, double hi, int n) {
  std::vector<double> xs = linspace(lo, hi, n);
  std::vector<double> as;
  as.reserve(xs.size());
  for (double x : xs) as.push_back(2.0 - 1.0 / x);
  return DuctProfile::from_table(std::move(xs), std::move(as));
}

}  // namespace

TEST_CASE("table profile approximates the analytic one") {
  const DuctProfile ref = DuctProfile::exp1();
  const DuctProfile tab = tabulated_exp1(1.0, 5.0, 401);
  for (double x : linspace(1.2, 4.8, 37)) {
    const ProfileSample a = ref.eval(x);
    const ProfileSample b = tab.eval(x);
    CHECK(b.a == doctest::Approx(a.a).epsilon(1e-7));
    CHECK(b.k == doctest::Approx(a.k).epsilon(1e-4));
    CHECK(b.dk == doctest::Approx(a.dk).epsilon(5e-2));
  }
}

TEST_CASE("table k' converges at second order") {
  const DuctProfile ref = DuctProfile::exp1();
  const auto probes = linspace(1.5, 4.5, 11);
  double prev_err = 0.0;
  double order = 0.0;
  for (int n : {201, 401, 801}) {
    const DuctProfile tab = tabulated_exp1(1.0, 5.0, n);
    double err = 0.0;
    for (double x : probes) {
      err = std::max(err, std::abs(tab.eval(x).dk - ref.eval(x).dk));
    }
    if (prev_err > 0.0) order = std::log2(prev_err / err);
    prev_err = err;
  }
  CHECK(order >= 1.9);
}

TEST_CASE("profile table file round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ductflow_test_profiles";
  fs::create_directories(dir);
  const fs::path good = dir / "profile_good.dat";
  {
    std::ofstream out(good);
    out.precision(15);
    out << "# duct-profile v1\n";
    for (double x : linspace(1.0, 5.0, 101)) {
      out << x << " " << 2.0 - 1.0 / x << "\n";
    }
  }
  const DuctProfile p = DuctProfile::from_table_file(good);
  CHECK(p.a(3.0) == doctest::Approx(2.0 - 1.0 / 3.0).epsilon(1e-6));

  const fs::path bad = dir / "profile_bad.dat";
  {
    std::ofstream out(bad);
    out << "1.0 1.0\n2.0 1.5\n3.0 1.7\n4.0 1.75\n";
  }
  CHECK_THROWS(DuctProfile::from_table_file(bad));
}

TEST_CASE("pchip is monotone and interpolatory") {
  std::vector<double> xs = {0.0, 1.0, 2.5, 3.0, 4.5, 6.0};
  std::vector<double> ys = {0.0, 0.2, 0.21, 1.5, 1.9, 2.0};
  const Pchip p(xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(p.value(xs[i]) == doctest::Approx(ys[i]).epsilon(1e-14));
  }
  double prev = p.value(0.0);
  for (double t : linspace(0.0, 6.0, 400)) {
    const double val = p.value(t);
    CHECK(val >= prev - 1e-12);
    prev = val;
  }
}
