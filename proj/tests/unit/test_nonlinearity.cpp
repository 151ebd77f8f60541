#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "beamfold/nonlinearity.hpp"

using namespace beamfold;

TEST_CASE("catalog basics") {
  auto inv = catalog_lookup("inverse_square");
  CHECK(inv.eval_f(0.0) == doctest::Approx(1.0));
  CHECK(inv.eval_f(0.5) == doctest::Approx(4.0));
  CHECK(inv.r == doctest::Approx(1.0));

  auto cl = catalog_lookup("constant_load");
  CHECK(cl.eval_f(0.3) == doctest::Approx(1.0));
  CHECK_FALSE(cl.finite_radius());

  auto cnt = catalog_lookup("cnt_actuator", {{"beta_n", 1.0}, {"n", 4.0}});
  CHECK(cnt.eval_f(0.5) == doctest::Approx(16.0));
  CHECK(cnt.r == doctest::Approx(1.0));

  auto expn = catalog_lookup("exponential");
  CHECK_FALSE(expn.finite_radius());
  CHECK(expn.eval_f(1.0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("catalog errors") {
  CHECK_THROWS_AS(catalog_lookup("no_such_model"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("cnt_actuator", {{"beta_n", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("cnt_actuator", {{"beta_n", -1.0}, {"n", 4.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("power", {{"p", 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("regularized", {{"eps", 0.1}, {"m", 1.5}}),
                  std::invalid_argument);
}

TEST_CASE("nanobridge radii track the first blow-up of f") {
  // two-nanowire model: both terms blow up at u = 1/2 when the log argument
  // stays below 1 on the whole gap
  std::map<std::string, double> base{{"beta_vdw", 1.0}, {"alpha", 1.0}, {"delta", 0.1}};
  auto two_small_k = base;
  two_small_k["k"] = 0.5;
  CHECK(catalog_lookup("nanobridge_two", two_small_k).r == doctest::Approx(0.5));
  auto two_large_k = base;
  two_large_k["k"] = 4.0;
  CHECK(catalog_lookup("nanobridge_two", two_large_k).r == doctest::Approx((1.0 - 0.25) / 2.0));
  auto two_bad = base;
  two_bad["k"] = 1.0;
  CHECK_THROWS_AS(catalog_lookup("nanobridge_two", two_bad), std::invalid_argument);

  auto single_large = base;
  single_large["k"] = 2.0;
  CHECK(catalog_lookup("nanobridge_single", single_large).r == doctest::Approx(0.75));
  auto single_small = base;
  single_small["k"] = 0.25;
  CHECK(catalog_lookup("nanobridge_single", single_small).r == doctest::Approx(1.0));
}

TEST_CASE("casimir actuator value at zero") {
  auto cas = catalog_lookup("casimir_actuator", {{"beta_cas", 2.0},
                                                 {"alpha", 0.5},
                                                 {"delta", 0.25},
                                                 {"gamma", 1.5}});
  CHECK(cas.r == doctest::Approx(1.0));
  CHECK(cas.eval_f(0.0) == doctest::Approx((2.0 + 0.5 + 0.5 * 1.5) / 1.25));
}

TEST_CASE("domain guard") {
  auto inv = catalog_lookup("inverse_square");
  CHECK_THROWS_AS(inv.eval_f(1.0), DomainError);
  CHECK_THROWS_AS(inv.eval_f(-0.1), DomainError);
  CHECK_NOTHROW(inv.eval_f(inv.domain_max()));
}

TEST_CASE("derivative evaluators agree with finite differences of f") {
  for (const auto& [name, params] : std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"inverse_square", {}},
           {"exponential", {}},
           {"power", {{"p", 3.0}}},
           {"cnt_actuator", {{"beta_n", 0.8}, {"n", 3.0}}},
           {"casimir_actuator", {{"beta_cas", 1.0}, {"alpha", 1.0}, {"delta", 0.0}, {"gamma", 0.5}}},
           {"nanobridge_single", {{"beta_vdw", 1.0}, {"alpha", 1.0}, {"delta", 0.1}, {"k", 2.0}}},
           {"nanobridge_two", {{"beta_vdw", 1.0}, {"alpha", 1.0}, {"delta", 0.1}, {"k", 0.5}}},
           {"regularized", {{"eps", 0.1}, {"m", 4.0}}}}) {
    CAPTURE(name);
    auto nl = catalog_lookup(name, params);
    const double hi = 0.8 * (nl.finite_radius() ? nl.r : 1.0);
    const double step = nl.finite_radius() ? 1e-6 * nl.r : 1e-6;
    for (int i = 1; i <= 100; ++i) {
      double u = hi * i / 101.0;
      double fd1 = (nl.eval_f(u + step) - nl.eval_f(u - step)) / (2 * step);
      CHECK(std::abs(fd1 - nl.eval_f1(u)) <= 1e-5 * std::max(1.0, std::abs(nl.eval_f1(u))));
      double fd2 = (nl.eval_f1(u + step) - nl.eval_f1(u - step)) / (2 * step);
      CHECK(std::abs(fd2 - nl.eval_f2(u)) <= 1e-5 * std::max(1.0, std::abs(nl.eval_f2(u))));
    }
  }
}

TEST_CASE("lookup is deterministic") {
  auto a = catalog_lookup("cnt_actuator", {{"beta_n", 1.3}, {"n", 4.0}});
  auto b = catalog_lookup("cnt_actuator", {{"beta_n", 1.3}, {"n", 4.0}});
  for (int i = 0; i <= 50; ++i) {
    double u = 0.9 * i / 50.0;
    CHECK(a.eval_f(u) == b.eval_f(u));
    CHECK(a.eval_f1(u) == b.eval_f1(u));
    CHECK(a.eval_f2(u) == b.eval_f2(u));
  }
}

TEST_CASE("hypothesis report: inverse_square") {
  auto nl = catalog_lookup("inverse_square");
  auto rep = check_hypotheses(nl, 1000);
  CHECK(rep.positivity_ok);
  CHECK(rep.increasing_ok);
  CHECK(rep.convex_ok);
  CHECK(rep.liminf_ok);
  REQUIRE(rep.a_estimate.has_value());
  CHECK(*rep.a_estimate == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.a_is_exact);
  CHECK(rep.all_ok());
}

TEST_CASE("hypothesis report: exponential has no a_estimate") {
  auto rep = check_hypotheses(catalog_lookup("exponential"), 500);
  CHECK(rep.positivity_ok);
  CHECK(rep.increasing_ok);
  CHECK(rep.convex_ok);
  CHECK_FALSE(rep.a_estimate.has_value());
  CHECK(rep.all_ok());
}

TEST_CASE("hypothesis report: constant load passes with zero margins") {
  auto rep = check_hypotheses(catalog_lookup("constant_load"), 500);
  CHECK(rep.all_ok());
  CHECK(rep.min_f1 == doctest::Approx(0.0));
}

TEST_CASE("hypothesis report: regularized model is not increasing") {
  auto rep = check_hypotheses(catalog_lookup("regularized", {{"eps", 0.1}, {"m", 4.0}}), 10000);
  CHECK_FALSE(rep.increasing_ok);
  CHECK_FALSE(rep.all_ok());
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("check_hypotheses input validation") {
  CHECK_THROWS_AS(check_hypotheses(catalog_lookup("inverse_square"), 50),
                  std::invalid_argument);
}

TEST_CASE("sampled (r-u) f(u) dominates a_estimate for passing entries") {
  for (const auto& [name, params] : std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"inverse_square", {}},
           {"cnt_actuator", {{"beta_n", 1.0}, {"n", 4.0}}},
           {"casimir_actuator", {{"beta_cas", 1.0}, {"alpha", 1.0}, {"delta", 0.0}, {"gamma", 0.5}}}}) {
    CAPTURE(name);
    auto nl = catalog_lookup(name, params);
    auto rep = check_hypotheses(nl, 2000);
    REQUIRE(rep.a_estimate.has_value());
    double a = *rep.a_estimate;
    for (int i = 0; i <= 2000; ++i) {
      double u = nl.domain_max() * i / 2000.0;
      CHECK((nl.r - u) * nl.eval_f(u) >= a * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("antiderivative matches f by central differences") {
  for (const std::string& name : {"inverse_square", "constant_load", "exponential"}) {
    auto nl = catalog_lookup(name);
    REQUIRE(nl.has_antiderivative());
    double hi = 0.8 * (nl.finite_radius() ? nl.r : 1.0);
    double step = 1e-7;
    for (int i = 1; i <= 100; ++i) {
      double u = hi * i / 101.0;
      double fd = (nl.eval_F(u + step) - nl.eval_F(u - step)) / (2 * step);
      CHECK(std::abs(fd - nl.eval_f(u)) <= 1e-6 * std::max(1.0, nl.eval_f(u)));
    }
  }
}

TEST_CASE("tangent bound") {
  auto inv = catalog_lookup("inverse_square");
  CHECK(static_cast<bool>(tangent_bound_check(inv, 1.0)));
  // explicit midpoint check: f(1/2) = 4 >= 4 a u = 2
  CHECK(inv.eval_f(0.5) >= 4.0 * 1.0 * 0.5);

  auto cnt = catalog_lookup("cnt_actuator", {{"beta_n", 1.0}, {"n", 4.0}});
  auto rep = check_hypotheses(cnt, 1000);
  REQUIRE(rep.a_estimate.has_value());
  CHECK(static_cast<bool>(tangent_bound_check(cnt, *rep.a_estimate)));

  // constructed counterexample: f == 1 on [0,1) with a fabricated a = 10
  Nonlinearity flat;
  flat.name = "flat_unit";
  flat.r = 1.0;
  flat.f = [](double) { return 1.0; };
  flat.f1 = [](double) { return 0.0; };
  flat.f2 = [](double) { return 0.0; };
  auto res = tangent_bound_check(flat, 10.0);
  CHECK_FALSE(res.ok);
  CHECK(res.f_value < res.bound_value);

  CHECK_THROWS_AS(tangent_bound_check(catalog_lookup("exponential"), 1.0),
                  std::invalid_argument);
}

TEST_CASE("non-finite evaluator values raise inside the guarded domain") {
  Nonlinearity broken;
  broken.name = "interior_pole";
  broken.r = 1.0;  // declared gap past the actual pole at u = 1/2
  broken.f = [](double u) { return 1.0 / (0.5 - u); };
  broken.f1 = [](double u) { return 1.0 / ((0.5 - u) * (0.5 - u)); };
  broken.f2 = [](double u) { return 2.0 / std::pow(0.5 - u, 3); };
  CHECK_THROWS_AS(check_hypotheses(broken, 1000), DomainError);
}

TEST_CASE("regularized f' goes negative near the gap") {
  auto nl = catalog_lookup("regularized", {{"eps", 0.1}, {"m", 4.0}});
  // the destabilizing term dominates close to u = 1
  CHECK(nl.eval_f1(0.95) < 0.0);
  CHECK(nl.eval_f1(0.5) > 0.0);
}
