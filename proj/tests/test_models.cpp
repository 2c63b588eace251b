#include <algorithm>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sparsegof/datasets.hpp"
#include "sparsegof/models.hpp"

using namespace sparsegof;

TEST_SUITE("models") {

TEST_CASE("simple null fit") {
  CountVector counts(std::vector<std::int64_t>{3, 0, 7});
  SimpleNull model{ProbVector({0.2, 0.3, 0.5})};
  auto fitted = fit_null(model, counts);
  CHECK(fitted.s == 0);
  CHECK(fitted.df == 2);
  CHECK(fitted.p_star0[1] == 0.3);

  SimpleNull zero{ProbVector({0.0, 0.5, 0.5})};
  CHECK_THROWS_AS(fit_null(zero, counts), error);
  SimpleNull short_p{ProbVector({0.5, 0.5})};
  CHECK_THROWS_AS(fit_null(short_p, counts), error);
}

TEST_CASE("independence fit is the product of margins") {
  auto table = builtin_table("rivers");
  auto fitted = fit_null(Independence2D{}, table);
  CHECK(fitted.s == 7);  // (3-1) + (6-1)
  CHECK(fitted.df == 10); // (3-1) * (6-1)
  REQUIRE(fitted.p_star0.size() == 18);
  const double n = static_cast<double>(table.total());
  for (std::size_t i = 0; i < table.rows; ++i)
    for (std::size_t j = 0; j < table.cols; ++j) {
      const double expected = static_cast<double>(table.row_sum(i)) *
                              static_cast<double>(table.col_sum(j)) / (n * n);
      CHECK(fitted.p_star0[i * table.cols + j] ==
            doctest::Approx(expected).epsilon(1e-14));
    }

  auto scler = fit_null(Independence2D{}, builtin_table("sclerosis"));
  CHECK(scler.s == 16);
  CHECK(scler.df == 15);
}

TEST_CASE("independence fit rejects empty margins") {
  std::istringstream in("row,a,b\nx,1,2\ny,0,0\n");
  auto table = parse_table(in, TableFormat{true});
  CHECK_THROWS_WITH_AS(fit_null(Independence2D{}, table),
                       doctest::Contains("remove empty margins"), error);
}

TEST_CASE("full report on the rivers table") {
  auto r = run_test(builtin_table("rivers"), Independence2D{}, 0.05);
  CHECK(r.n == 21);
  CHECK(r.R == 18);
  CHECK(r.c == 7);
  CHECK(r.s == 7);
  CHECK(r.df == 10);
  CHECK(r.threshold == doctest::Approx(18.307038053275146).epsilon(1e-12));
  CHECK(r.q == doctest::Approx(14.379166666666666).epsilon(1e-12));
  CHECK(r.g == doctest::Approx(18.670287986695218).epsilon(1e-12));
  CHECK(r.rc23 == doctest::Approx(14.837103666333244).epsilon(1e-12));
  CHECK(r.q_ab == doctest::Approx(20.676367275425154).epsilon(1e-12));
  CHECK(r.g_ab == doctest::Approx(26.055926731409325).epsilon(1e-12));
  CHECK(r.g_ku == doctest::Approx(11.670287986695218).epsilon(1e-12));
  CHECK(r.g_ku == doctest::Approx(r.g - r.c).epsilon(1e-14));
  CHECK_FALSE(r.reject_q);
  CHECK(r.reject_g);
  CHECK_FALSE(r.reject_rc23);
  CHECK(r.reject_q_ab);
  CHECK(r.reject_g_ab);
  CHECK_FALSE(r.reject_g_ku);
  CHECK(r.combined_reject);
  CHECK(r.warnings.empty());
  CHECK_FALSE(r.correction.fallback);
}

TEST_CASE("full report on the sclerosis table") {
  auto r = run_test(builtin_table("sclerosis"), Independence2D{}, 0.05);
  CHECK(r.n == 794);
  CHECK(r.R == 32);
  CHECK(r.c == 1);
  CHECK(r.df == 15);
  CHECK(r.threshold == doctest::Approx(24.995790139728616).epsilon(1e-12));
  CHECK(r.q == doctest::Approx(14.625232955746707).epsilon(1e-12));
  CHECK(r.g == doctest::Approx(15.824581344560698).epsilon(1e-12));
  CHECK(r.rc23 == doctest::Approx(14.852222205822519).epsilon(1e-12));
  CHECK(r.q_ab == doctest::Approx(20.75892629565768).epsilon(1e-12));
  CHECK(r.g_ab == doctest::Approx(28.435171566642531).epsilon(1e-12));
  CHECK_FALSE(r.reject_q);
  CHECK_FALSE(r.reject_g);
  CHECK_FALSE(r.reject_rc23);
  CHECK_FALSE(r.reject_q_ab);
  CHECK(r.reject_g_ab);
  CHECK(r.combined_reject);
}

TEST_CASE("proportional counts give zero statistics") {
  CountVector counts(std::vector<std::int64_t>{25, 25, 25, 25});
  SimpleNull model{ProbVector(std::vector<double>(4, 0.25))};
  auto r = run_test(counts, model, 0.05);
  CHECK(r.q == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.g == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.rc23 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.q_ab == r.q);
  CHECK(r.g_ab == r.g);
  CHECK(r.correction.fallback);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0] == "correction inactive: no zero cells");
  CHECK_FALSE(r.combined_reject);
}

TEST_CASE("fallback warnings name the cause") {
  SimpleNull model{ProbVector({0.25, 0.25, 0.25, 0.25})};
  auto uniform = run_test(CountVector(std::vector<std::int64_t>{0, 5, 5, 5}), model, 0.05);
  REQUIRE(uniform.warnings.size() == 1);
  CHECK(uniform.warnings[0] == "correction inactive: nonzero counts are uniform");

  auto empty = run_test(CountVector(std::vector<std::int64_t>{0, 0, 3, 1}), model, 0.05);
  REQUIRE(empty.warnings.size() == 1);
  CHECK(empty.warnings[0] == "correction inactive: admissible interval for a is empty");
}

TEST_CASE("statistics are permutation equivariant") {
  CountVector counts(std::vector<std::int64_t>{0, 3, 7, 2});
  SimpleNull model{ProbVector({0.1, 0.2, 0.4, 0.3})};
  auto base = run_test(counts, model, 0.05);

  CountVector perm(std::vector<std::int64_t>{7, 2, 0, 3});
  SimpleNull perm_model{ProbVector({0.4, 0.3, 0.1, 0.2})};
  auto moved = run_test(perm, perm_model, 0.05);

  CHECK(moved.q == doctest::Approx(base.q).epsilon(1e-12));
  CHECK(moved.g == doctest::Approx(base.g).epsilon(1e-12));
  CHECK(moved.rc23 == doctest::Approx(base.rc23).epsilon(1e-12));
  CHECK(moved.q_ab == doctest::Approx(base.q_ab).epsilon(1e-12));
  CHECK(moved.g_ab == doctest::Approx(base.g_ab).epsilon(1e-12));
  CHECK(moved.c == base.c);
}

TEST_CASE("threshold moves with alpha") {
  auto table = builtin_table("rivers");
  auto strict = run_test(table, Independence2D{}, 0.01);
  auto loose = run_test(table, Independence2D{}, 0.10);
  auto mid = run_test(table, Independence2D{}, 0.05);
  CHECK(strict.threshold > mid.threshold);
  CHECK(mid.threshold > loose.threshold);
  CHECK(strict.alpha == 0.01);
}

TEST_CASE("combined decision follows the corrected statistics") {
  for (const char* name : {"rivers", "sclerosis"}) {
    auto r = run_test(builtin_table(name), Independence2D{}, 0.05);
    CHECK(r.combined_reject == (r.reject_q_ab || r.reject_g_ab));
  }
}

TEST_CASE("run_test argument validation") {
  CountVector counts(std::vector<std::int64_t>{3, 0, 7});
  SimpleNull model{ProbVector({0.2, 0.3, 0.5})};
  CHECK_THROWS_AS(run_test(counts, model, 0.0), error);
  CHECK_THROWS_AS(run_test(counts, model, 1.0), error);
  CHECK_THROWS_AS(run_test(counts, model, -0.5), error);
}

} // TEST_SUITE
