#include <doctest.h>

#include <numbers>

#include "rica/amari.hpp"
#include "rica/fastica.hpp"
#include "rica/optimizer.hpp"
#include "support.hpp"

using namespace rica;

namespace {

constexpr double kPi = std::numbers::pi;

Vector angle(double a) { return Vector::Constant(1, a); }

// Mixed (uniform, double exponential) pair and the true unmixing matrix.
struct Problem {
  Dataset mixed;
  Matrix truth;
};

Problem mixed_pair(char a, char b, Index n, std::uint64_t seed) {
  const MixingSpec spec = random_mixing_matrix(2, 1.0, 2.0, derive_seed(seed, 2));
  return {mix(test::source_pair(a, b, n, seed), spec), spec.matrix.inverse()};
}

OptimizerConfig rgv_config(std::uint64_t seed) {
  OptimizerConfig c;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("givens_to_matrix") {
  CHECK(givens_to_matrix<double>(Vector::Zero(6), 4) == Matrix::Identity(4, 4));
  const Matrix quarter = givens_to_matrix<double>(angle(kPi / 2), 2);
  CHECK(std::abs(quarter(0, 0)) <= 1e-16);
  CHECK(quarter(0, 1) == -1.0);
  CHECK(quarter(1, 0) == 1.0);
  CHECK(std::abs(quarter(1, 1)) <= 1e-16);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Vector a = test::gaussian_matrix(3, 1, seed) * 2.0;
    const Matrix q = givens_to_matrix<double>(a, 3);
    CHECK((q * q.transpose() - Matrix::Identity(3, 3)).norm() <= 1e-12);
    CHECK(std::abs(q.determinant() - 1.0) <= 1e-10);
  }

  const Eigen::MatrixXf qf = givens_to_matrix<float>(Eigen::VectorXf::Constant(1, 0.5f), 2);
  CHECK(qf(1, 0) == doctest::Approx(std::sin(0.5)).epsilon(1e-6));

  try {
    givens_to_matrix<double>(Vector::Zero(2), 3);
    FAIL("expected AngleCountMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AngleCountMismatch);
  }
}

TEST_CASE("matrix_to_givens inverts givens_to_matrix") {
  for (Index n = 2; n <= 5; ++n) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Vector a = test::gaussian_matrix(angle_count(n), 1, seed * 31 + n);
      const Matrix q = givens_to_matrix<double>(a, n);
      const Matrix back = givens_to_matrix(matrix_to_givens(q), n);
      CHECK((back - q).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  Matrix reflect = Matrix::Identity(3, 3);
  reflect(2, 2) = -1.0;
  CHECK(to_special_orthogonal(reflect).determinant() == doctest::Approx(1.0));
}

TEST_CASE("objective") {
  SUBCASE("identity rotation scores below 45 degrees on independent sources") {
    double at_zero = 0.0, at_45 = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Dataset s = whiten(test::source_pair('c', 'b', 2000, seed)).data;
      const ContrastObjective f(s, rgv_config(seed));
      at_zero += f(angle(0.0));
      at_45 += f(angle(kPi / 4));
    }
    CHECK(at_zero < at_45);
  }
  SUBCASE("half-turn periodicity") {
    const Dataset s = whiten(test::source_pair('c', 'b', 300, 4)).data;
    OptimizerConfig kgv = rgv_config(4);
    kgv.contrast = ContrastKind::KGV;
    const ContrastObjective exact(s, kgv);
    for (double a : {0.1, 0.7, 1.3}) CHECK(std::abs(exact(angle(a)) - exact(angle(a + kPi))) <= 1e-9);

    // A half turn flips both signs; random phases make the two feature
    // spans differ, so the random contrast agrees only to sampling accuracy.
    const Dataset big = whiten(test::source_pair('c', 'b', 2000, 4)).data;
    const ContrastObjective approx(big, rgv_config(4));
    for (double a : {0.1, 0.7, 1.3}) CHECK(std::abs(approx(angle(a)) - approx(angle(a + kPi))) <= 0.02);
  }
  SUBCASE("frozen features") {
    const Dataset s = whiten(test::source_pair('c', 'g', 1000, 6)).data;
    const ContrastObjective f(s, rgv_config(6));
    CHECK(f(angle(0.4)) == f(angle(0.4)));
    CHECK(contrast_objective({angle(0.4)}, s, rgv_config(6)) == f(angle(0.4)));
    OptimizerConfig other = rgv_config(7);
    CHECK(contrast_objective({angle(0.4)}, s, other) != f(angle(0.4)));
  }
  SUBCASE("angle count is checked") {
    const Dataset s = whiten(test::source_pair('c', 'g', 200, 6)).data;
    CHECK_THROWS_AS(contrast_objective({Vector::Zero(3)}, s, rgv_config(1)), Error);
  }
}

TEST_CASE("finite_diff_gradient") {
  SUBCASE("flat landscape") {
    Matrix x = test::gaussian_matrix(3, 1000, 12);
    x.row(0) = sample_source(find_source('c'), 1000, 13).transpose();
    const Dataset w = whiten(Dataset(x)).data;
    OptimizerConfig c = rgv_config(1);
    c.gamma = 1e6;
    const Vector g = finite_diff_gradient({Vector::Constant(3, 0.3)}, w, c);
    CHECK(g.cwiseAbs().maxCoeff() <= 1e-6);
  }
  SUBCASE("step halving") {
    const Dataset w = whiten(test::source_pair('c', 'b', 1000, 14)).data;
    const ContrastObjective f(w, rgv_config(14));
    const double h = 0.08;
    const double g1 = f.gradient(angle(0.3), h)(0);
    const double g2 = f.gradient(angle(0.3), h / 2)(0);
    const double g3 = f.gradient(angle(0.3), h / 4)(0);
    // Second-order error: each halving cuts the change about fourfold, and
    // the two Richardson extrapolations agree.
    const double coarse = std::abs(g1 - g2), fine = std::abs(g2 - g3);
    CHECK(coarse / fine >= 2.0);
    CHECK(coarse / fine <= 8.0);
    const double r1 = (4.0 * g2 - g1) / 3.0, r2 = (4.0 * g3 - g2) / 3.0;
    CHECK(std::abs(r1 - r2) <= fine);
  }
  SUBCASE("vanishes at a located minimum") {
    const Dataset w = whiten(test::source_pair('c', 'b', 1000, 15)).data;
    OptimizerConfig c = rgv_config(15);
    c.tol = 1e-12;
    c.max_iters = 500;
    const UnmixingModel model = minimize_contrast(w, c);
    CHECK(finite_diff_gradient(model.rotation, w, c).norm() <= 1e-3);
  }
}

TEST_CASE("gradient_descent") {
  const auto bowl = [](const Vector& x) { return (x.array() - 1.0).square().sum(); };
  const auto slope = [](const Vector& x) { return Vector(2.0 * (x.array() - 1.0)); };
  DescentOptions opts;
  opts.tol = 1e-14;
  opts.max_iters = 200;
  const DescentResult r = gradient_descent(bowl, slope, Vector::Zero(3), opts);
  CHECK((r.point.array() - 1.0).abs().maxCoeff() <= 1e-6);
  CHECK_FALSE(r.first_search_failed);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);

  // A gradient pointing uphill makes the first search fail.
  const auto wrong = [&](const Vector& x) { return Vector(-slope(x)); };
  const DescentResult bad = gradient_descent(bowl, wrong, Vector::Zero(3), opts);
  CHECK(bad.first_search_failed);
  CHECK(bad.iterations == 0);
  CHECK(bad.point == Vector::Zero(3));

  // At a stationary point the failed search is not a failure.
  const DescentResult still = gradient_descent(bowl, wrong, Vector::Ones(3), opts);
  CHECK_FALSE(still.first_search_failed);
}

TEST_CASE("minimize_contrast") {
  SUBCASE("uniform pair, 50 trials") {
    int good = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Problem p = mixed_pair('c', 'c', 1000, 500 + seed);
      const UnmixingModel model = fit_unmixing(p.mixed, rgv_config(seed));
      good += amari_distance(model.unmixing(), p.truth) <= 0.10;
    }
    CHECK(good >= 45);
  }
  SUBCASE("start at the truth") {
    const Dataset s = test::source_pair('c', 'c', 4000, 21);
    const Whitened w = whiten(s);
    OptimizerConfig c = rgv_config(21);
    c.init = InitKind::Given;
    c.initial_angles = Vector::Zero(1);
    c.restarts = 1;
    const double initial = contrast_objective({c.initial_angles}, w.data, c);
    const UnmixingModel model = minimize_contrast(w.data, c);
    CHECK(model.final_contrast <= initial);
    CHECK(initial - model.final_contrast <= c.tol);
    CHECK(amari_distance(Matrix(model.rotation_matrix() * w.transform.matrix), Matrix::Identity(2, 2)) <= 0.02);
  }
  SUBCASE("accepted steps never increase the contrast") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Problem p = mixed_pair('b', 'j', 800, 40 + seed);
      OptimizerConfig c = rgv_config(seed);
      c.init = InitKind::Random;
      const UnmixingModel model = fit_unmixing(p.mixed, c);
      REQUIRE(!model.trace.empty());
      CHECK(model.trace.back() == model.final_contrast);
      for (std::size_t i = 1; i < model.trace.size(); ++i) CHECK(model.trace[i] <= model.trace[i - 1]);
    }
  }
  SUBCASE("deterministic") {
    const Problem p = mixed_pair('c', 'b', 600, 9);
    const UnmixingModel a = fit_unmixing(p.mixed, rgv_config(3));
    const UnmixingModel b = fit_unmixing(p.mixed, rgv_config(3));
    CHECK(a.rotation.angles == b.rotation.angles);
    CHECK(a.final_contrast == b.final_contrast);
    CHECK(a.iterations == b.iterations);
    CHECK(a.trace == b.trace);
    CHECK(std::isfinite(condition_number(a.unmixing())));
  }
  SUBCASE("rotating the input rotates the answer") {
    const Dataset w = whiten(test::source_pair('c', 'b', 1000, 33)).data;
    const Matrix r = test::rotation2(0.6);
    const Dataset turned(r * w.values());
    const UnmixingModel base = minimize_contrast(w, rgv_config(8));
    const UnmixingModel moved = minimize_contrast(turned, rgv_config(8));
    CHECK(amari_distance(Matrix(moved.rotation_matrix() * r), base.rotation_matrix()) <= 0.05);
  }
  SUBCASE("oracle contrast") {
    const Problem p = mixed_pair('c', 'b', 300, 17);
    OptimizerConfig c = rgv_config(17);
    c.contrast = ContrastKind::KGV;
    c.restarts = 1;
    const UnmixingModel model = fit_unmixing(p.mixed, c);
    CHECK(amari_distance(model.unmixing(), p.truth) <= 0.15);
  }
  SUBCASE("invalid settings") {
    const Dataset w = whiten(test::source_pair('c', 'b', 200, 1)).data;
    OptimizerConfig c = rgv_config(1);
    c.restarts = 0;
    CHECK_THROWS_AS(minimize_contrast(w, c), Error);
    c = rgv_config(1);
    c.fd_step = 0.0;
    CHECK_THROWS_AS(minimize_contrast(w, c), Error);
    c = rgv_config(1);
    c.init = InitKind::Given;
    c.initial_angles = Vector::Zero(2);
    CHECK_THROWS_AS(minimize_contrast(w, c), Error);
  }
}

TEST_CASE("fastica_baseline") {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Problem p = mixed_pair('c', 'b', 1000, 900 + seed);
    const Whitened w = whiten(p.mixed);
    const FastIcaResult r = fastica_baseline(w.data, seed);
    CHECK((r.rotation * r.rotation.transpose() - Matrix::Identity(2, 2)).norm() <= 1e-8);
    total += amari_distance(Matrix(r.rotation * w.transform.matrix), p.truth);
  }
  const double mean = 100.0 * total / 100.0;
  CHECK(mean >= 3.0);
  CHECK(mean <= 12.0);

  // Two Gaussians: either flagged or far from any unmixing.
  int flagged_or_lost = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset g(test::gaussian_matrix(2, 1000, 70 + seed));
    const MixingSpec a = random_mixing_matrix(2, 1.0, 2.0, seed);
    const Whitened w = whiten(mix(g, a));
    const FastIcaResult r = fastica_baseline(w.data, seed);
    const double d = amari_distance(Matrix(r.rotation * w.transform.matrix), Matrix(a.matrix.inverse()));
    flagged_or_lost += !r.converged || d > 0.1;
  }
  CHECK(flagged_or_lost >= 8);
}
