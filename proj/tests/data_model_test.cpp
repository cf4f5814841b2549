#include <doctest.h>

#include <set>
#include <sstream>

#include "rica/data_model.hpp"
#include "support.hpp"

using namespace rica;

namespace {

// Plain loops, independent of empirical_covariance.
Matrix loop_covariance(const Matrix& x) {
  const Index d = x.rows(), n = x.cols();
  Vector mean = Vector::Zero(d);
  for (Index k = 0; k < n; ++k) mean += x.col(k);
  mean /= static_cast<double>(n);
  Matrix c = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      double s = 0.0;
      for (Index k = 0; k < n; ++k) s += (x(i, k) - mean(i)) * (x(j, k) - mean(j));
      c(i, j) = s / static_cast<double>(n);
    }
  return c;
}

Matrix m22(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("dataset rejects empty and non-finite values") {
  CHECK_THROWS_AS(Dataset{Matrix(0, 3)}, Error);
  Matrix bad = Matrix::Zero(1, 3);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(Dataset{bad}, Error);
  Dataset ok(Matrix::Ones(2, 3), "unit");
  CHECK(ok.dims() == 2);
  CHECK(ok.samples() == 3);
  CHECK(ok.provenance() == "unit");
}

TEST_CASE("center") {
  SUBCASE("two samples") {
    const Centered c = center(Dataset(Matrix{{1.0, 3.0}}));
    CHECK(c.data.values()(0, 0) == -1.0);
    CHECK(c.data.values()(0, 1) == 1.0);
    CHECK(c.mean(0) == 2.0);
  }
  SUBCASE("constant row") {
    const Centered c = center(Dataset(Matrix{{5.0, 5.0}}));
    CHECK(c.data.values().isZero(0.0));
    CHECK(c.mean(0) == 5.0);
  }
  SUBCASE("idempotent and zero row means") {
    const Dataset x(test::gaussian_matrix(3, 500, 11).array() + 4.0);
    const Centered once = center(x);
    for (Index i = 0; i < 3; ++i) {
      const double maxabs = once.data.values().row(i).cwiseAbs().maxCoeff();
      CHECK(std::abs(once.data.values().row(i).mean()) <= 1e-12 * maxabs);
    }
    const Centered twice = center(once.data);
    CHECK((twice.data.values() - once.data.values()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("whiten") {
  SUBCASE("variance 4 gives transform 0.5") {
    const Dataset x(Matrix{{-2.0, 2.0, -2.0, 2.0}});
    const Whitened w = whiten(x);
    CHECK(w.transform.matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(loop_covariance(w.data.values())(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("already white input keeps a near-identity transform") {
    const Whitened first = whiten(Dataset(test::gaussian_matrix(2, 3000, 5)));
    const Whitened again = whiten(first.data);
    CHECK((again.transform.matrix - Matrix::Identity(2, 2)).norm() <= 1e-6);
  }
  SUBCASE("correlated gaussian") {
    Matrix z = test::gaussian_matrix(2, 4000, 21);
    z.row(1) = 0.8 * z.row(0) + 0.6 * z.row(1);
    z.row(0) *= 3.0;
    const Whitened w = whiten(Dataset(z));
    CHECK((loop_covariance(w.data.values()) - Matrix::Identity(2, 2)).norm() <= 1e-8);
    CHECK((w.transform.matrix - w.transform.matrix.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(w.transform.matrix);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK((w.transform.apply(z) - w.data.values()).norm() <= 1e-10);
  }
  SUBCASE("whiten after mix") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const MixingSpec a = random_mixing_matrix(3, 1.0, 2.0, seed);
      const Dataset x = mix(Dataset(test::uniform_matrix(3, 2000, seed + 100)), a);
      const Whitened w = whiten(x);
      CHECK((loop_covariance(w.data.values()) - Matrix::Identity(3, 3)).norm() <= 1e-8);
    }
  }
  SUBCASE("row scaling changes the output by a rotation only") {
    Matrix z = test::gaussian_matrix(2, 2000, 8);
    z.row(1) += 0.5 * z.row(0);
    Matrix scaled = z;
    scaled.row(0) *= 7.0;
    scaled.row(1) *= 0.01;
    const Matrix y = whiten(Dataset(z)).data.values();
    const Matrix y2 = whiten(Dataset(scaled)).data.values();
    const Matrix r = y2 * y.transpose() / static_cast<double>(y.cols());
    CHECK((r * r.transpose() - Matrix::Identity(2, 2)).norm() <= 1e-8);
    CHECK((r * y - y2).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("degenerate covariance") {
    Matrix z = test::gaussian_matrix(2, 100, 3);
    z.row(1) = 2.0 * z.row(0);
    try {
      whiten(Dataset(z));
      FAIL("expected DegenerateCovariance");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateCovariance);
    }
  }
  SUBCASE("needs two samples") { CHECK_THROWS_AS(whiten(Dataset(Matrix{{1.0}})), Error); }
}

TEST_CASE("random_mixing_matrix") {
  const MixingSpec one = random_mixing_matrix(1, 1.0, 2.0, 3);
  CHECK(one.matrix.rows() == 1);
  CHECK(one.condition_number == 1.0);
  CHECK(std::abs(one.matrix(0, 0)) == doctest::Approx(1.0));

  const MixingSpec a = random_mixing_matrix(2, 1.0, 2.0, 7);
  const MixingSpec b = random_mixing_matrix(2, 1.0, 2.0, 7);
  CHECK(a.matrix == b.matrix);

  // Closed-form 2x2 singular values: eigenvalues of A^T A.
  const Matrix g = a.matrix.transpose() * a.matrix;
  const double tr = g.trace(), det = g.determinant();
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  const double ratio = std::sqrt((tr / 2.0 + disc) / (tr / 2.0 - disc));
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 2.0 + 1e-12);
  CHECK(ratio == doctest::Approx(a.condition_number).epsilon(1e-9));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (Index n : {2, 3, 5}) {
      const MixingSpec m = random_mixing_matrix(n, 1.2, 1.8, seed);
      const Vector s = Eigen::BDCSVD<Matrix>(m.matrix).singularValues();
      const double cond = s(0) / s(n - 1);
      CHECK(std::abs(cond - m.condition_number) <= 1e-6);
      CHECK(cond >= 1.2 - 1e-9);
      CHECK(cond <= 1.8 + 1e-9);
      CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(random_mixing_matrix(2, 0.5, 2.0, 1), Error);
  CHECK_THROWS_AS(random_mixing_matrix(2, 3.0, 2.0, 1), Error);
}

TEST_CASE("mix") {
  const Dataset s(Matrix{{1.0, 2.0, 5.0}, {1.0, -1.0, 0.5}});
  CHECK(mix(s, {Matrix::Identity(2, 2), 1.0, 0}).values() == s.values());
  const Dataset swapped = mix(s, {m22(0, 1, 1, 0), 1.0, 0});
  CHECK(swapped.values().row(0) == s.values().row(1));
  CHECK(swapped.values().row(1) == s.values().row(0));
  const Dataset x = mix(Dataset(Matrix{{1.0}, {1.0}}), {m22(1, 2, 3, 4), 1.0, 0});
  CHECK(x.values()(0, 0) == 3.0);
  CHECK(x.values()(1, 0) == 7.0);
  try {
    mix(s, {Matrix::Identity(3, 3), 1.0, 0});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("inject_outliers") {
  Matrix base(2, 50);
  for (Index j = 0; j < 50; ++j) {
    base(0, j) = static_cast<double>(j % 7);
    base(1, j) = -static_cast<double>(j % 5);
  }
  const Dataset x(base);
  CHECK(inject_outliers(x, 0, 5.0, 9).values() == base);

  const Dataset y = inject_outliers(x, 5, 5.0, 9);
  const Matrix diff = y.values() - base;
  int changed = 0;
  for (Index j = 0; j < diff.cols(); ++j)
    for (Index i = 0; i < diff.rows(); ++i) {
      if (diff(i, j) != 0.0) {
        ++changed;
        CHECK(std::abs(diff(i, j)) == 5.0);
      }
    }
  CHECK(changed == 5);
  CHECK(inject_outliers(x, 5, 5.0, 9).values() == y.values());

  // Both signs show up over many entries.
  const Matrix many = inject_outliers(x, 100, 5.0, 4).values() - base;
  CHECK((many.array() > 0).count() > 20);
  CHECK((many.array() < 0).count() > 20);

  try {
    inject_outliers(x, 101, 5.0, 1);
    FAIL("expected CountTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CountTooLarge);
  }
}

TEST_CASE("csv round trip is exact") {
  const Dataset x(test::gaussian_matrix(3, 40, 77) * 1e3);
  std::stringstream ss;
  write_csv(ss, x, "rica test\nsecond line");
  const std::string text = ss.str();
  CHECK(text.rfind("# rica test\n# second line\n", 0) == 0);
  const Dataset back = read_csv(ss);
  CHECK(back.values() == x.values());

  std::stringstream ragged("1,2,3\n4,5\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);
  CHECK(format_double(0.1) == "0.1");
}
