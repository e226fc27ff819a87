#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "msfv/csr.hpp"
#include "msfv/errors.hpp"
#include "msfv/linalg.hpp"

using namespace msfv;

namespace {

CsrMatrix dense_to_csr(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<CsrMatrix::Triplet> trip;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < static_cast<int>(rows[i].size()); ++j) {
      if (rows[i][j] != 0.0) trip.push_back({i, j, rows[i][j]});
    }
  }
  return CsrMatrix::from_triplets(n, static_cast<int>(rows[0].size()), std::move(trip));
}

// Dense LU without pivoting, used as the oracle for the tridiagonal ILU0
// exactness check (no fill exists, so the factors must coincide).
std::array<std::array<double, 5>, 5> dense_lu_5(std::array<std::array<double, 5>, 5> a) {
  for (int k = 0; k < 5; ++k) {
    for (int i = k + 1; i < 5; ++i) {
      a[i][k] /= a[k][k];
      for (int j = k + 1; j < 5; ++j) a[i][j] -= a[i][k] * a[k][j];
    }
  }
  return a;
}

}  // namespace

TEST_CASE("direct solve of a diagonal system") {
  const CsrMatrix a = dense_to_csr({{2.0, 0.0}, {0.0, 4.0}});
  const auto x = direct_solve(a, std::vector<double>{2.0, 4.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("direct solve of the 2x2 Dirichlet system") {
  const CsrMatrix a = dense_to_csr({{3.0, -1.0}, {-1.0, 3.0}});
  const auto x = direct_solve(a, std::vector<double>{2.0, 0.0});
  CHECK(x[0] == doctest::Approx(0.75));
  CHECK(x[1] == doctest::Approx(0.25));
}

TEST_CASE("singular matrix raises") {
  const CsrMatrix a = dense_to_csr({{1.0, 1.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(direct_solve(a, std::vector<double>{1.0, 2.0}), SingularMatrixError);
}

TEST_CASE("direct solve residual contract on random systems") {
  std::mt19937_64 rng(42);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int n : {10, 60}) {
    std::vector<CsrMatrix::Triplet> trip;
    for (int i = 0; i < n; ++i) {
      double row_abs = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i != j && uniform() < 0.15) {
          const double v = 2.0 * uniform() - 1.0;
          trip.push_back({i, j, v});
          row_abs += std::abs(v);
        }
      }
      trip.push_back({i, i, row_abs + 1.0});  // strictly diagonally dominant
    }
    const CsrMatrix a = CsrMatrix::from_triplets(n, n, std::move(trip));
    std::vector<double> b(n);
    for (double& v : b) v = 2.0 * uniform() - 1.0;
    const auto x = direct_solve(a, b);

    double norm_a_inf = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : a.row_values(i)) s += std::abs(v);
      norm_a_inf = std::max(norm_a_inf, s);
    }
    const auto ax = a.multiply_vector(x);
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = ax[i] - b[i];
    CHECK(norm2(r) <= 1e-10 * (norm_a_inf * norm2(x) + norm2(b)));
  }
}

TEST_CASE("ILU0 of a diagonal matrix is the matrix itself") {
  const CsrMatrix a = dense_to_csr({{2.0, 0.0, 0.0}, {0.0, 3.0, 0.0}, {0.0, 0.0, 5.0}});
  const Ilu0Factors f = ilu0_factor(a);
  CHECK(f.lu.same_pattern(a));
  for (int k = 0; k < a.nnz(); ++k) CHECK(f.lu.values()[k] == a.values()[k]);
}

TEST_CASE("ILU0 equals exact LU on a tridiagonal matrix") {
  std::array<std::array<double, 5>, 5> dense{};
  for (int i = 0; i < 5; ++i) {
    dense[i][i] = 2.0 + 0.1 * i;
    if (i > 0) dense[i][i - 1] = -1.0 + 0.05 * i;
    if (i < 4) dense[i][i + 1] = -1.0 - 0.02 * i;
  }
  std::vector<std::vector<double>> rows(5, std::vector<double>(5, 0.0));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) rows[i][j] = dense[i][j];
  const CsrMatrix a = dense_to_csr(rows);

  const auto lu_oracle = dense_lu_5(dense);
  const Ilu0Factors f = ilu0_factor(a);
  for (int i = 0; i < 5; ++i) {
    auto cols = f.lu.row_cols(i);
    auto vals = f.lu.row_values(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      CHECK(vals[k] == doctest::Approx(lu_oracle[i][cols[k]]).epsilon(1e-14));
    }
  }

  // One preconditioned step solves a tridiagonal system exactly.
  const std::vector<double> b{1.0, -2.0, 0.5, 3.0, -1.0};
  const auto x = ilu0_apply(f, b);
  const auto ax = a.multiply_vector(x);
  for (int i = 0; i < 5; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("ILU0 factors keep the input pattern") {
  const CsrMatrix a = dense_to_csr({{4.0, -1.0, 0.0, -1.0},
                                    {-1.0, 4.0, -1.0, 0.0},
                                    {0.0, -1.0, 4.0, -1.0},
                                    {-1.0, 0.0, -1.0, 4.0}});
  const Ilu0Factors f = ilu0_factor(a);
  CHECK(f.lu.same_pattern(a));
}

TEST_CASE("ILU0 rejects zero diagonals") {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}},
                                               /*ensure_diagonal=*/true);
  CHECK_THROWS_AS(ilu0_factor(a), FactorizationError);
  try {
    ilu0_factor(a);
  } catch (const FactorizationError& e) {
    CHECK(e.row == 0);
  }
}

TEST_CASE("ILU0 application on identity factors") {
  const Ilu0Factors f = ilu0_factor(CsrMatrix::identity(4));
  const std::vector<double> r{1.0, 2.0, 3.0, 4.0};
  CHECK(ilu0_apply(f, r) == r);
}

TEST_CASE("ILU0 application is linear") {
  std::mt19937_64 rng(9);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int n = 25;
  std::vector<CsrMatrix::Triplet> trip;
  for (int i = 0; i < n; ++i) {
    trip.push_back({i, i, 4.0});
    if (i > 0) trip.push_back({i, i - 1, -1.0 - uniform()});
    if (i < n - 1) trip.push_back({i, i + 1, -1.0 - uniform()});
    if (i >= 5) trip.push_back({i, i - 5, -0.5 * uniform()});
  }
  const Ilu0Factors f = ilu0_factor(CsrMatrix::from_triplets(n, n, std::move(trip)));
  std::vector<double> r1(n), r2(n), sum(n);
  for (int i = 0; i < n; ++i) {
    r1[i] = 2.0 * uniform() - 1.0;
    r2[i] = 2.0 * uniform() - 1.0;
    sum[i] = r1[i] + r2[i];
  }
  const auto z1 = ilu0_apply(f, r1);
  const auto z2 = ilu0_apply(f, r2);
  const auto zs = ilu0_apply(f, sum);
  for (int i = 0; i < n; ++i) {
    CHECK(zs[i] == doctest::Approx(z1[i] + z2[i]).epsilon(1e-13));
  }
}

TEST_CASE("kernels are deterministic") {
  std::mt19937_64 rng(77);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int n = 40;
  std::vector<CsrMatrix::Triplet> trip;
  for (int i = 0; i < n; ++i) {
    trip.push_back({i, i, 5.0 + uniform()});
    for (int j = 0; j < n; ++j) {
      if (i != j && uniform() < 0.1) trip.push_back({i, j, uniform() - 0.5});
    }
  }
  const CsrMatrix a = CsrMatrix::from_triplets(n, n, trip);
  std::vector<double> x(n);
  for (double& v : x) v = uniform();

  const auto y1 = a.multiply_vector(x);
  const auto y2 = a.multiply_vector(x);
  CHECK(y1 == y2);
  const auto s1 = direct_solve(a, x);
  const auto s2 = direct_solve(a, x);
  CHECK(s1 == s2);
}
