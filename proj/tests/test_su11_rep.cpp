#include <doctest.h>

#include <cmath>

#include "so12/su11_rep.hpp"

using namespace so12;

namespace {

const std::complex<double> I(0, 1);

double expect(const Mat& op, int n) { return op(n, n).real(); }

}  // namespace

TEST_CASE("generator entries") {
  auto g = build_generators({0.5, 4});
  for (int n = 0; n < 4; ++n) CHECK(g.K0.entries(n, n).real() == 0.5 + n);
  auto h = build_generators({1.0, 8});
  CHECK(h.Kplus.entries(1, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(h.Kminus.entries.col(0).norm() == 0);
  CHECK((h.Kplus.entries.adjoint() - h.Kminus.entries).norm() == 0);
  CHECK((h.K1.entries - h.K1.entries.adjoint()).norm() < 1e-14);
  CHECK((h.K2.entries - h.K2.entries.adjoint()).norm() < 1e-14);
  CHECK_THROWS_AS(build_generators({0.0, 8}), ConfigError);
  CHECK_THROWS_AS(build_generators({1.0, 3}), ConfigError);
}

TEST_CASE("commutation relations on the interior block") {
  for (double k : {0.25, 0.5, 0.75, 1.0, 1.5, 2.3})
    for (int N : {16, 64, 256}) {
      auto g = build_generators({k, N});
      const Mat &K0 = g.K0.entries, &K1 = g.K1.entries, &K2 = g.K2.entries;
      const double s = k + N;
      CHECK(interior_max(commutator(K0, K1) - I * K2) < 1e-12 * s);
      CHECK(interior_max(commutator(K0, K2) + I * K1) < 1e-12 * s);
      CHECK(interior_max(commutator(K1, K2) + I * K0) < 1e-12 * s * s);
    }
}

TEST_CASE("Casimir") {
  for (double k : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    auto L = casimir({k, 64}).entries;
    const Mat id = Mat::Identity(64, 64);
    CHECK(interior_max(L - k * (1 - k) * id) < 1e-10);
    auto g = build_generators({k, 64});
    const Mat alt = g.Kplus.entries * g.Kminus.entries + g.K0.entries * (id - g.K0.entries);
    CHECK(interior_max(L - alt) < 1e-10);
  }
  CHECK(casimir({0.5, 16}).entries(3, 3).real() == doctest::Approx(0.25));
  CHECK(std::abs(casimir({1.0, 16}).entries(3, 3)) < 1e-12);
  CHECK(casimir({0.25, 16}).entries(2, 2).real() == doctest::Approx(3.0 / 16));
  CHECK(casimir({0.75, 16}).entries(2, 2).real() == doctest::Approx(3.0 / 16));
}

TEST_CASE("composite ladder") {
  for (double k : {0.25, 0.5, 1.0, 2.7}) {
    auto c = composite_ladder({k, 32});
    const Mat n = c.a_dag.entries * c.a.entries;
    CHECK(std::abs(n(0, 0)) < 1e-15);
    CHECK(n(3, 3).real() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK((n - c.Nop.entries).norm() < 1e-12);
    CHECK(interior_max(commutator(c.a.entries, c.a_dag.entries) - Mat::Identity(32, 32), 1) < 1e-13);
    CHECK(std::abs(c.a.entries(4, 5) - std::sqrt(5.0)) < 1e-14);
  }
}

TEST_CASE("composite position and momentum") {
  Mat first;
  for (double k : {0.25, 0.5, 1.0, 2.7}) {
    auto qp = composite_qp({k, 32});
    const Mat &Q = qp.Qtilde.entries, &P = qp.Ptilde.entries;
    CHECK(std::abs(Q(0, 1) - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(Q(5, 5)) == 0);
    CHECK(interior_max(commutator(Q, P) - I * Mat::Identity(32, 32), 1) < 1e-13);
    CHECK((Q - Q.adjoint()).norm() < 1e-14);
    if (first.size() == 0)
      first = Q;
    else
      CHECK((Q - first).norm() < 1e-13);
  }
}

TEST_CASE("number state statistics agree with matrices") {
  for (double k : {0.25, 0.5, 0.75, 1.0, 1.5})
    for (int n : {0, 1, 2, 5}) {
      auto g = build_generators({k, 32});
      const Mat &K0 = g.K0.entries, &K1 = g.K1.entries, &K2 = g.K2.entries;
      auto st = number_state_stats(k, n);
      const double v1 = expect(K1 * K1, n) - std::pow(expect(K1, n), 2);
      const double v2 = expect(K2 * K2, n) - std::pow(expect(K2, n), 2);
      CHECK(std::abs(st.var_K1 - v1) < 1e-10);
      CHECK(std::abs(st.var_K2 - v2) < 1e-10);
      CHECK(std::abs(expect(K1, n)) < 1e-15);
      CHECK(std::abs(expect(K1 * K2 + K2 * K1, n)) < 1e-12);
      if (n == 0) {
        CHECK(std::abs(st.var_K1 - k / 2) < 1e-12);
        CHECK(std::abs(v1 - k / 2) < 1e-10);
        CHECK(st.var_product == doctest::Approx(st.K0_bound));
      } else {
        CHECK(st.var_product > st.K0_bound);
      }
      // mean-square fluctuation constraint valid in any state of the representation
      const double v0 = expect(K0 * K0, n) - std::pow(expect(K0, n), 2);
      const double lhs = v1 + v2 - v0 + 0 - std::pow(expect(K0, n), 2);
      CHECK(std::abs(lhs - (k - k * k)) < 1e-10);
    }
  CHECK(number_state_stats(0.5, 2).var_K1 == doctest::Approx(3.25));
  CHECK(std::sqrt(number_state_stats(1.0, 0).var_product) == doctest::Approx(0.5));
}

TEST_CASE("contraction toward the oscillator") {
  auto t = contraction_limit({1, 10, 100, 1e4}, 3, 2);
  CHECK(t.monotone);
  CHECK(t.rows.back().K3_diag == doctest::Approx(1.0003));
  CHECK(std::abs(t.rows.back().Kplus_elem - 2.0) < 1e-3);
  auto u = contraction_limit({1.0}, 1, 1);
  CHECK(u.rows[0].Kplus_elem == doctest::Approx(std::sqrt(3.0)));
  auto w = contraction_limit({1e8}, 0, 1);
  CHECK(w.rows[0].Kplus_elem == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(contraction_limit({2, 1}, 0, 1), DomainError);
  // matrix elements taken from generators directly
  auto g = build_generators({10.0, 8});
  CHECK(t.rows[1].Kplus_elem == doctest::Approx(g.Kplus.entries(4, 3).real() / std::sqrt(20.0)));
}

TEST_CASE("Holstein-Primakoff form") {
  for (double k : {0.5, 0.75, 2.3}) {
    auto hp = holstein_primakoff({k, 16});
    auto g = build_generators({k, 16});
    CHECK((hp.Kplus.entries - g.Kplus.entries).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((hp.Kminus.entries - g.Kminus.entries).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(hp.K0.entries(0, 0).real() == k);
  }
  auto hp = holstein_primakoff({0.75, 16});
  const Mat K1 = 0.5 * (hp.Kplus.entries + hp.Kminus.entries);
  const Mat K2 = (hp.Kplus.entries - hp.Kminus.entries) / (2.0 * I);
  const Mat L = K1 * K1 + K2 * K2 - hp.K0.entries * hp.K0.entries;
  CHECK(interior_max(L - 3.0 / 16 * Mat::Identity(16, 16)) < 1e-12);
}
