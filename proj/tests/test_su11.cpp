#include <cmath>

#include "doctest.h"
#include "vlab/su11.hpp"

using namespace vlab;

TEST_CASE("sector construction and the k-g relation") {
  Sector s = sector_from_g(2.0, 16);
  CHECK(s.k == doctest::Approx(1.25).epsilon(1e-16));  // sqrt(2.25) = 1.5 exactly
  CHECK(s.g.has_value());
  Sector s0 = sector_from_g(0.0, 16);
  CHECK(s0.k == doctest::Approx(0.75).epsilon(1e-16));
  CHECK_THROWS_AS((void)sector_from_k(-1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS((void)sector_from_k(0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS((void)sector_from_g(-0.5, 16), std::invalid_argument);
  CHECK_THROWS_AS((void)sector_from_k(1.0, 3), std::invalid_argument);
}

TEST_CASE("generator matrices at k=1, N=4") {
  Sector s = sector_from_k(1.0, 4);
  GeneratorSet g = generators(s);
  CHECK(g.Kplus.mat(1, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.Kplus.mat(2, 1).real() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(g.K3.mat(0, 0).real() == 1.0);  // first entry is k itself
  CHECK(max_abs((g.Kminus.mat - g.Kplus.mat.adjoint()).eval()) == 0.0);
  CHECK(max_abs((g.K1.mat - 0.5 * (g.Kplus.mat + g.Kminus.mat)).eval()) == 0.0);
}

TEST_CASE("ladder relations are exact on the full truncated matrix") {
  for (double k : {0.75, 1.0, 1.25, 2.5}) {
    for (int n : {8, 64}) {
      Sector s = sector_from_k(k, n);
      GeneratorSet g = generators(s);
      OperatorMatrix d1 = commutator(g.K3, g.Kplus) - g.Kplus;
      OperatorMatrix d2 = commutator(g.K3, g.Kminus) + g.Kminus;
      CHECK(max_abs(d1.mat) <= 1e-12);
      CHECK(max_abs(d2.mat) <= 1e-12);
    }
  }
}

TEST_CASE("[K-,K+] = 2K3 inside, analytic corner defect outside") {
  for (double k : {0.75, 1.25}) {
    const int n = 64;
    Sector s = sector_from_k(k, n);
    GeneratorSet g = generators(s);
    OperatorMatrix c = commutator(g.Kminus, g.Kplus);
    OperatorMatrix twice = Complex(2, 0) * g.K3;
    CHECK(window_defect(c, twice, Window(n - 1)) <= 1e-12 * n);
    const double corner = (c.mat(n - 1, n - 1) - twice.mat(n - 1, n - 1)).real();
    const double expected = ladder_corner_defect_exact(s);
    CHECK(std::abs(corner - expected) / std::abs(expected) < 1e-9);
  }
}

TEST_CASE("casimir interior value is k(k-1) and matches g/4 - 3/16") {
  struct Case {
    double k, value;
  };
  for (const Case& c : {Case{1.0, 0.0}, Case{0.75, -0.1875}, Case{1.25, 0.3125}}) {
    Sector s = sector_from_k(c.k, 32);
    OperatorMatrix cas = casimir(s);
    OperatorMatrix ref{Matrix::Identity(32, 32) * c.value, cas.basis};
    CHECK(window_defect(cas, ref, Window(31)) <= 1e-10 * 32);
  }
  // algebraic identity k(k-1) = g/4 - 3/16 at g = 3
  const double k3 = 0.5 * (1.0 + std::sqrt(3.25));
  CHECK(k3 * (k3 - 1.0) == doctest::Approx(3.0 / 4.0 - 3.0 / 16.0).epsilon(1e-15));
  CHECK(k3 * (k3 - 1.0) == doctest::Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("vacuum coherent state: z = 0 annihilated exactly") {
  Sector s = sector_from_k(1.25, 32);
  CoherentVector v = bg_state_series(s, Complex(0, 0));
  CHECK(v.coefficients(0) == Complex(1, 0));
  for (int i = 1; i < 32; ++i) CHECK(std::abs(v.coefficients(i)) == 0.0);
  CHECK(v.eigen_residual == 0.0);
}

TEST_CASE("coherent coefficient ratios follow the gamma-ratio structure") {
  // k=1, z=1: c_2/c_0 = sqrt(1/12)
  Sector s = sector_from_k(1.0, 16);
  CoherentVector v = bg_state_series(s, Complex(1, 0));
  CHECK((v.coefficients(2) / v.coefficients(0)).real() ==
        doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-14));
  // ratio property c_{n+1}/c_n = z/sqrt((n+1)(n+2k)) wherever nonzero
  Sector s2 = sector_from_k(0.75, 24);
  const Complex z(0.8, -0.3);
  CoherentVector w = bg_state_series(s2, z);
  for (int n = 0; n + 1 < 24; ++n) {
    const Complex expect = z / std::sqrt((n + 1.0) * (n + 1.5));
    CHECK(std::abs(w.coefficients(n + 1) / w.coefficients(n) - expect) < 1e-14);
  }
}

TEST_CASE("matrix-product eigenvalue residual is roundoff for the constructed state") {
  Sector s = sector_from_k(1.0, 64);
  const Complex z(1.0, 0.5);
  CoherentVector v = bg_state_series(s, z);
  GeneratorSet g = generators(s);
  Vector r = g.Kminus.mat * v.coefficients - z * v.coefficients;
  // interior components cancel to roundoff; the tail term carries |z c_{N-1}|
  CHECK(r.head(62).norm() / v.norm < 1e-13);
  CHECK(v.eigen_residual <= 1e-8);
}

TEST_CASE("series and exponential constructions agree") {
  // n=1 coefficient at k=1 is z/sqrt(2)
  Sector s1 = sector_from_k(1.0, 8);
  CoherentVector e1 = bg_state_exponential(s1, Complex(0.3, 0));
  CHECK(e1.coefficients(1).real() == doctest::Approx(0.3 / std::sqrt(2.0)).epsilon(1e-14));

  Sector s = sector_from_k(1.25, 64);
  const Complex z(0.5, 0);
  CoherentVector a = bg_state_series(s, z);
  CoherentVector b = bg_state_exponential(s, z);
  double num = 0, den = 0;
  for (int i = 0; i < 64; ++i) {
    num = std::max(num, std::abs(a.coefficients(i) - b.coefficients(i)));
    den = std::max(den, std::abs(a.coefficients(i)));
  }
  CHECK(num / den < 1e-12);

  CoherentVector z0 = bg_state_exponential(s, Complex(0, 0));
  CHECK(z0.coefficients(0) == Complex(1, 0));
  CHECK(z0.coefficients.tail(63).norm() == 0.0);
}

TEST_CASE("residual decreases monotonically with N (log form)") {
  const Complex z(1.0, 0.5);
  double prev = 1.0;
  for (int n : {32, 64, 128}) {
    CoherentVector v = bg_state_series(sector_from_k(0.75, n), z);
    CHECK(v.log10_eigen_residual < prev);
    prev = v.log10_eigen_residual;
  }
}

TEST_CASE("soft bound warning for large |z|") {
  Sector s = sector_from_k(1.0, 16);
  CHECK(!bg_state_series(s, Complex(1, 0)).tail_warning);
  CHECK(bg_state_series(s, Complex(8, 0)).tail_warning);
}

TEST_CASE("gamma_shift identity: both sides act identically") {
  // n=2, k=1: both sides give 1/sqrt(3) on |2,k> from the vacuum
  Sector s = sector_from_k(1.0, 16);
  CHECK(gamma_shift_defect(s, 2, Window(14)) < 1e-10);
  // spot value: [K+(K3+k)^{-1}]^2 applied to e0
  GeneratorSet g = generators(s);
  Matrix a = Matrix::Zero(16, 16);
  for (int n = 0; n + 1 < 16; ++n)
    a(n + 1, n) = std::sqrt((n + 1.0) * (n + 2.0)) / (n + 2.0);
  Vector e0 = Vector::Zero(16);
  e0(0) = 1.0;
  Vector twice = a * (a * e0);
  CHECK(twice(2).real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

  for (int n : {1, 5, 10}) CHECK(gamma_shift_defect(s, n, Window(16 - n)) < 1e-10);
  CHECK_THROWS_AS((void)gamma_shift_defect(s, 2, Window(15)), std::invalid_argument);
}

TEST_CASE("canonical pair identity and its corner defect") {
  for (double k : {0.75, 1.0, 2.5}) {
    Sector s = sector_from_k(k, 24);
    CHECK(canonical_pair_defect(s, Window(23)) < 1e-12);
  }
  // corner at N=4, k=1 is -(N-1) = -3
  Sector s4 = sector_from_k(1.0, 4);
  GeneratorSet g = generators(s4);
  Matrix a = Matrix::Zero(4, 4);
  for (int n = 0; n < 3; ++n) a(n + 1, n) = std::sqrt((n + 1.0) * (n + 2.0)) / (n + 2.0);
  OperatorMatrix c = commutator(g.Kminus, {a, g.Kminus.basis});
  CHECK(c.mat(3, 3).real() == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)canonical_pair_defect(s4, Window(4)), std::invalid_argument);
}
