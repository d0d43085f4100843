#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sdc/random.hpp"
#include "sdc/states.hpp"

using namespace sdc;
using Catch::Approx;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

}  // namespace

TEST_CASE("kron", "[qlin]") {
  CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);
  CHECK(max_abs(kron(diag({1, -1}), identity(2)) - diag({1, 1, -1, -1})) == 0.0);

  SECTION("sigma_x (x) sigma_x fixes Phi+") {
    ComplexVector phi = ComplexVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const ComplexVector out = kron(sigma_x(), sigma_x()) * phi;
    CHECK((out - phi).cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("mixed product property on random inputs") {
    auto rng = derived_rng(11, 0);
    for (std::size_t d : {2u, 3u}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_ginibre(d, d, rng), b = random_ginibre(d, d, rng);
        const auto c = random_ginibre(d, d, rng), e = random_ginibre(d, d, rng);
        CHECK(max_abs(kron(a, b) * kron(c, e) - kron(a * c, b * e)) < 1e-10);
      }
    }
  }
}

TEST_CASE("partial_trace", "[qlin]") {
  SECTION("Bell marginal is maximally mixed") {
    const auto bob = partial_trace(bell_state(2), {1});
    CHECK(max_abs(bob.matrix() - identity(2) / 2.0) < 1e-12);
    CHECK(bob.dims() == Dims{2});
  }

  SECTION("product state") {
    auto rng = derived_rng(3, 0);
    const auto a = random_density_matrix({2}, rng);
    const auto b = random_density_matrix({3}, rng);
    const auto ra = partial_trace(kron(a, b), {0});
    CHECK(max_abs(ra.matrix() - a.matrix()) < 1e-12);
    CHECK(ra.dims() == Dims{2});
  }

  SECTION("Werner marginal against index contraction") {
    const auto w = werner_state(2, 0.5);
    const auto bob = partial_trace(w, {1});
    CHECK(max_abs(bob.matrix() - oracle::trace_first(w.matrix(), 2, 2)) < 1e-14);
    CHECK(max_abs(bob.matrix() - identity(2) / 2.0) < 1e-12);
  }

  SECTION("three subsystems against nested contraction") {
    auto rng = derived_rng(4, 0);
    const auto rho = random_density_matrix({2, 3, 2}, rng);
    // keep {0,2}: trace the middle factor by hand
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int c2 = 0; c2 < 2; ++c2)
            for (int b = 0; b < 3; ++b)
              expect(a * 2 + c, a2 * 2 + c2) += rho.matrix()(a * 6 + b * 2 + c, a2 * 6 + b * 2 + c2);
    CHECK(max_abs(partial_trace(rho, {2, 0}).matrix() - expect) < 1e-14);
  }

  SECTION("index out of range") {
    CHECK_THROWS_AS(partial_trace(bell_state(2), {2}), std::out_of_range);
  }

  SECTION("preserves trace and positivity") {
    auto rng = derived_rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_density_matrix({2, 3}, rng);
      for (std::size_t keep : {0u, 1u}) {
        const auto r = partial_trace(rho, {keep});
        CHECK(std::abs(r.matrix().trace() - Complex{1.0}) < 1e-10);
        CHECK(hermitian_eig(r.matrix()).eigenvalues.back() > -1e-10);
      }
    }
  }
}

TEST_CASE("hermitian_eig", "[qlin]") {
  CHECK(hermitian_eig(diag({0.7, 0.3})).eigenvalues == std::vector<double>{0.7, 0.3});
  const auto sx = hermitian_eig(sigma_x()).eigenvalues;
  CHECK(sx[0] == Approx(1.0).margin(1e-14));
  CHECK(sx[1] == Approx(-1.0).margin(1e-14));

  SECTION("Werner spectrum, checked against the characteristic polynomial") {
    for (double eta : {0.0, 0.2, 1.0 / 3.0, 0.75, 1.0}) {
      const auto w = werner_state(2, eta);
      const auto spec = hermitian_eig(w.matrix());
      const auto expect = oracle::werner_spectrum(eta);
      auto sorted = expect;
      std::sort(sorted.rbegin(), sorted.rend());
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(spec.eigenvalues[i] == Approx(sorted[i]).margin(1e-12));
        CHECK(oracle::char_poly(w.matrix(), expect[i]) < 1e-12);
      }
    }
  }

  SECTION("reconstruction on random Hermitian matrices") {
    auto rng = derived_rng(7, 0);
    for (std::size_t n : {2u, 3u, 4u, 9u, 16u}) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto g = random_ginibre(n, n, rng);
        const ComplexMatrix a = g + g.adjoint();
        const auto spec = hermitian_eig(a);
        CHECK(max_abs(spec.reconstruct() - a) < 1e-9);
        CHECK(std::is_sorted(spec.eigenvalues.rbegin(), spec.eigenvalues.rend()));
        CHECK(max_abs(spec.eigenvectors.adjoint() * spec.eigenvectors - identity(n)) < 1e-9);
      }
    }
  }

  SECTION("rejects non-Hermitian input") {
    ComplexMatrix a(2, 2);
    a << 0, 1, 0, 0;
    CHECK_THROWS_AS(hermitian_eig(a), InvalidMatrix);
  }
}

TEST_CASE("von_neumann_entropy", "[qlin]") {
  CHECK(von_neumann_entropy(bell_state(2)) == Approx(0.0).margin(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix(identity(4) / 4.0, {2, 2})) == Approx(2.0).margin(1e-12));
  const DensityMatrix d4(diag({0.625, 0.125, 0.125, 0.125}), {4});
  const double expect = oracle::shannon_bits({0.625, 0.125, 0.125, 0.125});
  CHECK(expect == Approx(1.54879).margin(5e-6));
  CHECK(von_neumann_entropy(d4) == Approx(expect).margin(1e-12));

  SECTION("bounded by log2 dim") {
    auto rng = derived_rng(8, 0);
    for (int trial = 0; trial < 30; ++trial) {
      const Dims dims = trial % 2 ? Dims{2, 2} : Dims{3, 3};
      const auto rho = random_density_matrix(dims, rng, 1 + trial % 5);
      const double s = von_neumann_entropy(rho);
      CHECK(s >= 0.0);
      CHECK(s <= std::log2(static_cast<double>(rho.dim())) + 1e-12);
    }
  }
}

TEST_CASE("shannon_entropy", "[qlin]") {
  CHECK(shannon_entropy({1.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(shannon_entropy({0.25, 0.25, 0.25, 0.25}) == Approx(2.0).margin(1e-15));
  CHECK(shannon_entropy({0.05, 0.95}) == Approx(oracle::h2(0.05)).margin(1e-15));
  CHECK(shannon_entropy({0.05, 0.95}) == Approx(0.28640).margin(5e-6));
  CHECK_THROWS_AS(shannon_entropy({0.5, 0.4}), ParameterError);
  CHECK_THROWS_AS(shannon_entropy({1.2, -0.2}), ParameterError);
}

TEST_CASE("relative_entropy", "[qlin]") {
  const DensityMatrix zero(diag({1.0, 0.0}), {2});
  const DensityMatrix one(diag({0.0, 1.0}), {2});
  const DensityMatrix mixed(identity(2) / 2.0, {2});

  CHECK(relative_entropy(mixed, mixed) == Approx(0.0).margin(1e-14));
  CHECK(relative_entropy(zero, mixed) == Approx(1.0).margin(1e-14));
  CHECK_THROWS_AS(relative_entropy(zero, one), SupportViolation);

  SECTION("Klein inequality on random pairs") {
    auto rng = derived_rng(9, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const Dims dims = trial % 3 == 0 ? Dims{2} : Dims{2, 2};
      const auto rho = random_density_matrix(dims, rng, 1 + trial % 4);
      const auto sigma = random_density_matrix(dims, rng);
      CHECK(relative_entropy(rho, sigma) >= 0.0);
      CHECK(relative_entropy(rho, rho) == Approx(0.0).margin(1e-9));
    }
  }
}

TEST_CASE("DensityMatrix validation", "[qlin]") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.4}), {2}), InvalidMatrix);
  CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5}), {2}), InvalidMatrix);
  CHECK_THROWS_AS(DensityMatrix(identity(4) / 4.0, {2, 3}), DimensionError);
  ComplexMatrix nonherm = identity(2) / 2.0;
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(nonherm, {2}), InvalidMatrix);
}

TEST_CASE("permute_subsystems", "[qlin]") {
  auto rng = derived_rng(10, 0);
  const auto a = random_density_matrix({2}, rng);
  const auto b = random_density_matrix({3}, rng);
  const std::vector<std::size_t> swap{1, 0};
  const auto swapped = permute_subsystems(kron(a, b), swap);
  CHECK(swapped.dims() == Dims{3, 2});
  CHECK(max_abs(swapped.matrix() - kron(b.matrix(), a.matrix())) < 1e-14);
}
