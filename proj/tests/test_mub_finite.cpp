#include <doctest.h>

#include <cmath>

#include "pathmub/mub_finite.hpp"
#include "pathmub/numerics.hpp"

using namespace pathmub;

TEST_CASE("Fourier and identity are unbiased") {
    for (std::size_t m : {2u, 3u, 7u, 16u, 33u}) {
        const auto I = Basis::identity(m);
        const auto F = fourier_basis(m);
        CHECK(mub_deficit(I, F) < 1e-12);
        CHECK(basis_distance(I, F) == doctest::Approx(1.0));
        CHECK(basis_distance(F, F) < 1e-6);
        CHECK(mub_deficit(I, I) == doctest::Approx(static_cast<double>(m) - 1.0));
    }
}

TEST_CASE("Fourier entries are roots of unity") {
    const auto F = fourier_basis(5).columns();
    const Complex w = std::polar(1.0, 2.0 * kPi / 5.0);
    CHECK(std::abs(F(2, 3) * std::sqrt(5.0) - std::pow(w, 6)) < 1e-14);
    CHECK(is_hadamard(F, 1e-12));
    CHECK_FALSE(is_hadamard(Eigen::MatrixXcd::Identity(5, 5), 1e-12));
}

TEST_CASE("random bases are orthonormal and seed-deterministic") {
    const auto a = Basis::random(9, 42);
    const auto b = Basis::random(9, 42);
    const auto c = Basis::random(9, 43);
    CHECK(unitarity_error(a.columns()) < 1e-12);
    CHECK(a.columns() == b.columns());
    CHECK(a.columns() != c.columns());
}

TEST_CASE("unitary transforms preserve unbiasedness") {
    const auto U = random_unitary(6, 7);
    const auto I = Basis::identity(6).transformed(U);
    const auto F = fourier_basis(6).transformed(U);
    CHECK(mub_deficit(I, F) < 1e-12);
}

TEST_CASE("non-orthonormal input is rejected") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(Basis{m}, Error);
    try {
        mub_deficit(Basis::identity(2), Basis::identity(3));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DimensionMismatch);
    }
}

TEST_CASE("phase lagrangian reconstructs the overlap") {
    const auto I = Basis::identity(8);
    const auto F = fourier_basis(8);
    const auto L = phase_lagrangian(I, F, 1e-10);
    CHECK((L.reconstruct() - overlap_matrix(I, F)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(L.entries.maxCoeff() <= kPi);
    CHECK(L.entries.minCoeff() > -kPi);
    try {
        phase_lagrangian(I, Basis::random(8, 1), 1e-6);
        FAIL("expected NotUnbiased");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotUnbiased);
    }
}

TEST_CASE("inserting complete bases leaves the amplitude unchanged") {
    const Eigen::VectorXcd phi = random_unitary(8, 100).col(0);
    const Eigen::VectorXcd psi = random_unitary(8, 101).col(2);
    std::vector<Basis> bases;
    for (std::uint64_t s = 0; s < 5; ++s) bases.push_back(Basis::random(8, s));
    const Complex direct = phi.dot(psi);
    CHECK(std::abs(insertion_identity(phi, psi, bases) - direct) < 1e-12);
    CHECK(std::abs(insertion_identity(phi, psi, {}) - direct) < 1e-15);

    // explicit triple sum for two bases
    const auto& B1 = bases[0].columns();
    const auto& B2 = bases[1].columns();
    Complex sum = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) sum += std::conj(B1.col(a).dot(phi)) * B1.col(a).dot(B2.col(b)) * B2.col(b).dot(psi);
    CHECK(std::abs(insertion_identity(phi, psi, {bases[0], bases[1]}) - sum) < 1e-12);
}
