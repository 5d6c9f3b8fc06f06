#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pathmub/error.hpp"

namespace pathmub {

/// Orthonormal basis of C^M stored as the columns of an M x M matrix.
class Basis {
public:
    static constexpr double kOrthonormalTol = 1e-10;

    explicit Basis(Eigen::MatrixXcd columns);

    static Basis identity(std::size_t dim);
    static Basis fourier(std::size_t dim);
    /// Orthonormalized matrix of i.i.d. standard complex Gaussians from a seeded generator.
    static Basis random(std::size_t dim, std::uint64_t seed);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(columns_.cols()); }
    const Eigen::MatrixXcd& columns() const noexcept { return columns_; }

    /// U B for a unitary U (checked through the Basis invariant).
    Basis transformed(const Eigen::MatrixXcd& unitary) const;

private:
    Eigen::MatrixXcd columns_;
};

Basis fourier_basis(std::size_t dim);

/// Haar-like random unitary from the same construction as Basis::random.
Eigen::MatrixXcd random_unitary(std::size_t dim, std::uint64_t seed);

/// Phases L(a, b) in (-pi, pi].
struct PhaseMatrix {
    Eigen::MatrixXd entries;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    /// e^{i L} / sqrt(M)
    Eigen::MatrixXcd reconstruct() const;
};

/// Entry (a, b) = <e_a | f_b>.
Eigen::MatrixXcd overlap_matrix(const Basis& b1, const Basis& b2);

/// max_{a,b} | M |<e_a|f_b>|^2 - 1 |, zero iff the pair is mutually unbiased.
double mub_deficit(const Basis& b1, const Basis& b2);

/// Same statistic for an explicit overlap matrix.
double overlap_deficit(const Eigen::MatrixXcd& overlap);

/**
 * Chordal distance between the two bases as orthonormal frames of projectors:
 * D^2 = 1 - (1/(M-1)) sum_{a,b} (|<e_a|f_b>|^2 - 1/M)^2. Equals 1 exactly for an unbiased
 * pair and 0 for coincident bases. Reported only.
 */
double basis_distance(const Basis& b1, const Basis& b2);

/// max |A^dagger A - I|
double unitarity_error(const Eigen::MatrixXcd& a);

/// Unitary within tol and every entry of modulus 1/sqrt(M) within tol.
bool is_hadamard(const Eigen::MatrixXcd& m, double tol);

/// arg <e_a|f_b>; NotUnbiased when mub_deficit(b1, b2) > tol.
PhaseMatrix phase_lagrangian(const Basis& b1, const Basis& b2, double tol);

/**
 * Sum over all intermediate labels of <phi|x_1><x_1|x_2>...<x_N|psi>, the bases
 * inserted in order. Evaluated right to left as a chain of matrix-vector products.
 */
std::complex<double> insertion_identity(const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                                        const std::vector<Basis>& bases);

}  // namespace pathmub
