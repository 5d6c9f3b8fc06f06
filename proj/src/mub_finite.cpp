#include "pathmub/mub_finite.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pathmub/numerics.hpp"

namespace pathmub {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        std::ostringstream os;
        os << "dimension " << a << " vs " << b;
        fail(Errc::DimensionMismatch, os.str());
    }
}

double wrap_phase(double phi) {
    // std::arg lies in [-pi, pi]; fold -pi onto pi.
    return phi <= -kPi ? phi + 2.0 * kPi : phi;
}

}  // namespace

Basis::Basis(Eigen::MatrixXcd columns) : columns_(std::move(columns)) {
    require(columns_.rows() == columns_.cols() && columns_.rows() > 0, Errc::DimensionMismatch,
            "basis matrix must be square and non-empty");
    const double err = unitarity_error(columns_);
    if (!(err <= kOrthonormalTol)) {
        std::ostringstream os;
        os << "basis columns are not orthonormal (max |B'B - I| = " << err << ")";
        fail(Errc::InvalidArgument, os.str());
    }
}

Basis Basis::identity(std::size_t dim) {
    const auto m = static_cast<Eigen::Index>(dim);
    return Basis(Eigen::MatrixXcd::Identity(m, m));
}

Basis Basis::fourier(std::size_t dim) {
    require(dim >= 1, Errc::InvalidArgument, "basis dimension must be positive");
    const auto m = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd f(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index b = 0; b < m; ++b) {
        for (Eigen::Index a = 0; a < m; ++a) {
            // reduce ab mod M first so the angle stays exact for large M
            const auto ab = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b) % dim;
            f(a, b) = std::polar(norm, 2.0 * kPi * static_cast<double>(ab) / static_cast<double>(dim));
        }
    }
    return Basis(std::move(f));
}

Basis fourier_basis(std::size_t dim) { return Basis::fourier(dim); }

Eigen::MatrixXcd random_unitary(std::size_t dim, std::uint64_t seed) {
    require(dim >= 1, Errc::InvalidArgument, "basis dimension must be positive");
    const auto m = static_cast<Eigen::Index>(dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd z(m, m);
    for (Eigen::Index b = 0; b < m; ++b)
        for (Eigen::Index a = 0; a < m; ++a) z(a, b) = {gauss(rng), gauss(rng)};

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the column phases by diag(R) so the distribution does not depend on QR conventions.
    for (Eigen::Index b = 0; b < m; ++b) {
        const auto d = r(b, b);
        if (std::abs(d) > 0.0) q.col(b) *= d / std::abs(d);
    }
    return q;
}

Basis Basis::random(std::size_t dim, std::uint64_t seed) { return Basis(random_unitary(dim, seed)); }

Basis Basis::transformed(const Eigen::MatrixXcd& unitary) const {
    require_same_dim(static_cast<std::size_t>(unitary.rows()), dim());
    return Basis(unitary * columns_);
}

Eigen::MatrixXcd PhaseMatrix::reconstruct() const {
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim()));
    return entries.unaryExpr([norm](double phi) { return std::polar(norm, phi); });
}

Eigen::MatrixXcd overlap_matrix(const Basis& b1, const Basis& b2) {
    require_same_dim(b1.dim(), b2.dim());
    return b1.columns().adjoint() * b2.columns();
}

double overlap_deficit(const Eigen::MatrixXcd& overlap) {
    const double m = static_cast<double>(overlap.rows());
    return (m * overlap.cwiseAbs2().array() - 1.0).abs().maxCoeff();
}

double mub_deficit(const Basis& b1, const Basis& b2) { return overlap_deficit(overlap_matrix(b1, b2)); }

double basis_distance(const Basis& b1, const Basis& b2) {
    const std::size_t dim = b1.dim();
    require_same_dim(dim, b2.dim());
    if (dim == 1) return 0.0;
    const double m = static_cast<double>(dim);
    const Eigen::ArrayXXd p = overlap_matrix(b1, b2).cwiseAbs2().array() - 1.0 / m;
    const double d2 = 1.0 - p.square().sum() / (m - 1.0);
    return std::sqrt(std::max(0.0, d2));
}

double unitarity_error(const Eigen::MatrixXcd& a) {
    const auto n = a.cols();
    return (a.adjoint() * a - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

bool is_hadamard(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!(unitarity_error(m) <= tol)) return false;
    const double target = 1.0 / std::sqrt(static_cast<double>(m.rows()));
    return (m.cwiseAbs().array() - target).abs().maxCoeff() <= tol;
}

PhaseMatrix phase_lagrangian(const Basis& b1, const Basis& b2, double tol) {
    const Eigen::MatrixXcd o = overlap_matrix(b1, b2);
    const double deficit = overlap_deficit(o);
    if (!(deficit <= tol)) {
        std::ostringstream os;
        os << "deficit " << deficit << " exceeds tolerance " << tol;
        fail(Errc::NotUnbiased, os.str());
    }
    PhaseMatrix out;
    out.entries = o.unaryExpr([](const std::complex<double>& z) { return wrap_phase(std::arg(z)); });
    return out;
}

std::complex<double> insertion_identity(const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                                        const std::vector<Basis>& bases) {
    const auto dim = static_cast<std::size_t>(phi.size());
    require_same_dim(dim, static_cast<std::size_t>(psi.size()));
    for (const auto& b : bases) require_same_dim(dim, b.dim());
    if (bases.empty()) return phi.dot(psi);

    // amplitudes(x_N) = <x_N|psi>, then fold in <x_k|x_{k+1}> from the right.
    Eigen::VectorXcd amplitudes = bases.back().columns().adjoint() * psi;
    for (std::size_t k = bases.size() - 1; k-- > 0;) {
        const Eigen::MatrixXcd link = bases[k].columns().adjoint() * bases[k + 1].columns();
        amplitudes = (link * amplitudes).eval();
    }
    // sum over x_1 of <phi|x_1> amplitudes(x_1)
    const Eigen::VectorXcd head = bases.front().columns().adjoint() * phi;
    return head.dot(amplitudes);
}

}  // namespace pathmub
