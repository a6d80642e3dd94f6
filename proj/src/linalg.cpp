#include "peerscope/linalg.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace peerscope::linalg {

static double off_diagonal_norm(const Eigen::MatrixXd& S) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < S.rows(); ++i)
        for (Eigen::Index j = 0; j < S.cols(); ++j)
            if (i != j) sum += S(i, j) * S(i, j);
    return std::sqrt(sum);
}

EighResult eigh(const Eigen::MatrixXd& S_in) {
    const Eigen::Index n = S_in.rows();
    if (S_in.cols() != n) throw std::runtime_error("eigh: matrix not square");
    double asym = (S_in - S_in.transpose()).cwiseAbs().maxCoeff();
    if (n > 0 && asym > 1e-9)
        throw std::runtime_error("eigh: matrix not symmetric (max |S-S^T| = " +
                                 std::to_string(asym) + ")");

    Eigen::MatrixXd A = (S_in + S_in.transpose()) / 2.0;  // scrub tiny asymmetry
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

    const double frob = A.norm();
    const double tol = 1e-10 * (frob > 0.0 ? frob : 1.0);
    const int max_sweeps = 100;

    int sweep = 0;
    while (off_diagonal_norm(A) > tol) {
        if (++sweep > max_sweeps)
            throw std::runtime_error(
                "eigh: Jacobi failed to converge after " + std::to_string(max_sweeps) +
                " sweeps (off-diagonal norm " + std::to_string(off_diagonal_norm(A)) +
                ", target " + std::to_string(tol) + ")");
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                if (apq == 0.0) continue;
                // Rotation angle per symmetric Schur decomposition of the 2x2 block.
                double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                for (Eigen::Index i = 0; i < n; ++i) {
                    double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (Eigen::Index j = 0; j < n; ++j) {
                    double apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj - s * aqj;
                    A(q, j) = s * apj + c * aqj;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return A(a, a) < A(b, b); });

    EighResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        result.eigenvalues(k) = A(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]);
        result.eigenvectors.col(k) = V.col(order[static_cast<size_t>(k)]);
    }
    return result;
}

}  // namespace peerscope::linalg
