#pragma once

#include <Eigen/Core>

namespace peerscope::linalg {

struct EighResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, aligned with eigenvalues
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Converges when the
// off-diagonal Frobenius norm falls below 1e-10 * ||S||_F (at most 100
// sweeps, non-convergence throws). Input must satisfy
// ||S - S^T||_inf <= 1e-9.
EighResult eigh(const Eigen::MatrixXd& S);

}  // namespace peerscope::linalg
