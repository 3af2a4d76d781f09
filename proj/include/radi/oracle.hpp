#pragma once

#include <optional>
#include <vector>

#include "radi/model.hpp"

namespace radi {

// Dense reference solvers for small problems (n <= kDenseCap). All iterates are
// returned Hermitian-symmetrized. With E present, each oracle works on the reverted
// problem (E^{-1}A, E^{-1}B, C) and maps back through X = E^{-T} Xhat E^{-1}.

/// Hamiltonian [[A, G], [Q, -A^T]] of the (reverted) problem.
Matrix hamiltonian(const RiccatiProblem& problem);

/// Stabilizing solution from an ordered complex Schur form of the Hamiltonian.
CMatrix dense_care_solve(const RiccatiProblem& problem);

/// Stable eigenvalues of the Hamiltonian ordered by ascending |Re|, then |Im|.
std::vector<Complex> stable_hamiltonian_eigenvalues(const RiccatiProblem& problem);

/// -Q_k (Q_k^H P_k)^{-1} Q_k^H from k stable eigenpairs. Without a selection the first
/// k values of stable_hamiltonian_eigenvalues() are used; a selection picks the
/// nearest eigenvalue for each entry.
CMatrix invariant_subspace_approx(const RiccatiProblem& problem, Index k,
                                  const std::optional<std::vector<Complex>>& selection = std::nullopt);

/// One quadratic ADI step (two one-sided dense solves).
CMatrix qadi_dense_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma);

/// One Cayley-transformed Hamiltonian subspace step.
CMatrix cayley_subspace_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma);

/// Dense Lyapunov ADI step (G ignored).
CMatrix lyapunov_adi_dense_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma);

struct DenseResidual {
  CMatrix matrix;
  double norm = 0.0;
};

/// A^T X E + E^T X A + Q - E^T X G X E (E = I when absent).
DenseResidual dense_residual(const CMatrix& x, const RiccatiProblem& problem, NormKind norm = NormKind::Two);

struct LoewnerReport {
  double min_eig_difference = 0.0;  // of X_next - X_prev
  double min_eig_next = 0.0;        // of X_next
  double closed_loop_abscissa = 0.0;  // max Re eig(A - G X_next), generalized: of E^{-1}(A - G X_next E)
};

LoewnerReport loewner_and_stability_checks(const CMatrix& x_prev, const CMatrix& x_next,
                                           const RiccatiProblem& problem);

/// Smallest eigenvalue of a Hermitian matrix (after symmetrization).
double min_hermitian_eigenvalue(const CMatrix& x);

/// Spectral norm of a Hermitian matrix.
double hermitian_norm(const CMatrix& x);

}  // namespace radi
