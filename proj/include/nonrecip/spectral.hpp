#pragma once

#include <utility>
#include <vector>

#include "nonrecip/lattice.hpp"

namespace nonrecip {

struct Eigensystem {
    Vector values;  // sorted by (Re, Im)
    Matrix vectors; // unit-norm columns, same order
};

// Dense eigendecomposition with exact power-of-two balancing. Balancing is
// what keeps skin-effect matrices (eigenvector condition growing like r^N)
// solvable at working precision.
Eigensystem eig_full(const Matrix& H, double residual_tol = 1e-9);

// Eigenvalues only, same balancing, cheaper.
Vector eig_values(const Matrix& H);

struct BiorthogonalEigensystem {
    Vector values;
    Matrix right; // |psi_i> columns, unit norm
    Matrix left;  // |phi_i> columns with <phi_i|psi_j> = delta_ij
    double condition_estimate = 0.0; // 1 / cond(right); ~0 flags an EP
};

BiorthogonalEigensystem biorthogonal_system(const Matrix& H, double ep_threshold = 1e-8);

enum class PtPhase { Exact, Broken };

struct SpectrumPhase {
    PtPhase phase = PtPhase::Exact;
    std::vector<std::pair<int, int>> pairing; // (i_+, i_-) conjugate partners
    std::vector<int> real_indices;
};

// Greedy conjugate matching; tol is relative to max(1, spectral radius).
SpectrumPhase classify_spectrum(const Vector& values, double tol = 1e-9);

// Closed-form OBC eigensystem of the two-way uniform chain, both signs of
// t_left*t_right. Left columns are biorthonormalized against the right ones.
struct HnEigensystem {
    Vector values;
    Matrix right;
    Matrix left;
};

HnEigensystem hn_analytic_spectrum(double t_left, double t_right, int n_sites);

struct EnvelopeFit {
    std::vector<double> kappa;     // per-state log-slope (1/cells)
    std::vector<double> r_squared; // fit quality per state
    double theoretical_kappa = 0.0; // ln|r_M|
    int window_lo = 0, window_hi = 0; // interior cells used (1-based, inclusive)
};

// Interior-window log-linear fit of the per-cell amplitude maxima. The window
// [ceil(N/4), floor(3N/4)] is symmetrized about the chain midpoint so the
// standing-wave factor drops out of the slope for mirror-symmetric bulks.
EnvelopeFit localization_lengths(const Eigensystem& es, const LatticeModel1D& model);

// Per-state decay rates along x (y = 1 edge row) and y (x = 1 edge column).
// Slopes come from the ratio against the inversion-mirrored slice, which
// cancels the counterpart's standing-wave modulation.
std::pair<std::vector<double>, std::vector<double>>
localization_lengths_2d(const Eigensystem& es, const LatticeModel2D& model);

// Formal metric from Eq.-style biorthogonal sums: conjugate pairs contribute
// |phi_+><phi_-| + h.c., real levels contribute sign * |phi><phi|.
Matrix reconstruct_eta(const BiorthogonalEigensystem& es, const SpectrumPhase& phase,
                       const std::vector<int>& signs);

// Indices of eigenvalues farther than gap_threshold from every band polyline.
// band_samples holds one closed, continuity-ordered sample sequence per band.
std::vector<int> detect_discrete_levels(const Vector& obc_values,
                                        const std::vector<std::vector<Complex>>& band_samples,
                                        double gap_threshold);

// Greedy column matching by |<prev_i|cur_j>|; returns the permutation applied
// to the current columns. Shared by band sweeps and band tracking.
std::vector<int> match_by_overlap(const Matrix& prev, const Matrix& cur);

double matrix_scale(const Vector& values); // max(1, spectral radius)

} // namespace nonrecip
