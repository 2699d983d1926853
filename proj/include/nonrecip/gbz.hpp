#pragma once

#include <vector>

#include "nonrecip/lattice.hpp"
#include "nonrecip/spectral.hpp"

namespace nonrecip {

// det(H(beta) - E) shifted to an ordinary polynomial: the Laurent series runs
// over beta^{shift} .. beta^{shift + degree}, coefficients stored ascending.
struct CharPoly {
    Vector coefficients;
    int shift = 0;
    Complex energy{};
    int degree() const { return (int)coefficients.size() - 1; }
    bool balanced_range() const { return shift == -(degree() + shift); }
};

CharPoly char_poly(const BlochMatrix& bm, Complex energy);

// Roots via companion-matrix eigendecomposition, sorted by (|beta|, arg beta).
std::vector<Complex> beta_roots(const CharPoly& cp);

struct GbzPoint {
    Complex energy;
    Complex beta;
};

struct GbzCurve {
    std::vector<GbzPoint> points;
    double radius = 0.0;                // median |beta| over the emitted pair points
    double max_radial_deviation = 0.0;  // max | |beta| - radius |
    double theoretical_radius = 0.0;    // NaN when no closed form applies
    bool middle_rank_ambiguous = false; // odd-degree polynomial encountered

    bool circular(double rel_tol = 1e-2) const {
        return radius > 0.0 && max_radial_deviation <= rel_tol * radius;
    }
};

// Middle-modulus root pair per energy plus the circle fit.
GbzCurve gbz_points(const LatticeModel1D& model, const std::vector<Complex>& energies);

// sqrt|prod t_R / prod t_L| over the NN bonds; requires path independence when
// long-range hops are present.
double theoretical_radius(const LatticeModel1D& model);

struct PairingReport {
    bool pass = true;
    double max_mismatch = 0.0; // worst root-multiset distance under beta -> rM^2/beta
};

// Checks that the root multiset of every characteristic polynomial is invariant
// under beta -> rM^2 / beta.
PairingReport beta_pairing_check(const LatticeModel1D& model,
                                 const std::vector<Complex>& energies, double tol = 1e-8);

struct BandSweep {
    double radius = 0.0;
    int num_k = 0;
    std::vector<double> k;                    // size num_k + 1, closed loop
    std::vector<std::vector<Complex>> bands;  // bands[b][j], continuity ordered
    std::vector<Complex> flattened() const;
};

// Eigenvalues of H(r e^{ik}) on a k grid, bands ordered by eigenvector overlap
// continuity. Radius defaults to theoretical_radius(model).
BandSweep circular_band_sweep(const LatticeModel1D& model, int num_k);
BandSweep circular_band_sweep(const LatticeModel1D& model, int num_k, double radius);

// Energies on the circular continuum bands: the band sweep flattened and
// deduplicated per k sample. This is the sampling the circle-fit pipeline uses.
std::vector<Complex> circular_band_energies(const LatticeModel1D& model, int num_k);

std::pair<double, double> gbz_2d_separable(const LatticeModel2D& model);

// |ln(|beta_q+1| / |beta_q|)| of the middle pair at each eigenvalue: zero on
// the continuum bands in the large-N limit, order one for in-gap levels.
std::vector<double> middle_pair_splits(const BlochMatrix& bm, const Vector& values);

// GBZ-condition discrete-level count with finite-size refinement: eigenvalues
// whose middle-pair split stays above split_threshold as the chain is doubled.
// Counting runs on enlarged copies of the model (n_start cells, doubling up to
// n_max while any split is within a factor two of the threshold).
struct DiscreteLevelCount {
    int count = 0;
    int cells_used = 0;
    std::vector<Complex> levels; // eigenvalues classified discrete, at cells_used
};

DiscreteLevelCount count_discrete_levels(const LatticeModel1D& model,
                                         double split_threshold = 0.016,
                                         int n_start = 160, int n_max = 640);

} // namespace nonrecip
