#pragma once

#include <vector>

#include "nonrecip/gbz.hpp"
#include "nonrecip/lattice.hpp"
#include "nonrecip/spectral.hpp"

namespace nonrecip {

// Right/left Bloch eigenvector families around the circular GBZ, band-matched
// by eigenvector overlap from sample to sample.
struct BandTrack {
    double radius = 0.0;
    int num_k = 0;
    std::vector<double> k;                          // num_k + 1 samples, closed
    std::vector<std::vector<Complex>> energies;     // [band][sample]
    std::vector<std::vector<Vector>> right, left;   // [band][sample]
    double min_overlap = 1.0;                       // continuity certificate
};

BandTrack band_track(const LatticeModel1D& model, int num_k);
BandTrack band_track(const LatticeModel1D& model, int num_k, double radius);

struct NsZakResult {
    std::vector<int> per_band;       // winding of theta_R per band (Z^lambda / 2pi)
    std::vector<int> per_band_left;  // same from theta_L
    int total = 0;
    std::vector<std::vector<double>> theta_right, theta_left; // unwrapped traces
    int num_k = 0;
};

// theta is the relative phase between the projection sublattice and the last
// sublattice, which is pointwise gauge invariant; the winding is its total
// drop around the GBZ divided by 2*pi, negated.
NsZakResult ns_zak_phase(const BandTrack& track, int sublattice = 1);

// Band-summed NS Zak winding, retrying with doubled resolution when the phase
// trace is undersampled. K runs over {512, 1024, 2048, 4096} by default.
int edge_state_prediction(const LatticeModel1D& model, int initial_k = 512);

enum class CellPhase { PtExact, PtBroken, Degenerate, Transition };

const char* to_string(CellPhase p);

struct PhaseDiagramCell {
    double x = 0.0, y = 0.0;   // (tL1 tR1)/t3^2, (tL2 tR2)/t3^2
    int edge_count = -1;       // -1 when not classifiable
    CellPhase phase = CellPhase::Degenerate;
};

struct PhaseDiagramGrid {
    int resolution_x = 0, resolution_y = 0;
    std::vector<PhaseDiagramCell> cells; // row-major, x fastest
};

// Sweeps the trimer-chain phase diagram over cell centers of the given ranges.
// Representative parameters per cell: tR1 = tR2 = 1, tL1 = x t3^2, tL2 = y t3^2.
// Cells are independent; worker count honours the NONRECIP_THREADS env var.
PhaseDiagramGrid phase_diagram(double t3, double x_min, double x_max, double y_min,
                               double y_max, int resolution_x, int resolution_y,
                               int num_cells = 40);

struct InvarianceReport {
    bool pass = false;
    double spectrum_deviation = 0.0; // max sorted-eigenvalue distance
    bool windings_equal = false;
    std::vector<int> windings_base, windings_scaled;
};

// Rescales (tL1, tR1) -> (alpha tL1, tR1/alpha) and checks that the OBC
// spectrum and the NS Zak windings are unchanged.
InvarianceReport parameter_set_invariance_check(const LatticeModel1D& model, double alpha,
                                                double spectrum_tol = 1e-8, int num_k = 512);

} // namespace nonrecip
