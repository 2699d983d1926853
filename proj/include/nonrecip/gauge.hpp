#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nonrecip/lattice.hpp"

namespace nonrecip {

// Diagonal similarity S = diag{r_{i-1} * r_M^n} that rescales a nonreciprocal
// chain onto its balanced counterpart.
struct IgtScaling {
    Complex cell_factor;               // r_M
    std::vector<Complex> sub_factors;  // r_0 .. r_{M-1}, r_0 = 1
    Vector diag;                       // length N*M, diag[(n-1)M + i-1] = r_{i-1} r_M^n
};

enum class Definiteness { PositiveDefinite, Indefinite };

struct EtaMetric {
    RealVector diag; // eta_I = diag(R_{i-1} R_M^n), signed
    Definiteness definiteness = Definiteness::PositiveDefinite;
};

enum class GaugeStatus { Hermitizable, EtaIPseudo, ComplexScalable, Violated, Degenerate };

const char* to_string(GaugeStatus s);

struct GaugeReport {
    GaugeStatus status = GaugeStatus::Hermitizable;
    std::map<int, Complex> site_potentials;            // squared site scales, when consistent
    std::vector<std::pair<int, int>> violating_cycle;  // edges of one bad cycle, when violated
    double max_cycle_residual = 0.0;
};

// Undirected hop graph with a forward/backward amplitude per edge. Both 1D and
// 2D models reduce to this for the path-independence check.
struct HopGraph {
    struct Edge {
        int a = 0, b = 0;     // 0-based sites, hop runs a -> b with `forward`
        Complex forward{}, backward{};
    };
    int num_sites = 0;
    std::vector<Edge> edges;
};

HopGraph hop_graph(const LatticeModel1D& model);
HopGraph hop_graph(const LatticeModel2D& model);
GaugeReport analyze_hop_graph(const HopGraph& graph, bool amplitudes_real,
                              double tol = 1e-9);

// r_0..r_M with r_i = principal sqrt of (t_R1...t_Ri)/(t_L1...t_Li)
std::vector<Complex> nn_gauge_ratios(const LatticeModel1D& model);
IgtScaling build_igt(const LatticeModel1D& model);
EtaMetric build_eta_i(const LatticeModel1D& model);

// Frobenius norm of eta*H - H^dag*eta with eta rescaled to unit max entry, so
// the residual is meaningful for exponentially graded metrics.
double pseudo_hermiticity_residual(const Matrix& H, const RealVector& eta_diag);

Matrix hermitian_counterpart(const LatticeModel1D& model);

GaugeReport check_path_independence(const LatticeModel1D& model, double tol = 1e-9);
GaugeReport check_path_independence(const LatticeModel2D& model, double tol = 1e-9);

struct GaugeGrid2D {
    Complex rx, ry;
    Matrix site_factors; // (nx, ny), entry (m-1, n-1) = rx^m * ry^n
};

GaugeGrid2D solve_gauge_2d(const LatticeModel2D& model);

// g = (full-lattice reflection) * eta_I, rescaled to unit max entry; commutes
// with H when both the reciprocal and nonreciprocal hop components are mirror
// symmetric.
Matrix reflection_symmetry_generator(const LatticeModel1D& model, double tol = 1e-9);

} // namespace nonrecip
