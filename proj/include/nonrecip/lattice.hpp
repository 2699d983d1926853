#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "nonrecip/errors.hpp"

namespace nonrecip {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Boundary { Obc, Pbc };

// Hop between sublattice i of cell n and sublattice j of cell n+m, m >= 1.
struct LongRangeHop {
    int from_sub = 1;     // i
    int to_sub = 1;       // j
    int cell_offset = 1;  // m
    Complex forward{};    // amplitude for (n,i) -> (n+m,j)
    Complex backward{};   // amplitude for (n+m,j) -> (n,i)
};

// 1D chain with M sublattices per cell and N cells. t_right[i]/t_left[i] are
// the two directions of bond i (i = M-1 is the intercell bond).
struct LatticeModel1D {
    int num_sub = 1;   // M
    int num_cells = 1; // N
    std::vector<Complex> t_right;
    std::vector<Complex> t_left;
    std::vector<LongRangeHop> long_range;
    Boundary boundary = Boundary::Obc;

    int size() const { return num_sub * num_cells; }
    // cell in 1..N, sub in 1..M -> 0-based site index
    int site(int cell, int sub) const { return (cell - 1) * num_sub + (sub - 1); }

    bool is_real() const;
    void validate() const; // throws Error(InputError)
};

// Square lattice, nx columns (x index m) by ny rows (y index n). Diagonal hops
// run along (m,n) -> (m+1,n+1) with amplitude t_diag_fwd and back with t_diag_bwd.
struct LatticeModel2D {
    int nx = 2;
    int ny = 2;
    Complex t_right{}, t_left{}; // x axis
    Complex t_up{}, t_down{};    // y axis
    Complex t_diag_fwd{}, t_diag_bwd{};

    int size() const { return nx * ny; }
    int site(int m, int n) const { return (n - 1) * nx + (m - 1); }

    bool has_diagonal() const;
    bool is_real() const;
    void validate() const;
};

// Hopping blocks T_m of the generalized Bloch Hamiltonian H(beta) = sum_m T_m beta^{-m}.
struct BlochMatrix {
    int dim = 1; // M
    std::map<int, Matrix> blocks;

    // longest hopping range p (cells)
    int range() const;
    Matrix eval(Complex beta) const; // throws Error(InputError) at beta = 0
};

Matrix build_real_space(const LatticeModel1D& model);
BlochMatrix hopping_blocks(const LatticeModel1D& model);
Matrix bloch_eval(const BlochMatrix& bm, Complex beta);
Matrix build_real_space_2d(const LatticeModel2D& model); // OBC

} // namespace nonrecip
