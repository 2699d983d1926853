#pragma once

#include <random>
#include <vector>

#include "nonrecip/lattice.hpp"

namespace nonrecip::testing {

inline LatticeModel1D chain(int num_sub, int num_cells, std::vector<Complex> t_right,
                            std::vector<Complex> t_left,
                            Boundary boundary = Boundary::Obc) {
    LatticeModel1D m;
    m.num_sub = num_sub;
    m.num_cells = num_cells;
    m.t_right = std::move(t_right);
    m.t_left = std::move(t_left);
    m.boundary = boundary;
    return m;
}

inline LatticeModel1D hatano_nelson(double t_right, double t_left, int n_sites,
                                    Boundary boundary = Boundary::Obc) {
    return chain(1, n_sites, {t_right}, {t_left}, boundary);
}

// Fig-4-style trimer chain: tL = (2.025, -0.4, t3), tR = (0.4, 0.9, t3).
inline LatticeModel1D ssh3_reference(double t3, int n_cells = 40) {
    return chain(3, n_cells, {0.4, 0.9, t3}, {2.025, -0.4, t3});
}

// HN chain with an extra hop to the third-next cell; delta shifts the backward
// long-range amplitude away from the path-independent value.
inline LatticeModel1D long_range_chain(int n_cells, double delta = 0.0) {
    LatticeModel1D m = hatano_nelson(0.35, 0.25, n_cells);
    double forward = 0.1;
    double backward = forward * std::pow(0.25 / 0.35, 3) + delta;
    m.long_range.push_back({1, 1, 3, forward, backward});
    return m;
}

inline LatticeModel2D grid_2d(int nx, int ny, Complex tr, Complex tl, Complex tu, Complex td,
                              Complex diag_fwd = 0.0, Complex diag_bwd = 0.0) {
    LatticeModel2D m;
    m.nx = nx;
    m.ny = ny;
    m.t_right = tr;
    m.t_left = tl;
    m.t_up = tu;
    m.t_down = td;
    m.t_diag_fwd = diag_fwd;
    m.t_diag_bwd = diag_bwd;
    return m;
}

// Fig-6 parameters; t2 obeys the path-independence constraint when shift = 0.
inline LatticeModel2D hn2d_reference(int nx = 30, int ny = 40, double shift = 0.0) {
    double tl = 0.4, tr = 0.2, td = 0.65, tu = 0.35, t1 = 0.5;
    double t2 = t1 * (td * tl) / (tu * tr) + shift;
    return grid_2d(nx, ny, tr, tl, tu, td, t1, t2);
}

// Random real-hopping NN model from the acceptance ensemble: amplitudes in
// [-2, 2] with |t| >= 0.05.
inline LatticeModel1D random_real_chain(std::mt19937_64& rng, int max_sub = 4,
                                        int min_cells = 4, int max_cells = 12) {
    std::uniform_int_distribution<int> sub_dist(1, max_sub);
    std::uniform_int_distribution<int> cell_dist(min_cells, max_cells);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    int M = sub_dist(rng);
    LatticeModel1D m;
    m.num_sub = M;
    m.num_cells = cell_dist(rng);
    auto draw = [&] {
        double t = 0.0;
        while (std::abs(t) < 0.05) t = amp(rng);
        return Complex(t, 0.0);
    };
    for (int i = 0; i < M; ++i) {
        m.t_right.push_back(draw());
        m.t_left.push_back(draw());
    }
    return m;
}

inline std::vector<Complex> to_vector(const Vector& v) {
    return std::vector<Complex>(v.data(), v.data() + v.size());
}

} // namespace nonrecip::testing
