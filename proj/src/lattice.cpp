#include "nonrecip/lattice.hpp"

#include <cmath>
#include <string>

namespace nonrecip {

namespace {

bool entry_real(Complex z) { return z.imag() == 0.0; }

} // namespace

bool LatticeModel1D::is_real() const {
    for (Complex t : t_right)
        if (!entry_real(t)) return false;
    for (Complex t : t_left)
        if (!entry_real(t)) return false;
    for (const auto& h : long_range)
        if (!entry_real(h.forward) || !entry_real(h.backward)) return false;
    return true;
}

void LatticeModel1D::validate() const {
    if (num_sub < 1) throw Error(ErrorKind::InputError, "M must be >= 1");
    if (num_cells < 1) throw Error(ErrorKind::InputError, "N must be >= 1");
    if ((int)t_right.size() != num_sub || (int)t_left.size() != num_sub)
        throw Error(ErrorKind::InputError,
                    "tR and tL must each list M amplitudes, got tR=" +
                        std::to_string(t_right.size()) + " tL=" + std::to_string(t_left.size()) +
                        " for M=" + std::to_string(num_sub));
    for (const auto& h : long_range) {
        if (h.from_sub < 1 || h.from_sub > num_sub || h.to_sub < 1 || h.to_sub > num_sub)
            throw Error(ErrorKind::InputError, "long-range hop references sublattice outside [1, M]");
        if (h.cell_offset < 1)
            throw Error(ErrorKind::InputError, "long-range cell offset m must be >= 1");
        if (h.cell_offset * num_sub + (h.to_sub - h.from_sub) == 0)
            throw Error(ErrorKind::InputError, "long-range hop connects a site to itself");
    }
}

bool LatticeModel2D::has_diagonal() const {
    return t_diag_fwd != Complex{} || t_diag_bwd != Complex{};
}

bool LatticeModel2D::is_real() const {
    return entry_real(t_right) && entry_real(t_left) && entry_real(t_up) &&
           entry_real(t_down) && entry_real(t_diag_fwd) && entry_real(t_diag_bwd);
}

void LatticeModel2D::validate() const {
    if (nx < 2 || ny < 2) throw Error(ErrorKind::InputError, "2D lattice needs Mx, Ny >= 2");
}

int BlochMatrix::range() const {
    int p = 0;
    for (const auto& [m, T] : blocks)
        p = std::max(p, std::abs(m));
    return p;
}

Matrix BlochMatrix::eval(Complex beta) const {
    if (beta == Complex{})
        throw Error(ErrorKind::InputError, "H(beta) undefined at beta = 0");
    Matrix H = Matrix::Zero(dim, dim);
    for (const auto& [m, T] : blocks)
        H += T * std::pow(beta, Complex(-m, 0.0));
    return H;
}

Matrix build_real_space(const LatticeModel1D& model) {
    model.validate();
    const int M = model.num_sub, N = model.num_cells;
    Matrix H = Matrix::Zero(model.size(), model.size());

    for (int n = 1; n <= N; ++n) {
        for (int i = 1; i < M; ++i) {
            H(model.site(n, i + 1), model.site(n, i)) += model.t_right[i - 1];
            H(model.site(n, i), model.site(n, i + 1)) += model.t_left[i - 1];
        }
    }
    const int last_cell = model.boundary == Boundary::Pbc ? N : N - 1;
    for (int n = 1; n <= last_cell; ++n) {
        int n2 = n < N ? n + 1 : 1;
        H(model.site(n2, 1), model.site(n, M)) += model.t_right[M - 1];
        H(model.site(n, M), model.site(n2, 1)) += model.t_left[M - 1];
    }
    for (const auto& h : model.long_range) {
        for (int n = 1; n <= N; ++n) {
            int n2 = n + h.cell_offset;
            if (n2 > N) {
                if (model.boundary == Boundary::Obc) continue;
                n2 = (n2 - 1) % N + 1;
            }
            H(model.site(n2, h.to_sub), model.site(n, h.from_sub)) += h.forward;
            H(model.site(n, h.from_sub), model.site(n2, h.to_sub)) += h.backward;
        }
    }
    return H;
}

BlochMatrix hopping_blocks(const LatticeModel1D& model) {
    model.validate();
    const int M = model.num_sub;
    BlochMatrix bm;
    bm.dim = M;
    auto block = [&](int m) -> Matrix& {
        auto it = bm.blocks.find(m);
        if (it == bm.blocks.end())
            it = bm.blocks.emplace(m, Matrix::Zero(M, M)).first;
        return it->second;
    };
    Matrix& t0 = block(0);
    for (int i = 1; i < M; ++i) {
        t0(i, i - 1) += model.t_right[i - 1];
        t0(i - 1, i) += model.t_left[i - 1];
    }
    block(1)(0, M - 1) += model.t_right[M - 1];
    block(-1)(M - 1, 0) += model.t_left[M - 1];
    for (const auto& h : model.long_range) {
        block(h.cell_offset)(h.to_sub - 1, h.from_sub - 1) += h.forward;
        block(-h.cell_offset)(h.from_sub - 1, h.to_sub - 1) += h.backward;
    }
    // drop identically-zero blocks so range() reflects actual hops
    for (auto it = bm.blocks.begin(); it != bm.blocks.end();) {
        if (it->second.cwiseAbs().maxCoeff() == 0.0 && it->first != 0)
            it = bm.blocks.erase(it);
        else
            ++it;
    }
    return bm;
}

Matrix bloch_eval(const BlochMatrix& bm, Complex beta) { return bm.eval(beta); }

Matrix build_real_space_2d(const LatticeModel2D& model) {
    model.validate();
    Matrix H = Matrix::Zero(model.size(), model.size());
    for (int n = 1; n <= model.ny; ++n) {
        for (int m = 1; m < model.nx; ++m) {
            H(model.site(m + 1, n), model.site(m, n)) += model.t_right;
            H(model.site(m, n), model.site(m + 1, n)) += model.t_left;
        }
    }
    for (int n = 1; n < model.ny; ++n) {
        for (int m = 1; m <= model.nx; ++m) {
            H(model.site(m, n + 1), model.site(m, n)) += model.t_up;
            H(model.site(m, n), model.site(m, n + 1)) += model.t_down;
        }
    }
    for (int n = 1; n < model.ny; ++n) {
        for (int m = 1; m < model.nx; ++m) {
            H(model.site(m + 1, n + 1), model.site(m, n)) += model.t_diag_fwd;
            H(model.site(m, n), model.site(m + 1, n + 1)) += model.t_diag_bwd;
        }
    }
    return H;
}

} // namespace nonrecip
