#include "nonrecip/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nonrecip {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_real_matrix(const Matrix& H) {
    for (int j = 0; j < H.cols(); ++j)
        for (int i = 0; i < H.rows(); ++i)
            if (H(i, j).imag() != 0.0) return false;
    return true;
}

// Parlett-Reinsch balancing restricted to powers of two, so the similarity
// scaling itself introduces no rounding.
RealVector balance_diagonal(Matrix& A) {
    const int n = (int)A.rows();
    RealVector d = RealVector::Ones(n);
    bool converged = false;
    int sweeps = 0;
    while (!converged && sweeps++ < 100) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0, s = c + r;
            double g = r / 2.0;
            while (c < g && f < 1e154) { f *= 2.0; c *= 4.0; }
            g = r * 2.0;
            while (c > g && f > 1e-154) { f /= 2.0; c /= 4.0; }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                d[i] *= f;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
    return d;
}

std::vector<int> sort_permutation(const Vector& values) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
        return values[a].imag() < values[b].imag();
    });
    return idx;
}

} // namespace

double matrix_scale(const Vector& values) {
    double s = 1.0;
    for (int i = 0; i < values.size(); ++i) s = std::max(s, std::abs(values[i]));
    return s;
}

Eigensystem eig_full(const Matrix& H, double residual_tol) {
    if (H.rows() != H.cols() || H.rows() < 1)
        throw Error(ErrorKind::InputError, "eig_full needs a square matrix of dimension >= 1");
    Matrix A = H;
    RealVector d = balance_diagonal(A);

    Vector values;
    Matrix vectors;
    if (is_real_matrix(A)) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(A.real(), true);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "real Schur iteration did not converge");
        values = solver.eigenvalues();
        vectors = solver.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(A, true);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "complex Schur iteration did not converge");
        values = solver.eigenvalues();
        vectors = solver.eigenvectors();
    }
    for (int j = 0; j < vectors.cols(); ++j) {
        Vector v = d.cast<Complex>().asDiagonal() * vectors.col(j);
        vectors.col(j) = v / v.norm();
    }

    auto perm = sort_permutation(values);
    Eigensystem out;
    out.values.resize(values.size());
    out.vectors.resize(vectors.rows(), vectors.cols());
    for (int j = 0; j < (int)perm.size(); ++j) {
        out.values[j] = values[perm[j]];
        out.vectors.col(j) = vectors.col(perm[j]);
    }

    double h_norm = H.norm();
    double worst = (H * out.vectors - out.vectors * out.values.asDiagonal()).cwiseAbs().maxCoeff();
    if (worst > residual_tol * std::max(h_norm, 1e-300))
        throw Error(ErrorKind::SolverFailure,
                    "eigenpair residual " + std::to_string(worst) + " exceeds " +
                        std::to_string(residual_tol) + "*|H|");
    return out;
}

Vector eig_values(const Matrix& H) {
    if (H.rows() != H.cols() || H.rows() < 1)
        throw Error(ErrorKind::InputError, "eig_values needs a square matrix");
    Matrix A = H;
    balance_diagonal(A);
    Vector values;
    if (is_real_matrix(A)) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(A.real(), false);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "real Schur iteration did not converge");
        values = solver.eigenvalues();
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(A, false);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::SolverFailure, "complex Schur iteration did not converge");
        values = solver.eigenvalues();
    }
    auto perm = sort_permutation(values);
    Vector out(values.size());
    for (int j = 0; j < (int)perm.size(); ++j) out[j] = values[perm[j]];
    return out;
}

BiorthogonalEigensystem biorthogonal_system(const Matrix& H, double ep_threshold) {
    Eigensystem es = eig_full(H);
    BiorthogonalEigensystem out;
    out.values = es.values;
    out.right = es.vectors;

    Eigen::JacobiSVD<Matrix> svd(es.vectors);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    out.condition_estimate = smax > 0.0 ? smin / smax : 0.0;
    if (out.condition_estimate < ep_threshold)
        throw Error(ErrorKind::NearEp,
                    "eigenvector condition estimate " + std::to_string(out.condition_estimate) +
                        " below EP threshold");

    // rows of V^{-1} conjugated give the left vectors, already biorthonormal
    out.left = es.vectors.inverse().adjoint();
    return out;
}

SpectrumPhase classify_spectrum(const Vector& values, double tol) {
    SpectrumPhase out;
    const double scale = matrix_scale(values);
    std::vector<int> plus, minus;
    for (int i = 0; i < values.size(); ++i) {
        if (std::abs(values[i].imag()) <= tol * scale)
            out.real_indices.push_back(i);
        else if (values[i].imag() > 0.0)
            plus.push_back(i);
        else
            minus.push_back(i);
    }
    auto by_value = [&](int a, int b) {
        if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
        return std::abs(values[a].imag()) < std::abs(values[b].imag());
    };
    std::sort(plus.begin(), plus.end(), by_value);
    std::sort(minus.begin(), minus.end(), by_value);
    if (plus.size() != minus.size())
        throw Error(ErrorKind::NotPseudoHermitian,
                    "unmatched complex eigenvalue: " + std::to_string(plus.size()) + " upper vs " +
                        std::to_string(minus.size()) + " lower");
    for (size_t k = 0; k < plus.size(); ++k) {
        if (std::abs(values[plus[k]] - std::conj(values[minus[k]])) > tol * scale * 2.0)
            throw Error(ErrorKind::NotPseudoHermitian,
                        "complex eigenvalues fail conjugate matching beyond tolerance");
        out.pairing.push_back({plus[k], minus[k]});
    }
    out.phase = out.pairing.empty() ? PtPhase::Exact : PtPhase::Broken;
    return out;
}

HnEigensystem hn_analytic_spectrum(double t_left, double t_right, int n_sites) {
    if (t_left == 0.0 || t_right == 0.0)
        throw Error(ErrorKind::Degenerate, "analytic chain spectrum needs nonzero hoppings");
    if (n_sites < 1) throw Error(ErrorKind::InputError, "n_sites must be >= 1");

    const int N = n_sites;
    const double w = t_left * t_right;
    const double r = std::sqrt(std::abs(t_right / t_left));
    HnEigensystem out;
    out.values.resize(N);
    out.right.resize(N, N);
    out.left.resize(N, N);

    for (int j = 1; j <= N; ++j) {
        Vector psi(N), phi(N);
        Complex energy;
        if (w > 0.0) {
            double k = j * kPi / (N + 1);
            energy = 2.0 * std::sqrt(w) * std::cos(k) * (t_left > 0 ? 1.0 : -1.0);
            for (int n = 1; n <= N; ++n) {
                double osc = std::sin(n * k);
                psi[n - 1] = std::pow(r, n) * osc;
                phi[n - 1] = std::pow(r, -n) * osc;
            }
        } else {
            double k = j * kPi / (N + 1) + kPi / 2;
            energy = Complex(0.0, 2.0 * std::sqrt(-w) * std::sin(k) * (t_left > 0 ? 1.0 : -1.0));
            for (int n = 1; n <= N; ++n) {
                Complex osc = std::exp(Complex(0, n * k)) -
                              std::pow(-1.0, n) * std::exp(Complex(0, -n * k));
                psi[n - 1] = std::pow(r, n) * osc;
                phi[n - 1] = std::pow(r, -n) * osc;
            }
        }
        // enforce <phi|psi> = 1; the raw overlap is k-independent, so this is a
        // uniform rescale and the left envelope keeps its r^{-n} profile
        Complex overlap = phi.dot(psi);
        phi /= std::conj(overlap);
        out.values[j - 1] = energy;
        out.right.col(j - 1) = psi;
        out.left.col(j - 1) = phi;
    }
    return out;
}

namespace {

// Largest symmetric window about the chain midpoint inside [ceil(N/4), floor(3N/4)].
std::pair<int, int> interior_window(int N) {
    int lo = (N + 3) / 4;
    int hi = (3 * N) / 4;
    if (hi - lo + 1 < 4)
        throw Error(ErrorKind::InsufficientSize,
                    "fewer than 4 interior cells for the envelope fit (N=" + std::to_string(N) + ")");
    const int c2 = N + 1; // lo + hi must equal c2 for a symmetric window
    while (lo + hi > c2) --hi;
    while (lo + hi < c2) ++lo;
    if (hi - lo + 1 < 4)
        throw Error(ErrorKind::InsufficientSize, "symmetrized fit window too small");
    return {lo, hi};
}

struct LineFit {
    double slope = 0.0;
    double r_squared = 1.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = (int)x.size();
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

} // namespace

EnvelopeFit localization_lengths(const Eigensystem& es, const LatticeModel1D& model) {
    model.validate();
    if (model.boundary != Boundary::Obc)
        throw Error(ErrorKind::InputError, "envelope fits need an OBC model");
    auto [lo, hi] = interior_window(model.num_cells);

    EnvelopeFit fit;
    fit.window_lo = lo;
    fit.window_hi = hi;
    double ratio = 1.0;
    for (int i = 0; i < model.num_sub; ++i)
        ratio *= std::abs(model.t_right[i]) / std::abs(model.t_left[i]);
    fit.theoretical_kappa = 0.5 * std::log(ratio);

    std::vector<double> xs, ys;
    for (int s = 0; s < es.vectors.cols(); ++s) {
        xs.clear();
        ys.clear();
        bool usable = true;
        for (int n = lo; n <= hi; ++n) {
            double a = 0.0;
            for (int i = 1; i <= model.num_sub; ++i)
                a = std::max(a, std::abs(es.vectors(model.site(n, i), s)));
            if (a <= 0.0) { usable = false; break; }
            xs.push_back(n);
            ys.push_back(std::log(a));
        }
        if (!usable) {
            fit.kappa.push_back(std::numeric_limits<double>::quiet_NaN());
            fit.r_squared.push_back(0.0);
            continue;
        }
        LineFit lf = fit_line(xs, ys);
        fit.kappa.push_back(lf.slope);
        fit.r_squared.push_back(lf.r_squared);
    }
    return fit;
}

std::pair<std::vector<double>, std::vector<double>>
localization_lengths_2d(const Eigensystem& es, const LatticeModel2D& model) {
    model.validate();
    auto [lox, hix] = interior_window(model.nx);
    auto [loy, hiy] = interior_window(model.ny);

    std::vector<double> kx, ky;
    std::vector<double> xs, ys;
    for (int s = 0; s < es.vectors.cols(); ++s) {
        // x decay from the y=1 edge row against its inversion image (y=ny row
        // reversed); the standing-wave factor is inversion symmetric and cancels
        xs.clear(); ys.clear();
        bool usable = true;
        for (int m = lox; m <= hix; ++m) {
            double num = std::abs(es.vectors(model.site(m, 1), s));
            double den = std::abs(es.vectors(model.site(model.nx + 1 - m, model.ny), s));
            if (num <= 0.0 || den <= 0.0) { usable = false; break; }
            xs.push_back(m);
            ys.push_back(0.5 * std::log(num / den));
        }
        kx.push_back(usable ? fit_line(xs, ys).slope : std::numeric_limits<double>::quiet_NaN());

        xs.clear(); ys.clear();
        usable = true;
        for (int n = loy; n <= hiy; ++n) {
            double num = std::abs(es.vectors(model.site(1, n), s));
            double den = std::abs(es.vectors(model.site(model.nx, model.ny + 1 - n), s));
            if (num <= 0.0 || den <= 0.0) { usable = false; break; }
            xs.push_back(n);
            ys.push_back(0.5 * std::log(num / den));
        }
        ky.push_back(usable ? fit_line(xs, ys).slope : std::numeric_limits<double>::quiet_NaN());
    }
    return {kx, ky};
}

Matrix reconstruct_eta(const BiorthogonalEigensystem& es, const SpectrumPhase& phase,
                       const std::vector<int>& signs) {
    if (signs.size() != phase.real_indices.size())
        throw Error(ErrorKind::InputError,
                    "need one sign per real eigenvalue (" +
                        std::to_string(phase.real_indices.size()) + ")");
    for (int s : signs)
        if (s != 1 && s != -1)
            throw Error(ErrorKind::InputError, "signs must be +1 or -1");

    const int n = (int)es.values.size();
    Matrix eta = Matrix::Zero(n, n);
    for (auto [ip, im] : phase.pairing) {
        eta += es.left.col(ip) * es.left.col(im).adjoint();
        eta += es.left.col(im) * es.left.col(ip).adjoint();
    }
    for (size_t k = 0; k < phase.real_indices.size(); ++k) {
        int i = phase.real_indices[k];
        eta += double(signs[k]) * (es.left.col(i) * es.left.col(i).adjoint());
    }
    return eta;
}

std::vector<int> detect_discrete_levels(const Vector& obc_values,
                                        const std::vector<std::vector<Complex>>& band_samples,
                                        double gap_threshold) {
    auto segment_distance = [](Complex z, Complex a, Complex b) {
        Complex ab = b - a;
        double len2 = std::norm(ab);
        if (len2 == 0.0) return std::abs(z - a);
        double t = ((z - a) * std::conj(ab)).real() / len2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(z - (a + t * ab));
    };
    std::vector<int> out;
    for (int i = 0; i < obc_values.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& band : band_samples) {
            for (size_t j = 0; j + 1 < band.size(); ++j)
                best = std::min(best, segment_distance(obc_values[i], band[j], band[j + 1]));
            if (band.size() == 1) best = std::min(best, std::abs(obc_values[i] - band[0]));
        }
        if (best > gap_threshold) out.push_back(i);
    }
    return out;
}

std::vector<int> match_by_overlap(const Matrix& prev, const Matrix& cur) {
    const int m = (int)prev.cols();
    Eigen::MatrixXd overlap = (prev.adjoint() * cur).cwiseAbs();
    std::vector<int> perm(m, -1);
    std::vector<char> row_used(m, 0), col_used(m, 0);
    for (int step = 0; step < m; ++step) {
        int bi = -1, bj = -1;
        double best = -1.0;
        for (int i = 0; i < m; ++i) {
            if (row_used[i]) continue;
            for (int j = 0; j < m; ++j) {
                if (col_used[j]) continue;
                if (overlap(i, j) > best) { best = overlap(i, j); bi = i; bj = j; }
            }
        }
        perm[bi] = bj;
        row_used[bi] = 1;
        col_used[bj] = 1;
    }
    return perm;
}

} // namespace nonrecip
