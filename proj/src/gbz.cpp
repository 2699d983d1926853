#include "nonrecip/gbz.hpp"

#include "nonrecip/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace nonrecip {

namespace {

constexpr double kPi = 3.14159265358979323846;

using LaurentPoly = std::map<int, Complex>; // power -> coefficient

LaurentPoly multiply(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [pa, ca] : a)
        for (const auto& [pb, cb] : b)
            out[pa + pb] += ca * cb;
    return out;
}

int permutation_sign(const std::vector<int>& perm) {
    int sign = 1;
    std::vector<char> seen(perm.size(), 0);
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

} // namespace

CharPoly char_poly(const BlochMatrix& bm, Complex energy) {
    const int M = bm.dim;
    if (M > 6)
        throw Error(ErrorKind::InputError, "Leibniz determinant limited to M <= 6");

    // entries of H(beta) - E as Laurent polynomials (power of beta = -m)
    std::vector<std::vector<LaurentPoly>> entry(M, std::vector<LaurentPoly>(M));
    for (const auto& [m, T] : bm.blocks)
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                if (T(i, j) != Complex{}) entry[i][j][-m] += T(i, j);
    for (int i = 0; i < M; ++i) entry[i][i][0] -= energy;

    LaurentPoly det;
    std::vector<int> perm(M);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        LaurentPoly term{{0, Complex(permutation_sign(perm), 0)}};
        bool vanishes = false;
        for (int i = 0; i < M; ++i) {
            const LaurentPoly& e = entry[i][perm[i]];
            if (e.empty()) { vanishes = true; break; }
            term = multiply(term, e);
        }
        if (vanishes) continue;
        for (const auto& [p, c] : term) det[p] += c;
    } while (std::next_permutation(perm.begin(), perm.end()));

    double max_abs = 0.0;
    for (const auto& [p, c] : det) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == 0.0)
        throw Error(ErrorKind::Degenerate, "characteristic polynomial vanishes identically");
    // strip numerically zero extremal coefficients
    int lo = det.begin()->first, hi = det.rbegin()->first;
    auto coeff = [&](int p) { auto it = det.find(p); return it == det.end() ? Complex{} : it->second; };
    while (lo < hi && std::abs(coeff(lo)) <= 1e-13 * max_abs) ++lo;
    while (hi > lo && std::abs(coeff(hi)) <= 1e-13 * max_abs) --hi;
    if (lo >= 0 || hi <= 0)
        throw Error(ErrorKind::Degenerate,
                    "characteristic polynomial has no two-sided beta range (EP-adjacent input)");

    CharPoly cp;
    cp.energy = energy;
    cp.shift = lo;
    cp.coefficients.resize(hi - lo + 1);
    for (int p = lo; p <= hi; ++p) cp.coefficients[p - lo] = coeff(p);
    return cp;
}

std::vector<Complex> beta_roots(const CharPoly& cp) {
    const int d = cp.degree();
    if (d < 1) throw Error(ErrorKind::InputError, "polynomial degree must be >= 1");
    Matrix companion = Matrix::Zero(d, d);
    Complex lead = cp.coefficients[d];
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -cp.coefficients[i] / lead;
    Vector roots = eig_values(companion);
    std::vector<Complex> out(roots.data(), roots.data() + roots.size());
    std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    return out;
}

GbzCurve gbz_points(const LatticeModel1D& model, const std::vector<Complex>& energies) {
    if (energies.empty())
        throw Error(ErrorKind::InputError, "need at least one energy to trace the GBZ");
    BlochMatrix bm = hopping_blocks(model);

    GbzCurve curve;
    for (Complex e : energies) {
        CharPoly cp = char_poly(bm, e);
        auto roots = beta_roots(cp);
        const int d = (int)roots.size();
        if (d < 2) throw Error(ErrorKind::Degenerate, "fewer than two beta roots");
        if (d % 2 != 0) curve.middle_rank_ambiguous = true;
        int lo = (d + 1) / 2 - 1; // 0-based rank ceil(d/2)
        curve.points.push_back({e, roots[lo]});
        curve.points.push_back({e, roots[lo + 1]});
    }

    std::vector<double> moduli;
    moduli.reserve(curve.points.size());
    for (const auto& p : curve.points) moduli.push_back(std::abs(p.beta));
    std::vector<double> sorted = moduli;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    curve.radius = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    for (double m : moduli)
        curve.max_radial_deviation = std::max(curve.max_radial_deviation,
                                              std::abs(m - curve.radius));
    try {
        curve.theoretical_radius = theoretical_radius(model);
    } catch (const Error&) {
        curve.theoretical_radius = std::numeric_limits<double>::quiet_NaN();
    }
    return curve;
}

double theoretical_radius(const LatticeModel1D& model) {
    model.validate();
    double ratio = 1.0;
    for (int i = 0; i < model.num_sub; ++i) {
        if (model.t_right[i] == Complex{} || model.t_left[i] == Complex{})
            throw Error(ErrorKind::Degenerate, "zero NN amplitude: GBZ radius degenerates");
        ratio *= std::abs(model.t_right[i]) / std::abs(model.t_left[i]);
    }
    if (!model.long_range.empty()) {
        auto report = check_path_independence(model);
        if (report.status == GaugeStatus::Violated)
            throw Error(ErrorKind::Violated,
                        "path independence fails: no closed-form radius, use gbz_points");
        if (report.status == GaugeStatus::Degenerate)
            throw Error(ErrorKind::Degenerate, "zero hopping amplitude");
    }
    return std::sqrt(ratio);
}

PairingReport beta_pairing_check(const LatticeModel1D& model,
                                 const std::vector<Complex>& energies, double tol) {
    BlochMatrix bm = hopping_blocks(model);
    double r_sq = 1.0;
    for (int i = 0; i < model.num_sub; ++i) {
        if (model.t_left[i] == Complex{})
            throw Error(ErrorKind::Degenerate, "zero amplitude in pairing check");
        r_sq *= std::abs(model.t_right[i]) / std::abs(model.t_left[i]);
    }
    Complex rm2 = 1.0;
    for (int i = 0; i < model.num_sub; ++i) rm2 *= model.t_right[i] / model.t_left[i];

    PairingReport report;
    for (Complex e : energies) {
        auto roots = beta_roots(char_poly(bm, e));
        // greedy multiset matching of {rm2/beta} against {beta}
        std::vector<char> used(roots.size(), 0);
        double worst = 0.0;
        for (Complex b : roots) {
            Complex target = rm2 / b;
            double best = std::numeric_limits<double>::infinity();
            int best_j = -1;
            for (size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                double d = std::abs(roots[j] - target);
                if (d < best) { best = d; best_j = (int)j; }
            }
            used[best_j] = 1;
            worst = std::max(worst, best / std::max(1.0, std::abs(target)));
        }
        report.max_mismatch = std::max(report.max_mismatch, worst);
    }
    report.pass = report.max_mismatch <= tol;
    (void)r_sq;
    return report;
}

BandSweep circular_band_sweep(const LatticeModel1D& model, int num_k) {
    return circular_band_sweep(model, num_k, theoretical_radius(model));
}

BandSweep circular_band_sweep(const LatticeModel1D& model, int num_k, double radius) {
    if (num_k < 8) throw Error(ErrorKind::InputError, "band sweep needs at least 8 samples");
    BlochMatrix bm = hopping_blocks(model);
    const int M = bm.dim;

    BandSweep sweep;
    sweep.radius = radius;
    sweep.num_k = num_k;
    sweep.k.resize(num_k + 1);
    sweep.bands.assign(M, std::vector<Complex>(num_k + 1));

    Matrix prev;
    for (int j = 0; j <= num_k; ++j) {
        double k = 2.0 * kPi * j / num_k;
        sweep.k[j] = k;
        Complex beta = radius * std::exp(Complex(0, k));
        Eigensystem es;
        try {
            es = eig_full(bm.eval(beta));
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::SolverFailure)
                throw Error(ErrorKind::NearEp,
                            "band eigenproblem ill-conditioned at k=" + std::to_string(k));
            throw;
        }
        Vector values = es.values;
        Matrix vectors = es.vectors;
        if (j > 0) {
            auto perm = match_by_overlap(prev, vectors);
            Vector v2(M);
            Matrix m2(vectors.rows(), M);
            for (int b = 0; b < M; ++b) {
                v2[b] = values[perm[b]];
                m2.col(b) = vectors.col(perm[b]);
            }
            values = v2;
            vectors = m2;
        }
        for (int b = 0; b < M; ++b) sweep.bands[b][j] = values[b];
        prev = vectors;
    }
    return sweep;
}

std::vector<Complex> BandSweep::flattened() const {
    std::vector<Complex> out;
    for (const auto& band : bands) out.insert(out.end(), band.begin(), band.end());
    return out;
}

std::vector<Complex> circular_band_energies(const LatticeModel1D& model, int num_k) {
    BandSweep sweep = circular_band_sweep(model, num_k);
    std::vector<Complex> out;
    for (const auto& band : sweep.bands)
        out.insert(out.end(), band.begin(), band.end() - 1); // drop duplicate closure sample
    return out;
}

std::pair<double, double> gbz_2d_separable(const LatticeModel2D& model) {
    model.validate();
    if (model.has_diagonal())
        throw Error(ErrorKind::NotSeparable,
                    "diagonal hops: the characteristic equation does not separate");
    if (model.t_right == Complex{} || model.t_left == Complex{} || model.t_up == Complex{} ||
        model.t_down == Complex{})
        throw Error(ErrorKind::Degenerate, "zero hopping amplitude in 2D model");
    return {std::sqrt(std::abs(model.t_right) / std::abs(model.t_left)),
            std::sqrt(std::abs(model.t_up) / std::abs(model.t_down))};
}

std::vector<double> middle_pair_splits(const BlochMatrix& bm, const Vector& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (int i = 0; i < values.size(); ++i) {
        auto roots = beta_roots(char_poly(bm, values[i]));
        const int d = (int)roots.size();
        int lo = (d + 1) / 2 - 1;
        out.push_back(std::abs(std::log(std::abs(roots[lo + 1]) / std::abs(roots[lo]))));
    }
    return out;
}

DiscreteLevelCount count_discrete_levels(const LatticeModel1D& model, double split_threshold,
                                         int n_start, int n_max) {
    model.validate();
    BlochMatrix bm = hopping_blocks(model);
    LatticeModel1D probe = model;
    probe.boundary = Boundary::Obc;
    probe.num_cells = std::max(model.num_cells, n_start);

    DiscreteLevelCount result;
    while (true) {
        Vector values = eig_values(build_real_space(probe));
        auto splits = middle_pair_splits(bm, values);
        bool ambiguous = false;
        result.count = 0;
        result.levels.clear();
        for (size_t i = 0; i < splits.size(); ++i) {
            if (splits[i] > split_threshold) {
                ++result.count;
                result.levels.push_back(values[(int)i]);
            }
            if (splits[i] > split_threshold / 2 && splits[i] < 2 * split_threshold)
                ambiguous = true;
        }
        result.cells_used = probe.num_cells;
        if (!ambiguous || probe.num_cells >= n_max) return result;
        probe.num_cells *= 2;
    }
}

} // namespace nonrecip
