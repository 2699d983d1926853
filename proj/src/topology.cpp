#include "nonrecip/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace nonrecip {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

const char* to_string(CellPhase p) {
    switch (p) {
        case CellPhase::PtExact: return "PT_EXACT";
        case CellPhase::PtBroken: return "PT_BROKEN";
        case CellPhase::Degenerate: return "DEGENERATE";
        case CellPhase::Transition: return "TRANSITION";
    }
    return "?";
}

BandTrack band_track(const LatticeModel1D& model, int num_k) {
    return band_track(model, num_k, theoretical_radius(model));
}

BandTrack band_track(const LatticeModel1D& model, int num_k, double radius) {
    if (num_k < 64) throw Error(ErrorKind::InputError, "band tracking needs K >= 64");
    BlochMatrix bm = hopping_blocks(model);
    const int M = bm.dim;

    BandTrack track;
    track.radius = radius;
    track.num_k = num_k;
    track.k.resize(num_k + 1);
    track.energies.assign(M, std::vector<Complex>(num_k + 1));
    track.right.assign(M, std::vector<Vector>(num_k + 1));
    track.left.assign(M, std::vector<Vector>(num_k + 1));

    Matrix prev;
    for (int j = 0; j <= num_k; ++j) {
        double k = 2.0 * kPi * j / num_k;
        track.k[j] = k;
        Complex beta = radius * std::exp(Complex(0, k));
        Matrix hb = bm.eval(beta);
        BiorthogonalEigensystem es;
        try {
            es = biorthogonal_system(hb);
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::NearEp)
                throw Error(ErrorKind::NearEp,
                            "bands touch near k=" + std::to_string(k) +
                                "; eigenvector basis degenerates");
            throw;
        }
        Vector values = es.values;
        Matrix right = es.right, left = es.left;
        if (j > 0) {
            auto perm = match_by_overlap(prev, right);
            Vector v2(M);
            Matrix r2(M, M), l2(M, M);
            for (int b = 0; b < M; ++b) {
                v2[b] = values[perm[b]];
                r2.col(b) = right.col(perm[b]);
                l2.col(b) = left.col(perm[b]);
                double ov = std::abs(prev.col(b).dot(r2.col(b)));
                track.min_overlap = std::min(track.min_overlap, ov);
            }
            values = v2;
            right = r2;
            left = l2;
        }
        for (int b = 0; b < M; ++b) {
            track.energies[b][j] = values[b];
            track.right[b][j] = right.col(b);
            track.left[b][j] = left.col(b);
        }
        prev = right;
    }
    if (track.min_overlap <= 0.5)
        throw Error(ErrorKind::NearEp,
                    "band continuity certificate failed (overlap " +
                        std::to_string(track.min_overlap) + " <= 0.5)");
    // closed loop: the matched state at k = 2pi must be the k = 0 band again
    for (int b = 0; b < (int)track.energies.size(); ++b) {
        double gap = std::abs(track.energies[b][num_k] - track.energies[b][0]);
        if (gap > 1e-8 * matrix_scale(Vector::Map(&track.energies[b][0], 1)))
            throw Error(ErrorKind::NearEp,
                        "band " + std::to_string(b) + " does not close around the GBZ");
    }
    return track;
}

namespace {

struct ThetaTrace {
    std::vector<double> theta; // unwrapped
    double total = 0.0;
};

ThetaTrace unwrap_phase(const std::vector<Vector>& states, int a, int ref, double radius,
                        const std::vector<double>& ks) {
    ThetaTrace out;
    out.theta.reserve(states.size());
    double prev = 0.0;
    for (size_t j = 0; j < states.size(); ++j) {
        const Vector& v = states[j];
        double norm = v.norm();
        if (std::abs(v[a]) < 1e-12 * norm || std::abs(v[ref]) < 1e-12 * norm)
            throw Error(ErrorKind::GaugeSingular,
                        "sublattice projection vanishes at k=" + std::to_string(ks[j]) +
                            " (radius " + std::to_string(radius) + "); refine K or move A");
        double theta = std::arg(v[a] / v[ref]);
        if (j == 0) {
            out.theta.push_back(theta);
            prev = theta;
            continue;
        }
        double step = theta - prev;
        step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
        if (std::abs(step) > kPi / 2)
            throw Error(ErrorKind::SolverFailure,
                        "phase step " + std::to_string(step) + " at k=" +
                            std::to_string(ks[j]) + " too large; double K");
        prev = theta;
        out.theta.push_back(out.theta.back() + step);
    }
    out.total = out.theta.back() - out.theta.front();
    return out;
}

} // namespace

NsZakResult ns_zak_phase(const BandTrack& track, int sublattice) {
    const int bands = (int)track.energies.size();
    const int M = bands;
    if (sublattice < 1 || sublattice > M)
        throw Error(ErrorKind::InputError, "sublattice index out of range");
    const int a = sublattice - 1;
    const int ref = M - 1;

    NsZakResult out;
    out.num_k = track.num_k;
    for (int b = 0; b < bands; ++b) {
        ThetaTrace tr = unwrap_phase(track.right[b], a, ref, track.radius, track.k);
        ThetaTrace tl = unwrap_phase(track.left[b], a, ref, track.radius, track.k);
        for (const ThetaTrace* t : {&tr, &tl}) {
            double winding = -t->total / (2.0 * kPi);
            if (std::abs(winding - std::round(winding)) > 1e-3)
                throw Error(ErrorKind::SolverFailure,
                            "accumulated phase " + std::to_string(t->total) +
                                " is not an integer winding; double K");
        }
        out.per_band.push_back((int)std::lround(-tr.total / (2.0 * kPi)));
        out.per_band_left.push_back((int)std::lround(-tl.total / (2.0 * kPi)));
        out.theta_right.push_back(std::move(tr.theta));
        out.theta_left.push_back(std::move(tl.theta));
    }
    for (int w : out.per_band) out.total += w;
    return out;
}

int edge_state_prediction(const LatticeModel1D& model, int initial_k) {
    int k = std::max(64, initial_k);
    while (true) {
        try {
            return ns_zak_phase(band_track(model, k)).total;
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::SolverFailure && k < 4096) {
                k *= 2;
                continue;
            }
            throw;
        }
    }
}

PhaseDiagramGrid phase_diagram(double t3, double x_min, double x_max, double y_min,
                               double y_max, int resolution_x, int resolution_y,
                               int num_cells) {
    if (t3 <= 0.0) throw Error(ErrorKind::InputError, "t3 must be positive");
    if (resolution_x < 1 || resolution_y < 1)
        throw Error(ErrorKind::InputError, "grid resolution must be >= 1");

    PhaseDiagramGrid grid;
    grid.resolution_x = resolution_x;
    grid.resolution_y = resolution_y;
    grid.cells.resize((size_t)resolution_x * resolution_y);

    auto worker_count = [&]() {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("NONRECIP_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1) hw = std::min<unsigned>(hw, (unsigned)v);
        }
        return std::min<unsigned>(hw, (unsigned)grid.cells.size());
    };

    std::atomic<size_t> next{0};
    auto run_cell = [&](size_t idx) {
        int iy = (int)(idx / resolution_x);
        int ix = (int)(idx % resolution_x);
        double x = x_min + (x_max - x_min) * (ix + 0.5) / resolution_x;
        double y = y_min + (y_max - y_min) * (iy + 0.5) / resolution_y;
        PhaseDiagramCell cell;
        cell.x = x;
        cell.y = y;
        if (x == 0.0 || y == 0.0) {
            cell.phase = CellPhase::Degenerate;
            grid.cells[idx] = cell;
            return;
        }
        LatticeModel1D rep;
        rep.num_sub = 3;
        rep.num_cells = num_cells;
        rep.t_right = {1.0, 1.0, t3};
        rep.t_left = {x * t3 * t3, y * t3 * t3, t3};
        try {
            cell.edge_count = edge_state_prediction(rep);
            Vector values = eig_values(build_real_space(rep));
            SpectrumPhase sp = classify_spectrum(values);
            cell.phase = sp.phase == PtPhase::Exact ? CellPhase::PtExact : CellPhase::PtBroken;
        } catch (const Error& err) {
            cell.edge_count = -1;
            cell.phase = err.kind() == ErrorKind::Degenerate ? CellPhase::Degenerate
                                                             : CellPhase::Transition;
        }
        grid.cells[idx] = cell;
    };

    unsigned workers = worker_count();
    if (workers <= 1) {
        for (size_t i = 0; i < grid.cells.size(); ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < grid.cells.size(); i = next.fetch_add(1))
                    run_cell(i);
            });
        for (auto& t : pool) t.join();
    }
    return grid;
}

InvarianceReport parameter_set_invariance_check(const LatticeModel1D& model, double alpha,
                                                double spectrum_tol, int num_k) {
    if (alpha == 0.0) throw Error(ErrorKind::InputError, "alpha must be nonzero");
    model.validate();
    LatticeModel1D scaled = model;
    scaled.t_left[0] *= alpha;
    scaled.t_right[0] /= alpha;

    InvarianceReport report;
    Vector a = eig_values(build_real_space(model));
    Vector b = eig_values(build_real_space(scaled));
    double scale = std::max(matrix_scale(a), matrix_scale(b));
    for (int i = 0; i < a.size(); ++i)
        report.spectrum_deviation = std::max(report.spectrum_deviation, std::abs(a[i] - b[i]));

    NsZakResult za = ns_zak_phase(band_track(model, num_k));
    NsZakResult zb = ns_zak_phase(band_track(scaled, num_k));
    report.windings_base = za.per_band;
    report.windings_scaled = zb.per_band;
    report.windings_equal = za.per_band == zb.per_band && za.total == zb.total;
    report.pass = report.windings_equal && report.spectrum_deviation <= spectrum_tol * scale;
    return report;
}

} // namespace nonrecip
