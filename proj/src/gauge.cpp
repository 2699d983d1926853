#include "nonrecip/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace nonrecip {

const char* to_string(GaugeStatus s) {
    switch (s) {
        case GaugeStatus::Hermitizable: return "HERMITIZABLE";
        case GaugeStatus::EtaIPseudo: return "ETA_I_PSEUDO";
        case GaugeStatus::ComplexScalable: return "COMPLEX_SCALABLE";
        case GaugeStatus::Violated: return "VIOLATED";
        case GaugeStatus::Degenerate: return "DEGENERATE";
    }
    return "?";
}

namespace {

void require_nonzero_nn(const LatticeModel1D& model) {
    for (int i = 0; i < model.num_sub; ++i)
        if (model.t_right[i] == Complex{} || model.t_left[i] == Complex{})
            throw Error(ErrorKind::Degenerate,
                        "NN bond " + std::to_string(i + 1) + " has a zero amplitude");
}

} // namespace

HopGraph hop_graph(const LatticeModel1D& model) {
    model.validate();
    const int M = model.num_sub, N = model.num_cells;
    HopGraph g;
    g.num_sites = model.size();
    for (int n = 1; n <= N; ++n)
        for (int i = 1; i < M; ++i)
            g.edges.push_back({model.site(n, i), model.site(n, i + 1),
                               model.t_right[i - 1], model.t_left[i - 1]});
    for (int n = 1; n < N; ++n)
        g.edges.push_back({model.site(n, M), model.site(n + 1, 1),
                           model.t_right[M - 1], model.t_left[M - 1]});
    for (const auto& h : model.long_range)
        for (int n = 1; n + h.cell_offset <= N; ++n)
            g.edges.push_back({model.site(n, h.from_sub),
                               model.site(n + h.cell_offset, h.to_sub),
                               h.forward, h.backward});
    return g;
}

HopGraph hop_graph(const LatticeModel2D& model) {
    model.validate();
    HopGraph g;
    g.num_sites = model.size();
    for (int n = 1; n <= model.ny; ++n)
        for (int m = 1; m < model.nx; ++m)
            g.edges.push_back({model.site(m, n), model.site(m + 1, n),
                               model.t_right, model.t_left});
    for (int n = 1; n < model.ny; ++n)
        for (int m = 1; m <= model.nx; ++m)
            g.edges.push_back({model.site(m, n), model.site(m, n + 1),
                               model.t_up, model.t_down});
    if (model.has_diagonal())
        for (int n = 1; n < model.ny; ++n)
            for (int m = 1; m < model.nx; ++m)
                g.edges.push_back({model.site(m, n), model.site(m + 1, n + 1),
                                   model.t_diag_fwd, model.t_diag_bwd});
    return g;
}

GaugeReport analyze_hop_graph(const HopGraph& graph, bool amplitudes_real, double tol) {
    GaugeReport report;
    for (const auto& e : graph.edges) {
        if (e.forward == Complex{} || e.backward == Complex{}) {
            report.status = GaugeStatus::Degenerate;
            return report;
        }
    }

    // adjacency with edge indices
    std::vector<std::vector<std::pair<int, int>>> adj(graph.num_sites); // (neighbor, edge)
    for (int k = 0; k < (int)graph.edges.size(); ++k) {
        adj[graph.edges[k].a].push_back({graph.edges[k].b, k});
        adj[graph.edges[k].b].push_back({graph.edges[k].a, k});
    }

    // BFS spanning tree from site 0; squared scale s with s_b = s_a * fwd/bwd
    std::vector<Complex> scale(graph.num_sites, Complex{});
    std::vector<int> parent_edge(graph.num_sites, -1);
    std::vector<char> seen(graph.num_sites, 0);
    std::vector<char> edge_in_tree(graph.edges.size(), 0);
    std::deque<int> queue;
    scale[0] = 1.0;
    seen[0] = 1;
    queue.push_back(0);
    while (!queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        for (auto [b, k] : adj[a]) {
            if (seen[b]) continue;
            const auto& e = graph.edges[k];
            Complex ratio = e.a == a ? e.forward / e.backward : e.backward / e.forward;
            scale[b] = scale[a] * ratio;
            parent_edge[b] = k;
            edge_in_tree[k] = 1;
            seen[b] = 1;
            queue.push_back(b);
        }
    }
    for (int s = 0; s < graph.num_sites; ++s)
        if (!seen[s])
            throw Error(ErrorKind::InputError, "hopping graph is disconnected");

    // every non-tree edge closes a cycle; its product of ratios must be 1
    int worst_edge = -1;
    for (int k = 0; k < (int)graph.edges.size(); ++k) {
        if (edge_in_tree[k]) continue;
        const auto& e = graph.edges[k];
        Complex ratio = e.forward / e.backward;
        Complex cycle = scale[e.b] / (scale[e.a] * ratio);
        double residual = std::max(std::abs(std::abs(cycle) - 1.0),
                                   std::abs(std::arg(cycle)));
        if (residual > report.max_cycle_residual) {
            report.max_cycle_residual = residual;
            worst_edge = k;
        }
    }

    if (report.max_cycle_residual > tol) {
        report.status = GaugeStatus::Violated;
        // cycle = worst edge plus the tree paths of its endpoints up to their
        // lowest common ancestor
        const auto& e = graph.edges[worst_edge];
        auto path_to_root = [&](int s) {
            std::vector<int> nodes{s};
            while (parent_edge[nodes.back()] >= 0) {
                const auto& pe = graph.edges[parent_edge[nodes.back()]];
                nodes.push_back(pe.a == nodes.back() ? pe.b : pe.a);
            }
            return nodes;
        };
        std::vector<int> pa = path_to_root(e.a), pb = path_to_root(e.b);
        while (pa.size() >= 2 && pb.size() >= 2 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
            // never strips below the LCA because root paths are unique
            if (pa[pa.size() - 1] != pb[pb.size() - 1]) break;
            pa.pop_back();
            pb.pop_back();
        }
        report.violating_cycle.push_back({e.a, e.b});
        for (size_t i = 0; i + 1 < pb.size(); ++i)
            report.violating_cycle.push_back({pb[i], pb[i + 1]});
        for (size_t i = pa.size(); i-- > 1;)
            report.violating_cycle.push_back({pa[i], pa[i - 1]});
        return report;
    }

    for (int s = 0; s < graph.num_sites; ++s)
        report.site_potentials[s] = scale[s];

    if (!amplitudes_real) {
        report.status = GaugeStatus::ComplexScalable;
        return report;
    }
    bool all_positive = true;
    for (const auto& e : graph.edges)
        if ((e.forward * e.backward).real() <= 0.0) all_positive = false;
    report.status = all_positive ? GaugeStatus::Hermitizable : GaugeStatus::EtaIPseudo;
    return report;
}

std::vector<Complex> nn_gauge_ratios(const LatticeModel1D& model) {
    model.validate();
    require_nonzero_nn(model);
    std::vector<Complex> r(model.num_sub + 1);
    r[0] = 1.0;
    Complex cumulative = 1.0;
    for (int i = 0; i < model.num_sub; ++i) {
        cumulative *= model.t_right[i] / model.t_left[i];
        r[i + 1] = std::sqrt(cumulative);
    }
    return r;
}

IgtScaling build_igt(const LatticeModel1D& model) {
    auto r = nn_gauge_ratios(model);
    IgtScaling s;
    s.cell_factor = r[model.num_sub];
    s.sub_factors.assign(r.begin(), r.end() - 1);
    s.diag.resize(model.size());
    Complex cell = s.cell_factor;
    for (int n = 1; n <= model.num_cells; ++n) {
        for (int i = 1; i <= model.num_sub; ++i)
            s.diag[model.site(n, i)] = s.sub_factors[i - 1] * cell;
        cell *= s.cell_factor;
    }
    return s;
}

EtaMetric build_eta_i(const LatticeModel1D& model) {
    model.validate();
    if (!model.is_real())
        throw Error(ErrorKind::Unsupported, "eta_I is defined for real hopping amplitudes only");
    require_nonzero_nn(model);
    if (!model.long_range.empty()) {
        auto report = check_path_independence(model);
        if (report.status == GaugeStatus::Violated)
            throw Error(ErrorKind::Violated,
                        "long-range hops break path independence; no eta_I metric");
        if (report.status == GaugeStatus::Degenerate)
            throw Error(ErrorKind::Degenerate, "zero hopping amplitude");
    }

    // R_i = (t_L1...t_Li)/(t_R1...t_Ri), signed
    std::vector<double> R(model.num_sub + 1);
    R[0] = 1.0;
    for (int i = 0; i < model.num_sub; ++i)
        R[i + 1] = R[i] * model.t_left[i].real() / model.t_right[i].real();

    EtaMetric eta;
    eta.diag.resize(model.size());
    double cell = R[model.num_sub];
    for (int n = 1; n <= model.num_cells; ++n) {
        for (int i = 1; i <= model.num_sub; ++i)
            eta.diag[model.site(n, i)] = R[i - 1] * cell;
        cell *= R[model.num_sub];
    }
    bool positive = true;
    for (int i = 1; i <= model.num_sub; ++i)
        if (R[i] <= 0.0) positive = false;
    eta.definiteness = positive ? Definiteness::PositiveDefinite : Definiteness::Indefinite;
    return eta;
}

double pseudo_hermiticity_residual(const Matrix& H, const RealVector& eta_diag) {
    if (H.rows() != H.cols() || H.rows() != eta_diag.size())
        throw Error(ErrorKind::InputError, "dimension mismatch between H and eta");
    double scale = eta_diag.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw Error(ErrorKind::InputError, "eta is zero");
    RealVector eta = eta_diag / scale;
    Matrix lhs = eta.cast<Complex>().asDiagonal() * H;
    Matrix rhs = H.adjoint() * eta.cast<Complex>().asDiagonal();
    return (lhs - rhs).norm();
}

Matrix hermitian_counterpart(const LatticeModel1D& model) {
    model.validate();
    if (!model.is_real())
        throw Error(ErrorKind::Unsupported, "Hermitian counterpart requires real amplitudes");
    require_nonzero_nn(model);
    for (int i = 0; i < model.num_sub; ++i)
        if ((model.t_left[i] * model.t_right[i]).real() <= 0.0)
            throw Error(ErrorKind::PtBroken,
                        "t_L*t_R <= 0 on bond " + std::to_string(i + 1) +
                            ": no Hermitian counterpart");
    auto report = check_path_independence(model);
    if (report.status == GaugeStatus::Violated)
        throw Error(ErrorKind::Violated, "path independence fails; no Hermitian counterpart");
    if (report.status == GaugeStatus::Degenerate)
        throw Error(ErrorKind::Degenerate, "zero hopping amplitude");
    if (report.status == GaugeStatus::EtaIPseudo)
        throw Error(ErrorKind::PtBroken, "a long-range ratio is negative: no Hermitian counterpart");

    IgtScaling s = build_igt(model);
    Matrix H = build_real_space(model);
    Matrix out(H.rows(), H.cols());
    for (int a = 0; a < H.rows(); ++a)
        for (int b = 0; b < H.cols(); ++b)
            out(a, b) = H(a, b) * s.diag[b] / s.diag[a];
    return out;
}

GaugeReport check_path_independence(const LatticeModel1D& model, double tol) {
    return analyze_hop_graph(hop_graph(model), model.is_real(), tol);
}

GaugeReport check_path_independence(const LatticeModel2D& model, double tol) {
    return analyze_hop_graph(hop_graph(model), model.is_real(), tol);
}

GaugeGrid2D solve_gauge_2d(const LatticeModel2D& model) {
    model.validate();
    auto report = check_path_independence(model);
    if (report.status == GaugeStatus::Degenerate)
        throw Error(ErrorKind::Degenerate, "zero hopping amplitude in 2D model");
    if (report.status == GaugeStatus::Violated)
        throw Error(ErrorKind::Violated,
                    "diagonal hops break path independence: t1/t2 != (tR/tL)(tU/tD)");

    GaugeGrid2D g;
    g.rx = std::sqrt(model.t_right / model.t_left);
    g.ry = std::sqrt(model.t_up / model.t_down);
    g.site_factors.resize(model.nx, model.ny);
    for (int m = 1; m <= model.nx; ++m)
        for (int n = 1; n <= model.ny; ++n)
            g.site_factors(m - 1, n - 1) =
                std::pow(g.rx, Complex(m, 0)) * std::pow(g.ry, Complex(n, 0));
    return g;
}

Matrix reflection_symmetry_generator(const LatticeModel1D& model, double tol) {
    model.validate();
    if (!model.is_real())
        throw Error(ErrorKind::Unsupported, "reflection generator requires real amplitudes");
    require_nonzero_nn(model);
    if (!model.long_range.empty())
        throw Error(ErrorKind::Unsupported, "reflection generator is defined for NN models");

    const int M = model.num_sub;
    // split bonds into reciprocal and nonreciprocal parts; intracell bonds
    // must be mirror symmetric, the intercell bond maps to itself
    double norm = 0.0;
    for (int i = 0; i < M; ++i)
        norm = std::max({norm, std::abs(model.t_left[i]), std::abs(model.t_right[i])});
    for (int i = 1; i < M; ++i) {
        int j = M - i;
        double t_i = (model.t_left[i - 1].real() + model.t_right[i - 1].real()) / 2;
        double g_i = (model.t_right[i - 1].real() - model.t_left[i - 1].real()) / 2;
        double t_j = (model.t_left[j - 1].real() + model.t_right[j - 1].real()) / 2;
        double g_j = (model.t_right[j - 1].real() - model.t_left[j - 1].real()) / 2;
        if (std::abs(t_i - t_j) > tol * std::max(1.0, norm) ||
            std::abs(g_i - g_j) > tol * std::max(1.0, norm))
            throw Error(ErrorKind::SymmetryAbsent,
                        "hopping decomposition is not mirror symmetric (bond " +
                            std::to_string(i) + " vs " + std::to_string(j) + ")");
    }

    EtaMetric eta = build_eta_i(model);
    const int dim = model.size();
    Matrix g = Matrix::Zero(dim, dim);
    for (int a = 0; a < dim; ++a)
        g(a, dim - 1 - a) = eta.diag[dim - 1 - a];
    double scale = g.cwiseAbs().maxCoeff();
    return g / scale;
}

} // namespace nonrecip
