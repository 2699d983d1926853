#include <doctest.h>

#include <random>

#include "nonrecip/lattice.hpp"
#include "nonrecip/spectral.hpp"
#include "test_helpers.hpp"

using namespace nonrecip;
using namespace nonrecip::testing;

namespace {

// Independent assembler: walks the operator terms of the Hamiltonian sum one by
// one instead of reusing the builder's loops.
Matrix assemble_by_terms(const LatticeModel1D& m) {
    Matrix H = Matrix::Zero(m.size(), m.size());
    struct Term { int cell_from, sub_from, cell_to, sub_to; Complex amp; };
    std::vector<Term> terms;
    for (int n = 1; n <= m.num_cells; ++n)
        for (int i = 1; i + 1 <= m.num_sub; ++i) {
            terms.push_back({n, i, n, i + 1, m.t_right[i - 1]});
            terms.push_back({n, i + 1, n, i, m.t_left[i - 1]});
        }
    for (int n = 1; n + 1 <= m.num_cells; ++n) {
        terms.push_back({n, m.num_sub, n + 1, 1, m.t_right[m.num_sub - 1]});
        terms.push_back({n + 1, 1, n, m.num_sub, m.t_left[m.num_sub - 1]});
    }
    for (const auto& h : m.long_range)
        for (int n = 1; n + h.cell_offset <= m.num_cells; ++n) {
            terms.push_back({n, h.from_sub, n + h.cell_offset, h.to_sub, h.forward});
            terms.push_back({n + h.cell_offset, h.to_sub, n, h.from_sub, h.backward});
        }
    for (const auto& t : terms)
        H((t.cell_to - 1) * m.num_sub + t.sub_to - 1,
          (t.cell_from - 1) * m.num_sub + t.sub_from - 1) += t.amp;
    return H;
}

} // namespace

TEST_CASE("hatano-nelson chain assembles as the expected tridiagonal") {
    Matrix H = build_real_space(hatano_nelson(2.0, 0.5, 3));
    Matrix expect = Matrix::Zero(3, 3);
    expect(1, 0) = expect(2, 1) = 2.0;
    expect(0, 1) = expect(1, 2) = 0.5;
    CHECK((H - expect).norm() == 0.0);
}

TEST_CASE("empty long-range list changes nothing") {
    LatticeModel1D m = ssh3_reference(0.7, 4);
    LatticeModel1D m2 = m;
    m2.long_range.clear();
    CHECK((build_real_space(m) - build_real_space(m2)).norm() == 0.0);
}

TEST_CASE("trimer chain matches the term-by-term assembler") {
    LatticeModel1D m = chain(3, 2, {0.4, 0.9, 0.7}, {2.025, -0.4, 0.7});
    Matrix H = build_real_space(m);
    CHECK(H.rows() == 6);
    CHECK((H - assemble_by_terms(m)).norm() == 0.0);

    LatticeModel1D lr = long_range_chain(12);
    CHECK((build_real_space(lr) - assemble_by_terms(lr)).norm() == 0.0);
}

TEST_CASE("hopping blocks: single-band chain") {
    BlochMatrix bm = hopping_blocks(hatano_nelson(2.0, 0.5, 3));
    CHECK(bm.dim == 1);
    CHECK(bm.range() == 1);
    CHECK(bm.blocks.at(1)(0, 0) == Complex(2.0, 0.0));
    CHECK(bm.blocks.at(-1)(0, 0) == Complex(0.5, 0.0));
}

TEST_CASE("hopping blocks: reciprocal model has T_{+m} = T_{-m}^H") {
    LatticeModel1D m = chain(3, 4, {0.3, 1.1, 0.6}, {0.3, 1.1, 0.6});
    BlochMatrix bm = hopping_blocks(m);
    for (const auto& [q, T] : bm.blocks) {
        auto it = bm.blocks.find(-q);
        REQUIRE(it != bm.blocks.end());
        CHECK((T - it->second.adjoint()).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("hopping blocks: third-neighbour hop extends the range to 3") {
    BlochMatrix bm = hopping_blocks(long_range_chain(12));
    CHECK(bm.range() == 3);
    CHECK(bm.blocks.count(3) == 1);
    CHECK(bm.blocks.count(-3) == 1);
    CHECK(bm.blocks.count(2) == 0);
}

TEST_CASE("bloch_eval collapses at beta = 1 and rejects beta = 0") {
    BlochMatrix bm = hopping_blocks(hatano_nelson(2.0, 0.5, 3));
    Matrix H = bloch_eval(bm, 1.0);
    CHECK(H(0, 0) == Complex(2.5, 0.0));
    CHECK_THROWS_AS((void)bloch_eval(bm, 0.0), Error);
}

TEST_CASE("bloch_eval of a reciprocal model is Hermitian on the unit circle") {
    BlochMatrix bm = hopping_blocks(chain(2, 4, {0.8, 1.2}, {0.8, 1.2}));
    for (double k : {0.3, 1.7, 4.4}) {
        Matrix H = bloch_eval(bm, std::exp(Complex(0, k)));
        CHECK((H - H.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("PBC spectrum equals the union of Bloch spectra at roots of unity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        LatticeModel1D m = random_real_chain(rng, 3, 3, 8);
        m.boundary = Boundary::Pbc;
        Vector obc = eig_values(build_real_space(m));
        BlochMatrix bm = hopping_blocks(m);
        std::vector<Complex> bloch;
        for (int j = 0; j < m.num_cells; ++j) {
            Complex beta = std::exp(Complex(0, 2.0 * M_PI * j / m.num_cells));
            Vector v = eig_values(bloch_eval(bm, beta));
            bloch.insert(bloch.end(), v.data(), v.data() + v.size());
        }
        REQUIRE((int)bloch.size() == obc.size());
        std::sort(bloch.begin(), bloch.end(), [](Complex a, Complex b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        double worst = 0.0;
        for (int i = 0; i < obc.size(); ++i)
            worst = std::max(worst, std::abs(obc[i] - bloch[i]));
        CHECK(worst < 1e-9 * matrix_scale(obc));
    }
}

TEST_CASE("2x2 grid without diagonals has exactly 8 hop entries") {
    Matrix H = build_real_space_2d(grid_2d(2, 2, 0.2, 0.4, 0.35, 0.65));
    int nonzero = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && H(i, j) != Complex{}) ++nonzero;
    CHECK(nonzero == 8);
}

TEST_CASE("balanced diagonal hops make the 2D spectrum real") {
    LatticeModel2D m = hn2d_reference(8, 10);
    Vector values = eig_values(build_real_space_2d(m));
    double worst = 0.0;
    for (int i = 0; i < values.size(); ++i) worst = std::max(worst, std::abs(values[i].imag()));
    CHECK(worst < 1e-9 * matrix_scale(values));
}

TEST_CASE("reciprocal 2D lattice is Hermitian") {
    Matrix H = build_real_space_2d(grid_2d(3, 4, 0.7, 0.7, 1.1, 1.1));
    CHECK((H - H.adjoint()).norm() == 0.0);
}

TEST_CASE("reciprocal 1D models are exactly Hermitian") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        LatticeModel1D m = random_real_chain(rng);
        m.t_left = m.t_right;
        if (trial % 3 == 0) {
            m.long_range.push_back({1, 1, 2, 0.3, 0.3});
        }
        Matrix H = build_real_space(m);
        CHECK((H - H.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("swapping all hop directions transposes the matrix") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        LatticeModel1D m = random_real_chain(rng);
        if (trial % 2 == 0) m.long_range.push_back({1, 1, 2, 0.4, -0.7});
        LatticeModel1D swapped = m;
        std::swap(swapped.t_right, swapped.t_left);
        for (auto& h : swapped.long_range) std::swap(h.forward, h.backward);
        CHECK((build_real_space(swapped) - build_real_space(m).transpose()).norm() == 0.0);
    }
}

TEST_CASE("model validation rejects malformed inputs") {
    LatticeModel1D m = hatano_nelson(1.0, 1.0, 3);
    m.t_right.push_back(0.5);
    CHECK_THROWS_AS(m.validate(), Error);

    LatticeModel1D self_hop = hatano_nelson(1.0, 1.0, 3);
    self_hop.long_range.push_back({1, 1, 0, 0.1, 0.1});
    CHECK_THROWS_AS(self_hop.validate(), Error);

    LatticeModel1D bad_sub = chain(2, 3, {1.0, 1.0}, {1.0, 1.0});
    bad_sub.long_range.push_back({1, 3, 1, 0.1, 0.1});
    CHECK_THROWS_AS(bad_sub.validate(), Error);
}
