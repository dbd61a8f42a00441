#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wreathcat/algebra.hpp"
#include "wreathcat/graph.hpp"
#include "wreathcat/operators.hpp"

using namespace wreathcat;

namespace {

// Random normalized spec: 1-3 blocks of size 1-3 with random positive
// rationals, rescaled exactly to a state.
AlgebraSpec random_spec(std::mt19937& rng) {
    std::uniform_int_distribution<int> block_count(1, 3), block_size(1, 3), numer(1, 9),
        denom(1, 9);
    std::vector<MatrixBlock> blocks(block_count(rng));
    for (auto& blk : blocks) {
        blk.size = block_size(rng);
        for (int i = 0; i < blk.size; ++i) blk.q.push_back(Rational(numer(rng), denom(rng)));
    }
    return AlgebraSpec::make(std::move(blocks), /*normalize=*/true);
}

// ψ-inner product of two orthonormal-basis elements, evaluated from the
// matrix-unit relations directly: (e_ij)* e_kl = e_ji e_kl = δ_ik e_jl,
// ψ(e_jl) = δ_jl Q_j. Independent of the scaling cached in the AlgebraSpec.
double psi_inner_onb(const AlgebraSpec& a, int f, int g) {
    const auto& x = a.element(f);
    const auto& y = a.element(g);
    if (x.block != y.block || x.row != y.row || x.col != y.col) return 0.0;
    return to_double(a.q_entry(x.block, x.col)) * a.onb_scale(f) * a.onb_scale(g);
}

}  // namespace

TEST_CASE("delta-form and trace detection") {
    const auto c4 = uniform_pointmass_algebra(4);
    CHECK(c4.dim() == 4);
    CHECK(c4.is_delta_form());
    CHECK(c4.delta() == Rational(4));
    CHECK(c4.is_tracial());

    const auto m2 = matrix_algebra_normalized_trace(2);
    CHECK(m2.dim() == 4);
    CHECK(m2.is_delta_form());
    CHECK(m2.delta() == Rational(4));
    CHECK(m2.is_tracial());

    const auto c3 = AlgebraSpec::make(
        {{1, {Rational(1, 2)}}, {1, {Rational(1, 3)}}, {1, {Rational(1, 6)}}});
    CHECK_FALSE(c3.is_delta_form());
    CHECK(c3.is_tracial());
    CHECK(c3.block_delta(0) == Rational(2));
    CHECK(c3.block_delta(1) == Rational(3));
    CHECK(c3.block_delta(2) == Rational(6));
    CHECK_THROWS_AS(c3.delta(), HypothesisError);

    const auto m2_skew = AlgebraSpec::make({{2, {Rational(1, 3), Rational(2, 3)}}});
    CHECK_FALSE(m2_skew.is_tracial());
    CHECK(m2_skew.is_delta_form());  // single block is always one
    CHECK(m2_skew.delta() == Rational(9, 2));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(AlgebraSpec::make({{1, {Rational(0)}}}), ParseError);
    CHECK_THROWS_AS(AlgebraSpec::make({{1, {Rational(-1, 2)}}}), ParseError);
    CHECK_THROWS_AS(AlgebraSpec::make({{2, {Rational(1, 2)}}}), ParseError);
    CHECK_THROWS_AS(AlgebraSpec::make({{1, {Rational(1, 2)}}}), ParseError);  // not a state
    const auto rescaled = AlgebraSpec::make({{1, {Rational(1, 2)}}}, /*normalize=*/true);
    CHECK(rescaled.state_sum() == Rational(1));
    CHECK(rescaled.q_entry(0, 0) == Rational(1));
}

TEST_CASE("orthonormal basis is orthonormal for psi") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng);
        for (int f = 0; f < spec.dim(); ++f)
            for (int g = 0; g < spec.dim(); ++g)
                CHECK(psi_inner_onb(spec, f, g) == Catch::Approx(f == g ? 1.0 : 0.0).margin(1e-12));
    }
}

TEST_CASE("multiplication on C^4: m(b_i ⊗ b_j) = δ_ij 2 b_i") {
    const auto c4 = uniform_pointmass_algebra(4);
    const auto m = multiplication_operator(c4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int out = 0; out < 4; ++out)
                CHECK(m.mat(out, i * 4 + j) ==
                      Catch::Approx(i == j && out == i ? 2.0 : 0.0).margin(1e-14));
}

TEST_CASE("unit vector is Q^{1/2} on the diagonal") {
    const auto c4 = uniform_pointmass_algebra(4);
    const auto eta = unit_operator(c4);
    for (int f = 0; f < 4; ++f) CHECK(eta.mat(f, 0) == Catch::Approx(0.5));

    std::mt19937 rng(5);
    const auto spec = random_spec(rng);
    const auto eta2 = unit_operator(spec);
    for (int f = 0; f < spec.dim(); ++f) {
        const auto& e = spec.element(f);
        const double expected =
            e.row == e.col ? std::sqrt(to_double(spec.q_entry(e.block, e.row))) : 0.0;
        CHECK(eta2.mat(f, 0) == Catch::Approx(expected).margin(1e-14));
    }
}

TEST_CASE("multiplication is associative and m m* = delta id on delta-forms") {
    std::mt19937 rng(7);
    for (const auto& spec :
         {uniform_pointmass_algebra(4), uniform_pointmass_algebra(5),
          matrix_algebra_normalized_trace(2), random_spec(rng), random_spec(rng)}) {
        const auto m = multiplication_operator(spec);
        const auto id1 = identity_operator(spec, 1);
        const auto left = compose(m, tensor(m, id1));
        const auto right = compose(m, tensor(id1, m));
        CHECK(max_abs_diff(left.mat, right.mat) < 1e-12);
        CHECK(max_abs_diff(left.mat, iterated_multiplication(spec, 3).mat) < 1e-12);

        if (spec.is_delta_form()) {
            const double delta = to_double(spec.delta());
            CHECK(max_abs_diff((m.mat * m.mat.transpose()).eval(),
                               (delta * id1.mat).eval()) < 1e-9);
        }
    }

    // Non-delta-form: m m* has distinct diagonal values 2, 3, 6.
    const auto c3 = AlgebraSpec::make(
        {{1, {Rational(1, 2)}}, {1, {Rational(1, 3)}}, {1, {Rational(1, 6)}}});
    const auto m = multiplication_operator(c3);
    const Eigen::MatrixXd mm = m.mat * m.mat.transpose();
    CHECK(mm(0, 0) == Catch::Approx(2.0));
    CHECK(mm(1, 1) == Catch::Approx(3.0));
    CHECK(mm(2, 2) == Catch::Approx(6.0));
}

TEST_CASE("iterated multiplication identity m_k m_k* = delta^{k-1} id") {
    for (const auto& spec : {uniform_pointmass_algebra(4), matrix_algebra_normalized_trace(2)}) {
        const double delta = to_double(spec.delta());
        for (int k = 1; k <= 5; ++k) {
            const auto mk = iterated_multiplication(spec, k);
            const Eigen::MatrixXd lhs = mk.mat * mk.mat.transpose();
            const Eigen::MatrixXd rhs =
                std::pow(delta, k - 1) * Eigen::MatrixXd::Identity(spec.dim(), spec.dim());
            CHECK(max_abs_diff(lhs, rhs) < 1e-9);
        }
    }
    // k = 3 on C^4 uniform: delta^2 = 16.
    const auto c4 = uniform_pointmass_algebra(4);
    const auto m3 = iterated_multiplication(c4, 3);
    CHECK(max_abs_diff((m3.mat * m3.mat.transpose()).eval(),
                       (16.0 * Eigen::MatrixXd::Identity(4, 4)).eval()) < 1e-9);

    CHECK_THROWS_AS(iterated_multiplication(c4, 0), std::invalid_argument);
    CHECK(max_abs_diff(structure_operator(c4, StructureKind::Multiplication, 1).mat,
                       identity_operator(c4, 1).mat) == 0.0);
}

TEST_CASE("structure operator adjoints are transposes") {
    const auto m2 = matrix_algebra_normalized_trace(2);
    CHECK(max_abs_diff(structure_operator(m2, StructureKind::MultiplicationAdjoint).mat,
                       multiplication_operator(m2).mat.transpose()) == 0.0);
    CHECK(max_abs_diff(structure_operator(m2, StructureKind::UnitAdjoint).mat,
                       unit_operator(m2).mat.transpose()) == 0.0);
}

TEST_CASE("arithmetic bound: normalized eigenvalue tuples have large inverse sums") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 400; ++trial) {
        const auto spec = random_spec(rng);
        Rational total_inverse(0);
        int eigenvalues = 0;
        for (int t = 0; t < spec.block_count(); ++t) {
            Rational tr(0);
            for (const auto& qi : spec.matrix_blocks()[t].q) tr += qi;
            // Any single block with >= 2 eigenvalues satisfies the bound on its own.
            if (spec.matrix_blocks()[t].size >= 2) {
                REQUIRE(tr <= Rational(1));
                CHECK(spec.block_delta(t) >= Rational(4));
            }
            total_inverse += spec.block_delta(t);
            eigenvalues += spec.matrix_blocks()[t].size;
        }
        if (eigenvalues >= 2) CHECK(total_inverse >= Rational(4));
    }
}

TEST_CASE("scaled spec implements the 1-form convention") {
    const auto m2 = matrix_algebra_normalized_trace(2);
    const auto scaled = m2.scaled(m2.delta());
    CHECK_FALSE(scaled.normalized());
    CHECK(scaled.state_sum() == Rational(4));      // ψ̃(1) = δ
    CHECK(scaled.block_delta(0) == Rational(1));   // 1-form
    CHECK_THROWS_AS(m2.scaled(Rational(0)), std::invalid_argument);
}

TEST_CASE("classical graphs transport to the uniform algebra") {
    Eigen::MatrixXd cycle4(4, 4);
    cycle4 << 0, 1, 0, 1,
              1, 0, 1, 0,
              0, 1, 0, 1,
              1, 0, 1, 0;
    const auto g = from_classical_graph(cycle4);
    CHECK(g.algebra.dim() == 4);
    CHECK(g.algebra.delta() == Rational(4));
    CHECK(max_abs_diff(g.d, cycle4) == 0.0);

    const auto empty = from_classical_graph(Eigen::MatrixXd::Zero(5, 5));
    CHECK(empty.d.cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd k4 = Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4);
    CHECK(max_abs_diff(from_classical_graph(k4).d, k4) == 0.0);

    CHECK_THROWS_AS(from_classical_graph(Eigen::MatrixXd::Zero(2, 3)), ParseError);
}

TEST_CASE("graph constraint analysis: trivial cases") {
    const auto c4 = uniform_pointmass_algebra(4);
    const auto eta = unit_operator(c4);

    QuantumGraph id_graph{c4, Eigen::MatrixXd::Identity(4, 4)};
    CHECK(graph_constraint_analysis(id_graph).trivial);

    QuantumGraph rank_one{c4, eta.mat * eta.mat.transpose()};
    CHECK(graph_constraint_analysis(rank_one).trivial);

    QuantumGraph mix{c4, 2.0 * Eigen::MatrixXd::Identity(4, 4) - 3.0 * rank_one.d};
    CHECK(graph_constraint_analysis(mix).trivial);
}

TEST_CASE("graph constraint analysis: path graph P3") {
    Eigen::MatrixXd p3 = Eigen::MatrixXd::Zero(3, 3);
    p3(0, 1) = p3(1, 0) = p3(1, 2) = p3(2, 1) = 1;
    const auto g = from_classical_graph(p3);
    const auto report = graph_constraint_analysis(g);
    CHECK_FALSE(report.trivial);
    CHECK(report.normal);
    REQUIRE(report.spectral.size() == 3);

    std::vector<double> eigs;
    Eigen::MatrixXcd sum_proj = Eigen::MatrixXcd::Zero(3, 3);
    Eigen::MatrixXcd recombined = Eigen::MatrixXcd::Zero(3, 3);
    for (const auto& sp : report.spectral) {
        eigs.push_back(sp.eigenvalue.real());
        CHECK(std::abs(sp.eigenvalue.imag()) < 1e-9);
        CHECK((sp.projection * sp.projection - sp.projection).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((sp.projection - sp.projection.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
        sum_proj += sp.projection;
        recombined += sp.eigenvalue * sp.projection;
    }
    std::sort(eigs.begin(), eigs.end());
    CHECK(eigs[0] == Catch::Approx(-std::sqrt(2.0)));
    CHECK(eigs[1] == Catch::Approx(0.0).margin(1e-9));
    CHECK(eigs[2] == Catch::Approx(std::sqrt(2.0)));
    CHECK((sum_proj - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((recombined - g.d.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-9);

    for (std::size_t i = 0; i < report.spectral.size(); ++i)
        for (std::size_t j = i + 1; j < report.spectral.size(); ++j)
            CHECK((report.spectral[i].projection * report.spectral[j].projection)
                      .cwiseAbs()
                      .maxCoeff() < 1e-9);
}

TEST_CASE("graph constraint analysis rejects non-normal spectral requests") {
    const auto c2 = uniform_pointmass_algebra(2);
    Eigen::MatrixXd nil = Eigen::MatrixXd::Zero(2, 2);
    nil(0, 1) = 1;
    CHECK_THROWS_AS(graph_constraint_analysis(QuantumGraph{c2, nil}), HypothesisError);
    CHECK_NOTHROW(graph_constraint_analysis(QuantumGraph{c2, nil}, 1e-9, /*want_spectral=*/false));
}
