#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wreathcat/partition_map.hpp"

using namespace wreathcat;

namespace {

std::vector<NcPartition> sample_partitions(int max_points) {
    std::vector<NcPartition> out;
    for (int total = 0; total <= max_points; ++total)
        for (int k = 0; k <= total; ++k)
            for (const auto& p : enumerate_nc(k, total - k)) out.push_back(p);
    return out;
}

const AlgebraSpec kC4 = uniform_pointmass_algebra(4);
const AlgebraSpec kC5 = uniform_pointmass_algebra(5);
const AlgebraSpec kM2 = matrix_algebra_normalized_trace(2);

}  // namespace

TEST_CASE("identity string maps to the identity operator") {
    for (const auto& spec : {kC4, kM2}) {
        for (int k = 1; k <= 3; ++k) {
            const auto tp = build_tp(spec, identity_partition(k));
            CHECK(max_abs_diff(tp.mat, identity_operator(spec, k).mat) < 1e-14);
        }
    }
}

TEST_CASE("empty partition is the scalar 1") {
    const auto tp = build_tp(kC4, NcPartition());
    REQUIRE(tp.mat.rows() == 1);
    REQUIRE(tp.mat.cols() == 1);
    CHECK(tp.mat(0, 0) == 1.0);
}

TEST_CASE("lower singleton reproduces the unit map") {
    const auto tp = build_tp(kC4, singleton_lower());
    for (int f = 0; f < 4; ++f) CHECK(tp.mat(f, 0) == Catch::Approx(0.5));
    for (const auto& spec : {kC5, kM2}) {
        const auto t = build_tp(spec, singleton_lower());
        CHECK(max_abs_diff(t.mat, unit_operator(spec).mat) < 1e-14);
    }
}

TEST_CASE("one-block NC(k,1) reproduces the iterated multiplication") {
    for (const auto& spec : {kC4, kC5, kM2}) {
        for (int k = 1; k <= 4; ++k) {
            const auto tp = build_tp(spec, one_block_partition(k, 1));
            CHECK(max_abs_diff(tp.mat, iterated_multiplication(spec, k).mat) < 1e-12);
        }
    }
}

TEST_CASE("worked diagram pair: T_q T_p = delta^cy T_qp on C^4") {
    const NcPartition p(1, 3, {{1, 2, 4}, {3}});
    const NcPartition q(3, 2, {{1, 3, 4, 5}, {2}});
    const auto comp = compose(q, p);
    REQUIRE(comp.cycles == 1);
    const Eigen::MatrixXd lhs = build_tp(kC4, q).mat * build_tp(kC4, p).mat;
    const Eigen::MatrixXd rhs = 4.0 * build_tp(kC4, comp.result).mat;
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("composing with the identity is exact") {
    for (const auto& p : sample_partitions(4)) {
        const auto comp = compose(identity_partition(p.lower_count()), p);
        REQUIRE(comp.cycles == 0);
        const Eigen::MatrixXd lhs =
            build_tp(kC4, identity_partition(p.lower_count())).mat * build_tp(kC4, p).mat;
        CHECK(max_abs_diff(lhs, build_tp(kC4, comp.result).mat) == 0.0);
    }
}

TEST_CASE("one-form mode: eta* eta gluing carries psi-tilde(1)") {
    // On M2 with the normalized trace, ψ̃ = δψ has ψ̃(1) = δ = 4.
    const auto scaled = kM2.scaled(kM2.delta());
    const auto unit = singleton_lower();
    const auto counit = adjoint(unit);
    const auto comp = compose(counit, unit);
    REQUIRE(comp.central_blocks == 1);
    const Eigen::MatrixXd lhs = build_tp(scaled, counit).mat * build_tp(scaled, unit).mat;
    REQUIRE(lhs.rows() == 1);
    CHECK(lhs(0, 0) == Catch::Approx(4.0));
    const Eigen::MatrixXd rhs = 4.0 * build_tp(scaled, comp.result).mat;
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("tensor compatibility is entrywise exact") {
    std::mt19937 rng(3);
    const auto pool = sample_partitions(4);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (const auto& spec : {kC4, kM2}) {
        for (int iter = 0; iter < 60; ++iter) {
            const auto& p = pool[pick(rng)];
            const auto& q = pool[pick(rng)];
            const auto lhs = tensor(build_tp(spec, p), build_tp(spec, q));
            const auto rhs = build_tp(spec, tensor(p, q));
            CHECK(max_abs_diff(lhs.mat, rhs.mat) < 1e-12);
        }
    }
}

TEST_CASE("adjoint compatibility: matrix transpose equals T of the reflected diagram") {
    for (const auto& spec : {kC4, kM2})
        for (const auto& p : sample_partitions(5))
            CHECK(max_abs_diff(build_tp(spec, p).mat.transpose(),
                               build_tp(spec, adjoint(p)).mat) < 1e-12);
}

TEST_CASE("operators stay finite") {
    const auto skew = AlgebraSpec::make({{2, {Rational(1, 3), Rational(2, 3)}}});
    for (const auto& spec : {kC4, kM2, skew})
        for (const auto& p : sample_partitions(4)) CHECK(build_tp(spec, p).mat.allFinite());
}

TEST_CASE("verify_calculus passes in both modes on small configurations") {
    // The skew M2 state is a delta-form but not a trace, which exercises the
    // column-dependent orthonormal scaling.
    const auto skew = AlgebraSpec::make({{2, {Rational(1, 3), Rational(2, 3)}}});
    for (const auto& spec : {kC4, kM2, skew}) {
        const auto delta_report = verify_calculus(spec, 5, CalculusMode::DeltaForm);
        INFO(delta_report.worst_composition);
        CHECK(delta_report.ok());
        CHECK(delta_report.max_composition_dev < 1e-10);

        const auto oneform_report = verify_calculus(spec, 5, CalculusMode::OneForm);
        INFO(oneform_report.worst_composition);
        CHECK(oneform_report.ok());
        CHECK(oneform_report.max_composition_dev < 1e-10);
    }

    const auto c3 = AlgebraSpec::make(
        {{1, {Rational(1, 2)}}, {1, {Rational(1, 3)}}, {1, {Rational(1, 6)}}});
    CHECK_THROWS_AS(verify_calculus(c3, 4, CalculusMode::DeltaForm), HypothesisError);
}

TEST_CASE("gram rank matches the Catalan count on large algebras") {
    CHECK(gram_rank(kC4, 2, 1).rank == 5);
    CHECK(gram_rank(kC4, 0, 4).rank == 14);
    CHECK(gram_rank(kC5, 2, 1).rank == 5);
    CHECK(gram_rank(kM2, 2, 2).rank == 14);
    CHECK(gram_rank(kC4, 0, 4).theorem_applicable);
}

TEST_CASE("gram rank degenerates below dimension four") {
    const auto c2 = uniform_pointmass_algebra(2);
    const auto res = gram_rank(c2, 2, 2);
    CHECK_FALSE(res.theorem_applicable);
    CHECK(res.partition_count == 14);
    CHECK(res.rank < 14);
}

TEST_CASE("gram rank is stable across thresholds") {
    int previous = 0;
    for (double threshold : {1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
        const int r = gram_rank(kC4, 2, 2, threshold).rank;
        if (previous) CHECK(r <= previous);
        previous = r;
        CHECK(r == 14);
    }
}
