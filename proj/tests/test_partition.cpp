#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "wreathcat/partition.hpp"

using namespace wreathcat;

namespace {

// Independent oracle: enumerate ALL set partitions of {1..n} via restricted
// growth strings and keep the ones passing a direct four-point crossing scan.
std::vector<std::vector<std::vector<int>>> brute_force_nc(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> rgs(n, 0);
    auto crossing_free = [&](const std::vector<int>& owner) {
        for (int r1 = 0; r1 < n; ++r1)
            for (int r2 = r1 + 1; r2 < n; ++r2)
                for (int r3 = r2 + 1; r3 < n; ++r3)
                    for (int r4 = r3 + 1; r4 < n; ++r4)
                        if (owner[r1] == owner[r3] && owner[r2] == owner[r4] &&
                            owner[r1] != owner[r2])
                            return false;
        return true;
    };
    std::function<void(int, int)> rec = [&](int i, int maxv) {
        if (i == n) {
            if (!crossing_free(rgs)) return;
            std::vector<std::vector<int>> blocks(maxv + 1);
            for (int p = 0; p < n; ++p) blocks[rgs[p]].push_back(p + 1);
            out.push_back(blocks);
            return;
        }
        for (int v = 0; v <= maxv + 1; ++v) {
            rgs[i] = v;
            rec(i + 1, std::max(maxv, v));
        }
    };
    if (n == 0) {
        out.push_back({});
        return out;
    }
    rec(0, -1);
    return out;
}

std::vector<NcPartition> sample_partitions(int max_points) {
    std::vector<NcPartition> out;
    for (int total = 0; total <= max_points; ++total)
        for (int k = 0; k <= total; ++k)
            for (const auto& p : enumerate_nc(k, total - k)) out.push_back(p);
    return out;
}

}  // namespace

TEST_CASE("enumeration counts match Catalan numbers and the brute-force oracle") {
    CHECK(enumerate_nc(0, 0).size() == 1);
    CHECK(enumerate_nc(0, 4).size() == 14);
    CHECK(enumerate_nc(2, 2).size() == 14);

    for (int n = 0; n <= 7; ++n) {
        const auto oracle = brute_force_nc(n);
        for (int k = 0; k <= n; ++k) {
            const auto got = enumerate_nc(k, n - k);
            REQUIRE(got.size() == oracle.size());
            std::set<std::string> got_texts, oracle_texts;
            for (const auto& p : got) got_texts.insert(p.to_text());
            for (const auto& blocks : oracle)
                oracle_texts.insert(NcPartition(k, n - k, blocks).to_text());
            CHECK(got_texts == oracle_texts);
        }
    }

    for (int m = 0; m <= 12; ++m) {
        const int k = m / 2;
        CHECK(enumerate_nc_count(k, m - k) == catalan(m));
    }
}

TEST_CASE("enumeration limit raises a size error") {
    CHECK_THROWS_AS(enumerate_nc(9, 8), SizeError);
    CHECK_NOTHROW(enumerate_nc(1, 1, 2));
}

TEST_CASE("every enumerated partition passes the noncrossing validator") {
    for (const auto& p : sample_partitions(7)) {
        CHECK(p.is_noncrossing());
        // Re-run the checking constructor on the raw blocks.
        CHECK_NOTHROW(NcPartition(p.upper_count(), p.lower_count(), p.blocks()));
    }
}

TEST_CASE("constructor rejects crossings and bad covers") {
    CHECK_THROWS_AS(NcPartition(0, 4, {{1, 3}, {2, 4}}), ParseError);
    CHECK_THROWS_AS(NcPartition(0, 3, {{1, 2}}), ParseError);
    CHECK_THROWS_AS(NcPartition(0, 2, {{1, 1, 2}}), ParseError);
    // With the right-to-left lower numbering this one is noncrossing: the
    // outer block wraps around the middle singleton on the circle.
    CHECK_NOTHROW(NcPartition(3, 2, {{1, 3, 4, 5}, {2}}));
}

TEST_CASE("tensor product shifts and keeps rows disjoint") {
    const auto single = singleton_lower();
    const auto empty = NcPartition();
    CHECK(tensor(single, empty) == single);
    CHECK(tensor(empty, single) == single);

    const auto two_singletons = tensor(single, single);
    CHECK(two_singletons == NcPartition(0, 2, {{1}, {2}}));

    const auto id1 = identity_partition(1);
    const auto id_tensor = tensor(id1, id1);
    CHECK(id_tensor == NcPartition(2, 2, {{1, 4}, {2, 3}}));
    CHECK(id_tensor == identity_partition(2));

    for (const auto& p : sample_partitions(4))
        for (const auto& q : sample_partitions(3))
            CHECK(tensor(p, q).block_count() == p.block_count() + q.block_count());
}

TEST_CASE("adjoint is the order-reversing reflection") {
    CHECK(adjoint(identity_partition(1)) == identity_partition(1));
    CHECK(adjoint(singleton_lower()) == NcPartition(1, 0, {{1}}));

    // The worked diagram: p in NC(1,3) with the upper point joined to the
    // outer lower pair; mirror in NC(3,1).
    const NcPartition p(1, 3, {{1, 2, 4}, {3}});
    CHECK(adjoint(p) == NcPartition(3, 1, {{1, 3, 4}, {2}}));

    for (const auto& q : sample_partitions(6)) {
        CHECK(adjoint(adjoint(q)) == q);
        CHECK(adjoint(q).block_count() == q.block_count());
    }
    for (const auto& a : sample_partitions(4))
        for (const auto& b : sample_partitions(3))
            CHECK(adjoint(tensor(a, b)) == tensor(adjoint(a), adjoint(b)));
}

TEST_CASE("tensor is associative") {
    const auto sample = sample_partitions(3);
    for (const auto& a : sample)
        for (const auto& b : sample)
            for (const auto& c : sample)
                CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));
}

TEST_CASE("composition of the worked diagram pair") {
    const NcPartition p(1, 3, {{1, 2, 4}, {3}});
    const NcPartition q(3, 2, {{1, 3, 4, 5}, {2}});
    const auto r = compose(q, p);
    CHECK(r.result == NcPartition(1, 2, {{1, 2, 3}}));
    CHECK(r.central_blocks == 1);
    CHECK(r.cycles == 1);  // cy = 3 + 1 + 1 - 2 - 2
}

TEST_CASE("composition identities and edge cases") {
    for (const auto& p : sample_partitions(5)) {
        const auto left = compose(identity_partition(p.lower_count()), p);
        CHECK(left.result == p);
        CHECK(left.central_blocks == 0);
        CHECK(left.cycles == 0);
        const auto right = compose(p, identity_partition(p.upper_count()));
        CHECK(right.result == p);
        CHECK(right.central_blocks == 0);
        CHECK(right.cycles == 0);
    }

    const auto unit = singleton_lower();
    const auto counit = adjoint(unit);
    const auto r = compose(counit, unit);
    CHECK(r.result == NcPartition());
    CHECK(r.central_blocks == 1);
    CHECK(r.cycles == 0);

    CHECK_THROWS_AS(compose(singleton_lower(), singleton_lower()), std::invalid_argument);
}

TEST_CASE("composition outputs are noncrossing with consistent counts") {
    for (int l = 0; l <= 3; ++l)
        for (int k = 0; k <= 2; ++k)
            for (int w = 0; w <= 2; ++w)
                for (const auto& p : enumerate_nc(k, l))
                    for (const auto& q : enumerate_nc(l, w)) {
                        const auto r = compose(q, p);
                        CHECK(r.result.is_noncrossing());
                        CHECK(r.central_blocks >= 0);
                        CHECK(r.cycles >= 0);
                        CHECK(r.result.upper_count() == k);
                        CHECK(r.result.lower_count() == w);
                    }
}

TEST_CASE("composition is associative with additive cycle bookkeeping") {
    // (r q) p = r (q p) as partitions, and the total coefficient exponent
    // cy(p,q) + cy(qp,r) = cy(q,r) + cy(p,rq) agrees, likewise for cb.
    std::mt19937 rng(7);
    auto pick = [&](const std::vector<NcPartition>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    for (int iter = 0; iter < 300; ++iter) {
        const int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3),
                  c = static_cast<int>(rng() % 3), d = static_cast<int>(rng() % 3);
        const auto p = pick(enumerate_nc(a, b));
        const auto q = pick(enumerate_nc(b, c));
        const auto r = pick(enumerate_nc(c, d));
        const auto qp = compose(q, p);
        const auto left = compose(r, qp.result);
        const auto rq = compose(r, q);
        const auto right = compose(rq.result, p);
        CHECK(left.result == right.result);
        CHECK(qp.cycles + left.cycles == rq.cycles + right.cycles);
        CHECK(qp.central_blocks + left.central_blocks ==
              rq.central_blocks + right.central_blocks);
    }
}

TEST_CASE("composition distributes over tensor with additive bookkeeping") {
    std::mt19937 rng(42);
    auto pick = [&](const std::vector<NcPartition>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    for (int iter = 0; iter < 200; ++iter) {
        const int l1 = static_cast<int>(rng() % 3), k1 = static_cast<int>(rng() % 3),
                  w1 = static_cast<int>(rng() % 3);
        const int l2 = static_cast<int>(rng() % 3), k2 = static_cast<int>(rng() % 3),
                  w2 = static_cast<int>(rng() % 3);
        const auto p1 = pick(enumerate_nc(k1, l1));
        const auto q1 = pick(enumerate_nc(l1, w1));
        const auto p2 = pick(enumerate_nc(k2, l2));
        const auto q2 = pick(enumerate_nc(l2, w2));
        const auto split1 = compose(q1, p1);
        const auto split2 = compose(q2, p2);
        const auto joint = compose(tensor(q1, q2), tensor(p1, p2));
        CHECK(joint.result == tensor(split1.result, split2.result));
        CHECK(joint.central_blocks == split1.central_blocks + split2.central_blocks);
        CHECK(joint.cycles == split1.cycles + split2.cycles);
    }
}

TEST_CASE("text form round-trips bit-exactly") {
    CHECK(NcPartition(2, 3, {{1, 3}, {2}, {4, 5}}).to_text() == "[[1,3],[2],[4,5]]");
    CHECK(NcPartition().to_text() == "[]");
    CHECK(NcPartition::parse("[]", 0) == NcPartition());
    for (const auto& p : sample_partitions(6)) {
        const auto text = p.to_text();
        const auto back = NcPartition::parse(text, p.upper_count());
        CHECK(back == p);
        CHECK(back.to_text() == text);
    }
    CHECK_THROWS_AS(NcPartition::parse("[[1,2]", 0), ParseError);
    CHECK_THROWS_AS(NcPartition::parse("[[1,x]]", 0), ParseError);
    CHECK_THROWS_AS(NcPartition::parse("[[1,3],[2,4]]", 0), ParseError);
}

TEST_CASE("catalan numbers") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(4) == 14);
    CHECK(catalan(8) == 1430);
    CHECK(catalan(12) == 208012);
    CHECK_THROWS_AS(catalan(31), SizeError);
}
