#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "wreathcat/errors.hpp"

namespace wreathcat {

// A noncrossing partition of k upper and l lower points.
//
// Point numbering convention: upper points are 1..k from left to right,
// lower points are k+1..k+l from RIGHT to left (the leftmost lower point is
// k+l). Walking 1..k+l then traces the boundary of a disk, so noncrossing on
// the circle reduces to the linear four-point test and the adjoint is the
// order-reversing relabeling x -> k+l+1-x.
class NcPartition {
public:
    using Block = std::vector<int>;

    NcPartition() : upper_(0), lower_(0) {}

    NcPartition(int upper, int lower, std::vector<Block> blocks)
        : upper_(upper), lower_(lower), blocks_(std::move(blocks)) {
        canonicalize();
        validate();
    }

    int upper_count() const { return upper_; }
    int lower_count() const { return lower_; }
    int total_points() const { return upper_ + lower_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<Block>& blocks() const { return blocks_; }

    bool operator==(const NcPartition& o) const {
        return upper_ == o.upper_ && lower_ == o.lower_ && blocks_ == o.blocks_;
    }
    bool operator!=(const NcPartition& o) const { return !(*this == o); }
    bool operator<(const NcPartition& o) const {
        if (upper_ != o.upper_) return upper_ < o.upper_;
        if (lower_ != o.lower_) return lower_ < o.lower_;
        return blocks_ < o.blocks_;
    }

    // Crossing test on the canonical numbering: some r1<r2<r3<r4 with r1,r3
    // in one block and r2,r4 in a different one.
    bool is_noncrossing() const {
        const int n = total_points();
        std::vector<int> owner(n + 1, -1);
        for (int b = 0; b < block_count(); ++b)
            for (int x : blocks_[b]) owner[x] = b;
        for (int r1 = 1; r1 <= n; ++r1)
            for (int r3 = r1 + 2; r3 <= n; ++r3) {
                if (owner[r1] != owner[r3]) continue;
                for (int r2 = r1 + 1; r2 < r3; ++r2) {
                    if (owner[r2] == owner[r1]) continue;
                    for (int r4 = r3 + 1; r4 <= n; ++r4)
                        if (owner[r4] == owner[r2]) return false;
                }
            }
        return true;
    }

    // Text form: blocks as bracketed integer lists in canonical order,
    // e.g. [[1,3],[2],[4,5]]. Round-trips bit-exactly through parse().
    std::string to_text() const {
        std::string out = "[";
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (b) out += ',';
            out += '[';
            for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
                if (i) out += ',';
                out += std::to_string(blocks_[b][i]);
            }
            out += ']';
        }
        out += ']';
        return out;
    }

    static NcPartition parse(const std::string& text, int upper) {
        std::size_t pos = 0;
        auto fail = [&](const std::string& why) -> void {
            throw ParseError("partition '" + text + "': " + why);
        };
        auto expect = [&](char c) {
            if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
            ++pos;
        };
        std::vector<Block> blocks;
        expect('[');
        if (pos < text.size() && text[pos] == ']') {
            ++pos;
        } else {
            while (true) {
                expect('[');
                Block blk;
                while (true) {
                    std::size_t start = pos;
                    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos]))))
                        ++pos;
                    if (pos == start) fail("expected integer");
                    blk.push_back(std::stoi(text.substr(start, pos - start)));
                    if (pos < text.size() && text[pos] == ',') {
                        ++pos;
                        continue;
                    }
                    break;
                }
                expect(']');
                blocks.push_back(std::move(blk));
                if (pos < text.size() && text[pos] == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
            expect(']');
        }
        if (pos != text.size()) fail("trailing characters");
        int total = 0;
        for (const auto& b : blocks) total += static_cast<int>(b.size());
        if (upper < 0 || upper > total) fail("upper count out of range");
        return NcPartition(upper, total - upper, std::move(blocks));
    }

private:
    int upper_;
    int lower_;
    std::vector<Block> blocks_;

    struct Trusted {};
    NcPartition(Trusted, int upper, int lower, std::vector<Block> blocks)
        : upper_(upper), lower_(lower), blocks_(std::move(blocks)) {}

    void canonicalize() {
        for (auto& b : blocks_) std::sort(b.begin(), b.end());
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const Block& a, const Block& b) { return a.front() < b.front(); });
    }

    void validate() const {
        const int n = total_points();
        if (upper_ < 0 || lower_ < 0) throw ParseError("negative row size");
        std::vector<char> seen(n + 1, 0);
        int covered = 0;
        for (const auto& b : blocks_) {
            if (b.empty()) throw ParseError("empty block");
            for (int x : b) {
                if (x < 1 || x > n) throw ParseError("point " + std::to_string(x) + " out of range 1.." + std::to_string(n));
                if (seen[x]) throw ParseError("point " + std::to_string(x) + " repeated");
                seen[x] = 1;
                ++covered;
            }
        }
        if (covered != n) throw ParseError("blocks do not cover all points");
        if (!is_noncrossing()) throw ParseError("partition has a crossing");
    }

    friend class NcEnumerator;
};

inline NcPartition identity_partition(int k) {
    std::vector<NcPartition::Block> blocks;
    blocks.reserve(k);
    // Upper point i pairs with the lower point directly below it, numbered 2k+1-i.
    for (int i = 1; i <= k; ++i) blocks.push_back({i, 2 * k + 1 - i});
    return NcPartition(k, k, std::move(blocks));
}

inline NcPartition singleton_lower() { return NcPartition(0, 1, {{1}}); }

inline NcPartition one_block_partition(int k, int l) {
    NcPartition::Block all(k + l);
    std::iota(all.begin(), all.end(), 1);
    return NcPartition(k, l, {all});
}

// Horizontal concatenation, q to the right of p.
inline NcPartition tensor(const NcPartition& p, const NcPartition& q) {
    const int kp = p.upper_count(), lp = p.lower_count();
    const int kq = q.upper_count(), lq = q.lower_count();
    const int K = kp + kq;
    std::vector<NcPartition::Block> blocks;
    blocks.reserve(p.block_count() + q.block_count());
    for (const auto& b : p.blocks()) {
        NcPartition::Block nb;
        nb.reserve(b.size());
        for (int x : b) nb.push_back(x <= kp ? x : x + kq + lq);
        blocks.push_back(std::move(nb));
    }
    for (const auto& b : q.blocks()) {
        NcPartition::Block nb;
        nb.reserve(b.size());
        for (int x : b) nb.push_back(x <= kq ? kp + x : K + (x - kq));
        blocks.push_back(std::move(nb));
    }
    return NcPartition(K, lp + lq, std::move(blocks));
}

// Reflection across the horizontal axis; with the numbering convention this
// is the relabeling x -> k+l+1-x with rows swapped.
inline NcPartition adjoint(const NcPartition& p) {
    const int n = p.total_points();
    std::vector<NcPartition::Block> blocks;
    blocks.reserve(p.block_count());
    for (const auto& b : p.blocks()) {
        NcPartition::Block nb;
        nb.reserve(b.size());
        for (int x : b) nb.push_back(n + 1 - x);
        blocks.push_back(std::move(nb));
    }
    return NcPartition(p.lower_count(), p.upper_count(), std::move(blocks));
}

struct CompositionResult {
    NcPartition result;   // qp
    int central_blocks;   // cb(p,q)
    int cycles;           // cy(p,q) = l + b(qp) + cb(p,q) - b(p) - b(q)
};

// Glue the lower row of p onto the upper row of q (p drawn on top of q) and
// drop the blocks living entirely on the central line.
inline CompositionResult compose(const NcPartition& q, const NcPartition& p) {
    const int k = p.upper_count(), l = p.lower_count();
    const int w = q.lower_count();
    if (q.upper_count() != l)
        throw std::invalid_argument("compose: lower row of p (" + std::to_string(l) +
                                    ") must match upper row of q (" + std::to_string(q.upper_count()) + ")");

    // Union-find over p's points (0..k+l-1) then q's points (k+l..k+l+l+w-1).
    const int total = (k + l) + (l + w);
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (const auto& b : p.blocks())
        for (std::size_t i = 1; i < b.size(); ++i) unite(b[0] - 1, b[i] - 1);
    for (const auto& b : q.blocks())
        for (std::size_t i = 1; i < b.size(); ++i) unite(k + l + b[0] - 1, k + l + b[i] - 1);

    // p's lower point k+t sits at position l-t from the left; q's upper point
    // at that position is numbered l-t+1. Identify them.
    for (int t = 1; t <= l; ++t) unite(k + t - 1, (k + l) + (l - t + 1) - 1);

    // Collect surviving classes: keyed by root, members expressed in the
    // result numbering (p's uppers keep 1..k, q's lower l+s becomes k+s).
    std::vector<NcPartition::Block> result_blocks;
    std::vector<int> root_to_block(total, -1);
    int central = 0;
    std::vector<char> root_seen(total, 0);
    auto block_for = [&](int root) -> NcPartition::Block& {
        if (root_to_block[root] < 0) {
            root_to_block[root] = static_cast<int>(result_blocks.size());
            result_blocks.emplace_back();
        }
        return result_blocks[root_to_block[root]];
    };
    for (int i = 1; i <= k; ++i) block_for(find(i - 1)).push_back(i);
    for (int s = 1; s <= w; ++s) block_for(find((k + l) + l + s - 1)).push_back(k + s);
    // Central blocks: classes containing only glued-row points.
    for (int t = 1; t <= l; ++t) {
        const int root = find(k + t - 1);
        if (root_to_block[root] < 0 && !root_seen[root]) {
            root_seen[root] = 1;
            ++central;
        }
    }

    NcPartition qp(k, w, std::move(result_blocks));
    const int cycles = l + qp.block_count() + central - p.block_count() - q.block_count();
    if (central < 0 || cycles < 0)
        throw std::logic_error("compose: negative cycle count (internal error)");
    return CompositionResult{std::move(qp), central, cycles};
}

inline constexpr int kDefaultEnumerationLimit = 16;

inline std::uint64_t catalan(int m) {
    if (m < 0 || m > 30) throw SizeError("catalan: k out of supported range 0..30");
    std::vector<std::uint64_t> c(static_cast<std::size_t>(m) + 1, 0);
    c[0] = 1;
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j < i; ++j) c[i] += c[j] * c[i - 1 - j];
    return c[m];
}

// Streaming enumeration of NC(k,l) in canonical order. The recursion closes
// the block of the least unassigned point by choosing a subset of its
// segment's remaining points; the gaps between consecutive chosen points are
// independent sub-segments, which is exactly the noncrossing condition on
// the linear order. Segments are kept as an ascending work list, so blocks
// are created in order of their minima and come out canonical for free.
class NcEnumerator {
public:
    NcEnumerator(int k, int l, int limit = kDefaultEnumerationLimit) : k_(k), l_(l) {
        if (k < 0 || l < 0) throw SizeError("enumerate_nc: negative row size");
        if (k + l > limit)
            throw SizeError("enumerate_nc: " + std::to_string(k + l) + " points exceeds limit " +
                            std::to_string(limit));
    }

    template <typename Visitor>
    void run(Visitor&& visit) const {
        std::vector<int> all(k_ + l_);
        std::iota(all.begin(), all.end(), 1);
        std::vector<std::vector<int>> segments;
        if (!all.empty()) segments.push_back(std::move(all));
        std::vector<NcPartition::Block> blocks;
        recurse(std::move(segments), blocks, visit);
    }

private:
    int k_, l_;

    template <typename Visitor>
    void recurse(std::vector<std::vector<int>> segments, std::vector<NcPartition::Block>& blocks,
                 Visitor& visit) const {
        if (segments.empty()) {
            visit(NcPartition(NcPartition::Trusted{}, k_, l_, blocks));
            return;
        }
        const std::vector<int> seg = std::move(segments.front());
        segments.erase(segments.begin());
        const int rest = static_cast<int>(seg.size()) - 1;
        for (std::uint32_t mask = 0; mask < (1u << rest); ++mask) {
            NcPartition::Block blk{seg[0]};
            std::vector<std::vector<int>> next;
            std::vector<int> gap;
            for (int i = 0; i < rest; ++i) {
                if (mask & (1u << i)) {
                    if (!gap.empty()) next.push_back(std::move(gap));
                    gap.clear();
                    blk.push_back(seg[i + 1]);
                } else {
                    gap.push_back(seg[i + 1]);
                }
            }
            if (!gap.empty()) next.push_back(std::move(gap));
            next.insert(next.end(), segments.begin(), segments.end());
            blocks.push_back(std::move(blk));
            recurse(std::move(next), blocks, visit);
            blocks.pop_back();
        }
    }
};

template <typename Visitor>
void enumerate_nc(int k, int l, Visitor&& visit, int limit = kDefaultEnumerationLimit) {
    NcEnumerator(k, l, limit).run(std::forward<Visitor>(visit));
}

inline std::vector<NcPartition> enumerate_nc(int k, int l, int limit = kDefaultEnumerationLimit) {
    std::vector<NcPartition> out;
    enumerate_nc(k, l, [&](const NcPartition& p) { out.push_back(p); }, limit);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t enumerate_nc_count(int k, int l, int limit = kDefaultEnumerationLimit) {
    std::uint64_t count = 0;
    enumerate_nc(k, l, [&](const NcPartition&) { ++count; }, limit);
    return count;
}

}  // namespace wreathcat
