#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"
#include "wreathcat/operators.hpp"
#include "wreathcat/partition.hpp"

namespace wreathcat {

namespace detail {

// One nonzero choice of basis elements for a single partition block: the
// orthonormal-basis element at every point of the block plus the resulting
// scalar. Products of matrix units chain (e_ij e_kl = δ_jk e_il within one
// matrix summand), so the nonzero assignments of a block are chains indexed
// by a summand T and free indices along the chain.
struct BlockTerm {
    double coeff;
    std::int64_t row_contrib;  // Σ over the block's lower points of flat * n^(l-1-pos)
    std::int64_t col_contrib;  // Σ over the block's upper points of flat * n^(k-1-pos)
};

// Coefficient of one block: ψ((b↓)* b↑) where b↑ (b↓) is the product of the
// elements at the block's upper (lower) points read left to right in the
// diagram. For uppers that is ascending point number; for lowers descending
// (the numbering runs right to left). This orientation is what makes the
// matrix transpose of T_p equal T_{p*}: the reflected coefficient becomes
// ψ(y*x) against ψ(x*y), conjugates of each other. Empty products are 1_B.
// Writing the upper chain as b_{x1 y1} b_{y1 y2} ... b_{y_{a-1} y_a} and the
// lower chain as b_{u1 v1} ... b_{v_{b-1} v_b}:
//   ψ((b↓)* b↑) = δ_{u1 x1} δ_{v_b y_a} Q_{v_b,T} Π_m Q_{y_m,T}^{-1/2} Π_m Q_{v_m,T}^{-1/2}
// with the one-sided cases tracing out to δ_{u1 v_b} resp. δ_{x1 y_a}.
inline std::vector<BlockTerm> block_terms(const AlgebraSpec& alg, const NcPartition& p,
                                          const NcPartition::Block& block,
                                          const std::vector<std::int64_t>& point_weight,
                                          const std::vector<bool>& point_is_upper) {
    const int k = p.upper_count();
    std::vector<int> uppers, lowers;
    for (int x : block) (x <= k ? uppers : lowers).push_back(x);
    const int a = static_cast<int>(uppers.size());
    const int b = static_cast<int>(lowers.size());

    std::vector<BlockTerm> terms;
    for (int t = 0; t < alg.block_count(); ++t) {
        const int nt = alg.matrix_blocks()[t].size;
        // Free chain indices: x1, y1..ya on top and v1..v_{b-1} below when
        // both rows are present (u1 := x1, v_b := y_a); one-sided blocks tie
        // their own ends together instead.
        const int nfree = (a > 0 && b > 0) ? a + b : (a > 0 ? a : b);
        std::vector<int> idx(nfree, 0);
        while (true) {
            std::vector<int> x(a + 1), y(a + 1);  // x[m], y[m] for m=1..a
            std::vector<int> u(b + 1), v(b + 1);
            int cursor = 0;
            if (a > 0 && b > 0) {
                x[1] = idx[cursor++];
                for (int m = 1; m <= a; ++m) y[m] = idx[cursor++];
                for (int m = 1; m < b; ++m) v[m] = idx[cursor++];
                v[b] = y[a];
                u[1] = x[1];
            } else if (a > 0) {
                for (int m = 1; m <= a; ++m) y[m] = idx[cursor++];
                x[1] = y[a];
            } else {
                for (int m = 1; m <= b; ++m) v[m] = idx[cursor++];
                u[1] = v[b];
            }
            for (int m = 2; m <= a; ++m) x[m] = y[m - 1];
            for (int m = 2; m <= b; ++m) u[m] = v[m - 1];

            double coeff = a > 0 && b > 0 ? alg.q_entry_d(t, v[b])
                         : a > 0          ? alg.q_entry_d(t, y[a])
                                          : alg.q_entry_d(t, v[b]);
            for (int m = 1; m <= a; ++m) coeff /= std::sqrt(alg.q_entry_d(t, y[m]));
            for (int m = 1; m <= b; ++m) coeff /= std::sqrt(alg.q_entry_d(t, v[m]));

            BlockTerm term{coeff, 0, 0};
            int up_rank = 0, dn_rank = 0;
            for (int point : block) {
                std::int64_t flat;
                if (point <= k) {
                    ++up_rank;
                    flat = alg.flat_index(t, x[up_rank], y[up_rank]);
                } else {
                    // Lower chain element index runs left to right in the
                    // picture, i.e. descending point number.
                    ++dn_rank;
                    const int m = b + 1 - dn_rank;
                    flat = alg.flat_index(t, u[m], v[m]);
                }
                (point_is_upper[point] ? term.col_contrib : term.row_contrib) +=
                    flat * point_weight[point];
            }
            terms.push_back(term);

            int c = nfree - 1;
            while (c >= 0 && ++idx[c] == nt) idx[c--] = 0;
            if (c < 0) break;
        }
    }
    return terms;
}

// Sparse triplet form of T_p used by the calculus verifier. The join index
// is the one contracted in a composition product T_q T_p: the row (lower
// multi-index) of T_p, the column (upper multi-index) of T_q.
struct SparseTp {
    struct Entry {
        std::int64_t join;
        std::int64_t other;
        double val;
    };
    std::vector<Entry> entries;  // sorted by join index
    std::int64_t join_dim = 1;
    std::int64_t other_dim = 1;
};

}  // namespace detail

// The linear map T_p of a noncrossing partition: the matrix entry at a pair
// of basis assignments is the product over blocks of ψ((b↓)* b↑).
inline Operator build_tp(const AlgebraSpec& alg, const NcPartition& p) {
    const int n = alg.dim();
    const int k = p.upper_count(), l = p.lower_count();
    const std::int64_t rows = tensor_power_dim(n, l);
    const std::int64_t cols = tensor_power_dim(n, k);

    // point -> significance weight in the flattened row/column index.
    // Upper point x sits at column digit x-1; lower point x sits at row
    // digit k+l-x (its position from the left).
    std::vector<std::int64_t> weight(k + l + 1, 0);
    std::vector<bool> is_upper(k + l + 1, false);
    for (int x = 1; x <= k; ++x) {
        weight[x] = tensor_power_dim(n, k - x);
        is_upper[x] = true;
    }
    for (int x = k + 1; x <= k + l; ++x) {
        const int pos = k + l - x;
        weight[x] = tensor_power_dim(n, l - 1 - pos);
    }

    std::vector<std::vector<detail::BlockTerm>> per_block;
    per_block.reserve(p.block_count());
    for (const auto& blk : p.blocks())
        per_block.push_back(detail::block_terms(alg, p, blk, weight, is_upper));

    Operator op{k, l, Eigen::MatrixXd::Zero(rows, cols)};
    const int nb = p.block_count();
    if (nb == 0) {
        op.mat(0, 0) = 1.0;  // empty partition: the scalar identity
        return op;
    }
    // Odometer over the per-block term lists; distinct blocks touch disjoint
    // points, so every combination lands on its own matrix entry.
    std::vector<std::size_t> pick(nb, 0);
    while (true) {
        double coeff = 1.0;
        std::int64_t row = 0, col = 0;
        for (int bix = 0; bix < nb; ++bix) {
            const auto& term = per_block[bix][pick[bix]];
            coeff *= term.coeff;
            row += term.row_contrib;
            col += term.col_contrib;
        }
        op.mat(row, col) = coeff;
        int c = nb - 1;
        while (c >= 0 && ++pick[c] == per_block[c].size()) pick[c--] = 0;
        if (c < 0) break;
    }
    return op;
}

namespace detail {

// Same construction as build_tp but emitting sorted triplets; entries of a
// T_p are mostly zero (one chain per algebra summand per block), so the
// calculus verifier pairs partitions by a sparse merge join instead of
// dense matrix products.
inline SparseTp build_tp_sparse(const AlgebraSpec& alg, const NcPartition& p, bool join_is_row) {
    const int n = alg.dim();
    const int k = p.upper_count(), l = p.lower_count();
    SparseTp out;
    const std::int64_t rows = tensor_power_dim(n, l);
    const std::int64_t cols = tensor_power_dim(n, k);
    out.join_dim = join_is_row ? rows : cols;
    out.other_dim = join_is_row ? cols : rows;

    std::vector<std::int64_t> weight(k + l + 1, 0);
    std::vector<bool> is_upper(k + l + 1, false);
    for (int x = 1; x <= k; ++x) {
        weight[x] = tensor_power_dim(n, k - x);
        is_upper[x] = true;
    }
    for (int x = k + 1; x <= k + l; ++x) {
        const int pos = k + l - x;
        weight[x] = tensor_power_dim(n, l - 1 - pos);
    }
    std::vector<std::vector<BlockTerm>> per_block;
    per_block.reserve(p.block_count());
    std::size_t total = 1;
    for (const auto& blk : p.blocks()) {
        per_block.push_back(block_terms(alg, p, blk, weight, is_upper));
        total *= per_block.back().size();
    }
    out.entries.reserve(total);
    const int nb = p.block_count();
    if (nb == 0) {
        out.entries.push_back({0, 0, 1.0});
        return out;
    }
    std::vector<std::size_t> pick(nb, 0);
    while (true) {
        double coeff = 1.0;
        std::int64_t row = 0, col = 0;
        for (int bix = 0; bix < nb; ++bix) {
            const auto& term = per_block[bix][pick[bix]];
            coeff *= term.coeff;
            row += term.row_contrib;
            col += term.col_contrib;
        }
        out.entries.push_back(join_is_row ? SparseTp::Entry{row, col, coeff}
                                          : SparseTp::Entry{col, row, coeff});
        int c = nb - 1;
        while (c >= 0 && ++pick[c] == per_block[c].size()) pick[c--] = 0;
        if (c < 0) break;
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SparseTp::Entry& a, const SparseTp::Entry& b) { return a.join < b.join; });
    return out;
}

}  // namespace detail

enum class CalculusMode { DeltaForm, OneForm };

// Numerical check of the partition calculus: tensor compatibility, adjoint
// compatibility and the composition law with the mode's coefficient
// (δ^{cy(p,q)} for a unital δ-form, ψ̃(1)^{cb(p,q)} for the 1-form ψ̃ = δψ).
struct CalculusReport {
    CalculusMode mode = CalculusMode::DeltaForm;
    double tolerance = 1e-9;
    double exact_tolerance = 1e-12;

    double max_composition_dev = 0.0;
    std::string worst_composition;
    std::uint64_t composition_pairs = 0;

    double max_tensor_dev = 0.0;
    std::string worst_tensor;
    std::uint64_t tensor_pairs = 0;

    double max_adjoint_dev = 0.0;
    std::string worst_adjoint;
    std::uint64_t adjoint_checks = 0;

    bool ok() const {
        return max_composition_dev < tolerance && max_tensor_dev < exact_tolerance &&
               max_adjoint_dev < exact_tolerance;
    }
};

inline CalculusReport verify_calculus(const AlgebraSpec& spec, int max_glued_points,
                                      CalculusMode mode, double tol = 1e-9,
                                      double exact_tol = 1e-12, int max_free_points = 6) {
    if (!spec.is_delta_form())
        throw HypothesisError(mode == CalculusMode::DeltaForm
                                  ? "verify_calculus(delta): state is not a delta-form"
                                  : "verify_calculus(oneform): 1-form rescaling needs a delta-form state");
    const Rational delta = spec.delta();
    const AlgebraSpec alg = mode == CalculusMode::OneForm ? spec.scaled(delta) : spec;
    // ψ̃(1) = δ·ψ(1); for a state this equals δ.
    const double coeff_base =
        mode == CalculusMode::OneForm ? to_double(delta * spec.state_sum()) : to_double(delta);

    CalculusReport report;
    report.mode = mode;
    report.tolerance = tol;
    report.exact_tolerance = exact_tol;

    // Composition law over all (k, l, w) with k+l+w <= max_glued_points.
    // The pairing contracts sparse triplet forms with a merge join on the
    // glued multi-index; one side of each family is materialized, the other
    // streamed in parallel with a deterministic reduction of the worst
    // deviation. NC(0,8) on C^5 would otherwise mean millions of dense
    // products on 390625-dimensional vectors.
    struct Worst {
        double dev = -1.0;
        std::uint64_t order = 0;  // pair index, ties broken deterministically
        std::string label;
    };

    // Gram-style handler for families with many partitions but a small
    // composite (large glued row l, small k and w): accumulate all pairings
    // at once, visiting each stored entry once per glued index instead of
    // rescanning per pair. Runs shared by many partitions (the constant
    // multi-indices) become vectorized rank-1 updates.
    const auto vertical_row = [&](int kk, int l, int w, const std::vector<NcPartition>& qs,
                                  const std::vector<NcPartition>& ps) {
        const std::int64_t nk = tensor_power_dim(alg.dim(), kk);
        const std::int64_t nw = tensor_power_dim(alg.dim(), w);
        const std::int64_t nl = tensor_power_dim(alg.dim(), l);
        const std::int64_t g_rows = static_cast<std::int64_t>(qs.size()) * nw;
        const std::int64_t g_cols = static_cast<std::int64_t>(ps.size()) * nk;

        struct Slot {
            std::int32_t flat;
            double val;
        };
        // CSR over the glued multi-index for both sides.
        const auto bucketize = [&](const std::vector<NcPartition>& parts, bool join_is_row,
                                   std::int64_t other_dim, std::vector<std::int64_t>& offsets,
                                   std::vector<Slot>& slots) {
            std::vector<detail::SparseTp> sps;
            sps.reserve(parts.size());
            for (const auto& part : parts)
                sps.push_back(detail::build_tp_sparse(alg, part, join_is_row));
            offsets.assign(nl + 1, 0);
            for (const auto& sp : sps)
                for (const auto& e : sp.entries) ++offsets[e.join + 1];
            for (std::int64_t f = 0; f < nl; ++f) offsets[f + 1] += offsets[f];
            slots.resize(offsets[nl]);
            std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
            for (std::size_t idx = 0; idx < sps.size(); ++idx)
                for (const auto& e : sps[idx].entries)
                    slots[cursor[e.join]++] = {
                        static_cast<std::int32_t>(static_cast<std::int64_t>(idx) * other_dim +
                                                  e.other),
                        e.val};
        };
        std::vector<std::int64_t> q_off, p_off;
        std::vector<Slot> q_slots, p_slots;
        bucketize(qs, /*join_is_row=*/false, nw, q_off, q_slots);
        bucketize(ps, /*join_is_row=*/true, nk, p_off, p_slots);

        using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        RowMajor gram = RowMajor::Zero(g_rows, g_cols);
        Eigen::VectorXd vq = Eigen::VectorXd::Zero(g_rows);
        Eigen::VectorXd vp = Eigen::VectorXd::Zero(g_cols);
        for (std::int64_t f = 0; f < nl; ++f) {
            const std::int64_t qa = q_off[f], qb = q_off[f + 1];
            const std::int64_t pa = p_off[f], pb = p_off[f + 1];
            if (qa == qb || pa == pb) continue;
            const std::int64_t cross = (qb - qa) * (pb - pa);
            if (cross * 8 >= g_rows * g_cols) {
                for (std::int64_t a = qa; a < qb; ++a) vq[q_slots[a].flat] = q_slots[a].val;
                for (std::int64_t b = pa; b < pb; ++b) vp[p_slots[b].flat] = p_slots[b].val;
                gram.noalias() += vq * vp.transpose();
                for (std::int64_t a = qa; a < qb; ++a) vq[q_slots[a].flat] = 0.0;
                for (std::int64_t b = pa; b < pb; ++b) vp[p_slots[b].flat] = 0.0;
            } else {
                for (std::int64_t a = qa; a < qb; ++a) {
                    double* row = gram.data() + static_cast<std::int64_t>(q_slots[a].flat) * g_cols;
                    const double qv = q_slots[a].val;
                    for (std::int64_t b = pa; b < pb; ++b) row[p_slots[b].flat] += qv * p_slots[b].val;
                }
            }
        }

        // Per-pair comparison against the scaled composite on its block.
        const unsigned nthreads = std::max(
            1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(qs.size())));
        std::vector<Worst> worst(nthreads);
        std::vector<std::uint64_t> pair_counts(nthreads, 0);
        auto worker = [&](unsigned tid) {
            Eigen::MatrixXd expected(nw, nk);
            for (std::size_t qi = tid; qi < qs.size(); qi += nthreads) {
                for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                    const auto comp = compose(qs[qi], ps[pi]);
                    const int exponent =
                        mode == CalculusMode::DeltaForm ? comp.cycles : comp.central_blocks;
                    const double scale = std::pow(coeff_base, exponent);
                    expected.setZero();
                    const auto qp_sp = detail::build_tp_sparse(alg, comp.result, true);
                    for (const auto& e : qp_sp.entries) expected(e.join, e.other) = scale * e.val;
                    double dev = 0.0;
                    for (std::int64_t r = 0; r < nw; ++r)
                        for (std::int64_t c = 0; c < nk; ++c)
                            dev = std::max(dev, std::abs(gram(static_cast<std::int64_t>(qi) * nw + r,
                                                              static_cast<std::int64_t>(pi) * nk + c) -
                                                         expected(r, c)));
                    ++pair_counts[tid];
                    const std::uint64_t order = qi * ps.size() + pi;
                    if (dev > worst[tid].dev || (dev == worst[tid].dev && order < worst[tid].order))
                        worst[tid] = {dev, order,
                                      "q=" + qs[qi].to_text() + " (upper " +
                                          std::to_string(qs[qi].upper_count()) + "), p=" +
                                          ps[pi].to_text() + " (upper " +
                                          std::to_string(ps[pi].upper_count()) + ")"};
                }
            }
        };
        if (nthreads <= 1) {
            if (!qs.empty()) worker(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
            for (auto& th : pool) th.join();
        }
        for (unsigned t = 0; t < nthreads; ++t) {
            report.composition_pairs += pair_counts[t];
            if (worst[t].dev > report.max_composition_dev) {
                report.max_composition_dev = worst[t].dev;
                report.worst_composition = worst[t].label;
            }
        }
    };

    for (int l = 0; l <= max_glued_points; ++l) {
        for (int kk = 0; kk + l <= max_glued_points; ++kk) {
            for (int w = 0; kk + l + w <= max_glued_points; ++w) {
                const std::int64_t gram_elems =
                    static_cast<std::int64_t>(catalan(l + w)) * tensor_power_dim(alg.dim(), w) *
                    static_cast<std::int64_t>(catalan(kk + l)) * tensor_power_dim(alg.dim(), kk);
                if (gram_elems <= (std::int64_t(1) << 23) && l >= 5) {
                    vertical_row(kk, l, w, enumerate_nc(l, w), enumerate_nc(kk, l));
                    continue;
                }
                const bool cache_p = catalan(kk + l) * tensor_power_dim(alg.dim(), kk + l) <=
                                     catalan(l + w) * tensor_power_dim(alg.dim(), l + w);
                // Cached side sorted by the join index; streamed side built
                // per partition inside the workers.
                const auto cached_parts = cache_p ? enumerate_nc(kk, l) : enumerate_nc(l, w);
                std::vector<detail::SparseTp> cached;
                cached.reserve(cached_parts.size());
                for (const auto& part : cached_parts)
                    cached.push_back(detail::build_tp_sparse(alg, part, /*join_is_row=*/cache_p));
                const auto streamed_parts = cache_p ? enumerate_nc(l, w) : enumerate_nc(kk, l);

                const std::int64_t scratch_size =
                    tensor_power_dim(alg.dim(), kk) * tensor_power_dim(alg.dim(), w);
                const std::int64_t ncols = tensor_power_dim(alg.dim(), kk);
                const unsigned nthreads =
                    std::max(1u, std::min(std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(streamed_parts.size())));
                std::vector<Worst> worst(nthreads);
                std::vector<std::uint64_t> pair_counts(nthreads, 0);

                auto worker = [&](unsigned tid) {
                    std::vector<double> scratch(scratch_size, 0.0);
                    std::vector<std::int64_t> touched;
                    for (std::size_t si = tid; si < streamed_parts.size(); si += nthreads) {
                        const auto& streamed_part = streamed_parts[si];
                        const auto streamed =
                            detail::build_tp_sparse(alg, streamed_part, /*join_is_row=*/!cache_p);
                        for (std::size_t ci = 0; ci < cached.size(); ++ci) {
                            const auto& q_part = cache_p ? streamed_part : cached_parts[ci];
                            const auto& p_part = cache_p ? cached_parts[ci] : streamed_part;
                            const auto& q_sp = cache_p ? streamed : cached[ci];
                            const auto& p_sp = cache_p ? cached[ci] : streamed;
                            const auto comp = compose(q_part, p_part);
                            const int exponent = mode == CalculusMode::DeltaForm
                                                     ? comp.cycles
                                                     : comp.central_blocks;
                            const double scale = std::pow(coeff_base, exponent);

                            touched.clear();
                            // Merge join on the glued multi-index.
                            const auto& qe = q_sp.entries;
                            const auto& pe = p_sp.entries;
                            std::size_t i = 0, j = 0;
                            while (i < qe.size() && j < pe.size()) {
                                if (qe[i].join < pe[j].join) { ++i; continue; }
                                if (pe[j].join < qe[i].join) { ++j; continue; }
                                const std::int64_t key = qe[i].join;
                                std::size_t i2 = i, j2 = j;
                                while (i2 < qe.size() && qe[i2].join == key) ++i2;
                                while (j2 < pe.size() && pe[j2].join == key) ++j2;
                                for (std::size_t a = i; a < i2; ++a) {
                                    const std::int64_t base = qe[a].other * ncols;
                                    const double qv = qe[a].val;
                                    for (std::size_t b2 = j; b2 < j2; ++b2) {
                                        const std::int64_t idx = base + pe[b2].other;
                                        if (scratch[idx] == 0.0) touched.push_back(idx);
                                        scratch[idx] += qv * pe[b2].val;
                                    }
                                }
                                i = i2;
                                j = j2;
                            }
                            // Subtract the scaled composite and take the max.
                            const auto qp_sp =
                                detail::build_tp_sparse(alg, comp.result, /*join_is_row=*/true);
                            for (const auto& e : qp_sp.entries) {
                                const std::int64_t idx = e.join * ncols + e.other;
                                if (scratch[idx] == 0.0) touched.push_back(idx);
                                scratch[idx] -= scale * e.val;
                            }
                            double dev = 0.0;
                            for (const std::int64_t idx : touched) {
                                dev = std::max(dev, std::abs(scratch[idx]));
                                scratch[idx] = 0.0;
                            }
                            ++pair_counts[tid];
                            const std::uint64_t order = si * cached.size() + ci;
                            if (dev > worst[tid].dev ||
                                (dev == worst[tid].dev && order < worst[tid].order)) {
                                worst[tid] = {dev, order,
                                              "q=" + q_part.to_text() + " (upper " +
                                                  std::to_string(q_part.upper_count()) + "), p=" +
                                                  p_part.to_text() + " (upper " +
                                                  std::to_string(p_part.upper_count()) + ")"};
                            }
                        }
                    }
                };
                if (nthreads <= 1) {
                    if (!streamed_parts.empty()) worker(0);
                } else {
                    std::vector<std::thread> pool;
                    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
                    for (auto& th : pool) th.join();
                }
                for (unsigned t = 0; t < nthreads; ++t) {
                    report.composition_pairs += pair_counts[t];
                    if (worst[t].dev > report.max_composition_dev) {
                        report.max_composition_dev = worst[t].dev;
                        report.worst_composition = worst[t].label;
                    }
                }
            }
        }
    }

    // Tensor and adjoint laws on everything with few enough points.
    std::vector<NcPartition> small;
    for (int total = 0; total <= max_free_points; ++total)
        for (int kk = 0; kk <= total; ++kk)
            for (const auto& p : enumerate_nc(kk, total - kk)) small.push_back(p);

    for (const auto& p : small) {
        const Operator tp = build_tp(alg, p);
        const double dev = max_abs_diff(adjoint(tp).mat, build_tp(alg, adjoint(p)).mat);
        ++report.adjoint_checks;
        if (dev > report.max_adjoint_dev) {
            report.max_adjoint_dev = dev;
            report.worst_adjoint = p.to_text();
        }
    }
    for (const auto& p : small) {
        const Operator tp = build_tp(alg, p);
        for (const auto& q : small) {
            if (p.total_points() + q.total_points() > max_free_points) continue;
            const Operator tq = build_tp(alg, q);
            const double dev =
                max_abs_diff(tensor(tp, tq).mat, build_tp(alg, tensor(p, q)).mat);
            ++report.tensor_pairs;
            if (dev > report.max_tensor_dev) {
                report.max_tensor_dev = dev;
                report.worst_tensor = p.to_text() + " ⊗ " + q.to_text();
            }
        }
    }
    return report;
}

struct GramRankResult {
    int rank = 0;
    std::uint64_t partition_count = 0;  // C_{k+l}
    bool theorem_applicable = false;    // dim(B) >= 4
    std::vector<double> singular_values;
};

// Numeric rank of the Gram matrix ⟨T_p, T_q⟩ = Tr(T_q^* T_p) over NC(k,l).
// Threshold is relative: 1e-8 × largest singular value by default.
inline GramRankResult gram_rank(const AlgebraSpec& alg, int k, int l,
                                double rel_threshold = 1e-8) {
    const auto ps = enumerate_nc(k, l);
    const int m = static_cast<int>(ps.size());
    std::vector<Operator> tp;
    tp.reserve(m);
    for (const auto& p : ps) tp.push_back(build_tp(alg, p));
    Eigen::MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = (tp[i].mat.array() * tp[j].mat.array()).sum();
            gram(i, j) = v;
            gram(j, i) = v;
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    GramRankResult res;
    res.partition_count = ps.size();
    res.theorem_applicable = alg.dim() >= 4;
    res.singular_values.assign(svd.singularValues().data(),
                               svd.singularValues().data() + svd.singularValues().size());
    const double cutoff = rel_threshold * (res.singular_values.empty() ? 0.0 : res.singular_values[0]);
    for (double s : res.singular_values)
        if (s > cutoff) ++res.rank;
    return res;
}

}  // namespace wreathcat
