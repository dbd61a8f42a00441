#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "wreathcat/errors.hpp"
#include "wreathcat/rational.hpp"

namespace wreathcat {

// One matrix summand M_{n_T}(C) with the diagonal of its state density Q_T.
// Matrix units are taken with respect to a basis diagonalizing Q_T, so users
// supply the eigenvalues directly.
struct MatrixBlock {
    int size = 1;
    std::vector<Rational> q;
};

// B = ⊕_T M_{n_T}(C) with the faithful state ψ = ⊕_T Tr(Q_T ·).
// The orthonormal basis vectors are b_ij^T = Q_{j,T}^{-1/2} e_ij^T, indexed
// by a flat index running over (T, i, j) row-major.
class AlgebraSpec {
public:
    struct BasisElement {
        int block;  // T
        int row;    // i
        int col;    // j
    };

    static AlgebraSpec make(std::vector<MatrixBlock> blocks, bool normalize = false) {
        if (blocks.empty()) throw ParseError("algebra needs at least one block");
        Rational total(0);
        for (auto& blk : blocks) {
            if (blk.size < 1) throw ParseError("block size must be >= 1");
            if (static_cast<int>(blk.q.size()) != blk.size)
                throw ParseError("block of size " + std::to_string(blk.size) + " needs exactly " +
                                 std::to_string(blk.size) + " state eigenvalues");
            for (const auto& qi : blk.q)
                if (qi <= Rational(0)) throw ParseError("state eigenvalues must be positive (faithfulness)");
            for (const auto& qi : blk.q) total += qi;
        }
        bool normalized = (total == Rational(1));
        if (!normalized) {
            if (!normalize)
                throw ParseError("state not normalized: sum Tr(Q_T) = " + to_string(total) +
                                 " (pass normalize to rescale)");
            for (auto& blk : blocks)
                for (auto& qi : blk.q) qi /= total;
            normalized = true;
        }
        return AlgebraSpec(std::move(blocks), normalized);
    }

    // ψ̃ = c·ψ for the 1-form convention; the result is deliberately not a
    // state, so it carries normalized() == false.
    AlgebraSpec scaled(const Rational& c) const {
        if (c <= Rational(0)) throw std::invalid_argument("scaled: factor must be positive");
        std::vector<MatrixBlock> blocks = blocks_;
        for (auto& blk : blocks)
            for (auto& qi : blk.q) qi *= c;
        return AlgebraSpec(std::move(blocks), false);
    }

    const std::vector<MatrixBlock>& matrix_blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int dim() const { return dim_; }
    bool normalized() const { return normalized_; }

    Rational state_sum() const {  // ψ(1_B)
        Rational s(0);
        for (const auto& blk : blocks_)
            for (const auto& qi : blk.q) s += qi;
        return s;
    }

    Rational block_delta(int t) const {  // Tr(Q_T^{-1})
        Rational s(0);
        for (const auto& qi : blocks_[t].q) s += Rational(1) / qi;
        return s;
    }

    bool is_delta_form() const {
        for (int t = 1; t < block_count(); ++t)
            if (block_delta(t) != block_delta(0)) return false;
        return true;
    }

    // Only meaningful when is_delta_form().
    Rational delta() const {
        if (!is_delta_form()) throw HypothesisError("state is not a delta-form");
        return block_delta(0);
    }

    bool is_tracial() const {
        for (const auto& blk : blocks_)
            for (const auto& qi : blk.q)
                if (qi != blk.q.front()) return false;
        return true;
    }

    // dim_q(a(α)) factor from the basic-representation quantum dimension:
    // Σ_T Tr(Q_T) Tr(Q_T^{-1}).
    Rational qdim_factor() const {
        Rational s(0);
        for (int t = 0; t < block_count(); ++t) {
            Rational tr(0);
            for (const auto& qi : blocks_[t].q) tr += qi;
            s += tr * block_delta(t);
        }
        return s;
    }

    const std::vector<BasisElement>& basis() const { return basis_; }
    int flat_index(int block, int row, int col) const {
        return block_offset_[block] + row * blocks_[block].size + col;
    }
    const BasisElement& element(int flat) const { return basis_[flat]; }

    // ψ eigenvalue at a diagonal position, and the normalization scalar of
    // b_ij^T (which depends on the column index).
    Rational q_entry(int block, int idx) const { return blocks_[block].q[idx]; }
    double q_entry_d(int block, int idx) const { return q_double_[block_q_offset_[block] + idx]; }
    double onb_scale(int flat) const {  // Q_{j,T}^{-1/2}
        const auto& e = basis_[flat];
        return 1.0 / std::sqrt(q_entry_d(e.block, e.col));
    }

private:
    AlgebraSpec(std::vector<MatrixBlock> blocks, bool normalized)
        : blocks_(std::move(blocks)), normalized_(normalized) {
        dim_ = 0;
        for (const auto& blk : blocks_) {
            block_offset_.push_back(dim_);
            dim_ += blk.size * blk.size;
        }
        basis_.reserve(dim_);
        int qoff = 0;
        for (int t = 0; t < block_count(); ++t) {
            block_q_offset_.push_back(qoff);
            for (const auto& qi : blocks_[t].q) {
                q_double_.push_back(to_double(qi));
                ++qoff;
            }
            for (int i = 0; i < blocks_[t].size; ++i)
                for (int j = 0; j < blocks_[t].size; ++j) basis_.push_back({t, i, j});
        }
    }

    std::vector<MatrixBlock> blocks_;
    bool normalized_;
    int dim_ = 0;
    std::vector<int> block_offset_;
    std::vector<int> block_q_offset_;
    std::vector<double> q_double_;
    std::vector<BasisElement> basis_;
};

inline AlgebraSpec uniform_pointmass_algebra(int n) {  // C^n with ψ(x) = (1/n) Σ x_i
    std::vector<MatrixBlock> blocks(n);
    for (auto& blk : blocks) blk = MatrixBlock{1, {Rational(1, n)}};
    return AlgebraSpec::make(std::move(blocks));
}

inline AlgebraSpec matrix_algebra_normalized_trace(int n) {  // M_n with ψ = (1/n) Tr
    MatrixBlock blk;
    blk.size = n;
    blk.q.assign(n, Rational(1, n));
    return AlgebraSpec::make({blk});
}

}  // namespace wreathcat
