#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <cstdint>
#include <string>

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"

namespace wreathcat {

// A dense linear map B^{⊗k} -> B^{⊗l} in the orthonormal tensor basis.
// Tensor factors are ordered by position left to right, with the leftmost
// factor the most significant digit of the flattened index; that makes the
// operator tensor product a plain Kronecker product.
struct Operator {
    int domain_power = 0;
    int codomain_power = 0;
    Eigen::MatrixXd mat;

    Eigen::Index rows() const { return mat.rows(); }
    Eigen::Index cols() const { return mat.cols(); }
};

inline std::int64_t tensor_power_dim(int n, int k) {
    std::int64_t d = 1;
    for (int i = 0; i < k; ++i) {
        d *= n;
        if (d > (1 << 28)) throw SizeError("tensor power dimension too large: n=" + std::to_string(n) +
                                           ", k=" + std::to_string(k));
    }
    return d;
}

inline Operator identity_operator(const AlgebraSpec& a, int k) {
    const auto d = tensor_power_dim(a.dim(), k);
    return Operator{k, k, Eigen::MatrixXd::Identity(d, d)};
}

inline Operator tensor(const Operator& a, const Operator& b) {
    Operator out;
    out.domain_power = a.domain_power + b.domain_power;
    out.codomain_power = a.codomain_power + b.codomain_power;
    out.mat = Eigen::kroneckerProduct(a.mat, b.mat);
    return out;
}

inline Operator adjoint(const Operator& a) {
    return Operator{a.codomain_power, a.domain_power, a.mat.transpose()};
}

inline Operator compose(const Operator& second, const Operator& first) {
    if (second.domain_power != first.codomain_power || second.mat.cols() != first.mat.rows())
        throw std::invalid_argument("operator composition: power mismatch");
    return Operator{first.domain_power, second.codomain_power, second.mat * first.mat};
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Multiplication m : B ⊗ B -> B in orthonormal coordinates:
// m(b_ij^T ⊗ b_kl^S) = δ_TS δ_jk Q_{j,T}^{-1/2} b_il^T.
inline Operator multiplication_operator(const AlgebraSpec& a) {
    const int n = a.dim();
    Operator m{2, 1, Eigen::MatrixXd::Zero(n, std::int64_t(n) * n)};
    for (int f = 0; f < n; ++f) {
        const auto& x = a.element(f);
        for (int g = 0; g < n; ++g) {
            const auto& y = a.element(g);
            if (y.block != x.block || y.row != x.col) continue;
            const int out = a.flat_index(x.block, x.row, y.col);
            m.mat(out, std::int64_t(f) * n + g) = 1.0 / std::sqrt(a.q_entry_d(x.block, x.col));
        }
    }
    return m;
}

// η : C -> B, 1 -> 1_B = Σ Q_{i,T}^{1/2} b_ii^T.
inline Operator unit_operator(const AlgebraSpec& a) {
    Operator eta{0, 1, Eigen::MatrixXd::Zero(a.dim(), 1)};
    for (int f = 0; f < a.dim(); ++f) {
        const auto& e = a.element(f);
        if (e.row == e.col) eta.mat(f, 0) = std::sqrt(a.q_entry_d(e.block, e.row));
    }
    return eta;
}

// m^{(k)} : B^{⊗k} -> B, the k-fold multiplication (m^{(1)} = id).
inline Operator iterated_multiplication(const AlgebraSpec& a, int k) {
    if (k < 1) throw std::invalid_argument("iterated multiplication needs k >= 1");
    if (k == 1) return identity_operator(a, 1);
    const Operator m = multiplication_operator(a);
    Operator acc = m;
    for (int j = 3; j <= k; ++j) acc = compose(acc, tensor(m, identity_operator(a, j - 2)));
    return acc;
}

enum class StructureKind { Multiplication, MultiplicationAdjoint, Unit, UnitAdjoint };

inline Operator structure_operator(const AlgebraSpec& a, StructureKind kind, int k = 2) {
    switch (kind) {
        case StructureKind::Multiplication:
            return iterated_multiplication(a, k);
        case StructureKind::MultiplicationAdjoint:
            return adjoint(iterated_multiplication(a, k));
        case StructureKind::Unit:
            return unit_operator(a);
        case StructureKind::UnitAdjoint:
            return adjoint(unit_operator(a));
    }
    throw std::logic_error("unknown structure kind");
}

}  // namespace wreathcat
