#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"
#include "wreathcat/operators.hpp"

namespace wreathcat {

// A finite quantum graph (B, ψ, d): a linear map d on B, stored in the
// orthonormal basis.
struct QuantumGraph {
    AlgebraSpec algebra;
    Eigen::MatrixXd d;

    bool is_normal(double tol = 1e-9) const {
        return max_abs_diff((d * d.transpose()).eval(), (d.transpose() * d).eval()) < tol;
    }
};

// Transport a matrix given in matrix-unit coordinates to the orthonormal
// basis: b_f = c_f e_f with c_f = Q_{col(f)}^{-1/2}, so the entry picks up
// c_col / c_row.
inline Eigen::MatrixXd matrix_units_to_onb(const AlgebraSpec& a, const Eigen::MatrixXd& m) {
    if (m.rows() != a.dim() || m.cols() != a.dim())
        throw ParseError("d must be a " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                         " matrix");
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int f = 0; f < a.dim(); ++f)
        for (int g = 0; g < a.dim(); ++g) out(f, g) = m(f, g) * a.onb_scale(g) / a.onb_scale(f);
    return out;
}

inline QuantumGraph make_quantum_graph(AlgebraSpec a, const Eigen::MatrixXd& d_matrix_units) {
    Eigen::MatrixXd d = matrix_units_to_onb(a, d_matrix_units);
    return QuantumGraph{std::move(a), std::move(d)};
}

// Classical graph on n vertices: B = C^n with the uniform state and d the
// adjacency matrix. For C^n the orthonormal basis is a uniform rescaling of
// the point masses, so the matrix is unchanged.
inline QuantumGraph from_classical_graph(const Eigen::MatrixXd& adjacency) {
    if (adjacency.rows() != adjacency.cols()) throw ParseError("adjacency matrix must be square");
    const int n = static_cast<int>(adjacency.rows());
    if (n < 1) throw ParseError("graph needs at least one vertex");
    return QuantumGraph{uniform_pointmass_algebra(n), adjacency};
}

struct SpectralProjection {
    std::complex<double> eigenvalue;
    Eigen::MatrixXcd projection;
};

struct GraphReport {
    bool trivial = false;   // d ∈ span{id_B, η η*}, so the graph adds no constraint
    bool normal = false;
    std::vector<SpectralProjection> spectral;  // only for normal d
};

// Constraint analysis: d is trivial iff it lies in span{id, ηη*} (equivalent
// to the span of ηη* and SS* since they sum to the identity). For normal d,
// also report the spectral projections, since the relation d ∈ End(u) is
// equivalent to the family p_i ∈ End(u).
inline GraphReport graph_constraint_analysis(const QuantumGraph& g, double tol = 1e-9,
                                             bool want_spectral = true) {
    GraphReport report;
    const int n = g.algebra.dim();
    const Operator eta = unit_operator(g.algebra);
    const Eigen::MatrixXd rank_one = eta.mat * eta.mat.transpose();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    // Least squares for d ≈ a·id + b·ηη*.
    Eigen::MatrixXd basis(n * n, 2);
    basis.col(0) = Eigen::Map<const Eigen::VectorXd>(id.data(), n * n);
    basis.col(1) = Eigen::Map<const Eigen::VectorXd>(rank_one.data(), n * n);
    const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(g.d.data(), n * n);
    const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(target);
    report.trivial = (basis * coeffs - target).cwiseAbs().maxCoeff() < tol;

    report.normal = g.is_normal(tol);
    if (!want_spectral) return report;
    if (!report.normal) throw HypothesisError("spectral projections require a normal d");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(g.d.cast<std::complex<double>>());
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    // Cluster eigenvalues within tolerance; a normal matrix has orthogonal
    // eigenspaces, so summing v v* over each cluster gives the projections.
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        SpectralProjection sp;
        sp.eigenvalue = vals(i);
        sp.projection = Eigen::MatrixXcd::Zero(n, n);
        for (int j = i; j < n; ++j) {
            if (used[j] || std::abs(vals(j) - vals(i)) > 1e-7) continue;
            used[j] = true;
            Eigen::VectorXcd v = vecs.col(j);
            // Orthogonalize inside the cluster (eigenvectors of a normal
            // matrix within a degenerate eigenvalue need not come out
            // orthogonal from the solver).
            v -= sp.projection * v;
            const double norm = v.norm();
            if (norm > 1e-12) {
                v /= norm;
                sp.projection += v * v.adjoint();
            }
        }
        report.spectral.push_back(std::move(sp));
    }
    return report;
}

}  // namespace wreathcat
