#pragma once

// Reference computations that share no code with the library solvers.

#include "offd/learn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

/// Gaussian elimination with partial pivoting on plain vectors.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

/// Ridge solution with a constant-1 column appended, from scalar loops.
/// The last entry is the bias.
inline std::vector<double> ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda)
{
    const auto n = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols()) + 1;
    auto at = [&](std::size_t i, std::size_t j) {
        return j + 1 == p ? 1.0 : x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    std::vector<std::vector<double>> g(p, std::vector<double>(p, 0.0));
    std::vector<double> rhs(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            rhs[a] += at(i, a) * y(static_cast<Eigen::Index>(i));
            for (std::size_t b = 0; b < p; ++b) {
                g[a][b] += at(i, a) * at(i, b);
            }
        }
    }
    for (std::size_t a = 0; a < p; ++a) {
        g[a][a] += lambda;
    }
    return gauss_solve(g, rhs);
}

/// Dual SVM by accelerated projected gradient: max 1'a - a'Qa/2 subject to
/// 0 <= a <= C and y'a = 0; the projection bisects on the hyperplane shift.
/// Returns {primal objective of the recovered (w, b), dual objective}; b is
/// the best hinge breakpoint for the recovered w.
inline std::pair<double, double> svm_reference(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double C)
{
    const Eigen::Index n = x.rows();
    const Eigen::MatrixXd yx = y.asDiagonal() * x;
    const Eigen::MatrixXd q = yx * yx.transpose();
    const double step = 1.0 / Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff();

    auto project = [&](const Eigen::VectorXd& v) {
        auto clipped = [&](double nu) { return (v - nu * y).cwiseMax(0.0).cwiseMin(C).eval(); };
        double lo = -1e6;
        double hi = 1e6;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (y.dot(clipped(mid)) > 0.0 ? lo : hi) = mid;
        }
        return clipped(0.5 * (lo + hi));
    };

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd momentum = alpha;
    double t = 1.0;
    for (int it = 0; it < 20000; ++it) {
        const Eigen::VectorXd next = project(momentum + step * (Eigen::VectorXd::Ones(n) - q * momentum));
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        momentum = next + ((t - 1.0) / t_next) * (next - alpha);
        alpha = next;
        t = t_next;
    }
    const Eigen::VectorXd w = yx.transpose() * alpha;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        best = std::min(best, offd::objectives::svm_primal(x, y, w, y(i) - x.row(i).dot(w), C));
    }
    return {best, alpha.sum() - 0.5 * alpha.dot(q * alpha)};
}

/// Central finite-difference gradient of the logistic objective.
inline Eigen::VectorXd logreg_fd_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& w, double l2, double h = 1e-5)
{
    Eigen::VectorXd g(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        Eigen::VectorXd wp = w;
        Eigen::VectorXd wm = w;
        wp(j) += h;
        wm(j) -= h;
        g(j) = (offd::objectives::logreg_loss(x, y, wp, l2) - offd::objectives::logreg_loss(x, y, wm, l2)) / (2.0 * h);
    }
    return g;
}

}  // namespace oracle
