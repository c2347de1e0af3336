#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace offd {

/// Random Kitchen Sink map for the Gaussian kernel
/// k(x, y) = exp(-|x - y|^2 / (2 sigma^2)).
///
/// z(x) = sqrt(1/k) [cos(x.w_1) ... cos(x.w_k), sin(x.w_1) ... sin(x.w_k)]
///
/// with frequencies w_j ~ N(0, sigma^-2 I), so <z(x), z(y)> is an unbiased
/// estimate of k(x, y) and |z(x)| = 1 for every x.
class RksMap {
public:
    /// Draws k = out_dim / 2 frequency columns. out_dim must be even and >= 2,
    /// sigma > 0.
    static RksMap sample(Eigen::Index in_dim, Eigen::Index out_dim, double sigma, std::uint64_t seed);

    /// Rebuilds a map from stored parts (used by model loading).
    RksMap(Eigen::MatrixXd frequencies, double sigma, std::uint64_t seed, std::string algorithm);

    Eigen::Index in_dim() const { return frequencies_.rows(); }
    Eigen::Index pairs() const { return frequencies_.cols(); }
    Eigen::Index out_dim() const { return 2 * frequencies_.cols(); }
    double sigma() const { return sigma_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& algorithm() const { return algorithm_; }

    /// in_dim x pairs; column j is w_j.
    const Eigen::MatrixXd& frequencies() const { return frequencies_; }

    Eigen::VectorXd transform(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// Row-wise transform of a samples x in_dim matrix.
    Eigen::MatrixXd transform_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

    double approx_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y) const;

private:
    Eigen::MatrixXd frequencies_;
    double sigma_;
    std::uint64_t seed_;
    std::string algorithm_;
};

/// exp(-|x - y|^2 / (2 sigma^2)).
double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y, double sigma);

/// Median pairwise Euclidean distance over the rows of `sample` (at most
/// `max_points` rows, chosen by `seed` when there are more). Falls back to 1
/// when the median is 0. Needs at least two rows.
double median_heuristic_sigma(const Eigen::Ref<const Eigen::MatrixXd>& sample, std::uint64_t seed = 0,
                              Eigen::Index max_points = 1000);

}  // namespace offd
