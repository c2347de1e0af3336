#include "offd/rks.hpp"

#include "offd/error.hpp"
#include "offd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace offd {

RksMap RksMap::sample(Eigen::Index in_dim, Eigen::Index out_dim, double sigma, std::uint64_t seed)
{
    if (out_dim < 2 || out_dim % 2 != 0) {
        throw UsageError("output dimension must be even (cos/sin pairs), got " +
                         std::to_string(out_dim));
    }
    if (in_dim < 1) {
        throw UsageError("RKS input dimension must be >= 1");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw UsageError("RKS bandwidth sigma must be positive and finite");
    }
    const Eigen::Index pairs = out_dim / 2;
    Eigen::MatrixXd freq(in_dim, pairs);
    Rng rng(seed);
    // Column-major fill: a map with fewer pairs is a prefix of one with more.
    for (Eigen::Index j = 0; j < pairs; ++j) {
        for (Eigen::Index i = 0; i < in_dim; ++i) {
            freq(i, j) = rng.normal() / sigma;
        }
    }
    return RksMap(std::move(freq), sigma, seed, std::string(Rng::algorithm));
}

RksMap::RksMap(Eigen::MatrixXd frequencies, double sigma, std::uint64_t seed, std::string algorithm)
    : frequencies_(std::move(frequencies)), sigma_(sigma), seed_(seed), algorithm_(std::move(algorithm))
{
    if (frequencies_.cols() < 1 || frequencies_.rows() < 1 || !frequencies_.allFinite()) {
        throw DataError("RKS frequency matrix must be non-empty and finite");
    }
}

Eigen::VectorXd RksMap::transform(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
    if (x.size() != in_dim()) {
        throw DataError("RKS input has dimension " + std::to_string(x.size()) + ", map expects " +
                        std::to_string(in_dim()));
    }
    const Eigen::Index k = pairs();
    const Eigen::VectorXd proj = frequencies_.transpose() * x;
    const double scale = std::sqrt(1.0 / static_cast<double>(k));
    Eigen::VectorXd z(2 * k);
    z.head(k) = scale * proj.array().cos();
    z.tail(k) = scale * proj.array().sin();
    return z;
}

Eigen::MatrixXd RksMap::transform_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const
{
    if (rows.cols() != in_dim()) {
        throw DataError("RKS input has dimension " + std::to_string(rows.cols()) +
                        ", map expects " + std::to_string(in_dim()));
    }
    const Eigen::Index k = pairs();
    const Eigen::MatrixXd proj = rows * frequencies_;
    const double scale = std::sqrt(1.0 / static_cast<double>(k));
    Eigen::MatrixXd z(rows.rows(), 2 * k);
    z.leftCols(k) = scale * proj.array().cos();
    z.rightCols(k) = scale * proj.array().sin();
    return z;
}

double RksMap::approx_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y) const
{
    return transform(x).dot(transform(y));
}

double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y, double sigma)
{
    return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

double median_heuristic_sigma(const Eigen::Ref<const Eigen::MatrixXd>& sample, std::uint64_t seed,
                              Eigen::Index max_points)
{
    const Eigen::Index n = sample.rows();
    if (n < 2) {
        throw DataError("median heuristic needs at least 2 vectors, got " + std::to_string(n));
    }
    std::vector<Eigen::Index> chosen(static_cast<std::size_t>(n));
    std::iota(chosen.begin(), chosen.end(), Eigen::Index{0});
    if (n > max_points) {
        Rng rng(seed);
        // Partial Fisher-Yates: the first max_points entries are a uniform subset.
        for (Eigen::Index i = 0; i < max_points; ++i) {
            const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(chosen[i], chosen[j]);
        }
        chosen.resize(static_cast<std::size_t>(max_points));
        std::sort(chosen.begin(), chosen.end());
    }

    std::vector<double> dist;
    dist.reserve(chosen.size() * (chosen.size() - 1) / 2);
    for (std::size_t a = 0; a < chosen.size(); ++a) {
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
            dist.push_back((sample.row(chosen[a]) - sample.row(chosen[b])).norm());
        }
    }
    const auto mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + mid, dist.end());
    double median = dist[mid];
    if (dist.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(dist.begin(), dist.begin() + mid));
    }
    return median > 0.0 ? median : 1.0;
}

}  // namespace offd
