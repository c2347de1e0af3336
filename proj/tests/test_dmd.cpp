#include "offd/dmd.hpp"
#include "offd/error.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <algorithm>
#include <random>

using namespace offd;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen)
{
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = normal(gen);
        }
    }
    return m;
}

/// A = Q diag(spectrum) Q^T for a random orthogonal Q.
Eigen::MatrixXd rotated_diagonal(const Eigen::VectorXd& spectrum, std::mt19937_64& gen)
{
    const auto n = spectrum.size();
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(n, n, gen)).householderQ();
    return q * spectrum.asDiagonal() * q.transpose();
}

Eigen::MatrixXd trajectory(const Eigen::MatrixXd& a, const Eigen::VectorXd& x1, Eigen::Index length)
{
    Eigen::MatrixXd seq(x1.size(), length);
    seq.col(0) = x1;
    for (Eigen::Index k = 1; k < length; ++k) {
        seq.col(k) = a * seq.col(k - 1);
    }
    return seq;
}

std::vector<double> sorted_real(const Eigen::VectorXcd& v)
{
    std::vector<double> out;
    for (const auto& z : v) {
        CHECK(std::abs(z.imag()) <= 1e-8);
        out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

double max_reconstruction_error(const DmdDecomposition& dec, const Eigen::MatrixXd& seq)
{
    double err = 0.0;
    for (Eigen::Index k = 0; k < seq.cols(); ++k) {
        err = std::max(err, (predict_state(dec, static_cast<int>(k)) - seq.col(k).cast<std::complex<double>>()).norm());
    }
    return err;
}

double max_column_norm(const Eigen::MatrixXd& m)
{
    return m.colwise().norm().maxCoeff();
}

}  // namespace

TEST_CASE("build_snapshots: shapes and shift structure")
{
    std::mt19937_64 gen(1);
    const auto seq = random_matrix(2, 4, gen);
    const auto s1 = build_snapshots(seq, 1);
    CHECK(s1.current.cols() == 3);
    CHECK(s1.next.cols() == 3);
    CHECK(s1.current.rows() == 2);

    const auto s2 = build_snapshots(seq, 2);
    CHECK(s2.current.rows() == 4);
    CHECK(s2.current.cols() == 2);
    CHECK(s2.current.col(0).head(2) == seq.col(0));
    CHECK(s2.current.col(0).tail(2) == seq.col(1));

    const auto long_seq = random_matrix(3, 9, gen);
    for (const int d : {1, 2, 3}) {
        const auto s = build_snapshots(long_seq, d);
        CHECK(s.current.cols() == s.next.cols());
        CHECK(s.current.rows() == 3 * d);
        for (Eigen::Index j = 0; j + 1 < s.current.cols(); ++j) {
            CHECK(s.next.col(j) == s.current.col(j + 1));
        }
    }
    CHECK_THROWS(build_snapshots(random_matrix(2, 2, gen), 2));
}

TEST_CASE("compute_dmd: diagonal system")
{
    std::mt19937_64 gen(2);
    Eigen::Matrix2d a;
    a << 0.9, 0.0, 0.0, 0.5;
    const auto seq = trajectory(a, Eigen::Vector2d(1.3, -0.8), 6);
    const auto dec = compute_dmd(build_snapshots(seq, 1), {});
    REQUIRE(dec.rank() == 2);
    const auto eig = sorted_real(dec.eigenvalues);
    CHECK(std::abs(eig[0] - 0.5) <= 1e-8);
    CHECK(std::abs(eig[1] - 0.9) <= 1e-8);
}

TEST_CASE("compute_dmd: constant and geometric sequences")
{
    const Eigen::Vector3d v(0.4, -1.0, 2.0);
    Eigen::MatrixXd constant(3, 5);
    Eigen::MatrixXd geometric(3, 5);
    for (int k = 0; k < 5; ++k) {
        constant.col(k) = v;
        geometric.col(k) = std::pow(0.7, k) * v;
    }
    const auto c = compute_dmd(build_snapshots(constant, 1), {});
    REQUIRE(c.rank() == 1);
    CHECK(std::abs(c.eigenvalues(0) - 1.0) <= 1e-10);

    const auto g = compute_dmd(build_snapshots(geometric, 1), {});
    REQUIRE(g.rank() == 1);
    CHECK(std::abs(g.eigenvalues(0) - 0.7) <= 1e-10);
}

TEST_CASE("compute_dmd: all-zero signal is rejected")
{
    const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(3, 4);
    CHECK_THROWS_AS(compute_dmd(build_snapshots(zeros, 1), {}), NumericError);
}

TEST_CASE("predict_state: reconstruction and one-step extrapolation on a linear oracle")
{
    std::mt19937_64 gen(3);
    Eigen::VectorXd spectrum(5);
    spectrum << 0.95, 0.8, -0.6, 0.4, 0.2;
    const auto a = rotated_diagonal(spectrum, gen);
    const auto seq = trajectory(a, random_matrix(5, 1, gen), 9);
    const auto dec = compute_dmd(build_snapshots(seq, 1), {});

    const std::complex<double> x1 = predict_state(dec, 0)(0);
    CHECK(std::abs(x1 - seq(0, 0)) <= 1e-8);
    for (Eigen::Index k = 0; k < seq.cols(); ++k) {
        CHECK((predict_state(dec, static_cast<int>(k)) - seq.col(k).cast<std::complex<double>>()).norm() <= 1e-8);
    }
    const int m = static_cast<int>(seq.cols()) - 1;
    const Eigen::VectorXd direct = a * seq.col(m);
    CHECK((predict_state(dec, m + 1).real() - direct).norm() <= 1e-8);
    CHECK((extrapolate_next(seq, {}).real() - direct).norm() <= 1e-8);
}

TEST_CASE("reconstruction property on random exact low-rank maps")
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> unif(0.15, 0.95);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 8;
        const Eigen::Index r = 1 + static_cast<Eigen::Index>(gen() % 5);
        Eigen::VectorXd spectrum = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < r; ++i) {
            spectrum(i) = (gen() % 2 ? 1.0 : -1.0) * unif(gen);
        }
        const auto a = rotated_diagonal(spectrum, gen);
        // Start inside the invariant subspace so the data have rank r exactly.
        const Eigen::VectorXd x1 = a * random_matrix(n, 1, gen);
        const auto seq = trajectory(a, x1, r + 4);
        HodmdConfig cfg;
        const auto dec = compute_dmd(build_snapshots(seq, 1), cfg);
        CHECK(dec.rank() <= std::min<Eigen::Index>(seq.cols() - 1, n));
        CHECK(max_reconstruction_error(dec, seq) <= 1e-6 * max_column_norm(seq));

        const auto& s = dec.singular_values;
        for (Eigen::Index i = 1; i < s.size(); ++i) {
            CHECK(s(i) <= s(i - 1));
        }
        CHECK(s(s.size() - 1) > cfg.sv_rel_tol * s(0));
    }
}

TEST_CASE("delay embedding captures a period-2 scalar oscillation")
{
    Eigen::MatrixXd seq(1, 10);
    for (Eigen::Index k = 0; k < seq.cols(); ++k) {
        seq(0, k) = k % 2 == 0 ? 2.0 : -1.0;
    }
    HodmdConfig plain;
    const auto d1 = compute_dmd(build_snapshots(seq, 1), plain);
    CHECK(max_reconstruction_error(d1, seq) >= 0.1 * 2.0);

    HodmdConfig delayed;
    delayed.delay = 2;
    const auto snap = build_snapshots(seq, 2);
    const auto d2 = compute_dmd(snap, delayed);
    Eigen::MatrixXd stacked(2, snap.current.cols() + 1);
    stacked << snap.current, snap.next.rightCols(1);
    CHECK(max_reconstruction_error(d2, stacked) <= 1e-6);
    CHECK(std::abs(sentence_feature(seq, delayed)(0) - 2.0) <= 1e-8);
}

TEST_CASE("sentence_feature: repeating two-word signal continues")
{
    const Eigen::Vector3d a(1.0, 0.5, -0.2);
    const Eigen::Vector3d b(-0.3, 0.8, 0.6);
    Eigen::MatrixXd seq(3, 5);
    seq << a, b, a, b, a;
    for (const int d : {1, 2}) {
        HodmdConfig cfg;
        cfg.delay = d;
        const auto f = sentence_feature(seq, cfg);
        REQUIRE(f.size() == 3);
        CHECK((f - b).norm() <= 1e-8);
    }
    Eigen::MatrixXd even(3, 4);
    even << a, b, a, b;
    CHECK((sentence_feature(even, {}) - a).norm() <= 1e-8);
}

TEST_CASE("sentence_feature: fallbacks")
{
    const Eigen::MatrixXd empty(4, 0);
    CHECK(sentence_feature(empty, {}) == Eigen::VectorXd::Zero(4));

    const Eigen::Vector4d only(1.0, -2.0, 0.5, 3.0);
    Eigen::MatrixXd single(4, 1);
    single << only;
    HodmdConfig cfg;
    for (const int d : {1, 2, 3}) {
        cfg.delay = d;
        CHECK((sentence_feature(single, cfg) - only).norm() <= 1e-10);
    }

    Eigen::MatrixXd zeros_then_word = Eigen::MatrixXd::Zero(4, 3);
    zeros_then_word.col(2) = only;
    cfg.delay = 1;
    CHECK(sentence_feature(zeros_then_word, cfg).allFinite());
}

TEST_CASE("sentence_feature is order sensitive")
{
    const Eigen::Vector3d a(1.0, 0.0, 0.2);
    const Eigen::Vector3d b(0.0, 1.0, -0.4);
    const Eigen::Vector3d c(0.3, 0.3, 1.0);
    Eigen::MatrixXd abc(3, 3);
    Eigen::MatrixXd cba(3, 3);
    abc << a, b, c;
    cba << c, b, a;
    CHECK((sentence_feature(abc, {}) - sentence_feature(cba, {})).norm() > 1e-3);
}

TEST_CASE("extrapolation of real data is real")
{
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index len = 2 + static_cast<Eigen::Index>(gen() % 11);
        const auto seq = random_matrix(8, len, gen);
        for (const int d : {1, 2}) {
            if (len < d + 1) {
                continue;
            }
            HodmdConfig cfg;
            cfg.delay = d;
            const auto z = extrapolate_next(seq, cfg);
            CHECK(z.imag().cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, z.real().cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("HodmdConfig validation")
{
    HodmdConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.delay = 0;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
    cfg = {};
    cfg.max_rank = 0;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
    cfg = {};
    cfg.sv_rel_tol = 1.0;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
}
