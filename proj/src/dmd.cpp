#include "offd/dmd.hpp"

#include "offd/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace offd {

void HodmdConfig::validate() const
{
    if (delay < 1) {
        throw UsageError("HODMD delay order must be >= 1");
    }
    if (max_rank < 1) {
        throw UsageError("DMD max rank must be >= 1");
    }
    if (!(sv_rel_tol > 0.0 && sv_rel_tol < 1.0)) {
        throw UsageError("DMD singular-value tolerance must lie in (0, 1)");
    }
}

SnapshotPair build_snapshots(const EmbeddingSequence& seq, int delay)
{
    if (delay < 1) {
        throw UsageError("delay order must be >= 1");
    }
    const Eigen::Index n = seq.rows();
    const Eigen::Index length = seq.cols();
    if (length < delay + 1) {
        throw DataError("sequence of " + std::to_string(length) +
                        " columns is too short for delay order " + std::to_string(delay));
    }
    // Stacked states y_k = [x_k; ...; x_{k+d-1}], k = 0 .. length-d.
    const Eigen::Index states = length - delay + 1;
    Eigen::MatrixXd stacked(n * delay, states);
    for (Eigen::Index k = 0; k < states; ++k) {
        for (int lag = 0; lag < delay; ++lag) {
            stacked.block(lag * n, k, n, 1) = seq.col(k + lag);
        }
    }
    return {stacked.leftCols(states - 1), stacked.rightCols(states - 1)};
}

DmdDecomposition compute_dmd(const SnapshotPair& snap, const HodmdConfig& cfg)
{
    cfg.validate();
    const auto& x = snap.current;
    const auto& xp = snap.next;
    if (x.rows() != xp.rows() || x.cols() != xp.cols() || x.cols() == 0) {
        throw DataError("snapshot matrices must be non-empty and of equal shape");
    }
    if (!x.allFinite() || !xp.allFinite()) {
        throw NumericError("snapshot matrices contain non-finite values");
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericError("SVD of snapshot matrix did not converge");
    }
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) {
        throw NumericError("degenerate signal: snapshot matrix is all zero");
    }

    Eigen::Index r = 0;
    while (r < sv.size() && r < cfg.max_rank && sv[r] / sv[0] > cfg.sv_rel_tol) {
        ++r;
    }

    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
    const Eigen::VectorXd inv_s = sv.head(r).cwiseInverse();
    // Xp V_r S_r^{-1}, shared by the reduced operator and the exact modes.
    const Eigen::MatrixXd xp_v_sinv = xp * svd.matrixV().leftCols(r) * inv_s.asDiagonal();
    const Eigen::MatrixXd reduced = u.transpose() * xp_v_sinv;

    Eigen::EigenSolver<Eigen::MatrixXd> eig(reduced, true);
    if (eig.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of reduced operator did not converge");
    }

    DmdDecomposition dec;
    dec.eigenvalues = eig.eigenvalues();
    dec.modes = xp_v_sinv.cast<std::complex<double>>() * eig.eigenvectors();
    dec.singular_values = sv.head(r);

    // Least squares for b in a real basis: a conjugate pair (phi, conj phi)
    // spans the same real space as (Re phi, Im phi). Solving there keeps the
    // pair's amplitudes exactly conjugate, so extrapolations of real data
    // stay real up to rounding even when the modes are ill-conditioned.
    const auto& lambda = dec.eigenvalues;
    Eigen::MatrixXd basis(dec.modes.rows(), r);
    for (Eigen::Index j = 0; j < r; ++j) {
        basis.col(j) = dec.modes.col(j).real();
        if (lambda[j].imag() != 0.0 && j + 1 < r) {
            basis.col(j + 1) = dec.modes.col(j).imag();
            ++j;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> basis_svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
    basis_svd.setThreshold(cfg.sv_rel_tol);
    const Eigen::VectorXd coef = basis_svd.solve(x.col(0));
    dec.amplitudes.resize(r);
    for (Eigen::Index j = 0; j < r; ++j) {
        if (lambda[j].imag() != 0.0 && j + 1 < r) {
            dec.amplitudes[j] = {coef[j] / 2.0, -coef[j + 1] / 2.0};
            dec.amplitudes[j + 1] = std::conj(dec.amplitudes[j]);
            ++j;
        } else {
            dec.amplitudes[j] = coef[j];
        }
    }
    return dec;
}

namespace {

std::complex<double> int_pow(std::complex<double> base, int exponent)
{
    std::complex<double> result(1.0, 0.0);
    while (exponent > 0) {
        if (exponent & 1) {
            result *= base;
        }
        base *= base;
        exponent >>= 1;
    }
    return result;
}

EmbeddingSequence pad_short(const EmbeddingSequence& seq, int delay)
{
    if (seq.cols() >= delay + 1) {
        return seq;
    }
    EmbeddingSequence padded(seq.rows(), delay + 1);
    padded.leftCols(seq.cols()) = seq;
    for (Eigen::Index j = seq.cols(); j < delay + 1; ++j) {
        padded.col(j) = seq.col(seq.cols() - 1);
    }
    return padded;
}

}  // namespace

Eigen::VectorXcd predict_state(const DmdDecomposition& dec, int step)
{
    if (step < 0) {
        throw UsageError("prediction step must be >= 0");
    }
    Eigen::VectorXcd weighted(dec.rank());
    for (Eigen::Index j = 0; j < dec.rank(); ++j) {
        weighted[j] = int_pow(dec.eigenvalues[j], step) * dec.amplitudes[j];
    }
    return dec.modes * weighted;
}

Eigen::VectorXcd extrapolate_next(const EmbeddingSequence& seq, const HodmdConfig& cfg)
{
    cfg.validate();
    if (seq.cols() == 0) {
        return Eigen::VectorXcd::Zero(seq.rows() * cfg.delay);
    }
    const auto snap = build_snapshots(pad_short(seq, cfg.delay), cfg.delay);
    const auto dec = compute_dmd(snap, cfg);
    // States y_0 .. y_S are observed (S = snapshot columns); predict y_{S+1}.
    return predict_state(dec, static_cast<int>(snap.current.cols()) + 1);
}

SentenceVector sentence_feature(const EmbeddingSequence& seq, const HodmdConfig& cfg)
{
    cfg.validate();
    const Eigen::Index n = seq.rows();
    if (seq.cols() == 0) {
        return SentenceVector::Zero(n);
    }
    const auto snap = build_snapshots(pad_short(seq, cfg.delay), cfg.delay);
    if (snap.current.allFinite() && snap.current.isZero(0.0)) {
        return seq.col(seq.cols() - 1);
    }
    const auto dec = compute_dmd(snap, cfg);
    const Eigen::VectorXcd next = predict_state(dec, static_cast<int>(snap.current.cols()) + 1);
    // The newest word vector sits in the last n rows of the stacked state.
    return next.tail(n).real();
}

}  // namespace offd
