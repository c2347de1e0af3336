#pragma once

#include "offd/embed.hpp"

#include <Eigen/Core>

#include <complex>

namespace offd {

/// Time-lagged snapshot matrices: `next` is `current` advanced one step.
/// With delay order d the columns are stacks of d consecutive word vectors.
struct SnapshotPair {
    Eigen::MatrixXd current;
    Eigen::MatrixXd next;
};

struct HodmdConfig {
    int delay = 1;               ///< 1 = plain DMD
    int max_rank = 10;
    double sv_rel_tol = 1e-10;   ///< singular values with s_i/s_1 <= tol are dropped

    /// Throws UsageError unless delay >= 1, max_rank >= 1 and 0 < sv_rel_tol < 1.
    void validate() const;
};

/// Modes, eigenvalues and amplitudes of the best-fit linear evolution
/// x_{k+1} ~ A x_k. A itself is never formed; its action on the data is
/// modes * diag(eigenvalues)^k * amplitudes.
struct DmdDecomposition {
    Eigen::MatrixXcd modes;        ///< n_s x r, one mode per column
    Eigen::VectorXcd eigenvalues;  ///< r
    Eigen::VectorXcd amplitudes;   ///< r, least-squares fit of modes to the first snapshot
    Eigen::VectorXd singular_values;  ///< retained singular values of `current`, descending

    Eigen::Index rank() const { return eigenvalues.size(); }
};

/// Builds the snapshot pair for delay order `delay`. The sequence needs at
/// least delay + 1 columns.
SnapshotPair build_snapshots(const EmbeddingSequence& seq, int delay);

/// Exact DMD via the thin SVD of the current snapshots. Throws NumericError
/// when the snapshots are all zero.
DmdDecomposition compute_dmd(const SnapshotPair& snap, const HodmdConfig& cfg);

/// modes * diag(eigenvalues)^step * amplitudes, the estimate of snapshot step+1.
Eigen::VectorXcd predict_state(const DmdDecomposition& dec, int step);

/// Full complex one-step-ahead extrapolation of the stacked state that
/// sentence_feature takes its real part from. Exposed for diagnostics.
Eigen::VectorXcd extrapolate_next(const EmbeddingSequence& seq, const HodmdConfig& cfg);

/// Fixed-length (n) feature for a sequence of n-dimensional word vectors:
/// the real part of the DMD prediction of the word vector following the last
/// one. Sequences shorter than delay + 1 are padded by repeating the last
/// column. An empty sequence yields the zero vector; when every current
/// snapshot is zero there are no dynamics to fit and the last word vector is
/// returned unchanged.
SentenceVector sentence_feature(const EmbeddingSequence& seq, const HodmdConfig& cfg);

}  // namespace offd
