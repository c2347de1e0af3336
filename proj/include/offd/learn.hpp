#pragma once

#include "offd/corpus.hpp"
#include "offd/rks.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace offd {

/// One row per sample.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> ids;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// +1 for OFF, -1 for NOT.
using SignVector = Eigen::VectorXd;

SignVector signs_of(const LabeledCorpus& corpus);

enum class ModelKind : std::uint8_t { rlsc = 0, svm_linear = 1, logreg = 2, gnb = 3 };

std::string_view model_kind_name(ModelKind kind);

/// Training settings; each solver reads the fields it needs and the full set
/// is persisted with the model.
struct Hyperparams {
    double lambda = 1e-3;     // RLSC ridge strength
    double C = 1000.0;        // SVM control parameter
    double lr = 0.1;          // logistic regression step size
    double l2 = 1e-4;         // logistic regression L2 strength
    double var_floor = 1e-9;  // naive Bayes variance floor
    std::uint32_t epochs = 20;
    std::uint64_t seed = 0;
};

struct LinearModel {
    ModelKind kind = ModelKind::rlsc;
    Eigen::VectorXd weights;
    double bias = 0.0;
    Hyperparams hyper;
    std::optional<RksMap> rks;  // applied to raw features before scoring
};

struct GnbModel {
    // Row 0: OFF, row 1: NOT.
    Eigen::Matrix<double, 2, Eigen::Dynamic> mean;
    Eigen::Matrix<double, 2, Eigen::Dynamic> variance;
    std::array<double, 2> prior{0.5, 0.5};
    Hyperparams hyper;
    std::optional<RksMap> rks;
};

using Model = std::variant<LinearModel, GnbModel>;

/// Regularized least squares on +-1 targets. A constant-1 column is appended
/// and regularized like the others; its weight becomes the bias.
LinearModel train_rlsc(const FeatureMatrix& features, const SignVector& y, double lambda);

/// Hinge-loss SVM, min 1/2 |w|^2 + C sum hinge(y_i (w.x_i + b)), by seeded
/// stochastic subgradient steps with iterate averaging. The bias is not
/// regularized.
LinearModel train_linear_svm(const FeatureMatrix& features, const SignVector& y, double C,
                             std::uint32_t epochs, std::uint64_t seed);

/// L2-regularized logistic regression by full-batch gradient descent from
/// zero. The bias is an appended constant feature.
LinearModel train_logreg(const FeatureMatrix& features, const SignVector& y, double lr,
                         std::uint32_t epochs, double l2, std::uint64_t seed);

/// Diagonal-covariance Gaussian naive Bayes.
GnbModel train_gnb(const FeatureMatrix& features, const SignVector& y, double var_floor);

struct Prediction {
    Label label;
    double score;  ///< > 0 means OFF; decision value or posterior log-odds
};

std::vector<Prediction> predict(const Model& model, const FeatureMatrix& features);
std::vector<Prediction> predict(const LinearModel& model, const FeatureMatrix& features);
std::vector<Prediction> predict(const GnbModel& model, const FeatureMatrix& features);

/// Dimension of the raw feature vectors the model accepts.
Eigen::Index input_dim(const Model& model);

/// Binary model file (magic "OFFD1"); see docs/model_format.md.
void save_model(const Model& model, std::ostream& out);
Model load_model(std::istream& in);

namespace objectives {

/// 1/2 |w|^2 + C sum max(0, 1 - y_i (w.x_i + b)).
double svm_primal(const Eigen::MatrixXd& x, const SignVector& y, const Eigen::VectorXd& w,
                  double bias, double C);

/// mean log(1 + exp(-y_i w.a_i)) + l2/2 |w|^2 over augmented rows a_i = [x_i, 1].
double logreg_loss(const Eigen::MatrixXd& x, const SignVector& y, const Eigen::VectorXd& w_aug,
                   double l2);
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& x, const SignVector& y,
                                const Eigen::VectorXd& w_aug, double l2);

/// Per-class log joint density log p(c) + sum_j log N(x_j; mean_cj, var_cj),
/// index 0 = OFF, 1 = NOT.
std::array<double, 2> gnb_log_joint(const GnbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace objectives

}  // namespace offd
