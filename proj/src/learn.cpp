#include "offd/learn.hpp"

#include "offd/error.hpp"
#include "offd/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <numbers>
#include <numeric>

namespace offd {

SignVector signs_of(const LabeledCorpus& corpus)
{
    SignVector y(static_cast<Eigen::Index>(corpus.size()));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& rec = corpus.records[i];
        if (!rec.label) {
            throw DataError("record '" + rec.id + "' has no label");
        }
        y[static_cast<Eigen::Index>(i)] = label_sign(*rec.label);
    }
    return y;
}

std::string_view model_kind_name(ModelKind kind)
{
    switch (kind) {
    case ModelKind::rlsc: return "rlsc";
    case ModelKind::svm_linear: return "svm";
    case ModelKind::logreg: return "logreg";
    case ModelKind::gnb: return "gnb";
    }
    return "unknown";
}

namespace {

constexpr Eigen::Index kDirectSolveLimit = 4096;

void check_training_set(const FeatureMatrix& features, const SignVector& y, bool need_both_classes)
{
    if (features.rows() == 0) {
        throw DataError("training set has zero rows");
    }
    if (features.rows() != y.size()) {
        throw DataError("feature rows (" + std::to_string(features.rows()) +
                        ") do not match label count (" + std::to_string(y.size()) + ")");
    }
    if (!features.values.allFinite()) {
        throw NumericError("training features contain non-finite values");
    }
    bool pos = false;
    bool neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 1.0) {
            pos = true;
        } else if (y[i] == -1.0) {
            neg = true;
        } else {
            throw DataError("labels must be +1 or -1");
        }
    }
    if (need_both_classes && !(pos && neg)) {
        throw DataError("degenerate training set: only one class present");
    }
}

Eigen::MatrixXd with_bias_column(const Eigen::MatrixXd& x)
{
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a.leftCols(x.cols()) = x;
    a.col(x.cols()).setOnes();
    return a;
}

}  // namespace

LinearModel train_rlsc(const FeatureMatrix& features, const SignVector& y, double lambda)
{
    if (!(lambda > 0.0)) {
        throw UsageError("RLSC lambda must be > 0");
    }
    check_training_set(features, y, false);

    const Eigen::MatrixXd a = with_bias_column(features.values);
    const Eigen::Index p = a.cols();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    gram = gram.selfadjointView<Eigen::Lower>();
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = a.transpose() * y;

    Eigen::VectorXd w;
    if (p <= kDirectSolveLimit) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success) {
            throw NumericError("RLSC normal-equation factorization failed");
        }
        w = ldlt.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-10);
        cg.setMaxIterations(10 * p);
        cg.compute(gram);
        w = cg.solve(rhs);
        if (cg.info() != Eigen::Success) {
            throw NumericError("RLSC conjugate gradient did not converge");
        }
    }
    if (!w.allFinite()) {
        throw NumericError("RLSC produced non-finite weights");
    }

    LinearModel model;
    model.kind = ModelKind::rlsc;
    model.weights = w.head(p - 1);
    model.bias = w[p - 1];
    model.hyper.lambda = lambda;
    return model;
}

LinearModel train_linear_svm(const FeatureMatrix& features, const SignVector& y, double C,
                             std::uint32_t epochs, std::uint64_t seed)
{
    if (!(C > 0.0)) {
        throw UsageError("SVM control parameter C must be > 0");
    }
    if (epochs < 1) {
        throw UsageError("SVM epochs must be >= 1");
    }
    check_training_set(features, y, true);

    const auto& x = features.values;
    const Eigen::Index n = x.rows();
    const Eigen::Index dim = x.cols();
    // Equivalent scaled objective: lambda/2 |w|^2 + mean hinge, lambda = 1/(C n).
    const double lambda = 1.0 / (C * static_cast<double>(n));
    // Offsetting t by one epoch caps the first step at 1/(lambda n) = C.
    const double t0 = static_cast<double>(n);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    double b = 0.0;
    Eigen::VectorXd w_avg = Eigen::VectorXd::Zero(dim);
    double b_avg = 0.0;
    double averaged = 0.0;

    const std::uint64_t total = static_cast<std::uint64_t>(epochs) * static_cast<std::uint64_t>(n);
    const std::uint64_t average_from = total / 2;  // suffix averaging over the second half

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    std::uint64_t t = 0;
    for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
        for (Eigen::Index i = n - 1; i > 0; --i) {
            std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
        }
        for (const Eigen::Index i : order) {
            const double eta = 1.0 / (lambda * (static_cast<double>(t) + 1.0 + t0));
            const double margin = y[i] * (x.row(i).dot(w) + b);
            w *= 1.0 - eta * lambda;
            if (margin < 1.0) {
                w.noalias() += (eta * y[i]) * x.row(i).transpose();
                b += eta * y[i];
            }
            ++t;
            if (t > average_from) {
                averaged += 1.0;
                w_avg += (w - w_avg) / averaged;
                b_avg += (b - b_avg) / averaged;
            }
        }
    }
    if (!w_avg.allFinite() || !std::isfinite(b_avg)) {
        throw NumericError("SVM training diverged");
    }

    LinearModel model;
    model.kind = ModelKind::svm_linear;
    model.weights = std::move(w_avg);
    model.bias = b_avg;
    model.hyper.C = C;
    model.hyper.epochs = epochs;
    model.hyper.seed = seed;
    return model;
}

namespace objectives {

double svm_primal(const Eigen::MatrixXd& x, const SignVector& y, const Eigen::VectorXd& w,
                  double bias, double C)
{
    const Eigen::ArrayXd margins = y.array() * ((x * w).array() + bias);
    return 0.5 * w.squaredNorm() + C * (1.0 - margins).max(0.0).sum();
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z)
{
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double logreg_loss(const Eigen::MatrixXd& x, const SignVector& y, const Eigen::VectorXd& w_aug,
                   double l2)
{
    const Eigen::Index d = x.cols();
    const Eigen::VectorXd z = (x * w_aug.head(d)).array() + w_aug[d];
    double loss = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        loss += softplus(-y[i] * z[i]);
    }
    return loss / static_cast<double>(x.rows()) + 0.5 * l2 * w_aug.squaredNorm();
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& x, const SignVector& y,
                                const Eigen::VectorXd& w_aug, double l2)
{
    const Eigen::Index d = x.cols();
    const Eigen::VectorXd z = (x * w_aug.head(d)).array() + w_aug[d];
    // d/dz_i softplus(-y_i z_i) = -y_i sigmoid(-y_i z_i)
    Eigen::VectorXd coef(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        coef[i] = -y[i] * sigmoid(-y[i] * z[i]);
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    Eigen::VectorXd grad(d + 1);
    grad.head(d) = inv_n * (x.transpose() * coef);
    grad[d] = inv_n * coef.sum();
    grad += l2 * w_aug;
    return grad;
}

std::array<double, 2> gnb_log_joint(const GnbModel& model, const Eigen::Ref<const Eigen::VectorXd>& x)
{
    std::array<double, 2> out{};
    const double log_two_pi = std::log(2.0 * std::numbers::pi);
    for (int c = 0; c < 2; ++c) {
        const Eigen::ArrayXd var = model.variance.row(c).transpose().array();
        const Eigen::ArrayXd diff = x.array() - model.mean.row(c).transpose().array();
        out[static_cast<std::size_t>(c)] =
            std::log(model.prior[static_cast<std::size_t>(c)]) -
            0.5 * (static_cast<double>(x.size()) * log_two_pi + var.log().sum() +
                   (diff.square() / var).sum());
    }
    return out;
}

}  // namespace objectives

LinearModel train_logreg(const FeatureMatrix& features, const SignVector& y, double lr,
                         std::uint32_t epochs, double l2, std::uint64_t seed)
{
    if (!(lr > 0.0)) {
        throw UsageError("logistic regression learning rate must be > 0");
    }
    if (!(l2 >= 0.0)) {
        throw UsageError("logistic regression l2 must be >= 0");
    }
    check_training_set(features, y, true);

    const Eigen::Index d = features.cols();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
        w -= lr * objectives::logreg_gradient(features.values, y, w, l2);
    }
    if (!w.allFinite()) {
        throw NumericError("logistic regression diverged; lower the learning rate");
    }

    LinearModel model;
    model.kind = ModelKind::logreg;
    model.weights = w.head(d);
    model.bias = w[d];
    model.hyper.lr = lr;
    model.hyper.epochs = epochs;
    model.hyper.l2 = l2;
    model.hyper.seed = seed;
    return model;
}

GnbModel train_gnb(const FeatureMatrix& features, const SignVector& y, double var_floor)
{
    if (!(var_floor > 0.0)) {
        throw UsageError("naive Bayes variance floor must be > 0");
    }
    check_training_set(features, y, true);

    const auto& x = features.values;
    const Eigen::Index d = x.cols();
    GnbModel model;
    model.mean.setZero(2, d);
    model.variance.setZero(2, d);
    std::array<double, 2> count{0.0, 0.0};
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int c = y[i] > 0 ? 0 : 1;
        count[static_cast<std::size_t>(c)] += 1.0;
        model.mean.row(c) += x.row(i);
    }
    for (int c = 0; c < 2; ++c) {
        model.mean.row(c) /= count[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int c = y[i] > 0 ? 0 : 1;
        model.variance.row(c) += (x.row(i) - model.mean.row(c)).array().square().matrix();
    }
    for (int c = 0; c < 2; ++c) {
        model.variance.row(c) /= count[static_cast<std::size_t>(c)];
    }
    model.variance = model.variance.cwiseMax(var_floor);
    const double n = static_cast<double>(x.rows());
    model.prior = {count[0] / n, count[1] / n};
    model.hyper.var_floor = var_floor;
    return model;
}

namespace {

Eigen::MatrixXd prepare_inputs(const std::optional<RksMap>& rks, Eigen::Index classifier_dim,
                               const FeatureMatrix& features)
{
    if (rks) {
        return rks->transform_rows(features.values);
    }
    if (features.cols() != classifier_dim && features.rows() > 0) {
        throw DataError("feature dimension " + std::to_string(features.cols()) +
                        " does not match model dimension " + std::to_string(classifier_dim));
    }
    return features.values;
}

}  // namespace

std::vector<Prediction> predict(const LinearModel& model, const FeatureMatrix& features)
{
    if (features.rows() == 0) {
        return {};
    }
    const Eigen::MatrixXd x = prepare_inputs(model.rks, model.weights.size(), features);
    if (x.cols() != model.weights.size()) {
        throw DataError("mapped feature dimension does not match model weights");
    }
    const Eigen::VectorXd scores = (x * model.weights).array() + model.bias;
    std::vector<Prediction> out;
    out.reserve(static_cast<std::size_t>(scores.size()));
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        out.push_back({label_from_sign(scores[i]), scores[i]});
    }
    return out;
}

std::vector<Prediction> predict(const GnbModel& model, const FeatureMatrix& features)
{
    if (features.rows() == 0) {
        return {};
    }
    const Eigen::MatrixXd x = prepare_inputs(model.rks, model.mean.cols(), features);
    std::vector<Prediction> out;
    out.reserve(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto joint = objectives::gnb_log_joint(model, x.row(i).transpose());
        const double score = joint[0] - joint[1];
        out.push_back({label_from_sign(score), score});
    }
    return out;
}

std::vector<Prediction> predict(const Model& model, const FeatureMatrix& features)
{
    return std::visit([&](const auto& m) { return predict(m, features); }, model);
}

Eigen::Index input_dim(const Model& model)
{
    return std::visit(
        [](const auto& m) -> Eigen::Index {
            if (m.rks) {
                return m.rks->in_dim();
            }
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
                return m.weights.size();
            } else {
                return m.mean.cols();
            }
        },
        model);
}

}  // namespace offd
