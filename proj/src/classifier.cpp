#include "fefet/classifier.hpp"

#include <cmath>
#include <string>

#include "fefet/error.hpp"
#include "fefet/rng.hpp"

namespace fefet {

namespace {

// Box-Muller on uniform01 keeps datasets identical across standard libraries.
class Normal {
 public:
  explicit Normal(Rng rng) : rng_(rng) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01(rng_);  // (0, 1]
    const double u2 = uniform01(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  Rng rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Split draw_split(const Eigen::MatrixXd& means, int n, Normal& normal) {
  const int n_classes = static_cast<int>(means.rows());
  Split s;
  s.x.resize(n, means.cols());
  s.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int c = i % n_classes;
    s.labels[static_cast<std::size_t>(i)] = c;
    for (Eigen::Index d = 0; d < means.cols(); ++d) s.x(i, d) = means(c, d) + normal();
  }
  return s;
}

}  // namespace

Dataset make_blobs(const BlobSpec& spec, std::uint64_t master_seed) {
  if (spec.n_classes < 2 || spec.dim < 1 || spec.n_train < 1 || spec.n_test < 1)
    throw DomainError("make_blobs: need >= 2 classes and positive sizes");
  if (!(spec.separation >= 0.0)) throw DomainError("make_blobs: separation must be >= 0");
  Normal normal(make_rng(master_seed, 0, Stream::kDataset));
  Eigen::MatrixXd means(spec.n_classes, spec.dim);
  for (int c = 0; c < spec.n_classes; ++c)
    for (int d = 0; d < spec.dim; ++d) means(c, d) = spec.separation * normal();
  Dataset data;
  data.n_classes = spec.n_classes;
  data.train = draw_split(means, spec.n_train, normal);
  data.test = draw_split(means, spec.n_test, normal);
  return data;
}

Eigen::MatrixXd train_ridge(const Dataset& data, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("train_ridge: lambda must be > 0");
  const Eigen::MatrixXd& x = data.train.x;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), data.n_classes);
  for (Eigen::Index i = 0; i < x.rows(); ++i) y(i, data.train.labels[static_cast<std::size_t>(i)]) = 1.0;
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw DomainError("train_ridge: system not positive definite");
  return llt.solve(x.transpose() * y);
}

double classifier_accuracy(const Eigen::MatrixXd& weights, const Split& split) {
  if (weights.rows() != split.x.cols())
    throw DomainError("classifier_accuracy: weight rows " + std::to_string(weights.rows()) +
                      " != feature dim " + std::to_string(split.x.cols()));
  if (split.x.rows() == 0) throw DomainError("classifier_accuracy: empty split");
  const Eigen::MatrixXd scores = split.x * weights;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k)
      if (scores(i, k) > scores(i, best)) best = k;
    correct += best == split.labels[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(correct) / static_cast<double>(scores.rows());
}

}  // namespace fefet
