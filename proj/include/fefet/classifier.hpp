#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fefet {

// Synthetic stand-in for a trained network: a linear classifier fitted in
// closed form to Gaussian class blobs.
struct BlobSpec {
  int n_classes = 10;
  int dim = 64;
  int n_train = 2000;
  int n_test = 2000;
  double separation = 0.4;  // sd of the class means per dimension
};

struct Split {
  Eigen::MatrixXd x;        // samples x dim
  std::vector<int> labels;
};

struct Dataset {
  int n_classes = 0;
  Split train;
  Split test;
};

/// Class means ~ N(0, separation^2) per dimension, samples = mean + N(0, 1),
/// labels assigned round-robin.
Dataset make_blobs(const BlobSpec& spec, std::uint64_t master_seed);

/// One-vs-all ridge regression without bias, W = (X'X + lambda I)^-1 X'Y.
/// Returns a dim x n_classes matrix.
Eigen::MatrixXd train_ridge(const Dataset& data, double lambda = 1.0);

/// argmax_k (x W)_k match rate; ties go to the lower class index.
double classifier_accuracy(const Eigen::MatrixXd& weights, const Split& split);

}  // namespace fefet
