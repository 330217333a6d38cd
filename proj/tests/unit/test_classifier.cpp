#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "fefet/classifier.hpp"
#include "fefet/error.hpp"
#include "fefet/quantize.hpp"
#include "fefet/tensor_io.hpp"

using namespace fefet;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fefet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("blobs") {
  BlobSpec spec;
  const Dataset d = make_blobs(spec, 42);
  CHECK(d.n_classes == 10);
  CHECK(d.train.x.rows() == 2000);
  CHECK(d.train.x.cols() == 64);
  CHECK(d.test.x.rows() == 2000);
  CHECK(d.train.labels[13] == 3);
  const Dataset again = make_blobs(spec, 42);
  CHECK(again.train.x == d.train.x);
  CHECK(again.test.x == d.test.x);
  CHECK_FALSE(make_blobs(spec, 43).train.x == d.train.x);
}

TEST_CASE("frozen baseline at seed 42") {
  const Dataset d = make_blobs(BlobSpec{}, 42);
  const Eigen::MatrixXd w = train_ridge(d, 1.0);
  CHECK(w.rows() == 64);
  CHECK(w.cols() == 10);
  CHECK(classifier_accuracy(w, d.test) == doctest::Approx(0.8755).epsilon(1e-12));
}

TEST_CASE("ridge solution satisfies the normal equations") {
  BlobSpec spec;
  spec.n_train = 300;
  spec.dim = 8;
  spec.n_classes = 3;
  const Dataset d = make_blobs(spec, 1);
  const double lambda = 2.5;
  const Eigen::MatrixXd w = train_ridge(d, lambda);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(300, 3);
  for (int i = 0; i < 300; ++i) y(i, d.train.labels[i]) = 1.0;
  const Eigen::MatrixXd lhs =
      (d.train.x.transpose() * d.train.x + lambda * Eigen::MatrixXd::Identity(8, 8)) * w;
  CHECK((lhs - d.train.x.transpose() * y).norm() < 1e-9);
  CHECK_THROWS_AS(train_ridge(d, 0.0), DomainError);
}

TEST_CASE("train accuracy exceeds test accuracy on average") {
  double gap = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    BlobSpec spec;
    spec.n_train = 300;
    const Dataset d = make_blobs(spec, s);
    const Eigen::MatrixXd w = train_ridge(d);
    gap += classifier_accuracy(w, d.train) - classifier_accuracy(w, d.test);
  }
  CHECK(gap > 0.0);
}

TEST_CASE("heavy regularization collapses to chance") {
  const Dataset d = make_blobs(BlobSpec{}, 42);
  double last = 1e300;
  for (double lambda : {1.0, 1e3, 1e6, 1e9}) {
    const double norm = train_ridge(d, lambda).norm();
    CHECK(norm < last);
    last = norm;
  }
  CHECK(train_ridge(d, 1e9).norm() < 1e-5);
  // W = 0: every score ties, class 0 wins, and labels are round-robin.
  CHECK(classifier_accuracy(Eigen::MatrixXd::Zero(64, 10), d.test) == doctest::Approx(0.1));
}

TEST_CASE("quantization") {
  std::vector<float> ramp(256);
  for (int i = 0; i < 256; ++i) ramp[i] = float(i);
  const QuantizedTensor q = quantize_affine(ramp);
  CHECK(q.scale == 1.0);
  CHECK(q.zero_point == 0);
  CHECK(dequantize(q) == ramp);

  std::mt19937_64 rng(5);
  std::normal_distribution<float> g(0.3f, 2.0f);
  std::vector<float> v(5000);
  for (auto& x : v) x = g(rng);
  const QuantizedTensor r = quantize_affine(v, {50, 100});
  CHECK(r.shape == std::vector<std::int64_t>{50, 100});
  const auto back = dequantize(r);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(std::abs(double(back[i]) - double(v[i])) <= r.scale / 2 * (1 + 1e-5) + 1e-6);

  for (float c : {2.5f, -1.25f, 0.0f}) {
    const std::vector<float> flat(7, c);
    const QuantizedTensor k = quantize_affine(flat);
    for (auto code : k.codes) CHECK(code == 0);
    CHECK(dequantize(k) == flat);
  }

  CHECK_THROWS_AS(quantize_affine(std::vector<float>{1.0f, NAN}), DomainError);
  CHECK_THROWS_AS(quantize_affine(std::vector<float>{1.0f, 2.0f}, {3}), DomainError);
}

TEST_CASE("tensor io") {
  const auto dir = temp_dir("tensor");
  Tensor t;
  t.shape = {2, 3};
  t.values = {1.5f, -2.0f, 0.0f, 3.25f, 1e-7f, -1e7f};
  write_tensor(dir / "w.json", t);
  CHECK(std::filesystem::exists(dir / "w.f32"));
  CHECK(std::filesystem::file_size(dir / "w.f32") == 24);
  const Tensor back = read_tensor(dir / "w.json");
  CHECK(back.shape == t.shape);
  CHECK(back.values == t.values);

  std::ofstream(dir / "bad.json") << R"({"dtype":"f64","shape":[2,3],"data":"w.f32"})";
  CHECK_THROWS_AS(read_tensor(dir / "bad.json"), InputError);
  std::ofstream(dir / "short.json") << R"({"dtype":"f32","shape":[4,3],"data":"w.f32"})";
  CHECK_THROWS_AS(read_tensor(dir / "short.json"), InputError);
  std::ofstream(dir / "junk.json") << "{not json";
  CHECK_THROWS_AS(read_tensor(dir / "junk.json"), InputError);
  CHECK_THROWS_AS(read_tensor(dir / "missing.json"), InputError);
}

}
