#include "vgt/mlp.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "vgt/error.hpp"

namespace vgt {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw Error(ErrorCode::kInvalidConfig, "network needs input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw Error(ErrorCode::kInvalidConfig, "layer sizes must be positive");
  }
  for (size_t i = 0; i + 1 < sizes_.size(); ++i) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]),
                       Eigen::VectorXd::Zero(sizes_[i + 1])});
  }
}

void Mlp::orthogonal_init(Rng& rng, double hidden_gain, double output_gain) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t l = 0; l < layers_.size(); ++l) {
    Layer& layer = layers_[l];
    const Eigen::Index rows = layer.weight.rows();
    const Eigen::Index cols = layer.weight.cols();
    const Eigen::Index big = std::max(rows, cols);
    const Eigen::Index small = std::min(rows, cols);
    Eigen::MatrixXd g(big, small);
    for (Eigen::Index j = 0; j < small; ++j) {
      for (Eigen::Index i = 0; i < big; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    // Sign fix so the result is uniformly distributed over orthogonal matrices.
    const Eigen::MatrixXd r = qr.matrixQR();
    for (Eigen::Index j = 0; j < small; ++j) {
      if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    const double gain = (l + 1 == layers_.size()) ? output_gain : hidden_gain;
    layer.weight = gain * (rows >= cols ? q : Eigen::MatrixXd(q.transpose()));
    layer.bias.setZero();
  }
}

int Mlp::parameter_count() const {
  int n = 0;
  for (const Layer& l : layers_) n += static_cast<int>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for (const Layer& l : layers_) {
    flat.segment(at, l.weight.size()) = Eigen::Map<const Eigen::VectorXd>(l.weight.data(), l.weight.size());
    at += l.weight.size();
    flat.segment(at, l.bias.size()) = l.bias;
    at += l.bias.size();
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw Error(ErrorCode::kInvalidConfig, "parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (Layer& l : layers_) {
    Eigen::Map<Eigen::VectorXd>(l.weight.data(), l.weight.size()) = flat.segment(at, l.weight.size());
    at += l.weight.size();
    l.bias = flat.segment(at, l.bias.size());
    at += l.bias.size();
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a = x;
  for (size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    a = (l + 1 == layers_.size()) ? z : Eigen::MatrixXd(z.array().tanh());
  }
  return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
  tape.inputs.clear();
  Eigen::MatrixXd a = x;
  for (size_t l = 0; l < layers_.size(); ++l) {
    tape.inputs.push_back(a);
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    a = (l + 1 == layers_.size()) ? z : Eigen::MatrixXd(z.array().tanh());
  }
  return a;
}

Eigen::VectorXd Mlp::backward(const Tape& tape, const Eigen::MatrixXd& grad_output) const {
  Eigen::VectorXd grad(parameter_count());
  // Offsets of each layer's block in the flat vector.
  std::vector<Eigen::Index> offset(layers_.size());
  Eigen::Index at = 0;
  for (size_t l = 0; l < layers_.size(); ++l) {
    offset[l] = at;
    at += layers_[l].weight.size() + layers_[l].bias.size();
  }

  Eigen::MatrixXd g = grad_output;
  for (size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const Eigen::MatrixXd& input = tape.inputs[l];
    const Eigen::MatrixXd dw = g * input.transpose();
    grad.segment(offset[l], dw.size()) = Eigen::Map<const Eigen::VectorXd>(dw.data(), dw.size());
    grad.segment(offset[l] + dw.size(), layer.bias.size()) = g.rowwise().sum();
    if (l > 0) {
      // input is tanh(z) of the previous layer; d tanh = 1 - tanh^2.
      g = (layer.weight.transpose() * g).array() * (1.0 - input.array().square());
    }
  }
  return grad;
}

Adam::Adam(int n, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace vgt
