#pragma once

#include <Eigen/Core>

#include <vector>

#include "vgt/random.hpp"

namespace vgt {

// Fully connected network with tanh hidden layers and a linear output layer.
// Batches are column-major: one sample per column.
class Mlp {
 public:
  struct Layer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
  };

  // Activations recorded by forward() for backward().
  struct Tape {
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
  };

  Mlp() = default;
  // sizes = {input, hidden..., output}; parameters start at zero.
  explicit Mlp(std::vector<int> sizes);

  // Orthogonal weights scaled by `hidden_gain` (hidden layers) or
  // `output_gain` (last layer); zero biases.
  void orthogonal_init(Rng& rng, double hidden_gain, double output_gain);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  int parameter_count() const;
  // Flattened per layer: weight (column-major) then bias.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

  // Gradient of sum(grad_output .* output) with respect to the flattened
  // parameters, using activations recorded in `tape`.
  Eigen::VectorXd backward(const Tape& tape, const Eigen::MatrixXd& grad_output) const;

 private:
  std::vector<int> sizes_;
  std::vector<Layer> layers_;
};

class Adam {
 public:
  Adam() = default;
  Adam(int n, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-5);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

 private:
  double lr_ = 0.0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-5;
  long t_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

}  // namespace vgt
