#include "vgt/policy.hpp"

#include <cmath>

#include "vgt/error.hpp"

namespace vgt {
namespace {

std::vector<int> layer_sizes(const PolicyArchitecture& arch, int outputs) {
  std::vector<int> sizes{arch.observation_size};
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(outputs);
  return sizes;
}

PolicyArchitecture validated(PolicyArchitecture arch) {
  if (arch.observation_size < 1) throw Error(ErrorCode::kInvalidConfig, "observation size must be positive");
  if (arch.n_channels < 1 || arch.n_channels > kMaxActionChannels) {
    throw Error(ErrorCode::kInvalidConfig, "unsupported channel count for a policy");
  }
  return arch;
}

Eigen::Map<const Eigen::VectorXd> as_vector(const Observation& obs) {
  return {obs.data(), static_cast<Eigen::Index>(obs.size())};
}

}  // namespace

Policy::Policy(PolicyArchitecture arch)
    : arch_(validated(std::move(arch))),
      actor_(layer_sizes(arch_, arch_.action_count())),
      critic_(layer_sizes(arch_, 1)) {}

Policy::Policy(PolicyArchitecture arch, Rng& rng) : Policy(std::move(arch)) {
  const double hidden_gain = std::sqrt(2.0);
  actor_.orthogonal_init(rng, hidden_gain, 0.01);
  critic_.orthogonal_init(rng, hidden_gain, 1.0);
}

Eigen::VectorXd Policy::logits(const Observation& obs) const {
  if (static_cast<int>(obs.size()) != arch_.observation_size) {
    throw Error(ErrorCode::kInvalidConfig, "observation length does not match the policy");
  }
  return actor_.forward(as_vector(obs)).col(0);
}

double Policy::value(const Observation& obs) const {
  if (static_cast<int>(obs.size()) != arch_.observation_size) {
    throw Error(ErrorCode::kInvalidConfig, "observation length does not match the policy");
  }
  return critic_.forward(as_vector(obs))(0, 0);
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits) {
  const Eigen::ArrayXd shifted = logits.array() - logits.maxCoeff();
  return shifted - std::log(shifted.exp().sum());
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

int argmax(const Eigen::VectorXd& values) {
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

int sample_categorical(const Eigen::VectorXd& logits, Rng& rng) {
  const Eigen::VectorXd p = softmax(logits);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left the cumulative sum a hair below 1: take the last
  // action with non-zero probability.
  for (Eigen::Index i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

int act(const Policy& policy, const Observation& obs, ActMode mode, Rng& rng) {
  const Eigen::VectorXd z = policy.logits(obs);
  return mode == ActMode::kDeterministic ? argmax(z) : sample_categorical(z, rng);
}

namespace {

nlohmann::json layers_to_json(const Mlp& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.layers()) {
    std::vector<double> w;
    w.reserve(static_cast<size_t>(l.weight.size()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    layers.push_back({{"rows", l.weight.rows()},
                      {"cols", l.weight.cols()},
                      {"weight", w},
                      {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
  }
  return layers;
}

void layers_from_json(const nlohmann::json& j, Mlp& net) {
  auto& layers = net.layers();
  if (!j.is_array() || j.size() != layers.size()) {
    throw Error(ErrorCode::kParse, "policy checkpoint layer count mismatch");
  }
  for (size_t i = 0; i < layers.size(); ++i) {
    const auto& lj = j[i];
    auto& l = layers[i];
    const auto w = lj.at("weight").get<std::vector<double>>();
    const auto b = lj.at("bias").get<std::vector<double>>();
    if (lj.at("rows").get<Eigen::Index>() != l.weight.rows() ||
        lj.at("cols").get<Eigen::Index>() != l.weight.cols() ||
        static_cast<Eigen::Index>(w.size()) != l.weight.size() ||
        static_cast<Eigen::Index>(b.size()) != l.bias.size()) {
      throw Error(ErrorCode::kParse, "policy checkpoint layer shape mismatch");
    }
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) {
        l.weight(r, c) = w[static_cast<size_t>(r * l.weight.cols() + c)];
      }
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias[r] = b[static_cast<size_t>(r)];
  }
}

}  // namespace

nlohmann::json policy_to_json(const Policy& policy) {
  const auto& arch = policy.architecture();
  return {{"format", "vgt-policy"},
          {"version", 1},
          {"architecture",
           {{"observation_size", arch.observation_size},
            {"n_channels", arch.n_channels},
            {"hidden", arch.hidden},
            {"activation", "tanh"}}},
          {"actor", layers_to_json(policy.actor())},
          {"critic", layers_to_json(policy.critic())}};
}

Policy policy_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "vgt-policy" || j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "not a version 1 policy checkpoint");
    }
    const auto& a = j.at("architecture");
    PolicyArchitecture arch;
    arch.observation_size = a.at("observation_size").get<int>();
    arch.n_channels = a.at("n_channels").get<int>();
    arch.hidden = a.at("hidden").get<std::vector<int>>();
    Policy policy(arch);
    layers_from_json(j.at("actor"), policy.actor());
    layers_from_json(j.at("critic"), policy.critic());
    return policy;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("policy checkpoint: ") + e.what());
  }
}

}  // namespace vgt
