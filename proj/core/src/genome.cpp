#include "vgt/genome.hpp"

#include <algorithm>

#include "vgt/error.hpp"

namespace vgt {

ControlSequence::ControlSequence(int steps, int channels)
    : steps_(steps), channels_(channels) {
  if (steps < 1 || channels < 1) {
    throw Error(ErrorCode::kInvalidConfig, "control sequence needs at least one step and channel");
  }
  bits_.assign(static_cast<size_t>(steps) * static_cast<size_t>(channels), 0);
}

ControlSequence ControlSequence::random(int steps, int channels, Rng& rng) {
  ControlSequence out(steps, channels);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : out.bits_) b = coin(rng) ? 1 : 0;
  return out;
}

std::vector<bool> ControlSequence::row(int step) const {
  std::vector<bool> out(static_cast<size_t>(channels_));
  for (int c = 0; c < channels_; ++c) out[static_cast<size_t>(c)] = at(step, c);
  return out;
}

bool is_failed_rating(const RatingVector& rating) {
  return std::any_of(rating.begin(), rating.end(),
                     [](double r) { return !(r > kFailedRating); });
}

}  // namespace vgt
