#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vgt/random.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

// Open-loop schedule: bit (step, channel) is the on/off state of `channel`
// during action step `step`.
class ControlSequence {
 public:
  ControlSequence() = default;
  ControlSequence(int steps, int channels);

  static ControlSequence random(int steps, int channels, Rng& rng);

  int steps() const { return steps_; }
  int channels() const { return channels_; }
  int size() const { return steps_ * channels_; }

  bool at(int step, int channel) const { return bits_[index(step, channel)] != 0; }
  void set(int step, int channel, bool on) { bits_[index(step, channel)] = on ? 1 : 0; }
  bool bit(int flat) const { return bits_[static_cast<size_t>(flat)] != 0; }
  void flip(int flat) { bits_[static_cast<size_t>(flat)] ^= 1; }

  std::vector<bool> row(int step) const;

  friend bool operator==(const ControlSequence&, const ControlSequence&) = default;

 private:
  size_t index(int step, int channel) const {
    return static_cast<size_t>(step) * static_cast<size_t>(channels_) +
           static_cast<size_t>(channel);
  }

  int steps_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> bits_;
};

// One rating per objective, higher is better.
using RatingVector = std::vector<double>;

// Rating given to every objective of a genome whose simulation failed.
inline constexpr double kFailedRating = -1e30;

bool is_failed_rating(const RatingVector& rating);

struct Genome {
  ChannelAssignment assignment;
  ControlSequence control;
  std::optional<RatingVector> rating;

  friend bool operator==(const Genome&, const Genome&) = default;
};

}  // namespace vgt
