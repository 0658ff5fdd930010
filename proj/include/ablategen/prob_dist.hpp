#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ablategen {

// One probability per token id of the owning vocabulary.
class ProbDist {
 public:
  ProbDist() = default;
  explicit ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> values() const { return probs_; }
  std::vector<double>& mutable_values() { return probs_; }

  double sum() const;

  bool operator==(const ProbDist& other) const = default;

 private:
  std::vector<double> probs_;
};

}  // namespace ablategen
