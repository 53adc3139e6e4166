#pragma once

#include <stdexcept>
#include <string>

namespace omc {

// 2019 SI exact values.
inline constexpr double kPlanck = 6.62607015e-34;   // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J / K
inline constexpr double kTwoPi = 6.28318530717958647692528676656;

// A parameter or argument outside its allowed domain. The message names the
// offending field.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested target that no drive configuration can reach. Carries the best
// value attainable under the given constraints.
class Infeasible : public std::runtime_error {
 public:
  Infeasible(const std::string& what, double max_achievable)
      : std::runtime_error(what), max_achievable_(max_achievable) {}
  double max_achievable() const { return max_achievable_; }

 private:
  double max_achievable_;
};

// A file or payload that could not be read, parsed, or understood.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omc
