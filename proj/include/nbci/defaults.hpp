#pragma once

#include <cstddef>
#include <cstdint>

// Every run-time default in one place. The CLI reads only flags, never the
// environment, so a command line fully determines a run.
namespace nbci::defaults {

inline constexpr double kAlpha = 0.05;
inline constexpr std::size_t kTrials = 10000;
inline constexpr std::uint64_t kSeed = 20100401;
/// Lower truncation for the method-of-moments dispersion estimate.
inline constexpr double kThetaFloor = 1e-5;
inline constexpr double kBernsteinLower = 0.0;
/// b = multiplier * sample maximum.
inline constexpr double kBernsteinMultiplier = 1.0;
inline constexpr const char* kKPolicy = "default";

}  // namespace nbci::defaults
