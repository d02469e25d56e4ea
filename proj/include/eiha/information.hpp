#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace eiha {

/// Plug-in Shannon entropy in bits of a histogram, with 0 log 0 = 0.
/// Throws std::invalid_argument when the histogram is empty.
double channel_entropy(std::span<const std::uint32_t> counts);

/// Relabels a sample sequence by order of first appearance. The information
/// distance only depends on the partition of time steps a sequence induces,
/// so canonical sequences are what the distance actually sees.
std::vector<std::uint8_t> canonical_labels(std::span<const std::uint8_t> samples);

/// Crutchfield information distance H(X|Y) + H(Y|X) in bits between two
/// equal-length sample sequences, with the joint formed by time-aligned pairs.
/// Throws std::invalid_argument on length mismatch or empty input.
double channel_information_distance(std::span<const std::uint8_t> x,
                                    std::span<const std::uint8_t> y);

}  // namespace eiha
