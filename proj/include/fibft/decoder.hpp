// Flag-assisted recursive decoding of transversally measured (C4)^j blocks.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fibft/c4.hpp"

namespace fibft {

struct FlaggedBits {
    Bits4 bits{};
    std::array<bool, 4> flags{};
};

struct DecodeResult {
    uint8_t value = 0;
    bool flagged = false;
    bool operator==(const DecodeResult&) const = default;
};

struct MeasurementRecord {
    int level = 1;
    MeasurementBasis basis = MeasurementBasis::ZBasis;
    std::vector<uint8_t> leaves;
};

DecodeResult decode_block(const FlaggedBits& input, MeasurementBasis basis);

/// Leaves are grouped in 4s bottom-up; leaf k of a level-j block sits in
/// level-1 block k/4, which sits in level-2 block k/16, and so on.
/// If level_flags is non-empty, level_flags[i-1] is incremented once per
/// flagged level-i block (size must be >= the block level).
DecodeResult decode_leaves(std::span<const uint8_t> leaves, MeasurementBasis basis,
                           std::span<uint32_t> level_flags = {});

/// Throws std::invalid_argument if the leaf count is not 4^level.
DecodeResult decode_recursive(const MeasurementRecord& record);

/// Level j >= 1 such that n == 4^j, or -1 otherwise.
int level_of_leaf_count(size_t n);

}  // namespace fibft
