#include "fibft/decoder.hpp"

#include <stdexcept>

namespace fibft {

DecodeResult decode_block(const FlaggedBits& input, MeasurementBasis basis) {
    Bits4 b = input.bits;
    int flagged_idx[4];
    int nf = 0;
    for (int i = 0; i < 4; i++) {
        if (input.flags[i]) flagged_idx[nf++] = i;
    }
    bool odd = syndrome(b) != 0;
    DecodeResult r;
    if (nf == 0) {
        if (odd) b[0] ^= 1;
        r.flagged = odd;
    } else if (nf == 1) {
        if (odd) b[flagged_idx[0]] ^= 1;
    } else {
        for (int p = 0; p < nf && !r.flagged; p++) {
            for (int q = p + 1; q < nf; q++) {
                if (!is_benign_pair(flagged_idx[p] + 1, flagged_idx[q] + 1, basis)) {
                    r.flagged = true;
                    break;
                }
            }
        }
        if (odd) b[flagged_idx[0]] ^= 1;
    }
    r.value = logical_bit(b, basis);
    return r;
}

int level_of_leaf_count(size_t n) {
    if (n < 4) return -1;
    int j = 0;
    while (n > 1) {
        if (n % 4 != 0) return -1;
        n /= 4;
        j++;
    }
    return j;
}

namespace {

template <typename Buf>
DecodeResult decode_into(std::span<const uint8_t> leaves, MeasurementBasis basis,
                         std::span<uint32_t> level_flags, Buf& buf) {
    size_t n = leaves.size() / 4;
    int level = 1;
    for (size_t k = 0; k < n; k++) {
        FlaggedBits fb;
        for (int q = 0; q < 4; q++) fb.bits[q] = leaves[4 * k + q] & 1;
        buf[k] = decode_block(fb, basis);
        if (!level_flags.empty() && buf[k].flagged) level_flags[0]++;
    }
    while (n > 1) {
        n /= 4;
        level++;
        for (size_t k = 0; k < n; k++) {
            FlaggedBits fb;
            for (int q = 0; q < 4; q++) {
                fb.bits[q] = buf[4 * k + q].value;
                fb.flags[q] = buf[4 * k + q].flagged;
            }
            buf[k] = decode_block(fb, basis);
            if (!level_flags.empty() && buf[k].flagged) level_flags[level - 1]++;
        }
    }
    return buf[0];
}

}  // namespace

DecodeResult decode_leaves(std::span<const uint8_t> leaves, MeasurementBasis basis,
                           std::span<uint32_t> level_flags) {
    int level = level_of_leaf_count(leaves.size());
    if (level < 1) throw std::invalid_argument("leaf count must be a power of 4");
    if (!level_flags.empty() && level_flags.size() < static_cast<size_t>(level)) {
        throw std::invalid_argument("level_flags too short");
    }
    if (leaves.size() <= 256) {
        std::array<DecodeResult, 64> buf;
        return decode_into(leaves, basis, level_flags, buf);
    }
    std::vector<DecodeResult> buf(leaves.size() / 4);
    return decode_into(leaves, basis, level_flags, buf);
}

DecodeResult decode_recursive(const MeasurementRecord& record) {
    int level = level_of_leaf_count(record.leaves.size());
    if (level < 1) throw std::invalid_argument("leaf count must be a power of 4");
    if (level != record.level) {
        throw std::invalid_argument("leaf count does not match record level");
    }
    return decode_leaves(record.leaves, record.basis);
}

}  // namespace fibft
