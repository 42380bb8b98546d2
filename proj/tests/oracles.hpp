// Independent reference implementations shared by the unit and acceptance tests.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fibft/decoder.hpp"

namespace oracle {

using fibft::MeasurementBasis;

// Table-driven decoder: a 256-entry lookup per basis indexed by
// (flags << 4) | bits, built from the logical masks alone and applied top-down.
struct RefEntry {
    uint8_t value;
    bool flagged;
};

inline uint8_t logical_mask(MeasurementBasis b) { return b == MeasurementBasis::ZBasis ? 0b0101 : 0b0011; }

inline std::array<RefEntry, 256> make_table(MeasurementBasis b) {
    std::array<RefEntry, 256> t{};
    for (unsigned flags = 0; flags < 16; flags++) {
        for (unsigned bits = 0; bits < 16; bits++) {
            int nf = __builtin_popcount(flags);
            bool odd = __builtin_popcount(bits) & 1;
            unsigned corr = 0;
            bool flagged = false;
            if (nf == 0) {
                corr = odd ? 1u : 0u;
                flagged = odd;
            } else if (nf == 1) {
                corr = odd ? flags : 0u;
            } else {
                corr = odd ? (flags & -flags) : 0u;
                for (unsigned a = 0; a < 4; a++)
                    for (unsigned c = a + 1; c < 4; c++) {
                        unsigned pair = (1u << a) | (1u << c);
                        if ((flags & pair) == pair && (__builtin_popcount(pair & logical_mask(b)) & 1)) flagged = true;
                    }
            }
            uint8_t value = __builtin_popcount((bits ^ corr) & logical_mask(b)) & 1;
            t[(flags << 4) | bits] = {value, flagged};
        }
    }
    return t;
}

inline RefEntry ref_decode(const std::vector<uint8_t>& leaves, size_t begin, size_t len,
                           const std::array<RefEntry, 256>& t) {
    if (len == 1) return {leaves[begin], false};
    size_t q = len / 4;
    unsigned bits = 0, flags = 0;
    for (unsigned k = 0; k < 4; k++) {
        RefEntry sub = ref_decode(leaves, begin + k * q, q, t);
        bits |= unsigned(sub.value) << k;
        flags |= unsigned(sub.flagged) << k;
    }
    return t[(flags << 4) | bits];
}

inline RefEntry ref_decode(const std::vector<uint8_t>& leaves, MeasurementBasis b) {
    static const auto tz = make_table(MeasurementBasis::ZBasis);
    static const auto tx = make_table(MeasurementBasis::XBasis);
    return ref_decode(leaves, 0, leaves.size(), b == MeasurementBasis::ZBasis ? tz : tx);
}

// Mismatches between decode_recursive and the table decoder over all leaf
// patterns of weight <= 2 at level j.
inline size_t weight_two_mismatches(int j, MeasurementBasis b, size_t* checked = nullptr) {
    const size_t n = size_t{1} << (2 * j);
    size_t bad = 0;
    for (size_t a = 0; a <= n; a++) {
        for (size_t c = a; c <= n; c++) {
            std::vector<uint8_t> leaves(n, 0);
            if (a < n) leaves[a] ^= 1;
            if (c < n && c != a) leaves[c] ^= 1;
            auto got = fibft::decode_recursive({j, b, leaves});
            RefEntry want = ref_decode(leaves, b);
            bad += got.value != want.value || got.flagged != want.flagged;
            if (checked) ++*checked;
        }
    }
    return bad;
}

// Block-level probabilities under decode_block for i.i.d. bits with
// per-bit table p[err][flag].
struct BlockProbs {
    double flagged = 0, flagged_err = 0, unflagged_err = 0;
};

inline BlockProbs enumerate_block(const double (&p)[2][2], MeasurementBasis basis) {
    BlockProbs out;
    for (unsigned u = 0; u < 16; u++) {
        for (unsigned v = 0; v < 16; v++) {
            double w = 1;
            fibft::FlaggedBits in;
            for (int i = 0; i < 4; i++) {
                unsigned e = u >> i & 1, f = v >> i & 1;
                w *= p[e][f];
                in.bits[i] = e;
                in.flags[i] = f;
            }
            if (w == 0) continue;
            auto r = fibft::decode_block(in, basis);
            if (r.flagged) out.flagged += w;
            if (r.flagged && r.value) out.flagged_err += w;
            if (!r.flagged && r.value) out.unflagged_err += w;
        }
    }
    return out;
}

// Per-bit table saturating (scale 1) or scaled below the strength triple.
inline void dominated_table(double f, double df, double dn, double scale, double (&p)[2][2]) {
    p[1][1] = scale * (f < df ? f : df);
    p[0][1] = scale * f - p[1][1];
    p[1][0] = scale * dn;
    p[0][0] = 1 - p[0][1] - p[1][1] - p[1][0];
}

// Exact enumeration over the four fault locations of the |0> purification
// circuit under the simulator's depolarizing channel.
struct PurificationExact {
    double acceptance = 0, x_error = 0;
};

inline PurificationExact purification_exact(double e) {
    const double pf = 8.0 / 15.0 * e;
    double acc = 0, err = 0;
    for (int f0 = 0; f0 < 2; f0++)
        for (int f1 = 0; f1 < 2; f1++)
            for (int k = 0; k < 16; k++)
                for (int mf = 0; mf < 2; mf++) {
                    double w = (f0 ? pf : 1 - pf) * (f1 ? pf : 1 - pf) * (mf ? pf : 1 - pf) * (k ? e / 15 : 1 - e);
                    int out = f0 ^ (k & 1);
                    int m = f1 ^ f0 ^ (k >> 2 & 1) ^ mf;
                    if (m) continue;
                    acc += w;
                    err += w * out;
                }
    return {acc, err / acc};
}

}  // namespace oracle
