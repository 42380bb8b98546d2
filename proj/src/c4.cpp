#include "fibft/c4.hpp"

#include <stdexcept>
#include <string>

namespace fibft {

uint8_t syndrome(const Bits4& bits) {
    return (bits[0] ^ bits[1] ^ bits[2] ^ bits[3]) & 1;
}

uint8_t logical_bit(const Bits4& bits, MeasurementBasis basis) {
    // Z-basis outcomes read Z_L = Z1 Z3; X-basis outcomes read X_L = X1 X2.
    if (basis == MeasurementBasis::ZBasis) {
        return (bits[0] ^ bits[2]) & 1;
    }
    return (bits[0] ^ bits[1]) & 1;
}

bool is_benign_pair(int a, int b, MeasurementBasis basis) {
    if (a < 1 || a > 4 || b < 1 || b > 4 || a == b) {
        throw std::invalid_argument("pair indices must be distinct and in 1..4");
    }
    uint8_t m = static_cast<uint8_t>((1u << (a - 1)) | (1u << (b - 1)));
    if (basis == MeasurementBasis::ZBasis) {
        return m == 0b0101 || m == 0b1010;
    }
    return m == 0b0011 || m == 0b1100;
}

MeasurementBasis parse_basis(std::string_view s) {
    if (s == "Z" || s == "z") return MeasurementBasis::ZBasis;
    if (s == "X" || s == "x") return MeasurementBasis::XBasis;
    throw std::invalid_argument("basis must be Z or X, got '" + std::string(s) + "'");
}

std::string_view basis_name(MeasurementBasis b) {
    return b == MeasurementBasis::ZBasis ? "Z" : "X";
}

}  // namespace fibft
