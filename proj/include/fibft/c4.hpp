// The C4 code: checks XXXX and ZZZZ, one logical and one gauge qubit.
// Qubit indices are 1-based; bit arrays are 0-based with index = qubit - 1.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace fibft {

enum class ErrorType : uint8_t { X, Z };
enum class MeasurementBasis : uint8_t { ZBasis, XBasis };

/// Basis whose measurement detects errors of the given type.
constexpr MeasurementBasis detecting_basis(ErrorType t) {
    return t == ErrorType::X ? MeasurementBasis::ZBasis : MeasurementBasis::XBasis;
}

constexpr char type_char(ErrorType t) { return t == ErrorType::X ? 'x' : 'z'; }

using Bits4 = std::array<uint8_t, 4>;

// Operator supports as 4-bit masks; bit (q-1) set means qubit q is in the support.
struct Support {
    uint8_t mask;
    constexpr bool contains(int q) const { return (mask >> (q - 1)) & 1; }
    constexpr int weight() const { return __builtin_popcount(mask); }
};

enum class PauliKind : uint8_t { XType, ZType };

struct PauliOperator {
    PauliKind kind;
    Support support;
};

struct C4Operators {
    PauliOperator check_x{PauliKind::XType, {0b1111}};
    PauliOperator check_z{PauliKind::ZType, {0b1111}};
    PauliOperator logical_z{PauliKind::ZType, {0b0101}};  // {1,3}
    PauliOperator logical_x{PauliKind::XType, {0b0011}};  // {1,2}
    PauliOperator gauge_z{PauliKind::ZType, {0b1100}};    // {3,4}
    PauliOperator gauge_x{PauliKind::XType, {0b0101}};    // {1,3}
};

inline constexpr C4Operators kC4{};

/// Two Pauli operators of the same kind always commute; X and Z types commute
/// iff their supports overlap on an even number of qubits.
constexpr bool commutes(const PauliOperator& a, const PauliOperator& b) {
    if (a.kind == b.kind) return true;
    return (__builtin_popcount(a.support.mask & b.support.mask) & 1) == 0;
}

uint8_t syndrome(const Bits4& bits);
uint8_t logical_bit(const Bits4& bits, MeasurementBasis basis);

/// Pair indices are 1-based and must be distinct. Throws std::invalid_argument otherwise.
bool is_benign_pair(int a, int b, MeasurementBasis basis);

MeasurementBasis parse_basis(std::string_view s);
std::string_view basis_name(MeasurementBasis b);

}  // namespace fibft
