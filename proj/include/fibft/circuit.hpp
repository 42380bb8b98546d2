// Clifford circuits of the scheme: Bell-pair preparation, CNOT gadget and the
// |0> purification check. Qubits are fresh integers; every qubit is prepared
// exactly once and measured at most once.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fibft/recursion.hpp"

namespace fibft {

enum class OpKind : uint8_t { PrepZero, PrepPlus, Cnot, MeasureZ, MeasureX };

struct Op {
    OpKind kind;
    bool noisy = true;
    uint32_t q0 = 0;
    uint32_t q1 = 0;    // CNOT target
    uint32_t meas = 0;  // measurement index for MeasureZ/MeasureX
    bool in_bp0 = false;
};

/// Qubit ids of a level-k block in leaf order (subblock s occupies
/// positions [s*4^(k-1), (s+1)*4^(k-1))).
using Block = std::vector<uint32_t>;

enum class RecordRole : uint8_t { Internal, GadgetInput, GadgetOutput };

/// Classical side of a teleportation: decode both measured blocks, then apply
/// X_L (from the Z-measured block) and Z_L (from the X-measured block) to `out`.
struct TeleportRecord {
    size_t after_op = 0;  // handled once ops [0, after_op) have executed
    int level = 1;
    std::vector<uint32_t> z_meas;
    std::vector<uint32_t> x_meas;
    Block out;
    int segment = -1;  // owning nested preparation, -1 for the top circuit
    RecordRole role = RecordRole::Internal;
    Role gadget_role = Role::Control;
};

/// A nested j-BP preparation; restarted in place until accepted.
struct Segment {
    size_t op_begin = 0, op_end = 0;
    size_t rec_begin = 0, rec_end = 0;
    int level = 0;
    int parent = -1;
};

enum class CircuitKind { BellPair, CnotGadget, Purification };

std::string circuit_kind_name(CircuitKind k);

struct Circuit {
    CircuitKind kind = CircuitKind::BellPair;
    int level = 0;
    Orientation orientation = Orientation::Standard;
    uint32_t num_qubits = 0;
    uint32_t num_measurements = 0;
    std::vector<Op> ops;
    std::vector<TeleportRecord> records;
    std::vector<Segment> segments;
    std::vector<Block> outputs;
    std::vector<uint32_t> postselect_zero;  // measurement indices that must read 0
    std::vector<int> bp_levels;             // level of every nested Bell pair built

    size_t count(OpKind k) const;
    /// Ops of the given kind outside 0-BP preparations.
    size_t count_outside_bp0(OpKind k) const;
    /// Nested Bell pairs of the given level, including 0-BPs.
    size_t count_bell_pairs(int level) const;
    /// Throws std::logic_error if a qubit is used outside its lifetime or a
    /// CNOT has equal operands.
    void validate() const;
};

/// j in 0..3. Subblock teleportation is included for j >= 3.
Circuit build_bp_circuit(int j, Orientation orientation);
Circuit build_bp_circuit(int j);
/// j in 1..2: ideal data blocks teleported in, transversal CNOT, teleported out.
Circuit build_cnot_gadget(int j);
Circuit build_purification_circuit();

/// Leaf positions of X_L and Z_L for a level-k block (k >= 1).
std::vector<uint32_t> logical_x_positions(int level);
std::vector<uint32_t> logical_z_positions(int level);

}  // namespace fibft
