#include "fibft/circuit.hpp"

#include <stdexcept>
#include <utility>

namespace fibft {

std::string circuit_kind_name(CircuitKind k) {
    switch (k) {
        case CircuitKind::BellPair: return "bp";
        case CircuitKind::CnotGadget: return "gadget";
        case CircuitKind::Purification: return "purification";
    }
    return "?";
}

size_t Circuit::count(OpKind k) const {
    size_t n = 0;
    for (const auto& op : ops) n += op.kind == k;
    return n;
}

size_t Circuit::count_outside_bp0(OpKind k) const {
    size_t n = 0;
    for (const auto& op : ops) n += op.kind == k && !op.in_bp0;
    return n;
}

size_t Circuit::count_bell_pairs(int lvl) const {
    size_t n = 0;
    for (int l : bp_levels) n += l == lvl;
    return n;
}

void Circuit::validate() const {
    enum State : uint8_t { Fresh, Live, Dead };
    std::vector<State> st(num_qubits, Fresh);
    auto use = [&](uint32_t q) {
        if (q >= num_qubits || st[q] != Live) throw std::logic_error("qubit used outside its lifetime");
    };
    for (const auto& op : ops) {
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus:
                if (op.q0 >= num_qubits || st[op.q0] != Fresh) throw std::logic_error("qubit prepared twice");
                st[op.q0] = Live;
                break;
            case OpKind::Cnot:
                if (op.q0 == op.q1) throw std::logic_error("CNOT operands must differ");
                use(op.q0);
                use(op.q1);
                break;
            case OpKind::MeasureZ:
            case OpKind::MeasureX:
                use(op.q0);
                st[op.q0] = Dead;
                break;
        }
    }
}

std::vector<uint32_t> logical_x_positions(int level) {
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    std::vector<uint32_t> pos{0, 1};
    uint32_t width = 4;
    for (int k = 2; k <= level; k++) {
        std::vector<uint32_t> next;
        for (uint32_t s : {0u, 1u}) {
            for (uint32_t p : pos) next.push_back(s * width + p);
        }
        pos = std::move(next);
        width *= 4;
    }
    return pos;
}

std::vector<uint32_t> logical_z_positions(int level) {
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    std::vector<uint32_t> pos{0, 2};
    uint32_t width = 4;
    for (int k = 2; k <= level; k++) {
        std::vector<uint32_t> next;
        for (uint32_t s : {0u, 2u}) {
            for (uint32_t p : pos) next.push_back(s * width + p);
        }
        pos = std::move(next);
        width *= 4;
    }
    return pos;
}

namespace {

using BlockPair = std::pair<Block, Block>;

Block concat(std::initializer_list<const Block*> parts) {
    Block b;
    for (const Block* p : parts) b.insert(b.end(), p->begin(), p->end());
    return b;
}

class Builder {
  public:
    Circuit c;

    uint32_t fresh() { return c.num_qubits++; }

    void prep(OpKind k, uint32_t q, bool noisy = true) { c.ops.push_back({k, noisy, q, 0, 0, false}); }
    void cnot(uint32_t a, uint32_t b) { c.ops.push_back({OpKind::Cnot, true, a, b, 0, false}); }
    uint32_t measure(OpKind k, uint32_t q) {
        uint32_t m = c.num_measurements++;
        c.ops.push_back({k, true, q, 0, m, false});
        return m;
    }

    BlockPair bp(int j, Orientation o, bool nested) {
        c.bp_levels.push_back(j);
        if (j == 0) {
            uint32_t a = fresh(), b = fresh();
            const size_t first = c.ops.size();
            prep(OpKind::PrepPlus, a);
            prep(OpKind::PrepZero, b);
            cnot(a, b);
            for (size_t i = first; i < c.ops.size(); i++) c.ops[i].in_bp0 = true;
            return {{a}, {b}};
        }
        int seg = -1;
        if (nested) {
            seg = static_cast<int>(c.segments.size());
            Segment s;
            s.op_begin = c.ops.size();
            s.rec_begin = c.records.size();
            s.level = j;
            s.parent = current_;
            c.segments.push_back(s);
            current_ = seg;
        }

        const Orientation inner = default_orientation(j - 1);
        auto bp_b = [&]() {
            // |+>_L from pairs on subblocks (1,2),(3,4); |0>_L from (1,3),(2,4).
            BlockPair p1 = bp(j - 1, inner, true), p2 = bp(j - 1, inner, true);
            Block P = concat({&p1.first, &p1.second, &p2.first, &p2.second});
            BlockPair q1 = bp(j - 1, inner, true), q2 = bp(j - 1, inner, true);
            Block Q = concat({&q1.first, &q2.first, &q1.second, &q2.second});
            for (size_t k = 0; k < P.size(); k++) cnot(P[k], Q[k]);
            return BlockPair{std::move(P), std::move(Q)};
        };
        BlockPair main = bp_b();
        BlockPair aux1 = bp_b();
        BlockPair aux2 = bp_b();
        Block o1 = teleport(main.first, aux1, o, j);
        Block o2 = teleport(main.second, aux2, o, j);

        if (j >= 3) {
            const size_t w = o1.size() / 4;
            for (Block* out : {&o1, &o2}) {
                for (size_t s = 0; s < 4; s++) {
                    Block sub(out->begin() + s * w, out->begin() + (s + 1) * w);
                    BlockPair via = bp(j - 1, inner, true);
                    Block moved = teleport(sub, via, o, j - 1);
                    std::copy(moved.begin(), moved.end(), out->begin() + s * w);
                }
            }
        }

        if (nested) {
            c.segments[seg].op_end = c.ops.size();
            c.segments[seg].rec_end = c.records.size();
            current_ = c.segments[seg].parent;
        }
        return {std::move(o1), std::move(o2)};
    }

    /// Bell measurement of D with one half of `via`; returns the other half.
    Block teleport(const Block& D, const BlockPair& via, Orientation o, int level,
                   RecordRole role = RecordRole::Internal, Role grole = Role::Control) {
        const bool std_o = o == Orientation::Standard;
        const Block& out = std_o ? via.first : via.second;
        const Block& in = std_o ? via.second : via.first;
        TeleportRecord rec;
        rec.level = level;
        rec.out = out;
        rec.segment = current_;
        rec.role = role;
        rec.gadget_role = grole;
        if (std_o) {
            for (size_t k = 0; k < D.size(); k++) cnot(D[k], in[k]);
            for (uint32_t q : D) rec.x_meas.push_back(measure(OpKind::MeasureX, q));
            for (uint32_t q : in) rec.z_meas.push_back(measure(OpKind::MeasureZ, q));
        } else {
            for (size_t k = 0; k < D.size(); k++) cnot(in[k], D[k]);
            for (uint32_t q : in) rec.x_meas.push_back(measure(OpKind::MeasureX, q));
            for (uint32_t q : D) rec.z_meas.push_back(measure(OpKind::MeasureZ, q));
        }
        rec.after_op = c.ops.size();
        c.records.push_back(std::move(rec));
        return out;
    }

  private:
    int current_ = -1;
};

}  // namespace

Circuit build_bp_circuit(int j, Orientation orientation) {
    if (j < 0 || j > 3) throw std::invalid_argument("Bell-pair circuits are supported for j in 0..3");
    Builder b;
    b.c.kind = CircuitKind::BellPair;
    b.c.level = j;
    b.c.orientation = orientation;
    auto out = b.bp(j, orientation, false);
    b.c.bp_levels.erase(b.c.bp_levels.begin());  // the top-level pair itself
    b.c.outputs = {std::move(out.first), std::move(out.second)};
    return std::move(b.c);
}

Circuit build_bp_circuit(int j) { return build_bp_circuit(j, default_orientation(j)); }

Circuit build_cnot_gadget(int j) {
    if (j < 1 || j > 2) throw std::invalid_argument("CNOT gadgets are supported for j in 1..2");
    Builder b;
    b.c.kind = CircuitKind::CnotGadget;
    b.c.level = j;
    const size_t n = size_t{1} << (2 * j);
    Block data_c(n), data_t(n);
    for (auto& q : data_c) {
        q = b.fresh();
        b.prep(OpKind::PrepZero, q, false);
    }
    for (auto& q : data_t) {
        q = b.fresh();
        b.prep(OpKind::PrepPlus, q, false);
    }
    const Orientation o = default_orientation(j);
    auto in_c = b.bp(j, o, true);
    auto in_t = b.bp(j, o, true);
    Block c1 = b.teleport(data_c, in_c, Orientation::Standard, j, RecordRole::GadgetInput, Role::Control);
    Block t1 = b.teleport(data_t, in_t, Orientation::Standard, j, RecordRole::GadgetInput, Role::Target);
    for (size_t k = 0; k < n; k++) b.cnot(c1[k], t1[k]);
    auto out_c = b.bp(j, o, true);
    auto out_t = b.bp(j, o, true);
    Block c2 = b.teleport(c1, out_c, Orientation::Standard, j, RecordRole::GadgetOutput, Role::Control);
    Block t2 = b.teleport(t1, out_t, Orientation::Standard, j, RecordRole::GadgetOutput, Role::Target);
    b.c.outputs = {std::move(c2), std::move(t2)};
    return std::move(b.c);
}

Circuit build_purification_circuit() {
    Builder b;
    b.c.kind = CircuitKind::Purification;
    uint32_t q0 = b.fresh(), q1 = b.fresh();
    b.prep(OpKind::PrepZero, q0);
    b.prep(OpKind::PrepZero, q1);
    b.cnot(q0, q1);
    b.c.postselect_zero.push_back(b.measure(OpKind::MeasureZ, q1));
    b.c.outputs = {{q0}};
    return std::move(b.c);
}

}  // namespace fibft
