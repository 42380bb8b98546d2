#include "fibft/sim.hpp"

#include <omp.h>

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "fibft/decoder.hpp"
#include "fibft/format.hpp"

namespace fibft {

SimMode parse_sim_mode(const std::string& s) {
    if (s == "postselect") return SimMode::PostselectBP;
    if (s == "gadget-accept") return SimMode::GadgetAccept;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

std::string sim_mode_name(SimMode m) { return m == SimMode::PostselectBP ? "postselect" : "gadget-accept"; }

SimMode default_mode(CircuitKind k) {
    return k == CircuitKind::CnotGadget ? SimMode::GadgetAccept : SimMode::PostselectBP;
}

double RateEstimate::rate() const {
    if (samples == 0) return std::nan("");
    return static_cast<double>(sum) / (static_cast<double>(samples) * per_sample);
}

double RateEstimate::sigma() const {
    if (samples == 0) return std::nan("");
    const double n = static_cast<double>(samples);
    const double mean = static_cast<double>(sum) / n;
    const double var = std::max(0.0, static_cast<double>(sumsq) / n - mean * mean);
    return std::sqrt(var / n) / per_sample;
}

const RateEstimate& SimStats::rate(const std::string& name) const {
    for (const auto& r : rates) {
        if (r.name == name) return r;
    }
    throw std::out_of_range("no rate named " + name);
}

bool SimStats::has_rate(const std::string& name) const {
    for (const auto& r : rates) {
        if (r.name == name) return true;
    }
    return false;
}

void SimStats::merge(const SimStats& o) {
    trials += o.trials;
    accepted += o.accepted;
    for (size_t k = 0; k < rates.size(); k++) {
        rates[k].samples += o.rates[k].samples;
        rates[k].sum += o.rates[k].sum;
        rates[k].sumsq += o.rates[k].sumsq;
    }
}

bool SimStats::operator==(const SimStats& o) const {
    if (circuit != o.circuit || j != o.j || epsilon != o.epsilon || trials != o.trials ||
        accepted != o.accepted || rates.size() != o.rates.size()) {
        return false;
    }
    for (size_t k = 0; k < rates.size(); k++) {
        const auto &a = rates[k], &b = o.rates[k];
        if (a.name != b.name || a.samples != b.samples || a.sum != b.sum || a.sumsq != b.sumsq) return false;
    }
    return true;
}

const char* SimStats::csv_header() { return "circuit,j,epsilon,trials,accepted,rate-name,rate,halfwidth"; }

void SimStats::write_csv(std::ostream& out, bool header) const {
    if (header) out << csv_header() << '\n';
    for (const auto& r : rates) {
        out << circuit << ',' << j << ',' << sci(epsilon) << ',' << trials << ',' << accepted << ','
            << r.name << ',' << sci(r.rate()) << ',' << sci(r.halfwidth()) << '\n';
    }
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t trial_seed(uint64_t seed, uint64_t i) { return splitmix64(splitmix64(seed) ^ i); }

uint64_t threshold_for(double p) {
    if (p <= 0) return 0;
    if (p >= 1) return UINT64_MAX;
    return static_cast<uint64_t>(std::ldexp(p, 64));
}

std::string lvl(int k) { return "L" + std::to_string(k); }

int max_segment_level(const Circuit& c) {
    int m = 0;
    for (const auto& s : c.segments) m = std::max(m, s.level);
    return m;
}

// Rate layout shared by all threads; indices are fixed per circuit.
struct Layout {
    SimStats proto;
    size_t acceptance = 0;
    size_t nested = 0;  // first nested_acceptance entry, levels 1..max_seg
    int max_seg = 0;
    size_t first_cond = 0;

    explicit Layout(const Circuit& c, double eps) {
        proto.circuit = circuit_kind_name(c.kind);
        proto.j = c.level;
        proto.epsilon = eps;
        auto add = [&](std::string name, uint32_t per = 1) {
            RateEstimate r;
            r.name = std::move(name);
            r.per_sample = per;
            proto.rates.push_back(r);
            return proto.rates.size() - 1;
        };
        acceptance = add("acceptance");
        max_seg = max_segment_level(c);
        nested = proto.rates.size();
        for (int k = 1; k <= max_seg; k++) add("nested_acceptance_" + lvl(k));
        first_cond = proto.rates.size();
        switch (c.kind) {
            case CircuitKind::BellPair:
                for (char m : {'x', 'z'}) {
                    const std::string t(1, m);
                    add("bell_" + t + "_error");
                    if (c.level == 0) continue;
                    add("detect_" + t, 2);
                    add("joint_detect_" + t);
                    for (int i = 1; i <= c.level; i++) {
                        add("flag_" + t + "_" + lvl(i), 2u << (2 * (c.level - i)));
                    }
                }
                break;
            case CircuitKind::CnotGadget:
                for (const char* n : {"fail_c_x", "fail_c_z", "fail_t_x", "fail_t_z"}) add(n);
                add("fail_any");
                add("input_teleport_error", 4);
                break;
            case CircuitKind::Purification:
                add("x_error");
                break;
        }
    }
};

class TrialRunner {
  public:
    TrialRunner(const Circuit& c, const NoiseParams& p, SimMode mode, const Layout& layout)
        : c_(c), mode_(mode), layout_(layout) {
        t_cnot_ = threshold_for(p.epsilon);
        t_flip_ = threshold_for(p.epsilon * 8.0 / 15.0);
        x_.assign(c.num_qubits, 0);
        z_.assign(c.num_qubits, 0);
        meas_.assign(c.num_measurements, 0);
        int maxl = c.level;
        for (const auto& r : c.records) maxl = std::max(maxl, r.level);
        leaves_.assign(size_t{1} << (2 * std::max(maxl, 1)), 0);
        lx_.resize(maxl + 1);
        lz_.resize(maxl + 1);
        for (int k = 1; k <= maxl; k++) {
            lx_[k] = logical_x_positions(k);
            lz_[k] = logical_z_positions(k);
        }
        flags_.assign(std::max(c.level, 1), 0);
        seg_ok_.assign(layout.max_seg + 1, 0);
        seg_fail_.assign(layout.max_seg + 1, 0);
    }

    void set_injected(const std::vector<std::vector<Fault>>* faults) { inject_ = faults; }

    void run(uint64_t seed, SimStats& out) {
        std::mt19937_64 rng(seed);
        std::fill(seg_ok_.begin(), seg_ok_.end(), 0);
        std::fill(seg_fail_.begin(), seg_fail_.end(), 0);
        gadget_fail_ = 0;
        input_err_ = 0;
        const bool ok = execute(rng);

        out.trials++;
        bump(out.rates[layout_.acceptance], ok);
        for (int k = 1; k <= layout_.max_seg; k++) {
            auto& r = out.rates[layout_.nested + k - 1];
            r.samples += seg_ok_[k] + seg_fail_[k];
            r.sum += seg_ok_[k];
            r.sumsq += seg_ok_[k];
        }
        if (!ok) return;
        out.accepted++;
        observe(out);
    }

  private:
    static void bump(RateEstimate& r, uint64_t v) {
        r.samples++;
        r.sum += v;
        r.sumsq += v * v;
    }

    DecodeResult decode_meas(const std::vector<uint32_t>& idx, MeasurementBasis basis) {
        for (size_t k = 0; k < idx.size(); k++) leaves_[k] = meas_[idx[k]];
        return decode_leaves({leaves_.data(), idx.size()}, basis);
    }

    DecodeResult decode_frame(const Block& b, const std::vector<uint8_t>& frame, MeasurementBasis basis,
                              std::span<uint32_t> flags) {
        for (size_t k = 0; k < b.size(); k++) leaves_[k] = frame[b[k]];
        return decode_leaves({leaves_.data(), b.size()}, basis, flags);
    }

    void inject(size_t i, const Op& op) {
        for (const Fault& ft : (*inject_)[i]) {
            x_[op.q0] ^= ft.x0;
            z_[op.q0] ^= ft.z0;
            if (op.kind == OpKind::Cnot) {
                x_[op.q1] ^= ft.x1;
                z_[op.q1] ^= ft.z1;
            }
        }
    }

    void apply_op(size_t i, std::mt19937_64& rng) {
        const Op& op = c_.ops[i];
        const bool injecting = inject_ && !(*inject_)[i].empty();
        switch (op.kind) {
            case OpKind::PrepZero:
                z_[op.q0] = 0;
                x_[op.q0] = op.noisy && t_flip_ && rng() < t_flip_;
                break;
            case OpKind::PrepPlus:
                x_[op.q0] = 0;
                z_[op.q0] = op.noisy && t_flip_ && rng() < t_flip_;
                break;
            case OpKind::Cnot:
                x_[op.q1] ^= x_[op.q0];
                z_[op.q0] ^= z_[op.q1];
                if (t_cnot_ && rng() < t_cnot_) {
                    const unsigned k = 1 + static_cast<unsigned>(rng() % 15);
                    x_[op.q0] ^= k & 1;
                    z_[op.q0] ^= (k >> 1) & 1;
                    x_[op.q1] ^= (k >> 2) & 1;
                    z_[op.q1] ^= (k >> 3) & 1;
                }
                break;
            case OpKind::MeasureZ:
                if (injecting) inject(i, op);
                meas_[op.meas] = x_[op.q0] ^ (op.noisy && t_flip_ && rng() < t_flip_);
                return;
            case OpKind::MeasureX:
                if (injecting) inject(i, op);
                meas_[op.meas] = z_[op.q0] ^ (op.noisy && t_flip_ && rng() < t_flip_);
                return;
        }
        if (injecting) inject(i, op);
    }

    bool execute(std::mt19937_64& rng) {
        const size_t nops = c_.ops.size(), nrec = c_.records.size();
        size_t pc = 0, r = 0;
        uint64_t restarts = 0;
        while (true) {
            bool restarted = false;
            while (r < nrec && c_.records[r].after_op == pc) {
                const auto& rec = c_.records[r];
                const DecodeResult dz = decode_meas(rec.z_meas, MeasurementBasis::ZBasis);
                const DecodeResult dx = decode_meas(rec.x_meas, MeasurementBasis::XBasis);
                const bool postselect = rec.segment >= 0 || mode_ == SimMode::PostselectBP;
                if (postselect && (dz.flagged || dx.flagged)) {
                    if (rec.segment < 0 || inject_) return false;
                    const Segment& s = c_.segments[rec.segment];
                    seg_fail_[s.level]++;
                    if (++restarts > kMaxRestarts) {
                        throw std::runtime_error("nested preparation keeps failing; epsilon too large");
                    }
                    pc = s.op_begin;
                    r = s.rec_begin;
                    restarted = true;
                    break;
                }
                if (rec.role == RecordRole::GadgetInput) {
                    // Input corrections are taken as exact; a misdecode here is
                    // the previous gadget's failure.
                    input_err_ += dz.value + dx.value;
                } else {
                    if (dz.value) {
                        for (uint32_t p : lx_[rec.level]) x_[rec.out[p]] ^= 1;
                    }
                    if (dx.value) {
                        for (uint32_t p : lz_[rec.level]) z_[rec.out[p]] ^= 1;
                    }
                    if (rec.role == RecordRole::GadgetOutput) {
                        const int base = rec.gadget_role == Role::Control ? 0 : 2;
                        if (dz.value) gadget_fail_ |= 1u << base;        // type x
                        if (dx.value) gadget_fail_ |= 1u << (base + 1);  // type z
                    }
                }
                if (rec.segment >= 0 && r + 1 == c_.segments[rec.segment].rec_end) {
                    seg_ok_[c_.segments[rec.segment].level]++;
                }
                r++;
            }
            if (restarted) continue;
            if (pc == nops) break;
            apply_op(pc, rng);
            pc++;
        }
        for (uint32_t m : c_.postselect_zero) {
            if (meas_[m]) return false;
        }
        return true;
    }

    uint32_t total_flags() const {
        uint32_t n = 0;
        for (uint32_t f : flags_) n += f;
        return n;
    }

    void observe(SimStats& out) {
        size_t idx = layout_.first_cond;
        switch (c_.kind) {
            case CircuitKind::BellPair: {
                // Only v0 ^ v1 is invariant: X_L X_L and Z_L Z_L stabilize the pair.
                const int j = c_.level;
                for (int t = 0; t < 2; t++) {
                    const auto& frame = t == 0 ? x_ : z_;
                    const auto basis = t == 0 ? MeasurementBasis::ZBasis : MeasurementBasis::XBasis;
                    uint8_t v[2];
                    bool detected[2] = {false, false};
                    std::fill(flags_.begin(), flags_.end(), 0);
                    for (int b = 0; b < 2; b++) {
                        const Block& blk = c_.outputs[b];
                        if (j == 0) {
                            v[b] = frame[blk[0]];
                            continue;
                        }
                        const uint32_t before = total_flags();
                        v[b] = decode_frame(blk, frame, basis, flags_).value;
                        detected[b] = total_flags() != before;
                    }
                    bump(out.rates[idx++], v[0] ^ v[1]);
                    if (j == 0) continue;
                    bump(out.rates[idx++], detected[0] + detected[1]);
                    bump(out.rates[idx++], detected[0] && detected[1]);
                    for (int i = 1; i <= j; i++) bump(out.rates[idx++], flags_[i - 1]);
                }
                break;
            }
            case CircuitKind::CnotGadget:
                for (int k = 0; k < 4; k++) bump(out.rates[idx++], (gadget_fail_ >> k) & 1);
                bump(out.rates[idx++], gadget_fail_ != 0);
                bump(out.rates[idx++], input_err_);
                break;
            case CircuitKind::Purification:
                bump(out.rates[idx++], x_[c_.outputs[0][0]]);
                break;
        }
    }

    static constexpr uint64_t kMaxRestarts = 100'000'000;

    const Circuit& c_;
    SimMode mode_;
    const Layout& layout_;
    uint64_t t_cnot_ = 0, t_flip_ = 0;
    std::vector<uint8_t> x_, z_, meas_, leaves_;
    std::vector<std::vector<uint32_t>> lx_, lz_;
    std::vector<uint64_t> seg_ok_, seg_fail_;
    std::vector<uint32_t> flags_;
    unsigned gadget_fail_ = 0;
    uint32_t input_err_ = 0;
    const std::vector<std::vector<Fault>>* inject_ = nullptr;
};

void check_run_args(const NoiseParams& params, uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (!(params.epsilon >= 0 && params.epsilon <= 1)) throw std::invalid_argument("epsilon must be in [0,1]");
}

}  // namespace

SimStats run_trials_serial(const Circuit& circuit, const NoiseParams& params, uint64_t trials,
                           uint64_t seed, SimMode mode) {
    check_run_args(params, trials);
    const Layout layout(circuit, params.epsilon);
    SimStats stats = layout.proto;
    TrialRunner runner(circuit, params, mode, layout);
    for (uint64_t i = 0; i < trials; i++) runner.run(trial_seed(seed, i), stats);
    return stats;
}

SimStats run_trials(const Circuit& circuit, const NoiseParams& params, uint64_t trials, uint64_t seed,
                    SimMode mode) {
    check_run_args(params, trials);
    const Layout layout(circuit, params.epsilon);
    SimStats total = layout.proto;
    const int64_t n = static_cast<int64_t>(trials);
#pragma omp parallel
    {
        SimStats local = layout.proto;
        TrialRunner runner(circuit, params, mode, layout);
#pragma omp for schedule(dynamic, 256)
        for (int64_t i = 0; i < n; i++) runner.run(trial_seed(seed, static_cast<uint64_t>(i)), local);
#pragma omp critical
        total.merge(local);
    }
    return total;
}

SimStats run_with_faults(const Circuit& circuit, std::span<const Fault> faults, SimMode mode) {
    std::vector<std::vector<Fault>> at(circuit.ops.size());
    for (const auto& ft : faults) {
        if (ft.op >= circuit.ops.size()) throw std::out_of_range("fault op index out of range");
        at[ft.op].push_back(ft);
    }
    const Layout layout(circuit, 0.0);
    SimStats stats = layout.proto;
    TrialRunner runner(circuit, NoiseParams{0.0, NoiseModel::IndependentDepolarizing}, mode, layout);
    runner.set_injected(&at);
    runner.run(0, stats);
    return stats;
}

std::vector<BoundCheck> analytic_bounds(const Circuit& c, double epsilon) {
    std::vector<BoundCheck> out;
    auto add = [&](std::string name, BoundKind k, double v, bool vacuous = false) {
        BoundCheck b;
        b.rate_name = std::move(name);
        b.kind = k;
        b.bound = v;
        b.vacuous = vacuous;
        out.push_back(b);
    };
    const NoiseParams ls{epsilon, NoiseModel::LocalStochastic};

    if (c.kind == CircuitKind::Purification) {
        add("acceptance", BoundKind::Lower, std::max(0.0, 1 - 3 * epsilon));
        add("x_error", BoundKind::Upper, 8.0 / 15.0 * epsilon + 5 * epsilon * epsilon);
        return out;
    }

    const int j = c.level;
    const int top = c.kind == CircuitKind::CnotGadget ? j : j - 1;
    // Levels that the engine can reach; beyond them bounds are vacuous.
    std::vector<StepResult> levels;
    int reached = j;
    for (int k = j; k >= 0; k--) {
        try {
            levels = build_profile(ls, k);
            reached = k;
            break;
        } catch (const RecursionFailure&) {
        }
    }

    if (c.kind == CircuitKind::BellPair) {
        if (j == 0) {
            add("acceptance", BoundKind::Lower, 1.0);
            return out;
        }
        const bool ok = reached == j;
        add("acceptance", BoundKind::Lower, ok ? levels[j].acceptance : 0.0, !ok);
        for (int k = 1; k <= top; k++) {
            const bool okk = k <= reached;
            add("nested_acceptance_" + lvl(k), BoundKind::Lower, okk ? levels[k].acceptance : 0.0, !okk);
        }
        for (ErrorType m : kErrorTypes) {
            const std::string t(1, type_char(m));
            if (!ok) {
                add("bell_" + t + "_error", BoundKind::Upper, 1.0, true);
                add("detect_" + t, BoundKind::Upper, 1.0, true);
                add("joint_detect_" + t, BoundKind::Upper, 1.0, true);
                for (int i = 1; i <= j; i++) add("flag_" + t + "_" + lvl(i), BoundKind::Upper, 1.0, true);
                continue;
            }
            const auto chain = ideal_measurement_chain(levels[j].profile, m);
            const double block = std::min(1.0, chain.back().value.delta_f + chain.back().value.delta_nf);
            add("bell_" + t + "_error", BoundKind::Upper, std::min(1.0, 2 * block));
            // A block is detected if any of its level-i subblocks is flagged.
            double detect = 0;
            for (int i = 1; i <= j; i++) detect += std::ldexp(chain[i - 1].value.f, 2 * (j - i));
            detect = std::min(1.0, detect);
            add("detect_" + t, BoundKind::Upper, detect);
            add("joint_detect_" + t, BoundKind::Upper, detect * detect);
            for (int i = 1; i <= j; i++) add("flag_" + t + "_" + lvl(i), BoundKind::Upper, chain[i - 1].value.f);
        }
        return out;
    }

    // CNOT gadget
    const bool ok = reached == j;
    add("acceptance", BoundKind::Lower, 1.0);
    for (int k = 1; k <= top; k++) {
        const bool okk = k <= reached;
        add("nested_acceptance_" + lvl(k), BoundKind::Lower, okk ? levels[k].acceptance : 0.0, !okk);
    }
    GadgetResult g;
    if (ok) g = gadget_noise(levels[j].profile, ls);
    const char* names[4] = {"fail_c_x", "fail_c_z", "fail_t_x", "fail_t_z"};
    for (int k = 0; k < 4; k++) {
        const auto& t = g.top[k];
        add(names[k], BoundKind::Upper, ok ? std::min(1.0, t.delta_f + t.delta_nf) : 1.0, !ok);
    }
    add("fail_any", BoundKind::Upper, ok ? g.eps_css : 1.0, !ok);
    return out;
}

bool check_dominance(const SimStats& stats, std::vector<BoundCheck>& bounds, double nsigma) {
    bool all_ok = true;
    for (auto& b : bounds) {
        if (!stats.has_rate(b.rate_name)) {
            b.verdict = "n/a";
            continue;
        }
        const auto& r = stats.rate(b.rate_name);
        if (r.samples == 0) {
            b.verdict = "n/a";
            continue;
        }
        const double slack = nsigma * r.sigma();
        const bool pass = b.kind == BoundKind::Upper ? r.rate() - slack <= b.bound : r.rate() + slack >= b.bound;
        if (!pass) {
            b.verdict = "FAIL";
            all_ok = false;
        } else {
            b.verdict = b.vacuous ? "vacuous" : "pass";
        }
    }
    return all_ok;
}

Frame propagate_faults(const Circuit& c, std::span<const Fault> faults) {
    Frame f;
    f.x.assign(c.num_qubits, 0);
    f.z.assign(c.num_qubits, 0);
    f.meas.assign(c.num_measurements, 0);
    std::vector<std::vector<const Fault*>> at(c.ops.size());
    for (const auto& ft : faults) {
        if (ft.op >= c.ops.size()) throw std::out_of_range("fault op index out of range");
        at[ft.op].push_back(&ft);
    }
    for (size_t i = 0; i < c.ops.size(); i++) {
        const Op& op = c.ops[i];
        auto inject = [&]() {
            for (const Fault* ft : at[i]) {
                f.x[op.q0] ^= ft->x0;
                f.z[op.q0] ^= ft->z0;
                if (op.kind == OpKind::Cnot) {
                    f.x[op.q1] ^= ft->x1;
                    f.z[op.q1] ^= ft->z1;
                }
            }
        };
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus:
                f.x[op.q0] = f.z[op.q0] = 0;
                inject();
                break;
            case OpKind::Cnot:
                f.x[op.q1] ^= f.x[op.q0];
                f.z[op.q0] ^= f.z[op.q1];
                inject();
                break;
            case OpKind::MeasureZ:
                inject();
                f.meas[op.meas] = f.x[op.q0];
                break;
            case OpKind::MeasureX:
                inject();
                f.meas[op.meas] = f.z[op.q0];
                break;
        }
    }
    return f;
}

}  // namespace fibft
