// Pauli-frame Monte Carlo over the circuits in circuit.hpp.
//
// Noise: each CNOT is followed by one of the 15 non-identity two-qubit Paulis
// with probability eps/15 each; |0> (|+>) preparations suffer an X (Z) flip and
// Z (X) measurements a flipped outcome, each with probability 8/15 eps.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fibft/circuit.hpp"

namespace fibft {

enum class SimMode { PostselectBP, GadgetAccept };

SimMode parse_sim_mode(const std::string& s);
std::string sim_mode_name(SimMode m);
SimMode default_mode(CircuitKind k);

/// Ratio estimate built from per-sample integer counts; each sample
/// contributes a value in [0, per_sample].
struct RateEstimate {
    std::string name;
    uint32_t per_sample = 1;
    uint64_t samples = 0;
    uint64_t sum = 0;
    uint64_t sumsq = 0;

    double rate() const;
    double sigma() const;  // standard error of rate()
    double halfwidth() const { return 1.96 * sigma(); }
};

struct SimStats {
    std::string circuit;
    int j = 0;
    double epsilon = 0;
    uint64_t trials = 0;
    uint64_t accepted = 0;
    std::vector<RateEstimate> rates;

    bool has_conditional() const { return accepted > 0; }
    const RateEstimate& rate(const std::string& name) const;
    bool has_rate(const std::string& name) const;
    void merge(const SimStats& other);
    bool operator==(const SimStats& o) const;

    static const char* csv_header();
    void write_csv(std::ostream& out, bool header = true) const;
};

/// OpenMP-parallel over trials. Trial i draws from a stream seeded by (seed, i)
/// and counts merge as integers, so the result is identical to run_trials_serial.
SimStats run_trials(const Circuit& circuit, const NoiseParams& params, uint64_t trials, uint64_t seed,
                    SimMode mode);
SimStats run_trials_serial(const Circuit& circuit, const NoiseParams& params, uint64_t trials,
                           uint64_t seed, SimMode mode);

enum class BoundKind { Upper, Lower };

struct BoundCheck {
    std::string rate_name;
    BoundKind kind = BoundKind::Upper;
    double bound = 0;
    bool vacuous = false;  // analytic engine fails at this strength
    std::string verdict;   // "pass", "FAIL", "vacuous" or "n/a"
};

/// Analytic bounds for the rates produced by run_trials, from the
/// local-stochastic engine at the same epsilon (depolarizing noise at eps is
/// local stochastic with strength eps).
std::vector<BoundCheck> analytic_bounds(const Circuit& circuit, double epsilon);

/// Fills verdicts: an upper bound passes if rate - nsigma*sigma <= bound, a
/// lower bound if rate + nsigma*sigma >= bound. Returns false on any failure.
bool check_dominance(const SimStats& stats, std::vector<BoundCheck>& bounds, double nsigma = 3.0);

/// Fault injected at an op: applied after a preparation or CNOT, before a
/// measurement. For a CNOT, (x0,z0) act on the control and (x1,z1) on the target.
struct Fault {
    size_t op = 0;
    bool x0 = false, z0 = false, x1 = false, z1 = false;
};

struct Frame {
    std::vector<uint8_t> x, z;  // per qubit, after the last op
    std::vector<uint8_t> meas;  // raw flipped-outcome bits per measurement
    bool operator==(const Frame&) const = default;
};

/// One noise-free trial with the given faults injected. A flagged nested
/// preparation rejects the trial instead of restarting it.
SimStats run_with_faults(const Circuit& circuit, std::span<const Fault> faults, SimMode mode);

/// Noise-free propagation of the given faults through the quantum ops only
/// (no teleportation corrections).
Frame propagate_faults(const Circuit& circuit, std::span<const Fault> faults);

}  // namespace fibft
