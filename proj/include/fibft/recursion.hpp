// Analytic noise recursion for recursively prepared Bell pairs and CNOT gadgets,
// threshold search, ancilla bounds and overhead counting.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibft/c4.hpp"
#include "fibft/strength.hpp"

namespace fibft {

enum class NoiseModel { LocalStochastic, IndependentDepolarizing };

NoiseModel parse_noise_model(const std::string& s);
std::string noise_model_name(NoiseModel m);

struct NoiseParams {
    double epsilon = 0;
    NoiseModel model = NoiseModel::LocalStochastic;

    /// Per-type strength fed to the recursion: epsilon, or 8/15 epsilon for
    /// depolarizing noise.
    double effective() const;
};

inline constexpr int type_index(ErrorType t) { return t == ErrorType::X ? 0 : 1; }
inline constexpr std::array<ErrorType, 2> kErrorTypes{ErrorType::X, ErrorType::Z};

/// eps[type][i] is the conditional level-i strength of a j-BP, i = 0..j.
struct NoiseProfile {
    int level = 0;
    std::array<std::vector<double>, 2> eps;

    double at(ErrorType m, int i) const { return eps[type_index(m)].at(i); }
};

struct TraceEntry {
    int level;
    char type;  // 'x', 'z', or '-' for type-independent entries
    std::string quantity;
    double value;
};

struct RecursionTrace {
    std::vector<TraceEntry> entries;

    void add(int level, char type, std::string quantity, double value) {
        entries.push_back({level, type, std::move(quantity), value});
    }
    void append(const RecursionTrace& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    }
    /// Columns: level,type,quantity,value.
    void write_csv(std::ostream& out, bool header = true) const;
};

enum class Orientation { Standard, Reversed };

enum class Role { Control, Target };

struct CnotCoefficients {
    Orientation orientation = Orientation::Standard;
    std::array<double, 2> c1{1, 2};  // indexed by type_index
    std::array<double, 2> c2{4, 3};

    static CnotCoefficients for_orientation(Orientation o);
    double c1_of(ErrorType m) const { return c1[type_index(m)]; }
    double c2_of(ErrorType m) const { return c2[type_index(m)]; }
    static double c3(Role r, ErrorType m);
};

/// Orientation used at level j: reversed circuits at even j.
Orientation default_orientation(int j);

struct RecursionFailure : std::runtime_error {
    int level;
    RecursionFailure(int lvl, const std::string& what) : std::runtime_error(what), level(lvl) {}
};

struct StepResult {
    NoiseProfile profile;
    double acceptance = 1;
    RecursionTrace trace;
};

NoiseProfile bp0_profile(const NoiseParams& params);
StepResult bp1_profile(const NoiseParams& params);

/// One level of the recursion. prev must be a (j-1)-profile with j >= 2.
StepResult bpj_step(const NoiseProfile& prev, const NoiseParams& params,
                     const CnotCoefficients& coeffs, bool include_subblock_teleport);

/// Profiles for j = 0..j_max (j_max <= 16). Throws RecursionFailure with the
/// level whose acceptance bound is not positive.
std::vector<StepResult> build_profile(const NoiseParams& params, int j_max);

/// Decoding chain through add.size() C4 levels, starting from unflagged
/// strength `start`. After decoding level k (1-based), add[k-1] is added to
/// both error strengths. Entry k-1 of the result is level k; tilde holds the
/// values before the addition.
struct ChainStep {
    StrengthTriple tilde;
    StrengthTriple value;
};
std::vector<ChainStep> decode_chain(double start, const std::vector<double>& add);

struct GadgetResult {
    double eps_css = 0;
    // Top-of-chain strengths per (role, type), index 2*role + type.
    std::array<StrengthTriple, 4> top{};
    RecursionTrace trace;

    const StrengthTriple& at(Role r, ErrorType m) const {
        return top[2 * static_cast<int>(r) + type_index(m)];
    }
};

GadgetResult gadget_noise(const NoiseProfile& profile, const NoiseParams& params);

/// Ideal transversal measurement of one output block of a j-BP: chain with
/// no extra faults. Flag and error strengths per level 1..j.
std::vector<ChainStep> ideal_measurement_chain(const NoiseProfile& profile, ErrorType m);

struct ThresholdResult {
    double lo = 0, hi = 0;
    int first_level = 3;
    int j_max = 10;
    int iterations = 0;
    std::vector<double> eps_css_at_lo;     // j = 1..j_max
    std::vector<double> acceptance_at_lo;  // j = 1..j_max

    double midpoint() const { return 0.5 * (lo + hi); }
};

struct NonBracketing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest epsilon with eps_css(j) strictly decreasing for j = first_level..j_max
/// (and every level buildable). The search runs in effective-strength units,
/// so the depolarizing interval is exactly 15/8 of the local-stochastic one.
ThresholdResult threshold_scan(NoiseModel model, int j_max, double tolerance, int first_level = 3);

/// eps_css(j) for j = 1..j_max, or the failure level via RecursionFailure.
std::vector<double> eps_css_sequence(const NoiseParams& params, int j_max);

struct CurveRow {
    double epsilon;
    int j;
    double eps_css;     // 1 when the level cannot be built
    double acceptance;  // p(j|j-1), 0 when the level cannot be built
};

/// Rows for every (epsilon, j), j = 1..j_max, in input order. OpenMP-parallel
/// over epsilon; curves_serial is the reference loop.
std::vector<CurveRow> curves(NoiseModel model, const std::vector<double>& eps_list, int j_max);
std::vector<CurveRow> curves_serial(NoiseModel model, const std::vector<double>& eps_list, int j_max);

struct AncillaBounds {
    double f_dec = 0;
    double eps_dec = 0;
    double eps_anc = 0;
};

AncillaBounds ancilla_bounds(const NoiseParams& params, int j);

inline constexpr double kDistillationThreshold = 0.141;

int64_t fibonacci(int j);
double fibonacci_asymptotic(int j);

struct OverheadParams {
    int64_t r_count = 20;
    int64_t s_count = 28;
    int64_t t_count = 32;
    int64_t n = 4;
    double ell = 0;  // 0 selects r_count * N_parallel
    double M_parallel = 0;
    double N_parallel = 0;
};

struct OverheadResult {
    int64_t B = 0, C = 0, M = 0;
    int64_t C_closed = 0, M_closed = 0;
    double overhead_factor_estimate = 0;
};

/// L is the computation size, epsilon the physical and eps0 the threshold strength.
OverheadResult overhead(const OverheadParams& params, int j, double L, double epsilon, double eps0);

struct ParallelMultipliers {
    double M_parallel;
    double N_parallel;
};
ParallelMultipliers parallel_multipliers();

}  // namespace fibft
