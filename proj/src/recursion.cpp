#include "fibft/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fibft/format.hpp"

namespace fibft {

namespace {

double clamp1(double x) { return std::min(1.0, x); }

void check_params(const NoiseParams& p) {
    if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0,1]");
}

NoiseProfile empty_profile(int j) {
    NoiseProfile p;
    p.level = j;
    p.eps[0].assign(j + 1, 0.0);
    p.eps[1].assign(j + 1, 0.0);
    return p;
}

void condition(NoiseProfile& prof, double p, RecursionTrace& trace) {
    for (ErrorType m : kErrorTypes) {
        auto& v = prof.eps[type_index(m)];
        for (size_t i = 0; i < v.size(); i++) {
            trace.add(static_cast<int>(i), type_char(m), "eps_uncond", v[i]);
            v[i] = clamp1(v[i] / p);
            trace.add(static_cast<int>(i), type_char(m), "eps", v[i]);
        }
    }
}

void trace_chain(RecursionTrace& t, char type, const std::string& q, double start,
                 const std::vector<ChainStep>& chain, int first_level = 0) {
    t.add(first_level, type, q + "_nf", start);
    for (size_t k = 0; k < chain.size(); k++) {
        int lvl = first_level + static_cast<int>(k) + 1;
        const auto& s = chain[k];
        t.add(lvl, type, "f^" + q, s.value.f);
        t.add(lvl, type, q + "~_f", s.tilde.delta_f);
        t.add(lvl, type, q + "~_nf", s.tilde.delta_nf);
        t.add(lvl, type, q + "_f", s.value.delta_f);
        t.add(lvl, type, q + "_nf", s.value.delta_nf);
    }
}

}  // namespace

NoiseModel parse_noise_model(const std::string& s) {
    if (s == "local-stochastic" || s == "ls") return NoiseModel::LocalStochastic;
    if (s == "depolarizing" || s == "depol") return NoiseModel::IndependentDepolarizing;
    throw std::invalid_argument("unknown noise model '" + s + "'");
}

std::string noise_model_name(NoiseModel m) {
    return m == NoiseModel::LocalStochastic ? "local-stochastic" : "depolarizing";
}

double NoiseParams::effective() const {
    return model == NoiseModel::IndependentDepolarizing ? epsilon * 8.0 / 15.0 : epsilon;
}

void RecursionTrace::write_csv(std::ostream& out, bool header) const {
    if (header) out << "level,type,quantity,value\n";
    for (const auto& e : entries) {
        out << e.level << ',' << e.type << ',' << e.quantity << ',' << sci(e.value) << '\n';
    }
}

CnotCoefficients CnotCoefficients::for_orientation(Orientation o) {
    CnotCoefficients c;
    c.orientation = o;
    if (o == Orientation::Reversed) {
        std::swap(c.c1[0], c.c1[1]);
        std::swap(c.c2[0], c.c2[1]);
    }
    return c;
}

double CnotCoefficients::c3(Role r, ErrorType m) {
    bool same = (r == Role::Control) == (m == ErrorType::X);
    return same ? 2.0 : 3.0;
}

Orientation default_orientation(int j) {
    return j % 2 == 0 ? Orientation::Reversed : Orientation::Standard;
}

std::vector<ChainStep> decode_chain(double start, const std::vector<double>& add) {
    std::vector<ChainStep> out;
    out.reserve(add.size());
    StrengthTriple cur{0, 0, clamp1(start)};
    for (double a : add) {
        ChainStep s;
        s.tilde = decode_strengths(cur);
        s.value = s.tilde;
        s.value.delta_f = clamp1(s.value.delta_f + a);
        s.value.delta_nf = clamp1(s.value.delta_nf + a);
        out.push_back(s);
        cur = s.value;
    }
    return out;
}

NoiseProfile bp0_profile(const NoiseParams& params) {
    check_params(params);
    NoiseProfile p = empty_profile(0);
    p.eps[0][0] = p.eps[1][0] = params.effective();
    return p;
}

StepResult bp1_profile(const NoiseParams& params) {
    check_params(params);
    const double e = params.effective();
    const NoiseProfile prev = bp0_profile(params);
    const auto coeffs = CnotCoefficients::for_orientation(Orientation::Standard);
    StepResult res;
    res.profile = empty_profile(1);
    res.acceptance = std::pow(1.0 - e, 72);
    for (ErrorType m : kErrorTypes) {
        const char t = type_char(m);
        const double e00 = prev.at(m, 0);
        double c1 = 16 * prev.at(ErrorType::X, 0) + 16 * e;
        if (m == ErrorType::Z) c1 = 1 + 16 * prev.at(ErrorType::Z, 0) + 16 * e;
        const double b0 = 4 * e + coeffs.c2_of(m) * e00;
        const auto chain = decode_chain(b0, {0.0});
        res.trace.add(0, t, "c1", c1);
        trace_chain(res.trace, t, "b", b0, chain);
        res.profile.eps[type_index(m)][0] = clamp1(e + c1 * e00);
        res.profile.eps[type_index(m)][1] = chain.back().value.delta_nf;
    }
    res.trace.add(1, '-', "acceptance", res.acceptance);
    if (!(res.acceptance > 0)) throw RecursionFailure(1, "acceptance bound not positive at level 1");
    condition(res.profile, res.acceptance, res.trace);
    return res;
}

StepResult bpj_step(const NoiseProfile& prev, const NoiseParams& params,
                    const CnotCoefficients& coeffs, bool include_subblock_teleport) {
    check_params(params);
    const int j = prev.level + 1;
    if (j < 2) throw std::invalid_argument("bpj_step needs a profile of level >= 1");
    const double e = params.effective();
    StepResult res;
    res.profile = empty_profile(j);
    double flag_sum = 0;
    for (ErrorType m : kErrorTypes) {
        const char t = type_char(m);
        const auto& E = prev.eps[type_index(m)];
        auto& out = res.profile.eps[type_index(m)];
        const double c1 = coeffs.c1_of(m), c2 = coeffs.c2_of(m);

        std::vector<double> add_b(j, 0.0);
        for (int k = 1; k <= j - 1; k++) add_b[k - 1] = c2 * E[k];
        const double b0 = 4 * e + c2 * E[0];
        const auto block = decode_chain(b0, add_b);
        trace_chain(res.trace, t, "b", b0, block);
        out[j] = block.back().value.delta_nf;
        flag_sum += 2 * block.back().value.f;

        if (include_subblock_teleport) {
            std::vector<double> add_s(j - 1);
            for (int k = 1; k <= j - 1; k++) add_s[k - 1] = (1 + c1) * E[k];
            const double s0 = 3 * e + (1 + c1) * E[0];
            const auto sub = decode_chain(s0, add_s);
            trace_chain(res.trace, t, "s", s0, sub);
            for (int i = 0; i <= j - 2; i++) out[i] = E[i];
            out[j - 1] = clamp1(sub.back().value.delta_nf + E[j - 1]);
            flag_sum += 8 * sub.back().value.f;
        } else {
            // Inputs reach the output through the block teleportations only.
            out[0] = clamp1(e + c1 * E[0]);
            for (int i = 1; i <= j - 1; i++) out[i] = clamp1(c1 * E[i]);
        }
    }
    res.acceptance = 1.0 - flag_sum;
    res.trace.add(j, '-', "acceptance", res.acceptance);
    if (!(res.acceptance > 0)) {
        throw RecursionFailure(j, "acceptance bound not positive at level " + std::to_string(j));
    }
    condition(res.profile, res.acceptance, res.trace);
    return res;
}

std::vector<StepResult> build_profile(const NoiseParams& params, int j_max) {
    if (j_max < 0 || j_max > 16) throw std::invalid_argument("j_max must be in 0..16");
    std::vector<StepResult> out;
    StepResult zero;
    zero.profile = bp0_profile(params);
    for (ErrorType m : kErrorTypes) zero.trace.add(0, type_char(m), "eps", zero.profile.at(m, 0));
    out.push_back(std::move(zero));
    if (j_max >= 1) out.push_back(bp1_profile(params));
    for (int j = 2; j <= j_max; j++) {
        auto coeffs = CnotCoefficients::for_orientation(default_orientation(j));
        out.push_back(bpj_step(out.back().profile, params, coeffs, j >= 3));
    }
    return out;
}

GadgetResult gadget_noise(const NoiseProfile& profile, const NoiseParams& params) {
    check_params(params);
    const int j = profile.level;
    if (j < 1) throw std::invalid_argument("gadget_noise needs a profile of level >= 1");
    const double e = params.effective();
    GadgetResult res;
    double total = 0;
    for (Role r : {Role::Control, Role::Target}) {
        for (ErrorType m : kErrorTypes) {
            const double c3 = CnotCoefficients::c3(r, m);
            const auto& E = profile.eps[type_index(m)];
            std::vector<double> add(j);
            for (int k = 1; k <= j; k++) add[k - 1] = c3 * E[k];
            const double r0 = 3 * e + c3 * E[0];
            const auto chain = decode_chain(r0, add);
            const std::string q = r == Role::Control ? "rc" : "rt";
            trace_chain(res.trace, type_char(m), q, r0, chain);
            const auto& top = chain.back().value;
            res.top[2 * static_cast<int>(r) + type_index(m)] = top;
            total += top.delta_f + top.delta_nf;
        }
    }
    res.eps_css = clamp1(total);
    res.trace.add(j, '-', "eps_css", res.eps_css);
    return res;
}

std::vector<ChainStep> ideal_measurement_chain(const NoiseProfile& profile, ErrorType m) {
    const auto& E = profile.eps[type_index(m)];
    std::vector<double> add(E.begin() + 1, E.end());
    return decode_chain(E[0], add);
}

std::vector<double> eps_css_sequence(const NoiseParams& params, int j_max) {
    const auto levels = build_profile(params, j_max);
    std::vector<double> out;
    for (int j = 1; j <= j_max; j++) out.push_back(gadget_noise(levels[j].profile, params).eps_css);
    return out;
}

namespace {

void curve_rows(NoiseModel model, double eps, int j_max, CurveRow* rows) {
    const NoiseParams p{eps, model};
    StepResult prev;
    for (int j = 1; j <= j_max; j++) rows[j - 1] = {eps, j, 1.0, 0.0};
    try {
        for (int j = 1; j <= j_max; j++) {
            StepResult cur = j == 1 ? bp1_profile(p)
                                    : bpj_step(prev.profile, p, CnotCoefficients::for_orientation(default_orientation(j)),
                                               j >= 3);
            rows[j - 1].eps_css = gadget_noise(cur.profile, p).eps_css;
            rows[j - 1].acceptance = cur.acceptance;
            prev = std::move(cur);
        }
    } catch (const RecursionFailure&) {
    }
}

void check_curve_args(const std::vector<double>& eps_list, int j_max) {
    if (j_max < 1 || j_max > 16) throw std::invalid_argument("j_max must be in 1..16");
    for (double e : eps_list) {
        if (!(e >= 0 && e <= 1)) throw std::invalid_argument("epsilon must be in [0,1]");
    }
}

}  // namespace

std::vector<CurveRow> curves(NoiseModel model, const std::vector<double>& eps_list, int j_max) {
    check_curve_args(eps_list, j_max);
    std::vector<CurveRow> rows(eps_list.size() * j_max);
    const int64_t n = static_cast<int64_t>(eps_list.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t k = 0; k < n; k++) curve_rows(model, eps_list[k], j_max, &rows[k * j_max]);
    return rows;
}

std::vector<CurveRow> curves_serial(NoiseModel model, const std::vector<double>& eps_list, int j_max) {
    check_curve_args(eps_list, j_max);
    std::vector<CurveRow> rows(eps_list.size() * j_max);
    for (size_t k = 0; k < eps_list.size(); k++) curve_rows(model, eps_list[k], j_max, &rows[k * j_max]);
    return rows;
}

namespace {

bool below_threshold(double eps_ls, int j_max, int first_level) {
    try {
        const auto seq = eps_css_sequence({eps_ls, NoiseModel::LocalStochastic}, j_max);
        for (int j = first_level; j < j_max; j++) {
            if (!(seq[j] < seq[j - 1])) return false;
        }
        return true;
    } catch (const RecursionFailure&) {
        return false;
    }
}

}  // namespace

ThresholdResult threshold_scan(NoiseModel model, int j_max, double tolerance, int first_level) {
    if (j_max < 5 || j_max > 16) throw std::invalid_argument("j_max must be in 5..16");
    if (first_level < 1 || first_level >= j_max) throw std::invalid_argument("first_level must be in 1..j_max-1");
    if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");

    // Depolarizing noise enters only through eps1 = 8/15 eps, so search in
    // local-stochastic units and rescale.
    const double scale = model == NoiseModel::IndependentDepolarizing ? 15.0 / 8.0 : 1.0;
    const double tol = tolerance * 8.0 / 15.0;
    double lo = 1e-6, hi = 3e-3;
    if (!below_threshold(lo, j_max, first_level)) throw NonBracketing("no decreasing sequence even at 1e-6");
    if (below_threshold(hi, j_max, first_level)) throw NonBracketing("sequence still decreasing at 3e-3");

    ThresholdResult res;
    res.first_level = first_level;
    res.j_max = j_max;
    do {
        double mid = 0.5 * (lo + hi);
        (below_threshold(mid, j_max, first_level) ? lo : hi) = mid;
        res.iterations++;
    } while (hi - lo > tol);
    res.lo = lo * scale;
    res.hi = hi * scale;

    const NoiseParams at_lo{res.lo, model};
    const auto levels = build_profile(at_lo, j_max);
    for (int j = 1; j <= j_max; j++) {
        res.eps_css_at_lo.push_back(gadget_noise(levels[j].profile, at_lo).eps_css);
        res.acceptance_at_lo.push_back(levels[j].acceptance);
    }
    return res;
}

AncillaBounds ancilla_bounds(const NoiseParams& params, int j) {
    check_params(params);
    if (j < 1) throw std::invalid_argument("j must be >= 1");
    AncillaBounds b;
    if (j >= 2) {
        const auto levels = build_profile(params, j - 1);
        for (int i = 1; i <= j - 1; i++) {
            const auto g = gadget_noise(levels[i].profile, params);
            for (const auto& t : g.top) {
                b.f_dec += 3 * t.f;
                b.eps_dec += 3 * t.delta_nf;
            }
        }
    }
    // Single-qubit steps outside the encoded circuit see the raw strength.
    const double e0 = params.epsilon;
    b.eps_dec += 3 * e0;
    if (!(b.f_dec < 1)) throw RecursionFailure(j, "decoding flag probability bound reaches 1");
    b.eps_anc = 4 * e0 + b.eps_dec / (1 - b.f_dec);
    return b;
}

int64_t fibonacci(int j) {
    if (j < 1) throw std::invalid_argument("fibonacci index must be >= 1");
    if (j > 90) throw std::overflow_error("fibonacci index too large");
    int64_t a = 1, b = 2;
    for (int k = 1; k < j; k++) {
        int64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

double fibonacci_asymptotic(int j) {
    const double phi = parallel_multipliers().M_parallel;
    return std::pow(phi, j + 2) / (phi + 2);
}

ParallelMultipliers parallel_multipliers() {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    return {phi, phi * phi};
}

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("overhead count overflows 64 bits");
    return r;
}

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("overhead count overflows 64 bits");
    return r;
}

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    for (int k = 0; k < e; k++) r = checked_mul(r, b);
    return r;
}

}  // namespace

OverheadResult overhead(const OverheadParams& p, int j, double L, double epsilon, double eps0) {
    if (j < 1) throw std::invalid_argument("j must be >= 1");
    if (p.r_count == p.n) throw std::invalid_argument("r_count must differ from n");
    if (p.r_count < 1 || p.n < 1 || p.s_count < 0 || p.t_count < 0) {
        throw std::invalid_argument("counts must be positive");
    }
    OverheadResult o;
    o.B = ipow(p.r_count, j - 1);
    for (int k = 2; k <= j; k++) {
        int64_t np = ipow(p.n, k - 2);
        o.C = checked_add(checked_mul(p.r_count, o.C), checked_mul(p.s_count, np));
        o.M = checked_add(checked_mul(p.r_count, o.M), checked_mul(p.t_count, np));
    }
    const int64_t diff = ipow(p.r_count, j - 1) - ipow(p.n, j - 1);
    o.C_closed = checked_mul(p.s_count, diff) / (p.r_count - p.n);
    o.M_closed = checked_mul(p.t_count, diff) / (p.r_count - p.n);

    const auto pm = parallel_multipliers();
    const double Np = p.N_parallel > 0 ? p.N_parallel : pm.N_parallel;
    const double ell = p.ell > 0 ? p.ell : static_cast<double>(p.r_count) * Np;
    if (!(epsilon > 0 && epsilon < eps0) || !(L * eps0 > 1)) {
        throw std::invalid_argument("overhead estimate needs 0 < epsilon < eps0 and L*eps0 > 1");
    }
    const double base = std::log(L * eps0) / std::log(eps0 / epsilon);
    o.overhead_factor_estimate = std::pow(base, std::log(ell) / std::log(pm.M_parallel));
    return o;
}

}  // namespace fibft
