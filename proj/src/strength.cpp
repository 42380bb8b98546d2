#include "fibft/strength.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fibft {

namespace {
void check_unit(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("strength outside [0,1]");
}
double clamp1(double x) { return std::min(1.0, x); }
}  // namespace

StrengthTriple decode_strengths(const StrengthTriple& in) {
    check_unit(in.f);
    check_unit(in.delta_f);
    check_unit(in.delta_nf);
    const double f = in.f, df = in.delta_f, dn = in.delta_nf;
    return {
        clamp1(4 * dn + 4 * f * f),
        clamp1(2 * dn + 4 * f * df + 4 * f * f * (2 * dn + 3 * df)),
        clamp1(4 * dn * dn + 8 * f * dn),
    };
}

JointPattern::JointPattern(int n_bits) : n(n_bits) {
    if (n_bits < 1 || n_bits > 6) throw std::invalid_argument("pattern size must be in 1..6");
    prob.assign(size_t{1} << (2 * n_bits), 0.0);
}

JointPattern product_pattern(int n, const double (&p)[2][2]) {
    JointPattern jp(n);
    for (unsigned u = 0; u < (1u << n); u++) {
        for (unsigned v = 0; v < (1u << n); v++) {
            double w = 1;
            for (int i = 0; i < n; i++) w *= p[(u >> i) & 1][(v >> i) & 1];
            jp.at(u, v) = w;
        }
    }
    return jp;
}

bool verify_quasi_independence(const JointPattern& dist, const StrengthTriple& s) {
    const int n = dist.n;
    if (n < 1 || n > 6 || dist.prob.size() != (size_t{1} << (2 * n))) {
        throw std::invalid_argument("pattern size must be in 1..6");
    }
    double total = 0;
    for (double p : dist.prob) {
        if (p < 0) throw std::invalid_argument("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("distribution is not normalized");

    const unsigned full = (1u << n) - 1;
    // Each position is in none, J, K\L or L: enumerate as base-4 digits.
    size_t combos = size_t{1} << (2 * n);
    for (size_t c = 1; c < combos; c++) {
        unsigned J = 0, K = 0, L = 0;
        for (int i = 0; i < n; i++) {
            unsigned d = (c >> (2 * i)) & 3;
            if (d == 1) J |= 1u << i;
            if (d >= 2) K |= 1u << i;
            if (d == 3) L |= 1u << i;
        }
        double mass = 0;
        for (unsigned u = 0; u <= full; u++) {
            if ((u & (J | L)) != (J | L)) continue;
            for (unsigned v = 0; v <= full; v++) {
                if ((v & K) != K || (v & J) != 0) continue;
                mass += dist.at(u, v);
            }
        }
        int nj = __builtin_popcount(J), nl = __builtin_popcount(L), nk = __builtin_popcount(K);
        double bound = std::pow(s.delta_nf, nj) * std::pow(s.delta_f, nl) * std::pow(s.f, nk - nl);
        if (mass > bound + 1e-12) return false;
    }
    return true;
}

}  // namespace fibft
