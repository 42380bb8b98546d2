#pragma once

#include <vector>

namespace fibft {

/// Upper bounds on per-bit flag probability (f), error probability of flagged
/// bits (delta_f) and of unflagged bits (delta_nf).
struct StrengthTriple {
    double f = 0;
    double delta_f = 0;
    double delta_nf = 0;
};

/// Strength of a decoded C4 block given the strength of its four inputs.
/// Throws std::invalid_argument for components outside [0,1].
StrengthTriple decode_strengths(const StrengthTriple& in);

/// Joint distribution over n error bits u and n flag bits v.
/// prob[(u << n) | v] is P(u, v); bit i of u/v is position i.
struct JointPattern {
    int n = 0;
    std::vector<double> prob;

    explicit JointPattern(int n_bits);
    double& at(unsigned u, unsigned v) { return prob[(u << n) | v]; }
    double at(unsigned u, unsigned v) const { return prob[(u << n) | v]; }
};

/// Builds the product distribution with the given per-bit (err, flag) table,
/// p[err][flag].
JointPattern product_pattern(int n, const double (&p)[2][2]);

/// Exhaustive check over disjoint J, K and L within K. Requires n <= 6 and a
/// normalized distribution (within 1e-12); throws std::invalid_argument otherwise.
bool verify_quasi_independence(const JointPattern& dist, const StrengthTriple& s);

}  // namespace fibft
