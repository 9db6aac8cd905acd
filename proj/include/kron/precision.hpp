#pragma once

#include <cmath>

#include "kron/errors.hpp"

namespace kron {

struct PrecisionContext {
    int prec_bits = 256;
    int sum_radius = 64;   // lattice-sum cutoff for direct shells, in |x| units
    int q_terms = 0;       // cap on theta q-series terms; 0 = no cap
    double tol_rel = 0.0;  // 0 = 2^{-prec_bits/2}
    int guard_bits = 32;

    static PrecisionContext with_bits(int bits) {
        PrecisionContext c;
        c.prec_bits = bits;
        return c;
    }

    double tol() const { return tol_rel > 0.0 ? tol_rel : std::ldexp(1.0, -prec_bits / 2); }
    int work_bits() const { return prec_bits + guard_bits; }

    void validate() const {
        if (prec_bits < 64) throw DomainError("prec_bits must be >= 64");
        if (tol_rel < 0.0) throw DomainError("tol_rel must be positive");
        if (sum_radius < 1) throw DomainError("sum_radius must be positive");
    }
};

}  // namespace kron
