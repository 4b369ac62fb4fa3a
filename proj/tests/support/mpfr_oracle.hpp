#pragma once

// Arbitrary-precision reference for the Dirichlet-Multinomial log marginal
// likelihood, evaluated straight from the gamma-function formula with MPFR.

#include <mpfr.h>

#include <cstdint>
#include <vector>

namespace oracle {

class MpReal {
public:
    explicit MpReal(double x = 0.0, mpfr_prec_t prec = 256) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    ~MpReal() { mpfr_clear(v_); }
    MpReal(const MpReal&) = delete;
    MpReal& operator=(const MpReal&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

inline void add_lngamma(MpReal& acc, MpReal& x, int sign) {
    MpReal g;
    int s = 0;
    mpfr_lgamma(g.get(), &s, x.get(), MPFR_RNDN);
    if (sign > 0)
        mpfr_add(acc.get(), acc.get(), g.get(), MPFR_RNDN);
    else
        mpfr_sub(acc.get(), acc.get(), g.get(), MPFR_RNDN);
}

inline double stage_log_score(const std::vector<double>& alpha, const std::vector<std::uint64_t>& counts) {
    MpReal acc, a_sum, post_sum;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        MpReal a(alpha[j]);
        MpReal post(alpha[j]);
        mpfr_add_ui(post.get(), post.get(), counts[j], MPFR_RNDN);
        mpfr_add(a_sum.get(), a_sum.get(), a.get(), MPFR_RNDN);
        mpfr_add(post_sum.get(), post_sum.get(), post.get(), MPFR_RNDN);
        add_lngamma(acc, post, +1);
        add_lngamma(acc, a, -1);
    }
    add_lngamma(acc, a_sum, +1);
    add_lngamma(acc, post_sum, -1);
    return mpfr_get_d(acc.get(), MPFR_RNDN);
}

}  // namespace oracle
