#pragma once

#include <complex>

namespace chowla {

// Kahan–Neumaier compensated accumulator. Harmonic-weighted sums over 10^8
// terms lose ~1e-9 absolute with naive doubles; compensation keeps them
// near machine precision, and (with a fixed summation order) bit-stable.
struct kahan_sum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    // Merges another accumulator; order of merges must be fixed by the caller.
    void add(const kahan_sum& o) {
        add(o.s);
        add(o.c);
    }
    double value() const { return s + c; }
};

struct kahan_csum {
    kahan_sum re, im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    void add(const kahan_csum& o) {
        re.add(o.re);
        im.add(o.im);
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace chowla
