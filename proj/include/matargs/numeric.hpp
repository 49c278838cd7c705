#pragma once

#include <cmath>

namespace matargs {

// Neumaier compensated accumulator. Summation order still matters for exact
// reproducibility, so callers keep a fixed iteration order.
struct CompensatedSum {
    double s = 0;
    double c = 0;

    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

// Small non-negative integer power by left-to-right multiplication; the fixed
// order keeps results bit-identical across call sites.
inline double int_pow(double x, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace matargs
