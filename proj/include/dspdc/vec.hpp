#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace dspdc {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline void axpy(double c, std::span<const double> x, std::span<double> acc) {
    for (std::size_t k = 0; k < x.size(); ++k) acc[k] += c * x[k];
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

// Compensated (Kahan) accumulator for objective sums.
class KahanSum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace dspdc
