#include "rover/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rover::harness {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double hi = v[mid];
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (v[mid - 1] + hi);
}

double rms(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("rms of empty sample");
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

double ks_test_pvalue(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks test needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] <= b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }

    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = std::max((ne + 0.12 + 0.11 / ne) * d, 0.0);
    // Kolmogorov series, as in the usual numerical-recipes form.
    double p = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * 2.0 * std::exp(-2.0 * lambda * lambda * j * j);
        p += term;
        if (std::abs(term) < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace rover::harness
