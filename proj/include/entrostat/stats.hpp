#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "entrostat/errors.hpp"

namespace entrostat::stats {

// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
inline double ks_statistic(std::vector<double> data,
                           const std::function<double(double)>& cdf) {
    if (data.empty()) throw DomainError("ks_statistic: no data");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        d = std::max(d, std::abs(f - (i + 1) / n));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: no data");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

// Asymptotic critical value of sqrt(n) D_n at level alpha = 0.01.
inline double ks_critical_one_sample(double n, double alpha_factor = 1.6276) {
    return alpha_factor / std::sqrt(n);
}

inline double ks_critical_two_sample(double n, double m, double alpha_factor = 1.6276) {
    return alpha_factor * std::sqrt((n + m) / (n * m));
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // sample variance
    long long count = 0;
    double stderr_mean() const { return std::sqrt(var / count); }
};

inline MeanVar mean_var(const std::vector<double>& x) {
    MeanVar mv;
    mv.count = static_cast<long long>(x.size());
    for (double v : x) mv.mean += v;
    mv.mean /= mv.count;
    for (double v : x) mv.var += (v - mv.mean) * (v - mv.mean);
    if (mv.count > 1) mv.var /= (mv.count - 1);
    return mv;
}

// Survival function of the chi-square distribution (integer dof) via the
// regularized upper incomplete gamma, continued-fraction evaluation.
inline double chi_square_sf(double x, int dof) {
    if (x <= 0.0) return 1.0;
    const double a = 0.5 * dof, half = 0.5 * x;
    // series for P(a,x) when half < a+1, continued fraction for Q otherwise
    auto gammln = [](double z) { return std::lgamma(z); };
    if (half < a + 1.0) {
        double sum = 1.0 / a, term = sum, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= half / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-half + a * std::log(half) - gammln(a));
        return 1.0 - p;
    }
    double b = half + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-half + a * std::log(half) - gammln(a)) * h;
}

}  // namespace entrostat::stats
