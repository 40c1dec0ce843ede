#include "entrostat/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace entrostat {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("Spectrum: empty vector");
    double trace = 0.0;
    for (double& v : values_) {
        if (v < -kProbTol) throw DomainError("Spectrum: negative entry below tolerance");
        if (v < 0.0) v = 0.0;
        trace += v;
    }
    if (std::abs(trace - 1.0) > kProbTol)
        throw DomainError("Spectrum: trace deviates from 1 beyond tolerance");
    for (double& v : values_) v /= trace;
    std::sort(values_.begin(), values_.end(), std::greater<double>());
}

double purity(const Spectrum& s) {
    double acc = 0.0;
    for (double v : s.values()) acc += v * v;
    return acc;
}

double trace_power(const Spectrum& s, int k) {
    if (k < 1) throw DomainError("trace_power: k must be >= 1");
    double acc = 0.0;
    for (double v : s.values()) acc += std::pow(v, k);
    return acc;
}

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::Semicircle: return "semicircle";
        case Branch::Wishart: return "wishart";
        case Branch::MetaWishart: return "meta_wishart";
        case Branch::AsymArcsineUpper: return "asym_arcsine_upper";
        case Branch::AsymArcsineLower: return "asym_arcsine_lower";
        case Branch::Arcsine: return "arcsine";
        case Branch::Separable: return "separable";
    }
    return "?";
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// beta_- = -1/(2 mu_-(1-mu_-)); cached by analytic::solve_beta_minus, but the
// interval table only needs a fixed reference value.
constexpr double kBetaMinusRef = -2.4554074822841274;
const double kBetaAsymSplit = -1.5 + std::sqrt(2.0);  // branch point of the two real roots
}  // namespace

std::pair<double, double> branch_interval(Branch b) {
    switch (b) {
        case Branch::Semicircle: return {2.0, kInf};
        // Wishart covers both the stable 0 <= beta < 2 window (alpha = 3) and
        // the typical sea for beta_- <= beta < 0 (alpha = 2).
        case Branch::Wishart: return {kBetaMinusRef, 2.0};
        case Branch::MetaWishart: return {-2.0 / 27.0, 0.0};
        case Branch::AsymArcsineUpper: return {kBetaAsymSplit, -2.0 / 27.0};
        case Branch::AsymArcsineLower: return {-2.0, kBetaAsymSplit};
        case Branch::Arcsine: return {-kInf, -2.0};
        case Branch::Separable: return {-kInf, kBetaMinusRef};
    }
    return {0.0, 0.0};
}

BranchId::BranchId(Branch t, double beta_) : tag(t), beta(beta_) {
    const auto [lo, hi] = branch_interval(t);
    // Closed at both ends: branch endpoints are shared between neighbours.
    if (beta < lo - kProbTol || beta > hi + kProbTol)
        throw DomainError("BranchId: beta outside the validity interval of " + branch_name(t));
}

}  // namespace entrostat
