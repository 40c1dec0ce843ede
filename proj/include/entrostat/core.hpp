#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "entrostat/errors.hpp"
#include "entrostat/numeric.hpp"

namespace entrostat {

// Subsystem dimensions of a bipartition, normalized to n <= m.
class BipartiteDims {
  public:
    BipartiteDims(int n, int m) : n_(n), m_(m), swapped_(false) {
        if (n < 1 || m < 1) throw DomainError("BipartiteDims: dimensions must be >= 1");
        if (n_ > m_) { std::swap(n_, m_); swapped_ = true; }
        l_ = static_cast<long long>(n_) * m_;
    }
    int n() const { return n_; }
    int m() const { return m_; }
    long long l() const { return l_; }
    bool swapped() const { return swapped_; }

  private:
    int n_, m_;
    long long l_;
    bool swapped_;
};

// Ordered (non-increasing) nonnegative eigenvalues summing to 1.
// Entries in (-kProbTol, 0) are clamped to zero and the vector renormalized;
// anything worse is rejected.
class Spectrum {
  public:
    explicit Spectrum(std::vector<double> values);
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double largest() const { return values_.front(); }
    double smallest() const { return values_.back(); }

  private:
    std::vector<double> values_;
};

// Center/half-width of the rescaled eigenvalue support plus the inverse
// temperature the parameters refer to.  Support endpoints are a = m - delta,
// b = m + delta; eigenvalue positivity (a >= 0) is checked by the operations
// that require it, not here, so that off-domain parameter probes stay legal.
struct SupportParams {
    double m_center;
    double delta;
    double beta;

    SupportParams(double m_center_, double delta_, double beta_)
        : m_center(m_center_), delta(delta_), beta(beta_) {
        if (delta < 0.0) throw DomainError("SupportParams: delta must be >= 0");
    }
    double a() const { return m_center - delta; }
    double b() const { return m_center + delta; }
    bool eigenvalues_positive() const { return a() >= -kProbTol; }
};

// The seven density regimes.
enum class Branch {
    Semicircle,
    Wishart,
    MetaWishart,
    AsymArcsineUpper,
    AsymArcsineLower,
    Arcsine,
    Separable,
};

std::string branch_name(Branch b);

// Validity interval [lo, hi) of the inverse temperature for a branch tag.
std::pair<double, double> branch_interval(Branch b);

// Tag plus the beta it was constructed at; rejects beta outside the tag's
// validity interval.
struct BranchId {
    Branch tag;
    double beta;
    BranchId(Branch t, double beta_);
};

struct ThermoPoint {
    double beta;
    double u;       // internal energy density
    double s;       // entropy density
    double beta_f;  // beta * free energy density
    int alpha;      // scaling exponent, 2 or 3
    Branch branch;

    // beta_f is derived from the thermodynamic relation beta*f = beta*u - s.
    ThermoPoint(double beta_, double u_, double s_, int alpha_, Branch branch_)
        : beta(beta_), u(u_), s(s_), beta_f(beta_ * u_ - s_), alpha(alpha_), branch(branch_) {
        if (alpha != 2 && alpha != 3) throw DomainError("ThermoPoint: alpha must be 2 or 3");
    }
};

double purity(const Spectrum& s);
double trace_power(const Spectrum& s, int k);

}  // namespace entrostat
