#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pmpd::integrand {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Minimizer of the pointwise Hamiltonian v -> v * pbar + g(v).
struct HamiltonianMin {
    double v = 0.0;
    double m = 0.0;
};

// v * pbar + g(v).
double hamiltonian(double v, double pbar, double g_of_v);

// True if candidate (v, m) should replace incumbent (v_best, m_best): strictly
// smaller Hamiltonian value; on an exact tie the smaller |v|, then the smaller v.
bool hamiltonian_prefers(double v, double m, double v_best, double m_best);

// Extended-real cost integrand g. Implementations must have a compact
// effective domain, which gives the required superlinear growth.
class CostIntegrand {
public:
    virtual ~CostIntegrand() = default;

    virtual double eval(double v) const = 0;
    bool feasible(double v) const { return eval(v) < kInfinity; }

    virtual HamiltonianMin hamiltonian_argmin(double pbar) const = 0;

    // Finite effective domain, if it can be enumerated.
    virtual std::optional<std::vector<double>> enumerate_domain() const { return std::nullopt; }

    // dom g is contained in [-domain_bound(), domain_bound()].
    virtual double domain_bound() const = 0;

    virtual std::string name() const = 0;
};

// g(v) = alpha/2 v^2 for v in Z cap [-b, b], +inf otherwise.
class IntegerQuadratic final : public CostIntegrand {
public:
    IntegerQuadratic(double alpha, long b);

    double eval(double v) const override;
    HamiltonianMin hamiltonian_argmin(double pbar) const override;
    std::optional<std::vector<double>> enumerate_domain() const override;
    double domain_bound() const override { return static_cast<double>(b_); }
    std::string name() const override { return "integer-quadratic"; }

    double alpha() const { return alpha_; }
    long bound() const { return b_; }

private:
    double alpha_;
    long b_;
};

// g(v) = alpha/2 v^2 on [-b, b], +inf outside. Convex reference instance.
class PureQuadratic final : public CostIntegrand {
public:
    PureQuadratic(double alpha, double b);

    double eval(double v) const override;
    HamiltonianMin hamiltonian_argmin(double pbar) const override;
    double domain_bound() const override { return b_; }
    std::string name() const override { return "quadratic"; }

    double alpha() const { return alpha_; }

private:
    double alpha_;
    double b_;
};

// Exhaustive minimization over the enumerated domain of g, or over `grid`
// when g is not enumerable. Uses the same tie rule as hamiltonian_argmin.
// Throws std::invalid_argument if neither is available.
HamiltonianMin argmin_bruteforce(const CostIntegrand& g, double pbar, std::span<const double> grid = {});

}  // namespace pmpd::integrand
