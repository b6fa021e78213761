#include "pmpd/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmpd::integrand {

double hamiltonian(double v, double pbar, double g_of_v) { return v * pbar + g_of_v; }

bool hamiltonian_prefers(double v, double m, double v_best, double m_best) {
    if (m != m_best) return m < m_best;
    const double av = std::abs(v);
    const double ab = std::abs(v_best);
    if (av != ab) return av < ab;
    return v < v_best;
}

IntegerQuadratic::IntegerQuadratic(double alpha, long b) : alpha_(alpha), b_(b) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("IntegerQuadratic: alpha must be positive and finite");
    }
    if (b < 1) throw std::invalid_argument("IntegerQuadratic: b must be a positive integer");
}

double IntegerQuadratic::eval(double v) const {
    if (!std::isfinite(v) || v != std::round(v) || std::abs(v) > static_cast<double>(b_)) {
        return kInfinity;
    }
    return 0.5 * alpha_ * v * v;
}

HamiltonianMin IntegerQuadratic::hamiltonian_argmin(double pbar) const {
    const double bd = static_cast<double>(b_);
    // unconstrained minimizer of the quadratic, pre-clamped so floor/ceil stay small
    const double r = std::clamp(-pbar / alpha_, -bd - 1.0, bd + 1.0);
    const double lo = std::max(-bd, std::floor(r) - 1.0);
    const double hi = std::min(bd, std::ceil(r) + 1.0);

    HamiltonianMin best{0.0, kInfinity};
    bool first = true;
    for (double v = lo; v <= hi; v += 1.0) {
        const double m = hamiltonian(v, pbar, eval(v));
        if (first || hamiltonian_prefers(v, m, best.v, best.m)) {
            best = {v, m};
            first = false;
        }
    }
    return best;
}

std::optional<std::vector<double>> IntegerQuadratic::enumerate_domain() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(2 * b_ + 1));
    for (long v = -b_; v <= b_; ++v) values.push_back(static_cast<double>(v));
    return values;
}

PureQuadratic::PureQuadratic(double alpha, double b) : alpha_(alpha), b_(b) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("PureQuadratic: alpha must be positive and finite");
    }
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("PureQuadratic: b must be positive");
}

double PureQuadratic::eval(double v) const {
    if (!std::isfinite(v) || std::abs(v) > b_) return kInfinity;
    return 0.5 * alpha_ * v * v;
}

HamiltonianMin PureQuadratic::hamiltonian_argmin(double pbar) const {
    const double v = std::clamp(-pbar / alpha_, -b_, b_);
    return {v, hamiltonian(v, pbar, eval(v))};
}

HamiltonianMin argmin_bruteforce(const CostIntegrand& g, double pbar, std::span<const double> grid) {
    const auto domain = g.enumerate_domain();
    std::vector<double> candidates;
    if (domain) {
        candidates = *domain;
    } else if (!grid.empty()) {
        candidates.assign(grid.begin(), grid.end());
    } else {
        throw std::invalid_argument("argmin_bruteforce: " + g.name() +
                                    " has no enumerable domain and no grid was supplied");
    }

    HamiltonianMin best{0.0, kInfinity};
    bool found = false;
    for (const double v : candidates) {
        const double gv = g.eval(v);
        if (gv == kInfinity) continue;
        const double m = hamiltonian(v, pbar, gv);
        if (!found || hamiltonian_prefers(v, m, best.v, best.m)) {
            best = {v, m};
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("argmin_bruteforce: no feasible candidate");
    return best;
}

}  // namespace pmpd::integrand
