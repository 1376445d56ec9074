#pragma once

// Problem parameters and the closed-form scaling constants of the
// p-Laplacian dead-core equation  Δ_p u − ∂u/∂t = λ₀ u₊^q.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>

#include "deadcore/error.hpp"

namespace deadcore {

/// The absorption modulus λ₀(x, t), either a constant or a space-time function
/// with declared bounds.  Immutable after construction.
class Modulus {
public:
    using Function = std::function<double(double x, double t)>;

    Modulus() = default;

    static Modulus constant(double value)
    {
        Modulus m;
        m.value_ = value;
        return m;
    }

    static Modulus field(Function f)
    {
        Modulus m;
        m.value_ = std::nan("");
        m.f_ = std::make_shared<const Function>(std::move(f));
        return m;
    }

    bool is_constant() const { return f_ == nullptr; }

    double constant_value() const
    {
        if (!is_constant())
            throw InvalidArgument("modulus is a space-time field, not a constant");
        return value_;
    }

    double operator()(double x, double t) const { return f_ ? (*f_)(x, t) : value_; }

private:
    double value_ = 1.0;
    std::shared_ptr<const Function> f_;
};

/// One dead-core problem instance.
struct ProblemParams {
    double p = 2.0;
    double q = 0.0;
    int dim = 1;
    double lambda_lo = 1.0;  ///< m
    double lambda_hi = 1.0;  ///< M
    Modulus lambda0 = Modulus::constant(1.0);
    /// Critical case q = p − 1: no dead cores, exponents undefined.
    bool critical = false;

    /// Constant-modulus instance with m = M = λ₀.
    static ProblemParams with_constant(double p, double q, int dim, double lambda, bool critical = false)
    {
        ProblemParams params;
        params.p = p;
        params.q = q;
        params.dim = dim;
        params.lambda_lo = lambda;
        params.lambda_hi = lambda;
        params.lambda0 = Modulus::constant(lambda);
        params.critical = critical;
        params.validate();
        return params;
    }

    void validate() const
    {
        std::ostringstream err;
        if (!(p >= 2.0) || !std::isfinite(p))
            err << "p must be >= 2 (got " << p << "); ";
        if (critical) {
            if (std::abs(q - (p - 1.0)) > 1e-12)
                err << "critical flag requires q = p - 1 (got q=" << q << ", p=" << p << "); ";
        } else if (!(q >= 0.0 && q < 1.0)) {
            err << "q must satisfy 0 <= q < 1 (got " << q << "); ";
        }
        if (dim < 1)
            err << "dim must be positive (got " << dim << "); ";
        if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo) || !std::isfinite(lambda_hi))
            err << "modulus bounds need 0 < m <= M < inf (got m=" << lambda_lo << ", M=" << lambda_hi << "); ";
        if (lambda0.is_constant()) {
            const double v = lambda0.constant_value();
            if (!(v >= lambda_lo && v <= lambda_hi))
                err << "constant modulus " << v << " outside [m, M]; ";
        }
        const std::string msg = err.str();
        if (!msg.empty())
            throw InvalidArgument("invalid ProblemParams: " + msg.substr(0, msg.size() - 2));
    }

    /// Evaluates λ₀ and checks it against the declared bounds.
    double lambda_at(double x, double t) const
    {
        const double v = lambda0(x, t);
        if (!(v >= lambda_lo && v <= lambda_hi)) {
            std::ostringstream err;
            err << "modulus value " << v << " at (x=" << x << ", t=" << t << ") outside [" << lambda_lo << ", "
                << lambda_hi << "]";
            throw InvalidArgument(err.str());
        }
        return v;
    }
};

/// Intrinsic scaling exponents.
struct Exponents {
    double alpha0;       ///< sharp growth exponent p/(p−q−1)
    double theta;        ///< intrinsic time scaling p(1−q)/(p−1−q)
    double alpha_sharp;  ///< 1 + 1/(p−1)
    double grad_alpha;   ///< gradient decay exponent (1+q)/(p−1−q)
};

namespace detail {

inline void require_noncritical(const ProblemParams& params, const char* what)
{
    params.validate();
    if (params.critical)
        throw InvalidArgument(std::string(what) + " is undefined for critical parameters (q = p - 1)");
}

}  // namespace detail

inline Exponents compute_exponents(const ProblemParams& params)
{
    detail::require_noncritical(params, "compute_exponents");
    const double p = params.p;
    const double q = params.q;
    const double gap = p - 1.0 - q;
    return Exponents{p / gap, p * (1.0 - q) / gap, 1.0 + 1.0 / (p - 1.0), (1.0 + q) / gap};
}

/// u₊^q with the convention u₊^0 = 1 for u > 0 and 0 for u <= 0.
inline double positive_power(double u, double q)
{
    if (u <= 0.0)
        return 0.0;
    if (q == 0.0)
        return 1.0;
    if (q == 1.0)
        return u;
    return std::pow(u, q);
}

/// (λ (p−q−1)^p / (p^{p−1}(pq + N(p−1−q))))^{1/(p−q−1)} for explicit arguments.
inline double cpq_constant(double p, double q, int dim, double lambda)
{
    const double gap = p - q - 1.0;
    const double inner = lambda * std::pow(gap, p) / (std::pow(p, p - 1.0) * (p * q + dim * gap));
    return std::pow(inner, 1.0 / gap);
}

/// Amplitude C_{p,q} of the α₀-homogeneous stationary profiles; requires a constant modulus.
inline double cpq_constant(const ProblemParams& params)
{
    detail::require_noncritical(params, "cpq_constant");
    if (!params.lambda0.is_constant())
        throw InvalidArgument("cpq_constant is defined only for a constant modulus");
    return cpq_constant(params.p, params.q, params.dim, params.lambda0.constant_value());
}

/// Non-degeneracy barrier constant 𝔠, evaluated exactly as stated:
/// min{ [m(1−q)/2]^{1/(1−q)}, [ (m/2)((p−1−q)/p)^{p−1} (N + pq/(p−1−q)) ]^{1/(p−1−q)} }.
/// For q > 0 this value does not make Φ̂ a supersolution; see supersolution_constant_nondeg.
inline double barrier_constant_nondeg(const ProblemParams& params)
{
    detail::require_noncritical(params, "barrier_constant_nondeg");
    const double p = params.p, q = params.q, m = params.lambda_lo;
    const double gap = p - 1.0 - q;
    const double time_branch = std::pow(m * (1.0 - q) / 2.0, 1.0 / (1.0 - q));
    const double space_branch =
        std::pow(m / 2.0 * std::pow(gap / p, p - 1.0) * (params.dim + p * q / gap), 1.0 / gap);
    return std::min(time_branch, space_branch);
}

/// Largest constant of the same two-branch form for which Φ̂ satisfies
/// Δ_pΦ̂ − ∂Φ̂/∂t − m Φ̂^q <= 0: the spatial bracket is divided by (N + pq/(p−1−q)).
/// Each branch bounds its half of the residual by (m/2)Φ̂^q.
inline double supersolution_constant_nondeg(const ProblemParams& params)
{
    detail::require_noncritical(params, "supersolution_constant_nondeg");
    const double p = params.p, q = params.q, m = params.lambda_lo;
    const double gap = p - 1.0 - q;
    const double time_branch = std::pow(m * (1.0 - q) / 2.0, 1.0 / (1.0 - q));
    const double space_branch =
        std::pow(m / 2.0 * std::pow(gap / p, p - 1.0) / (params.dim + p * q / gap), 1.0 / gap);
    return std::min(time_branch, space_branch);
}

/// Growth barrier constant 𝔠₁(a) = ( m/(N + pq/(p−1−q)) · ((p−1−q)/(a p))^{p−1} )^{1/(p−1−q)}.
inline double barrier_constant_growth(const ProblemParams& params, double a)
{
    detail::require_noncritical(params, "barrier_constant_growth");
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidArgument("barrier_constant_growth requires a > 0");
    const double p = params.p, q = params.q, m = params.lambda_lo;
    const double gap = p - 1.0 - q;
    return std::pow(m / (params.dim + p * q / gap) * std::pow(gap / (a * p), p - 1.0), 1.0 / gap);
}

}  // namespace deadcore
