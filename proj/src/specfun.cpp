#include "ifde/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ifde/errors.hpp"

namespace ifde {

namespace {

// Lanczos coefficients for g = 671/128, 14 terms.
constexpr double kLanczosG = 5.24218750000000000;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczosCoef = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

double lanczos_series(double x) {
    double sum = kLanczosC0;
    double y = x;
    for (double c : kLanczosCoef) {
        y += 1.0;
        sum += c / y;
    }
    return sum;
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }

    [[nodiscard]] double value() const { return sum + carry; }
};

// n! by repeated multiplication: exact through 22!, then one rounding per factor.
double factorial(int n) {
    static const std::array<double, 171> table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (std::size_t k = 1; k < t.size(); ++k) {
            t[k] = t[k - 1] * static_cast<double>(k);
        }
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

}  // namespace

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1e-6)) {
        throw DomainError("SeriesControl: rel_tol must lie in (0, 1e-6)");
    }
    if (max_terms < 50) {
        throw DomainError("SeriesControl: max_terms must be at least 50");
    }
}

double gamma_function(double x) {
    if (!(x > 0.0) || x > 171.0) {
        std::ostringstream os;
        os << "gamma_function: argument " << x << " outside (0, 171]";
        throw DomainError(os.str());
    }
    if (x == std::floor(x)) {
        return factorial(static_cast<int>(x) - 1);
    }
    // Split the power in two halves so (x+g)^(x+1/2) does not overflow near 171.
    const double base = x + kLanczosG;
    const double half_power = std::pow(base, 0.5 * (x + 0.5));
    return (half_power * std::exp(-base) * kSqrtTwoPi * lanczos_series(x) / x) * half_power;
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "log_gamma: argument " << x << " must be positive";
        throw DomainError(os.str());
    }
    const double base = x + kLanczosG;
    return (x + 0.5) * std::log(base) - base +
           std::log(kSqrtTwoPi * lanczos_series(x) / x);
}

double mittag_leffler(double alpha, double z, const SeriesControl& control) {
    control.validate();
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "mittag_leffler: alpha " << alpha << " outside (0, 1]";
        throw DomainError(os.str());
    }
    if (!(z >= -5.0 && z <= 200.0)) {
        std::ostringstream os;
        os << "mittag_leffler: argument " << z << " outside [-5, 200]";
        throw DomainError(os.str());
    }
    if (z == 0.0) {
        return 1.0;
    }

    // Terms are evaluated directly as z^k / Gamma(alpha k + 1) while that is
    // representable; past that point each term follows from its predecessor
    // through the ratio z * Gamma(alpha (k-1) + 1) / Gamma(alpha k + 1).
    CompensatedSum sum;
    sum.add(1.0);
    double term = 1.0;
    bool direct = true;
    int small_run = 0;
    for (int k = 1; k < control.max_terms; ++k) {
        const double arg = alpha * k + 1.0;
        if (direct) {
            const double power = std::pow(z, k);
            if (std::isfinite(power) && arg <= 170.0) {
                term = power / gamma_function(arg);
            } else {
                direct = false;
            }
        }
        if (!direct) {
            const double log_ratio =
                std::log(std::abs(z)) + log_gamma(arg - alpha) - log_gamma(arg);
            term *= (z < 0.0 ? -1.0 : 1.0) * std::exp(log_ratio);
        }
        sum.add(term);
        const double partial = sum.value();
        if (!std::isfinite(partial)) {
            std::ostringstream os;
            os << "mittag_leffler: E_" << alpha << "(" << z << ") overflows";
            throw DomainError(os.str());
        }
        if (std::abs(term) < control.rel_tol * std::abs(partial)) {
            if (++small_run == 3) {
                return partial;
            }
        } else {
            small_run = 0;
        }
    }
    std::ostringstream os;
    os << "mittag_leffler: series for E_" << alpha << "(" << z
       << ") did not converge in " << control.max_terms << " terms";
    throw ConvergenceError(os.str());
}

double bielecki_weight(double alpha, double theta, double t,
                       const SeriesControl& control) {
    if (!(theta > 0.0)) {
        throw DomainError("bielecki_weight: theta must be positive");
    }
    if (!(t >= 0.0)) {
        throw DomainError("bielecki_weight: t must be non-negative");
    }
    return mittag_leffler(alpha, theta * std::pow(t, alpha), control);
}

}  // namespace ifde
