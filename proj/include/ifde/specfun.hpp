#pragma once

namespace ifde {

/// Truncation control for the Mittag-Leffler power series.
struct SeriesControl {
    double rel_tol = 1e-14;
    int max_terms = 400;

    /// Throws DomainError unless 0 < rel_tol < 1e-6 and max_terms >= 50.
    void validate() const;
};

/// Gamma function for 0 < x <= 171 (Lanczos approximation, g = 671/128).
///
/// Relative error stays below 1e-13 on [0.1, 50]. Throws DomainError outside
/// (0, 171].
[[nodiscard]] double gamma_function(double x);

/// Natural log of the Gamma function for x > 0; no upper limit.
[[nodiscard]] double log_gamma(double x);

/// One-parameter Mittag-Leffler function E_alpha(z) = sum z^k / Gamma(alpha k + 1).
///
/// Valid for alpha in (0, 1] and z in [-5, 200]. The series stops once three
/// consecutive terms fall below rel_tol times the running sum. Throws
/// DomainError outside the valid range or when the sum overflows, and
/// ConvergenceError when max_terms is reached first.
[[nodiscard]] double mittag_leffler(double alpha, double z,
                                    const SeriesControl& control = {});

/// Bielecki weight E_alpha(theta t^alpha); always >= 1 for t >= 0.
[[nodiscard]] double bielecki_weight(double alpha, double theta, double t,
                                     const SeriesControl& control = {});

}  // namespace ifde
