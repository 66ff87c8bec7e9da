#include "utilrisk/normal.hpp"

#include "utilrisk/errors.hpp"

#include <cmath>

namespace utilrisk {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
} // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("norm_inv: p must lie in (0, 1)");

    // Acklam's rational approximation, then Newton against norm_cdf.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double t = q * q;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    for (int i = 0; i < 2; ++i) {
        const double err = norm_cdf(x) - p;
        const double dens = norm_pdf(x);
        if (dens <= 0.0) break;
        x -= err / dens;
    }
    return x;
}

double std_normal_var(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("std_normal_var: alpha must lie in (0, 1)");
    return -norm_inv(alpha);
}

double std_normal_es(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("std_normal_es: alpha must lie in (0, 1)");
    // integral_0^alpha -norm_inv(u) du with u = alpha * e^t, t in [log(1e-10), 0];
    // the dropped piece below u = alpha * 1e-10 contributes < 1e-9 after division.
    const int n = 10000; // even
    const double t0 = std::log(1e-10);
    const double h = -t0 / n;
    auto g = [alpha](double t) {
        const double u = alpha * std::exp(t);
        return -norm_inv(u) * u;
    };
    double acc = g(t0) + g(0.0);
    for (int i = 1; i < n; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * g(t0 + h * i);
    }
    return (acc * h / 3.0) / alpha;
}

} // namespace utilrisk
