#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sfd/error.hpp"
#include "sfd/quadrature.hpp"
#include "sfd/specfun.hpp"

namespace sfd {

namespace {

// Internal acceptance thresholds of each route, relative to the value.
constexpr double kSeriesTol = 1e-12;
constexpr double kAsymptoticTol = 1e-13;
constexpr double kIntegralTol = 1e-11;

// Neumaier compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

double seriesTermMagnitude(double x, int k, double alpha, double beta) {
    const double arg = alpha * k + beta;
    if (arg < 170.0) {
        const double p = std::pow(x, k);
        if (std::isfinite(p)) return p / std::tgamma(arg);
    }
    return std::exp(k * std::log(x) - std::lgamma(arg));
}

// Closed forms for alpha == 1.
bool alphaOneClosedForm(double beta, double x, double& out) {
    if (beta == 1.0) {
        out = std::exp(-x);
        return true;
    }
    if (beta == 2.0) {
        out = x == 0.0 ? 1.0 : -std::expm1(-x) / x;
        return true;
    }
    return false;
}

}  // namespace

namespace detail {

MLEstimate mlSeries(const MLParams& p, double x) {
    MLEstimate est;
    if (x == 0.0) {
        est.value = reciprocalGamma(p.beta);
        est.ok = true;
        return est;
    }
    // Terms peak near k ~ x^{1/alpha}/alpha; beyond e^40 cancellation is hopeless.
    if (std::pow(x, 1.0 / p.alpha) > 40.0) return est;

    CompensatedSum sum;
    double absSum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    constexpr int kMaxTerms = 20000;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double mag = seriesTermMagnitude(x, k, p.alpha, p.beta);
        sum.add((k % 2 == 0) ? mag : -mag);
        absSum += mag;
        if (k > 2 && mag <= prev && mag < 1e-18 * std::abs(sum.value())) {
            const double v = sum.value();
            est.value = v;
            est.error = 2e-15 * absSum + mag;
            est.ok = std::isfinite(v) && est.error <= kSeriesTol * std::abs(v);
            return est;
        }
        prev = mag;
    }
    return est;
}

MLEstimate mlAsymptotic(const MLParams& p, double x) {
    MLEstimate est;
    if (!(x > 1.0)) return est;
    const double logx = std::log(x);
    CompensatedSum sum;
    double lastNonZero = std::numeric_limits<double>::infinity();
    constexpr int kMaxTerms = 400;
    for (int k = 1; k < kMaxTerms; ++k) {
        const double z = p.beta - p.alpha * k;
        double mag = 0.0;
        double sign = 1.0;
        if (z > 0.0) {
            mag = std::exp(-std::lgamma(z) - k * logx);
        } else {
            const double s = sinPi(z);
            if (s == 0.0) continue;  // pole of Gamma: term vanishes
            mag = std::exp(std::lgamma(1.0 - z) + std::log(std::abs(s) / std::numbers::pi) - k * logx);
            sign = s > 0.0 ? 1.0 : -1.0;
        }
        if (mag > lastNonZero) {
            // Divergence sets in: the omitted term bounds the truncation error.
            est.value = sum.value();
            est.error = mag;
            break;
        }
        const double term = ((k % 2 == 1) ? 1.0 : -1.0) * sign * mag;
        sum.add(term);
        lastNonZero = mag;
        if (mag < 1e-18 * std::abs(sum.value())) {
            est.value = sum.value();
            est.error = mag;
            break;
        }
    }
    if (est.error == 0.0) return est;  // never converged within kMaxTerms
    est.ok = std::isfinite(est.value) && est.value != 0.0 &&
             est.error <= kAsymptoticTol * std::abs(est.value);
    return est;
}

MLEstimate mlIntegral(const MLParams& p, double x) {
    MLEstimate est;
    const double a = p.alpha;
    const double b = p.beta;
    if (!(a < 1.0) || !(b < 1.0 + a) || !(x > 0.0)) return est;

    const double cosA = std::cos(std::numbers::pi * a);
    const double s1 = std::sin(std::numbers::pi * (1.0 - b));
    const double s2 = std::sin(std::numbers::pi * (1.0 - b + a));
    const double power = (1.0 - b) / a;
    auto kernel = [=](double chi) {
        if (chi <= 0.0) return 0.0;
        const double damp = std::exp(-std::pow(chi, 1.0 / a));
        if (damp == 0.0) return 0.0;
        const double num = chi * s1 + x * s2;
        const double den = chi * chi + 2.0 * chi * x * cosA + x * x;
        return std::pow(chi, power) * damp * num / den;
    };

    // exp(-chi^{1/alpha}) underflows beyond chiMax.
    const double chiMax = std::pow(745.0, a);
    std::vector<double> breaks{0.0};
    for (double c : {0.5 * std::min(1.0, x), std::min(1.0, chiMax), x}) {
        if (c > breaks.back() && c < chiMax) breaks.push_back(c);
    }
    breaks.push_back(chiMax);
    const QuadResult q = integratePanels(kernel, breaks, 1e-14);
    const double scale = 1.0 / (a * std::numbers::pi);
    est.value = scale * q.value;
    est.error = scale * q.error + 1e-15 * scale * q.l1;
    est.ok = std::isfinite(est.value) && est.error <= kIntegralTol * std::abs(est.value);
    return est;
}

}  // namespace detail

namespace {

double mlNegChecked(const MLParams& p, double x, int depth);

// beta >= 1 + alpha: shift down with E_{a,b}(-x) = (1/Gamma(b-a) - E_{a,b-a}(-x)) / x.
double mlShiftDown(const MLParams& p, double x, int depth) {
    const double inner = mlNegChecked(MLParams{p.alpha, p.beta - p.alpha}, x, depth + 1);
    const double head = reciprocalGamma(p.beta - p.alpha);
    const double v = (head - inner) / x;
    const double amplification = (std::abs(head) + std::abs(inner)) / std::abs(v * x);
    if (!(amplification < 1e2) || !std::isfinite(v))
        throw AccuracyError("mlNeg: recurrence in beta loses precision at alpha=" +
                            std::to_string(p.alpha) + " beta=" + std::to_string(p.beta) +
                            " x=" + std::to_string(x));
    return v;
}

double mlNegChecked(const MLParams& p, double x, int depth) {
    if (x == 0.0) return reciprocalGamma(p.beta);
    if (p.alpha == 1.0) {
        double v = 0.0;
        if (alphaOneClosedForm(p.beta, x, v)) return v;
    }
    if (const auto s = detail::mlSeries(p, x); s.ok) return s.value;
    if (const auto as = detail::mlAsymptotic(p, x); as.ok) return as.value;
    if (p.alpha < 1.0 && p.beta < 1.0 + p.alpha) {
        if (const auto in = detail::mlIntegral(p, x); in.ok) return in.value;
    } else if (p.alpha < 1.0 && depth < 64) {
        return mlShiftDown(p, x, depth);
    }
    throw AccuracyError("mlNeg: no evaluation route reached tolerance at alpha=" +
                        std::to_string(p.alpha) + " beta=" + std::to_string(p.beta) +
                        " x=" + std::to_string(x));
}

}  // namespace

double mlNeg(const MLParams& params, double x) {
    params.validate();
    if (!(x >= 0.0) || !std::isfinite(x))
        throw DomainError("mlNeg: argument must be finite and non-negative, got " + std::to_string(x));
    return mlNegChecked(params, x, 0);
}

}  // namespace sfd
