#include "sfd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sfd {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
using Gauss = boost::math::quadrature::gauss<double, 15>;

// Boost's error estimate carries an absolute floor of a few ulps of 1, useless
// for integrals of size 1e-10, and its adaptive driver then bisects to full
// depth. The rule pair is evaluated here and the difference used directly.
double rule(const std::function<double(double)>& f, double a, double b, double* err, double* l1) {
    const double k = Kronrod::integrate(f, a, b, 0, 0.0, nullptr, l1);
    const double g = Gauss::integrate(f, a, b);
    *err = std::abs(k - g);
    return k;
}

void bisect(const std::function<double(double)>& f, double a, double b, double absTol, unsigned depth,
            QuadResult& acc) {
    double err = 0.0, l1 = 0.0;
    const double v = rule(f, a, b, &err, &l1);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    if (err <= std::max(absTol, floor) || depth == 0 || !std::isfinite(v)) {
        acc.value += v;
        acc.error += err;
        acc.l1 += l1;
        return;
    }
    const double mid = 0.5 * (a + b);
    bisect(f, a, mid, 0.5 * absTol, depth - 1, acc);
    bisect(f, mid, b, 0.5 * absTol, depth - 1, acc);
}

}  // namespace

QuadResult integrateAdaptive(const std::function<double(double)>& f, double a, double b,
                             double relTol, unsigned maxDepth) {
    QuadResult r;
    if (!(b > a)) return r;
    double err = 0.0, l1 = 0.0;
    const double v = rule(f, a, b, &err, &l1);
    const double absTol = relTol * l1;
    if (err <= std::max(absTol, 64.0 * std::numeric_limits<double>::epsilon() * l1) || maxDepth == 0) {
        r.value = v;
        r.error = err;
        r.l1 = l1;
        return r;
    }
    const double mid = 0.5 * (a + b);
    bisect(f, a, mid, 0.5 * absTol, maxDepth - 1, r);
    bisect(f, mid, b, 0.5 * absTol, maxDepth - 1, r);
    return r;
}

QuadResult integratePanels(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double relTol,
                           unsigned maxDepth) {
    QuadResult total;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const QuadResult part = integrateAdaptive(f, breakpoints[i - 1], breakpoints[i], relTol, maxDepth);
        total.value += part.value;
        total.error += part.error;
        total.l1 += part.l1;
    }
    return total;
}

}  // namespace sfd
