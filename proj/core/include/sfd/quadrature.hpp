#pragma once

#include <functional>
#include <span>

namespace sfd {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
    double l1 = 0.0;     ///< integral of |f|, for relative error checks
};

/// Adaptive Gauss-Kronrod (31-point) integration of f on [a, b] by bisection
/// until the error estimate drops below relTol times the L1 norm.
QuadResult integrateAdaptive(const std::function<double(double)>& f, double a, double b,
                             double relTol, unsigned maxDepth = 20);

/// Sum of adaptive integrals over consecutive panels [b0,b1], [b1,b2], ...
/// Breakpoints must be non-decreasing; empty panels are skipped.
QuadResult integratePanels(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double relTol,
                           unsigned maxDepth = 20);

}  // namespace sfd
