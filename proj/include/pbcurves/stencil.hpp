#pragma once

#include <vector>

#include "pbcurves/spaceform.hpp"

namespace pbcurves {

/// Finite-difference weights for the derivative of the given order at x0,
/// using samples at the given abscissae (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& grid, int order);

/// Derivative of nodal samples on a uniform grid with spacing h.
///
/// Interior nodes use centered stencils of the requested accuracy; nodes
/// near an end use the narrowest one-sided stencil of the same accuracy. With
/// `periodic` the last sample duplicates the first and the stencils wrap.
std::vector<Vec> differentiate(const std::vector<Vec>& f, double h, int order, int accuracy,
                               bool periodic);
std::vector<double> differentiate(const std::vector<double>& f, double h, int order, int accuracy,
                                  bool periodic);

}  // namespace pbcurves
