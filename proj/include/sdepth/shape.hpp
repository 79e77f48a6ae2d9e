#pragma once

#include <span>
#include <string>

#include "sdepth/dataset.hpp"
#include "sdepth/scatter_depth.hpp"
#include "sdepth/spd.hpp"

namespace sdepth {

/// Scale functionals: Str = tr/k, Sdet = det^{1/k}, StrStar = k / tr(inverse),
/// S11 = upper-left entry.
enum class ScaleFunctional { Str, Sdet, StrStar, S11 };

std::string to_string(ScaleFunctional s);
ScaleFunctional scale_functional_from_string(const std::string& name);  ///< tr|det|trstar|s11

double scale_of(const SpdMatrix& sigma, ScaleFunctional s);

/// Shape matrix with S(v) = 1.
struct ShapeMatrix {
  SpdMatrix v;
  ScaleFunctional scale;

  static ShapeMatrix normalize(const SpdMatrix& sigma, ScaleFunctional s);
};

struct ScaleShape {
  double sigma2;
  ShapeMatrix shape;
};

ScaleShape scale_and_shape(const SpdMatrix& sigma, ScaleFunctional s);

struct ShapeDepthResult {
  double value = 0.0;
  int count = 0;
  double sigma2 = 0.0;    ///< a maximizing scale
  bool boundary = false;  ///< maximum not bracketed inside the search range
  DepthEvaluation at_sigma2;
};

/// Data-adaptive scale anchor: median of y_i' v^{-1} y_i / k.
double profile_anchor(const Matrix& centered, const SpdMatrix& v);

/// max over sigma^2 > 0 of the scatter depth of sigma^2 v on the evaluator's
/// fixed direction set.
///
/// With sampled directions the maximum is exact: level l is reachable iff
/// max_u z_(l) <= min_u z_(n-l+1) with z = (u'y)^2 / u'vu, and sigma^2 is
/// the midpoint of that interval. In Exact2D mode the profile is searched on
/// a 41-point geometric grid over [1e-6, 1e6] * anchor refined by golden
/// section in log-scale (the profile is quasi-concave along the ray). Extra
/// `probes` are evaluated as well and can only raise the result.
ShapeDepthResult shape_depth(const ScatterDepthEvaluator& ev, const SpdMatrix& v, std::span<const double> probes = {});

ShapeDepthResult shape_depth(const Dataset& d, const LocationSpec& t, const ShapeMatrix& v, const DirectionBudget& dirs);

bool shape_region_contains(const Dataset& d, const LocationSpec& t, const ShapeMatrix& v, double alpha,
                           const DirectionBudget& dirs);

}  // namespace sdepth
