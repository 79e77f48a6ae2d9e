#pragma once

// Windowed dispersion-outlier detection: per-window MCD scatter and shape
// fits compared against a pooled baseline through depths and distances,
// with box-plot (1.5 IQR) flagging of low depths.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdepth/dataset.hpp"
#include "sdepth/mcd.hpp"
#include "sdepth/shape.hpp"

namespace sdepth {

struct Window {
  std::string label;
  Dataset data;
};

struct WindowedSeries {
  std::vector<Window> windows;
  std::vector<std::string> dropped;  ///< labels of windows below min_rows
  int min_rows = 70;

  /// Groups rows by tag: calendar day (YYYY-MM-DD prefix of an RFC 3339
  /// timestamp) or the literal label of a `window` column. Windows keep the
  /// order of first appearance.
  static WindowedSeries from_tagged(const Dataset& d, bool calendar_day, int min_rows);
  /// All retained rows, windows concatenated in label order so that the
  /// pooled fits do not depend on window order.
  Dataset pooled() const;
};

struct DetectionConfig {
  int min_rows = 70;
  DirectionBudget dirs;
  McdOptions mcd;
  LocationSpec location;
};

struct GlobalBaseline {
  SpdMatrix mcd_scatter = SpdMatrix::identity(1);  ///< pooled MCD fit
  SpdMatrix shape = SpdMatrix::identity(1);        ///< its S_det shape
  double sigma2 = 1.0;                             ///< profile-maximizing scale
  SpdMatrix scaled_scatter = SpdMatrix::identity(1);  ///< sigma2 * shape
  double scatter_depth = 0.0;
  double shape_depth = 0.0;
};

struct WindowReport {
  std::string label;
  int n = 0;
  double depth_sc = 0.0;
  double depth_sh = 0.0;
  double df_sc = 0.0;
  double df_sh = 0.0;
  double dg_sc = 0.0;
  double dg_sh = 0.0;
  bool flag_sc = false;
  bool flag_sh = false;
};

struct Fence {
  double q1 = 0.0;
  double q3 = 0.0;
  double lower = 0.0;  ///< q1 - 1.5 (q3 - q1)
};

struct DetectionReport {
  GlobalBaseline global;
  std::vector<WindowReport> windows;
  std::vector<std::string> dropped;
  Fence fence_sc;
  Fence fence_sh;
};

/// Type-7 (linear interpolation) sample quantile.
double quantile_type7(std::vector<double> values, double p);

GlobalBaseline global_baseline(const Dataset& full, const DirectionBudget& dirs, const McdOptions& mcd,
                               const LocationSpec& location = {});

DetectionReport detect(const WindowedSeries& ws, const DetectionConfig& config);

nlohmann::json report_to_json(const DetectionReport& report);
/// Columns: label, depth_sc, depth_sh, dF_sc, dF_sh, dg_sc, dg_sh, flag_sc, flag_sh.
std::string report_to_csv(const DetectionReport& report);

}  // namespace sdepth
