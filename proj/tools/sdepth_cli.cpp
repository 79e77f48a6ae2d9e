#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sdepth/dataset.hpp"
#include "sdepth/deepest.hpp"
#include "sdepth/io.hpp"
#include "sdepth/kernels.hpp"
#include "sdepth/oracles.hpp"
#include "sdepth/paths.hpp"
#include "sdepth/pipeline.hpp"
#include "sdepth/scatter_depth.hpp"
#include "sdepth/shape.hpp"

namespace {

using namespace sdepth;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string data;
  std::uint64_t seed = 0;
  int directions = 10000;
  int threads = 0;
  bool exact2d = false;
  bool antipodal = false;
  std::string location = "tukey";
  std::string output;
};

void add_common(CLI::App* cmd, Common& c, bool needs_data = true) {
  if (needs_data) cmd->add_option("--data", c.data, "CSV dataset")->required();
  cmd->add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();
  cmd->add_option("--directions", c.directions, "number of sampled directions")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "OpenMP threads (0: all cores)")->capture_default_str();
  cmd->add_flag("--exact2d", c.exact2d, "exact infimum over the circle (k = 2)");
  cmd->add_flag("--antipodal", c.antipodal, "use antipodal direction pairs");
  cmd->add_option("--location", c.location, "tukey | coordmedian | fixed:t1,t2,...")->capture_default_str();
  cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
}

DirectionBudget budget_of(const Common& c) {
  if (c.exact2d) return DirectionBudget::exact2d();
  return c.antipodal ? DirectionBudget::antipodal(c.directions, c.seed) : DirectionBudget::uniform(c.directions, c.seed);
}

LocationSpec location_of(const std::string& s) {
  if (s == "tukey") return LocationSpec::tukey();
  if (s == "coordmedian") return LocationSpec::coord_median();
  if (s.rfind("fixed:", 0) == 0) {
    std::vector<double> v;
    std::stringstream in(s.substr(6));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("bad --location coordinate '" + item + "'");
      }
    }
    if (v.empty()) throw UsageError("--location fixed: needs coordinates");
    return LocationSpec::fixed(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  throw UsageError("unknown --location '" + s + "'");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw io::FormatError("cannot write " + c.output);
  out << text;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json evaluation_json(const DepthEvaluation& e, int n) {
  return {{"value", e.value},
          {"count", e.count},
          {"n", n},
          {"argmin_direction", vector_json(e.argmin_direction)},
          {"binding_side", to_string(e.binding_side)},
          {"n_directions_used", e.n_directions_used}};
}

void check_dim(const SpdMatrix& m, const Dataset& d, const std::string& what) {
  if (m.dim() != d.k()) {
    throw DimensionMismatch(what + " is " + std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                            " but the data have " + std::to_string(d.k()) + " columns");
  }
}

ScaleFunctional scale_arg(const std::string& s) {
  try {
    return scale_functional_from_string(s);
  } catch (const std::exception&) {
    throw UsageError("unknown --scale '" + s + "' (tr|det|trstar|s11)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scatter, concentration and shape halfspace depth"};
  app.require_subcommand(1);

  Common c;
  std::string sigma_path, shape_path, a_path, b_path, sigma0_path, kind = "linear", scale = "det", model;
  bool concentration = false, shape = false;
  int grid = 101, min_rows = 70, starts = 8, mcd_starts = 50;
  double alpha = 0.0;
  std::string csv_path;

  auto* depth = app.add_subcommand("depth", "scatter (or concentration) depth of a matrix");
  add_common(depth, c);
  depth->add_option("--sigma", sigma_path, "matrix JSON")->required();
  depth->add_flag("--concentration", concentration, "treat the matrix as a concentration matrix");

  auto* sdepth_cmd = app.add_subcommand("shape-depth", "profile shape depth of a shape matrix");
  add_common(sdepth_cmd, c);
  sdepth_cmd->add_option("--shape", shape_path, "matrix JSON")->required();
  sdepth_cmd->add_option("--scale", scale, "tr|det|trstar|s11")->capture_default_str();

  auto* deepest = app.add_subcommand("deepest", "search for a deepest scatter or shape matrix");
  add_common(deepest, c);
  deepest->add_flag("--shape", shape, "search shape matrices");
  deepest->add_option("--scale", scale, "tr|det|trstar|s11")->capture_default_str();
  deepest->add_option("--starts", starts, "number of search starts")->capture_default_str()->check(
      CLI::PositiveNumber);
  deepest->add_option("--mcd-starts", mcd_starts, "random starts of the MCD start point")->capture_default_str();

  auto* profile = app.add_subcommand("profile", "scatter depth along a path");
  add_common(profile, c);
  profile->add_option("--a", a_path, "start matrix JSON")->required();
  profile->add_option("--b", b_path, "end matrix JSON")->required();
  profile->add_option("--kind", kind, "linear|geodesic|harmonic")->capture_default_str();
  profile->add_option("--grid", grid, "grid points")->capture_default_str()->check(CLI::Range(3, 1000000));

  auto* region = app.add_subcommand("region", "membership in the depth region of order alpha");
  add_common(region, c);
  region->add_option("--sigma", sigma_path, "matrix JSON")->required();
  region->add_option("--alpha", alpha, "depth level")->required()->check(CLI::Range(0.0, 1.0));
  region->add_flag("--shape", shape, "shape region (matrix normalized by --scale)");
  region->add_option("--scale", scale, "tr|det|trstar|s11")->capture_default_str();

  auto* detect_cmd = app.add_subcommand("detect", "windowed dispersion-outlier detection");
  add_common(detect_cmd, c);
  detect_cmd->add_option("--min-rows", min_rows, "minimum rows per window")->capture_default_str()->check(
      CLI::PositiveNumber);
  detect_cmd->add_option("--mcd-starts", mcd_starts, "random MCD starts")->capture_default_str();
  detect_cmd->add_option("--csv", csv_path, "also write the per-window measures as CSV");

  auto* oracle = app.add_subcommand("oracle", "closed-form depth under a reference model");
  add_common(oracle, c, false);
  oracle->add_option("model", model, "gaussian|cauchy")->required()->check(CLI::IsMember({"gaussian", "cauchy"}));
  oracle->add_option("--sigma", sigma_path, "matrix JSON")->required();
  oracle->add_option("--sigma0", sigma0_path, "model scatter (gaussian; default identity)");
  oracle->add_flag("--shape", shape, "shape depth instead of scatter depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    set_num_threads(c.threads);
    const DirectionBudget dirs = budget_of(c);
    const LocationSpec loc = location_of(c.location);

    if (*oracle) {
      const SpdMatrix sigma = io::read_spd(sigma_path);
      double value = 0.0;
      if (model == "gaussian") {
        const SpdMatrix sigma0 = sigma0_path.empty() ? SpdMatrix::identity(sigma.dim()) : io::read_spd(sigma0_path);
        if (sigma0.dim() != sigma.dim()) throw DimensionMismatch("--sigma and --sigma0 differ in dimension");
        value = shape ? oracles::gaussian_shape_depth(sigma0, sigma) : oracles::gaussian_scatter_depth(sigma0, sigma);
      } else {
        if (!sigma0_path.empty()) throw UsageError("--sigma0 applies to the gaussian model only");
        value = shape ? oracles::cauchy_shape_depth(sigma) : oracles::cauchy_scatter_depth(sigma);
      }
      emit(c, io::format_double(value) + "\n");
      return 0;
    }

    const Dataset d = load_dataset_csv(c.data);

    if (*depth) {
      const SpdMatrix m = io::read_spd(sigma_path);
      check_dim(m, d, "--sigma");
      const auto e = concentration ? concentration_depth(d, loc, m, dirs) : scatter_depth(d, loc, m, dirs);
      json out = evaluation_json(e, d.n());
      out["location"] = vector_json(resolve_location(d, loc, dirs));
      emit(c, out.dump(2) + "\n");
    } else if (*sdepth_cmd) {
      const ScaleFunctional s = scale_arg(scale);
      const SpdMatrix m = io::read_spd(shape_path);
      check_dim(m, d, "--shape");
      const auto r = shape_depth(d, loc, ShapeMatrix::normalize(m, s), dirs);
      const json out = {{"value", r.value}, {"count", r.count},       {"n", d.n()},
                        {"sigma2", r.sigma2}, {"boundary", r.boundary}, {"scale", to_string(s)}};
      emit(c, out.dump(2) + "\n");
    } else if (*deepest) {
      SearchOptions opt;
      opt.seed = c.seed;
      opt.starts = starts;
      opt.mcd_starts = mcd_starts;
      json out;
      DeepestResult r;
      if (shape) {
        const ScaleFunctional s = scale_arg(scale);
        r = deepest_shape(d, loc, s, dirs, opt);
        out["scale"] = to_string(s);
      } else {
        r = deepest_scatter(d, loc, dirs, opt);
      }
      out["argmax"] = io::matrix_to_json(r.argmax.entries());
      out["value"] = r.value;
      out["count"] = r.count;
      out["n"] = d.n();
      if (shape) out["sigma2"] = r.sigma2;
      out["representative"] = io::matrix_to_json(r.representative.entries());
      out["representative_value"] = r.representative_value;
      out["representative_rule"] = r.representative_rule;
      out["near_maximizers"] = r.near_maximizers.size();
      out["evaluations"] = r.evaluations;
      emit(c, out.dump(2) + "\n");
    } else if (*profile) {
      PathKind pk;
      try {
        pk = path_kind_from_string(kind);
      } catch (const std::exception&) {
        throw UsageError("unknown --kind '" + kind + "' (linear|geodesic|harmonic)");
      }
      const SpdMatrix a = io::read_spd(a_path);
      const SpdMatrix b = io::read_spd(b_path);
      check_dim(a, d, "--a");
      check_dim(b, d, "--b");
      const auto p = depth_along_path(d, loc, PathSpec(a, b, pk), grid, dirs);
      std::string text = "t,depth\n";
      for (std::size_t i = 0; i < p.ts.size(); ++i) {
        text += io::format_double(p.ts[i]) + "," + io::format_double(p.values[i]) + "\n";
      }
      emit(c, text);
      std::cerr << "quasi_concave=" << (p.quasi_concave ? "true" : "false")
                << " max_deficit=" << io::format_double(p.max_deficit) << "\n";
    } else if (*region) {
      const SpdMatrix m = io::read_spd(sigma_path);
      check_dim(m, d, "--sigma");
      const bool inside = shape ? shape_region_contains(d, loc, ShapeMatrix::normalize(m, scale_arg(scale)), alpha, dirs)
                                : region_contains(d, loc, m, alpha, dirs);
      emit(c, inside ? "true\n" : "false\n");
    } else if (*detect_cmd) {
      const io::Table table = io::read_table_csv(c.data);
      if (table.tag_column.empty()) throw io::FormatError("detect needs a timestamp or window column");
      const Dataset tagged(table.values, table.tags);
      const auto ws = WindowedSeries::from_tagged(tagged, table.tag_column == "timestamp", min_rows);
      DetectionConfig config;
      config.min_rows = min_rows;
      config.dirs = dirs;
      config.location = loc;
      config.mcd.seed = c.seed;
      config.mcd.n_starts = mcd_starts;
      const auto report = detect(ws, config);
      emit(c, report_to_json(report).dump(2) + "\n");
      if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw io::FormatError("cannot write " + csv_path);
        out << report_to_csv(report);
      }
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
