#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "brute.hpp"
#include "sdepth/io.hpp"
#include "sdepth/kernels.hpp"
#include "sdepth/pipeline.hpp"
#include "sdepth/scatter_depth.hpp"

using namespace sdepth;

namespace {

Matrix base_sigma() {
  Matrix s(2, 2);
  s << 2.0, 0.6, 0.6, 1.0;
  return s;
}

/// m windows of iid N(0, base) rows, with optional replacements.
WindowedSeries synthetic(int m, int rows, std::uint64_t seed, int scale_day = -1, int shape_day = -1) {
  std::mt19937_64 rng(seed);
  WindowedSeries ws;
  Matrix rotated(2, 2);
  rotated << 1.0, -0.6, -0.6, 2.0;
  for (int d = 0; d < m; ++d) {
    Matrix sigma = base_sigma();
    if (d == scale_day) sigma *= 8.0;
    if (d == shape_day) sigma = rotated * (std::sqrt(base_sigma().determinant() / rotated.determinant()));
    ws.windows.push_back({"w" + std::to_string(100 + d), Dataset(brute::mvn_rows(rows, sigma, rng))});
  }
  return ws;
}

DetectionConfig config() {
  DetectionConfig c;
  c.dirs = DirectionBudget::uniform(1000, 3);
  c.mcd.n_starts = 20;
  return c;
}

}  // namespace

TEST_CASE("type-7 quantiles") {
  CHECK(quantile_type7({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_type7({5}, 0.75) == 5.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> v(static_cast<std::size_t>(1 + rep));
    for (auto& x : v) x = g(rng);
    for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      CHECK(quantile_type7(v, p) == doctest::Approx(brute::quantile7(v, p)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(quantile_type7({}, 0.5), DomainError);
}

TEST_CASE("windows by calendar day and by label") {
  std::vector<std::string> tags;
  Matrix x(9, 2);
  for (int i = 0; i < 9; ++i) {
    x.row(i) << i, -i;
    const std::string day = i < 4 ? "2016-01-05" : (i < 8 ? "2016-01-04" : "2016-01-06");
    tags.push_back(day + "T09:3" + std::to_string(i) + ":00Z");
  }
  const auto ws = WindowedSeries::from_tagged(Dataset(x, tags), true, 3);
  REQUIRE(ws.windows.size() == 2);
  CHECK(ws.windows[0].label == "2016-01-05");
  CHECK(ws.windows[1].label == "2016-01-04");
  CHECK(ws.windows[1].data.obs()(0, 0) == 4.0);
  CHECK(ws.dropped == std::vector<std::string>{"2016-01-06"});
  CHECK(ws.pooled().n() == 8);
  // Pooled rows follow label order.
  CHECK(ws.pooled().obs()(0, 0) == 4.0);

  const auto by_label = WindowedSeries::from_tagged(Dataset(x, std::vector<std::string>(9, "a")), false, 1);
  CHECK(by_label.windows.size() == 1);
  CHECK_THROWS_AS(WindowedSeries::from_tagged(Dataset(x, std::vector<std::string>(9, "Jan 4")), true, 1),
                  io::FormatError);
  CHECK_THROWS_AS(WindowedSeries::from_tagged(Dataset(x), true, 1), DomainError);
}

TEST_CASE("identical windows share the global depths") {
  std::mt19937_64 rng(2);
  const Dataset one(brute::mvn_rows(81, base_sigma(), rng));
  WindowedSeries ws;
  for (int d = 0; d < 5; ++d) ws.windows.push_back({"d" + std::to_string(d), one});
  auto c = config();
  c.location = LocationSpec::coord_median();
  const auto rep = detect(ws, c);
  CHECK(rep.global.scatter_depth == rep.global.shape_depth);
  for (const auto& w : rep.windows) {
    CHECK(w.depth_sc == doctest::Approx(rep.global.scatter_depth).epsilon(1e-12));
    CHECK(w.depth_sh == doctest::Approx(rep.global.shape_depth).epsilon(1e-12));
    CHECK(!w.flag_sc);
    CHECK(!w.flag_sh);
  }
}

TEST_CASE("measures, fences and flags on a synthetic series") {
  const auto ws = synthetic(24, 80, 3, 5, 17);
  const auto c = config();
  const auto rep = detect(ws, c);
  REQUIRE(rep.windows.size() == 24);

  const auto& g = rep.global;
  CHECK(g.scatter_depth == g.shape_depth);
  CHECK(g.shape.entries().determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((g.scaled_scatter.entries() - g.sigma2 * g.shape.entries()).norm() < 1e-12);
  CHECK(g.mcd_scatter.entries() == fast_mcd(ws.pooled(), c.mcd).raw_scatter.entries());

  std::vector<double> sc, sh;
  for (std::size_t i = 0; i < rep.windows.size(); ++i) {
    const auto& w = rep.windows[i];
    const auto& data = ws.windows[i].data;
    CHECK(w.label == ws.windows[i].label);
    CHECK(w.depth_sc >= 0.0);
    CHECK(w.depth_sh <= 1.0);
    CHECK(w.depth_sh >= w.depth_sc);
    const ScatterDepthEvaluator ev(data, resolve_location(data, c.location, c.dirs), c.dirs);
    CHECK(w.depth_sc == ev.evaluate(g.scaled_scatter).value);
    const SpdMatrix fit = fast_mcd(data, c.mcd).raw_scatter;
    CHECK(w.dg_sc == doctest::Approx(geodesic_distance(fit, g.mcd_scatter)).epsilon(1e-12));
    CHECK(w.df_sc == doctest::Approx(frobenius_distance(fit, g.mcd_scatter)).epsilon(1e-12));
    const SpdMatrix fit_shape(fit.entries() / std::sqrt(fit.entries().determinant()));
    CHECK(w.dg_sh == doctest::Approx(geodesic_distance(fit_shape, g.shape)).epsilon(1e-9));
    sc.push_back(w.depth_sc);
    sh.push_back(w.depth_sh);
  }
  const double q1 = brute::quantile7(sc, 0.25), q3 = brute::quantile7(sc, 0.75);
  CHECK(rep.fence_sc.lower == doctest::Approx(q1 - 1.5 * (q3 - q1)).epsilon(1e-14));
  for (std::size_t i = 0; i < sc.size(); ++i) {
    CHECK(rep.windows[i].flag_sc == (sc[i] < rep.fence_sc.lower));
    CHECK(rep.windows[i].flag_sh == (sh[i] < rep.fence_sh.lower));
  }
  // Scale-only day: low scatter depth, ordinary shape depth.
  CHECK(rep.windows[5].flag_sc);
  CHECK(!rep.windows[5].flag_sh);
  // Rotated shape with the same determinant.
  CHECK(rep.windows[17].flag_sh);

  int clean_flags = 0;
  for (std::size_t i = 0; i < rep.windows.size(); ++i) {
    if (i != 5 && i != 17) clean_flags += rep.windows[i].flag_sc + rep.windows[i].flag_sh;
  }
  CHECK(clean_flags <= 2);
}

TEST_CASE("window order and thread count do not matter") {
  auto ws = synthetic(8, 75, 4, 2);
  const auto c = config();
  set_num_threads(1);
  const auto a = detect(ws, c);
  set_num_threads(4);
  const auto b = detect(ws, c);
  set_num_threads(0);
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
  CHECK(report_to_csv(a) == report_to_csv(b));

  std::reverse(ws.windows.begin(), ws.windows.end());
  const auto r = detect(ws, c);
  CHECK(r.global.mcd_scatter.entries() == a.global.mcd_scatter.entries());
  for (std::size_t i = 0; i < a.windows.size(); ++i) {
    const auto& fwd = a.windows[i];
    const auto& rev = r.windows[a.windows.size() - 1 - i];
    CHECK(fwd.label == rev.label);
    CHECK(fwd.depth_sc == rev.depth_sc);
    CHECK(fwd.depth_sh == rev.depth_sh);
    CHECK(fwd.flag_sc == rev.flag_sc);
    CHECK(fwd.flag_sh == rev.flag_sh);
  }
}

TEST_CASE("pooled elliptical sample: the global shape is deep") {
  const auto ws = synthetic(50, 100, 5);
  const auto g = global_baseline(ws.pooled(), DirectionBudget::uniform(2000, 9), McdOptions{});
  CHECK(g.shape_depth >= 0.45);
  CHECK(g.scatter_depth == g.shape_depth);
}

TEST_CASE("report serialization") {
  const auto ws = synthetic(6, 72, 6, 1);
  auto c = config();
  auto rep = detect(ws, c);
  rep.dropped = {"2016-01-09"};
  const auto j = report_to_json(rep);
  CHECK(j.at("windows").size() == 6);
  CHECK(j.at("dropped").at(0) == "2016-01-09");
  const auto& w0 = j.at("windows").at(0);
  for (const char* key : {"label", "n", "scatter_depth_of_global", "shape_depth_of_global", "dF_scatter", "dF_shape",
                          "dg_scatter", "dg_shape", "flags"}) {
    CHECK(w0.contains(key));
  }
  CHECK(j.at("global").at("sigma2").get<double>() == rep.global.sigma2);
  CHECK(j.at("fences").at("scatter").at("lower").get<double>() == rep.fence_sc.lower);

  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("label,depth_sc,depth_sh,dF_sc,dF_sh,dg_sc,dg_sh,flag_sc,flag_sh\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const auto second = csv.substr(csv.find('\n') + 1);
  CHECK(second.rfind(rep.windows[0].label + "," + io::format_double(rep.windows[0].depth_sc) + ",", 0) == 0);

  WindowedSeries few = synthetic(3, 72, 7);
  CHECK_THROWS_AS(detect(few, c), DomainError);
}
