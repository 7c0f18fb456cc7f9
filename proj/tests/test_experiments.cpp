#include <cmath>
#include <string>

#include "doctest.h"
#include "nlslab/experiments.hpp"
#include "nlslab/report.hpp"

using namespace nlslab;

namespace {

const DecayFit& fit_named(const ExperimentReport& r, const std::string& name) {
  for (const auto& f : r.fits) {
    if (f.name == name) return f;
  }
  FAIL("no fit named " << name);
  return r.fits.front();
}

const Check& check_named(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("no check named " << name);
  return r.checks.front();
}

RunConfig small_linear_decay() {
  RunConfig cfg = default_config("linear_decay");
  cfg.sweeps["dispersive_t"] = {1, 2, 4, 8};
  cfg.settings["dispersive_freq"] = 8;
  cfg.sweeps["N"] = {2, 4, 8, 16};
  cfg.settings["run_inner"] = 0;
  return cfg;
}

}  // namespace

TEST_CASE("embedding tuples") {
  CHECK_NOTHROW(EmbeddingTuple{4, 2.0, 4.0, 0.5, 0.5}.validate());
  // One boundary equality (1/p = 1/q + s) is allowed.
  CHECK_NOTHROW(EmbeddingTuple{4, 2.0, 4.0, 0.25, 0.75}.validate());
  // p = 1 together with 1/p = 1/q + s is two.
  CHECK_THROWS_AS(EmbeddingTuple({4, 1.0, 2.0, 0.5, 1.5}).validate(), std::invalid_argument);
  // Scaling relation broken.
  CHECK_THROWS_AS(EmbeddingTuple({4, 2.0, 4.0, 0.5, 0.7}).validate(), std::invalid_argument);
  // 1/p above 1/q + s.
  CHECK_THROWS_AS(EmbeddingTuple({4, 1.5, 4.0, 0.1, 1.6}).validate(), std::invalid_argument);
}

TEST_CASE("embedding ratio is scale invariant on the test set") {
  const ExperimentReport r = run_embedding(default_config("embedding"));
  CHECK(check_named(r, "ratios_finite").pass);
  CHECK(check_named(r, "scale_spread").value <= 0.02);
  CHECK(r.scalars.at("ratio_gaussian_lambda1") > 0.0);
  CHECK(r.fits.empty());
}

TEST_CASE("mismatch decay and its preconditions") {
  const ExperimentReport r = run_mismatch(default_config("mismatch"));
  const DecayFit& f = fit_named(r, "separation_decay");
  CHECK(f.theory_slope == doctest::Approx(-1.0));
  CHECK(f.fitted_slope <= -0.7);
  CHECK(f.pass);

  RunConfig half = default_config("mismatch");
  half.settings["sigma"] = 0.5;
  CHECK(fit_named(run_mismatch(half), "separation_decay").theory_slope ==
        doctest::Approx(-0.5));

  RunConfig overlap = default_config("mismatch");
  overlap.sweeps["A"] = {-1, 4, 8, 16};
  CHECK_THROWS_AS(run_mismatch(overlap), std::invalid_argument);
  CHECK_THROWS_AS(execute(overlap), ConfigError);
}

TEST_CASE("linear decay theory slopes and dispersive baseline") {
  const ExperimentReport r = run_linear_decay(small_linear_decay());
  const DecayFit& disp = fit_named(r, "dispersive");
  CHECK(disp.theory_slope == doctest::Approx(-1.0));
  CHECK(disp.fitted_slope == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(disp.r_squared >= 0.99);
  CHECK(fit_named(r, "t_decay_N8").theory_slope == doctest::Approx(-0.75));
  CHECK(fit_named(r, "n_scaling").theory_slope == doctest::Approx(-0.2778).epsilon(1e-3));
  for (const auto& f : r.fits) CHECK_FALSE(f.reference.empty());
}

TEST_CASE("conservation on a short horizon") {
  RunConfig cfg = default_config("conservation");
  cfg.settings["horizon"] = 1;
  cfg.settings["dt"] = 5e-3;
  cfg.settings["freq_max"] = 8;
  cfg.settings["energy_horizon"] = 0.5;
  cfg.settings["picard_steps"] = 100;
  const ExperimentReport r = run_conservation(cfg);
  CHECK(check_named(r, "mass_drift").pass);
  CHECK(check_named(r, "zero_data_drift").value == 0.0);
  CHECK(check_named(r, "picard_vs_split_step").pass);
  CHECK(fit_named(r, "energy_order").theory_slope == 2.0);
  CHECK(r.series.at("mass_drift").size() == 11);
}

TEST_CASE("guard trip surfaces as a runtime error naming the guard") {
  RunConfig cfg = default_config("conservation");
  cfg.grid = {256, 12.0, false};
  cfg.settings["horizon"] = 5;
  cfg.settings["dt"] = 1e-2;
  try {
    execute(cfg);
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(std::string(e.what()).find("guard") != std::string::npos);
    CHECK(std::string(e.what()).find("conservation") != std::string::npos);
  }
}

TEST_CASE("data too coarse for the grid is rejected") {
  RunConfig cfg = default_config("mismatch");
  cfg.data = "bump";
  cfg.settings["support"] = 1;
  cfg.grid = {16, 400.0, false};
  CHECK_THROWS_AS(execute(cfg), ConfigError);
}

TEST_CASE("inadmissible triple is a configuration error") {
  RunConfig cfg = default_config("weighted_strichartz");
  cfg.settings["q"] = 1.5;
  CHECK_THROWS_AS(execute(cfg), ConfigError);
}

TEST_CASE("small global decomposition run") {
  RunConfig cfg = default_config("global_decomposition");
  cfg.sweeps["bands"] = {1, 2};
  cfg.sweeps["N"] = {1, 2, 4, 8};
  cfg.settings["horizon"] = 1;
  cfg.settings["dt"] = 1e-2;
  cfg.settings["early_window"] = 0.5;
  const ExperimentReport r = run_global_decomposition(cfg);
  CHECK(check_named(r, "linear_control_hsc_drift").value <= 1e-8);
  CHECK(check_named(r, "v_smoothing_norm_finite").pass);
  const DecayFit& f = fit_named(r, "w_sup_n_scaling");
  CHECK(f.theory_slope == doctest::Approx(2.0 / 9.0));
  CHECK(f.abscissa.size() == 4);
  CHECK(r.series.at("time").size() == 5);
  // The split recombines: w0 + v0 = u0 means w0 <= ||u0|| + ||v0|| in L^2.
  CHECK(r.scalars.at("w0_l2_N8") <= std::sqrt(r.scalars.at("u0_mass")) * 1.5);
}

TEST_CASE("short horizon with the split near the top band stays inside the guard") {
  RunConfig cfg = default_config("global_decomposition");
  cfg.sweeps["N"] = {2, 4, 8, 16};
  cfg.sweeps["bands"] = {1, 2, 4};
  cfg.settings["horizon"] = 1;
  cfg.settings["dt"] = 1e-2;
  cfg.settings["early_window"] = 0.5;
  cfg.settings["control_run"] = 0;
  CHECK_NOTHROW(execute(cfg));
}

TEST_CASE("same config and seed give identical records") {
  RunConfig cfg = default_config("mismatch");
  cfg.seed = 11;
  CHECK(report_record(execute(cfg)) == report_record(execute(cfg)));
  RunConfig gd = default_config("global_decomposition");
  gd.sweeps["bands"] = {1, 2};
  gd.sweeps["N"] = {1, 2, 4, 8};
  gd.settings["horizon"] = 1;
  gd.settings["dt"] = 1e-2;
  gd.settings["early_window"] = 0.5;
  gd.settings["control_run"] = 0;
  gd.seed = 3;
  const std::string a = report_record(execute(gd));
  CHECK(a == report_record(execute(gd)));
  gd.seed = 4;
  CHECK(a != report_record(execute(gd)));
}

TEST_CASE("all_pass and checks") {
  ExperimentReport r;
  r.add_check("a", 1.0, "<=", 2.0);
  r.add_check("b", 3.0, ">=", 2.0);
  r.add_check("c", 0.0, "==", 0.0);
  CHECK(r.all_pass());
  r.add_check("d", std::nan(""), "<=", 1.0);
  CHECK_FALSE(r.all_pass());
  CHECK_THROWS_AS(r.add_check("e", 1.0, "~", 1.0), std::invalid_argument);
}
