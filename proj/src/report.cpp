#include "nlslab/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace nlslab {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json fit_json(const DecayFit& f) {
  json samples = json::array();
  for (std::size_t i = 0; i < f.abscissa.size(); ++i) {
    samples.push_back({f.abscissa[i], f.value[i]});
  }
  return {{"name", f.name},
          {"reference", f.reference},
          {"samples", samples},
          {"fitted_slope", f.fitted_slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"theory_slope", f.theory_slope},
          {"tolerance", f.tolerance},
          {"comparison", to_string(f.comparison)},
          {"min_r_squared", f.min_r_squared},
          {"verdict", f.pass ? "pass" : "fail"}};
}

std::string safe_name(const std::string& name) {
  std::string out;
  for (const char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') ? c : '_';
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string report_record(const ExperimentReport& r) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["experiment_id"] = r.experiment_id;
  doc["seed"] = r.seed;
  doc["verdict"] = r.all_pass() ? "pass" : "fail";
  doc["params"] = r.params;
  doc["fits"] = json::array();
  for (const auto& f : r.fits) doc["fits"].push_back(fit_json(f));
  doc["checks"] = json::array();
  for (const auto& c : r.checks) {
    doc["checks"].push_back({{"name", c.name},
                             {"value", c.value},
                             {"relation", c.relation},
                             {"threshold", c.threshold},
                             {"verdict", c.pass ? "pass" : "fail"}});
  }
  doc["scalars"] = json::object();
  for (const auto& [k, v] : r.scalars) doc["scalars"][k] = v;
  doc["series"] = json::object();
  for (const auto& [k, v] : r.series) doc["series"][k] = v;
  doc["artifacts"] = r.artifacts;
  return doc.dump(2) + "\n";
}

std::string report_summary(const ExperimentReport& r) {
  std::string out = fmt::format("experiment {} (seed {}): {}\n", r.experiment_id, r.seed,
                                r.all_pass() ? "PASS" : "FAIL");
  if (r.fits.empty()) {
    out += "no fits\n";
  } else {
    out += "fits:\n";
    for (const auto& f : r.fits) {
      out += fmt::format("  [{}] {}: slope {:.4f} vs theory {:.4f} ({} {:g}), R^2 {:.4f}\n",
                         f.pass ? "pass" : "FAIL", f.name, f.fitted_slope, f.theory_slope,
                         to_string(f.comparison), f.tolerance, f.r_squared);
    }
  }
  if (!r.checks.empty()) {
    out += "checks:\n";
    for (const auto& c : r.checks) {
      out += fmt::format("  [{}] {}: {:.6g} {} {:.6g}\n", c.pass ? "pass" : "FAIL", c.name,
                         c.value, c.relation, c.threshold);
    }
  }
  return out;
}

std::string fit_table(const DecayFit& f) {
  std::string out = "abscissa,value,log_abscissa,log_value\n";
  for (std::size_t i = 0; i < f.abscissa.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", f.abscissa[i], f.value[i],
                       std::log(f.abscissa[i]), std::log(f.value[i]));
  }
  return out;
}

WrittenReport write_report(ExperimentReport report, const fs::path& root) {
  const fs::path base = root / report.experiment_id;
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw std::runtime_error("cannot create " + base.string() + ": " + ec.message());
  const std::string stamp = utc_stamp();
  fs::path dir;
  for (int k = 0;; ++k) {
    dir = base / (k == 0 ? stamp : stamp + "-" + std::to_string(k));
    // create_directory reports false when the entry already exists.
    if (fs::create_directory(dir, ec)) break;
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }

  WrittenReport out{dir, {}};
  report.artifacts.clear();
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& f : report.fits) {
    const std::string stem = "fit_" + safe_name(f.name);
    files.emplace_back(stem + ".csv", fit_table(f));
    files.emplace_back(stem + ".svg", render_plot(f));
  }
  files.emplace_back("summary.txt", report_summary(report));
  for (const auto& [name, text] : files) report.artifacts.push_back(name);
  files.emplace_back("record.json", report_record(report));
  for (const auto& [name, text] : files) {
    write_file(dir / name, text);
    out.files.push_back(dir / name);
  }
  return out;
}

std::string render_plot(const DecayFit& fit) {
  if (fit.abscissa.size() < 4 || fit.abscissa.size() != fit.value.size()) {
    throw std::invalid_argument("render_plot: need >= 4 samples");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.abscissa.size(); ++i) {
    if (!(fit.abscissa[i] > 0.0) || !(fit.value[i] > 0.0)) {
      throw std::invalid_argument("render_plot: samples must be positive");
    }
    lx.push_back(std::log10(fit.abscissa[i]));
    ly.push_back(std::log10(fit.value[i]));
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(lx.begin(), lx.end());
  const double x0 = *xmin_it, x1 = *xmax_it;
  if (!(x1 > x0)) throw std::invalid_argument("render_plot: degenerate abscissae");

  // Lines in log10 coordinates. The fitted intercept is in natural log.
  const double fit_b = fit.intercept / std::log(10.0);
  double cx = 0, cy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    cx += lx[i];
    cy += ly[i];
  }
  cx /= lx.size();
  cy /= ly.size();
  const auto fitted = [&](double x) { return fit_b + fit.fitted_slope * x; };
  const auto theory = [&](double x) { return cy + fit.theory_slope * (x - cx); };

  double y0 = *std::min_element(ly.begin(), ly.end());
  double y1 = *std::max_element(ly.begin(), ly.end());
  for (const double x : {x0, x1}) {
    y0 = std::min({y0, fitted(x), theory(x)});
    y1 = std::max({y1, fitted(x), theory(x)});
  }
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  const double X0 = x0 - padx, X1 = x1 + padx, Y0 = y0 - pady, Y1 = y1 + pady;

  constexpr double W = 640, H = 440, L = 80, R = 20, Tm = 50, B = 70;
  const auto px = [&](double x) { return L + (x - X0) / (X1 - X0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - Y0) / (Y1 - Y0) * (H - Tm - B); };

  const char* colour = fit.pass ? "#1a8f2e" : "#c62828";
  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" "
      "viewBox=\"0 0 {:g} {:g}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      W, H, W, H);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"{:g}\" y=\"20\" font-size=\"14\">{} [{}]</text>\n", L,
                   xml_escape(fit.name), fit.pass ? "pass" : "fail");
  s += fmt::format(
      "<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      L, Tm, W - L - R, H - Tm - B);
  s += fmt::format(
      "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"#777\" "
      "stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n",
      px(x0), py(theory(x0)), px(x1), py(theory(x1)));
  s += fmt::format(
      "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"{}\" "
      "stroke-width=\"2\"/>\n",
      px(x0), py(fitted(x0)), px(x1), py(fitted(x1)), colour);
  for (std::size_t i = 0; i < lx.size(); ++i) {
    s += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"4\" fill=\"#1f4e9c\"/>\n",
                     px(lx[i]), py(ly[i]));
  }
  s += fmt::format(
      "<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"middle\">log10 abscissa</text>\n",
      L + 0.5 * (W - L - R), H - B + 30);
  s += fmt::format(
      "<text x=\"{:g}\" y=\"{:g}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
      L + 0.5 * (W - L - R), H - 12, xml_escape(fit.reference));
  s += fmt::format(
      "<text transform=\"translate(20,{:g}) rotate(-90)\" text-anchor=\"middle\">log10 "
      "value</text>\n",
      Tm + 0.5 * (H - Tm - B));
  s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" fill=\"{}\">fitted slope {:.4f} (R^2 {:.4f})</text>\n",
                   L + 10, Tm + 18, colour, fit.fitted_slope, fit.r_squared);
  s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" fill=\"#555\">theory slope {:.4f}</text>\n",
                   L + 10, Tm + 34, fit.theory_slope);
  for (const double x : {x0, x1}) {
    s += fmt::format("<text x=\"{:.3f}\" y=\"{:g}\" text-anchor=\"middle\">{:.3g}</text>\n",
                     px(x), H - B + 15, std::pow(10.0, x));
  }
  s += "</svg>\n";
  return s;
}

void render_plot(const DecayFit& fit, const fs::path& path) {
  write_file(path, render_plot(fit));
}

}  // namespace nlslab
