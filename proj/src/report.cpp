#include "letcc/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace letcc {
namespace {

// Minimal ordered JSON emitter; numbers go through format_number so output
// is byte-stable.
class JsonWriter {
 public:
  JsonWriter& begin_object() { open('{'); return *this; }
  JsonWriter& end_object() { close('}'); return *this; }
  JsonWriter& begin_array() { open('['); return *this; }
  JsonWriter& end_array() { close(']'); return *this; }

  JsonWriter& key(std::string_view k) {
    separator();
    indent();
    string(k);
    out_ += ": ";
    after_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    item();
    out_ += std::isfinite(v) ? format_number(v) : "null";
    return *this;
  }
  JsonWriter& value(std::optional<double> v) {
    return v ? value(*v) : null();
  }
  JsonWriter& value(std::uint64_t v) { item(); out_ += std::to_string(v); return *this; }
  JsonWriter& value(std::size_t v, int) { return value(static_cast<std::uint64_t>(v)); }
  JsonWriter& value(bool v) { item(); out_ += v ? "true" : "false"; return *this; }
  JsonWriter& value(std::string_view v) { item(); string(v); return *this; }
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null() { item(); out_ += "null"; return *this; }

  std::string str() const { return out_ + "\n"; }

 private:
  void open(char c) {
    item();
    out_ += c;
    ++depth_;
    first_ = true;
  }
  void close(char c) {
    --depth_;
    if (!first_) {
      out_ += '\n';
      indent();
    }
    out_ += c;
    first_ = false;
  }
  void item() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (depth_ > 0) {
      separator();
      indent();
    }
  }
  void separator() {
    if (!first_) out_ += ',';
    if (depth_ > 0) out_ += '\n';
    first_ = false;
  }
  void indent() { out_.append(static_cast<std::size_t>(2 * depth_), ' '); }
  void string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) out_ += fmt::format("\\u{:04x}", c);
          else out_ += c;
      }
    }
    out_ += '"';
  }

  std::string out_;
  int depth_ = 0;
  bool first_ = true;
  bool after_key_ = false;
};

std::string opt_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "nan";
}

struct RowFields {
  std::string scheme;
  std::string f;
  std::size_t k, n, s;
  double sigma0, lambda_e, lambda_d;
  std::size_t trials;
  const Aggregate* agg;
  std::uint64_t seed;
};

std::string csv_row(const RowFields& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto a = r.agg;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.scheme, r.f, r.k,
                     r.n, r.s, format_number(r.sigma0), format_number(r.lambda_e),
                     format_number(r.lambda_d), r.trials, format_number(a ? a->mean_mse : nan),
                     format_number(a ? a->std_mse : nan), format_number(a ? a->ci95_lo : nan),
                     format_number(a ? a->ci95_hi : nan), format_number(a ? a->mean_rmse : nan),
                     a ? opt_number(a->mean_relacc) : "nan", r.seed);
}

void json_row(JsonWriter& w, const RowFields& r) {
  w.key("scheme").value(r.scheme);
  w.key("f").value(r.f);
  w.key("K").value(r.k, 0);
  w.key("N").value(r.n, 0);
  w.key("S").value(r.s, 0);
  w.key("sigma0").value(r.sigma0);
  w.key("lambda_e").value(r.lambda_e);
  w.key("lambda_d").value(r.lambda_d);
  w.key("trials").value(r.trials, 0);
  if (r.agg) {
    w.key("mean_mse").value(r.agg->mean_mse);
    w.key("std_mse").value(r.agg->std_mse);
    w.key("ci95_lo").value(r.agg->ci95_lo);
    w.key("ci95_hi").value(r.agg->ci95_hi);
    w.key("mean_rmse").value(r.agg->mean_rmse);
    w.key("mean_relacc").value(r.agg->mean_relacc);
    w.key("degenerate_ci").value(r.agg->degenerate_ci);
  } else {
    for (const char* k : {"mean_mse", "std_mse", "ci95_lo", "ci95_hi", "mean_rmse", "mean_relacc"}) {
      w.key(k).null();
    }
  }
  w.key("seed").value(r.seed);
}

void slope_block(JsonWriter& w, const SlopeFit& f) {
  w.begin_object();
  if (f.at_floor) {
    w.key("slope").null();
    w.key("intercept").null();
    w.key("r2").null();
  } else {
    w.key("slope").value(f.slope);
    w.key("intercept").value(f.intercept);
    w.key("r2").value(f.r2);
  }
  w.key("points_used").value(f.points_used, 0);
  w.key("at_floor").value(f.at_floor);
  w.end_object();
}

RowFields sweep_fields(const SweepConfig& c, const SweepPoint& p) {
  const auto& st = c.settings;
  return {to_string(p.scheme), st.function, st.k, p.n, p.s, st.sigma0, p.lambda_e, p.lambda_d,
          st.trials, p.result ? &*p.result : nullptr, st.seed};
}

}  // namespace

const char* const kReportCsvHeader =
    "scheme,f,K,N,S,sigma0,lambda_e,lambda_d,trials,mean_mse,std_mse,ci95_lo,ci95_hi,"
    "mean_rmse,mean_relacc,seed";

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string sweep_csv(const SweepConfig& config, const SlopeReport& report) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& p : report.points) out += csv_row(sweep_fields(config, p));
  return out;
}

std::string sweep_json(const SweepConfig& config, const SlopeReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("kind").value("sweep_n");
  w.key("lambda_rule").value(to_string(config.settings.lambda_rule));
  w.key("points").begin_array();
  for (const auto& p : report.points) {
    w.begin_object();
    json_row(w, sweep_fields(config, p));
    w.key("at_floor").value(p.at_floor);
    if (p.error.empty()) w.key("error").null();
    else w.key("error").value(p.error);
    w.end_object();
  }
  w.end_array();
  w.key("slopes").begin_object();
  for (const auto& s : report.slopes) {
    w.key(to_string(s.scheme));
    slope_block(w, s.fit);
  }
  w.end_object();
  w.end_object();
  return w.str();
}

std::string sweep_svg(const SweepConfig& config, const SlopeReport& report) {
  constexpr double kW = 640, kH = 480, kL = 70, kR = 20, kT = 30, kB = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& p : report.points) {
    if (!p.result || !(p.result->mean_mse > 0.0)) continue;
    xmin = std::min(xmin, std::log10(static_cast<double>(p.n)));
    xmax = std::max(xmax, std::log10(static_cast<double>(p.n)));
    ymin = std::min(ymin, std::log10(p.result->mean_mse));
    ymax = std::max(ymax, std::log10(p.result->mean_mse));
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  const auto px = [&](double lx) { return kL + (lx - xmin) / (xmax - xmin) * (kW - kL - kR); };
  const auto py = [&](double ly) { return kH - kB - (ly - ymin) / (ymax - ymin) * (kH - kT - kB); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kW, kH, kW, kH);
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kL, kH - kB, kW - kR, kT);
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">log10 N</text>\n"
      "<text x=\"15\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 15 {})\" "
      "text-anchor=\"middle\">log10 mean MSE</text>\n",
      (kL + kW - kR) / 2, kH - 12, (kT + kH - kB) / 2, (kT + kH - kB) / 2);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{:.3g}</text>\n", kL - 5,
                     kH - kB + 15, xmin);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                     kW - kR, kH - kB + 15, xmax);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                     kL - 5, kH - kB, ymin);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                     kL - 5, kT + 10, ymax);

  for (std::size_t si = 0; si < report.slopes.size(); ++si) {
    const auto& ss = report.slopes[si];
    const char* color = colors[si % 4];
    for (const auto& p : report.points) {
      if (p.scheme != ss.scheme || !p.result || !(p.result->mean_mse > 0.0)) continue;
      svg += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"4\" fill=\"{}\"/>\n",
                         px(std::log10(static_cast<double>(p.n))),
                         py(std::log10(p.result->mean_mse)), color);
    }
    if (!ss.fit.at_floor) {
      // ln mse = a + b ln N  =>  log10 mse = a / ln 10 + b log10 N
      const double a10 = ss.fit.intercept / std::log(10.0);
      svg += fmt::format(
          "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"{}\" "
          "stroke-dasharray=\"5,3\"/>\n",
          px(xmin), py(a10 + ss.fit.slope * xmin), px(xmax), py(a10 + ss.fit.slope * xmax), color);
    }
    const std::string label =
        ss.fit.at_floor ? to_string(ss.scheme) + " (at floor)"
                        : fmt::format("{} slope {:.3f}", to_string(ss.scheme), ss.fit.slope);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                       kW - kR - 180, kT + 15 + 16 * static_cast<double>(si), color, label);
  }
  svg += fmt::format("<text x=\"{}\" y=\"18\" font-size=\"13\">f = {}, K = {}</text>\n", kL,
                     config.settings.function, config.settings.k);
  svg += "</svg>\n";
  return svg;
}

std::string straggler_csv(const StragglerSweepConfig& config,
                          const std::vector<StragglerRow>& rows) {
  const auto& st = config.settings;
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += csv_row({"letcc", st.function, st.k, config.n, r.s, st.sigma0, st.lambda_e,
                    r.lambda_d, st.trials, &r.letcc, st.seed});
    out += csv_row({"bacc", st.function, st.k, config.n, r.s, st.sigma0, st.lambda_e,
                    r.lambda_d, st.trials, &r.bacc, st.seed});
  }
  return out;
}

std::string straggler_json(const StragglerSweepConfig& config,
                           const std::vector<StragglerRow>& rows) {
  const auto& st = config.settings;
  JsonWriter w;
  w.begin_object();
  w.key("kind").value("straggler_sweep");
  w.key("rows").begin_array();
  for (const auto& r : rows) {
    w.begin_object();
    w.key("S").value(r.s, 0);
    w.key("letcc").begin_object();
    json_row(w, {"letcc", st.function, st.k, config.n, r.s, st.sigma0, st.lambda_e, r.lambda_d,
                 st.trials, &r.letcc, st.seed});
    w.end_object();
    w.key("bacc").begin_object();
    json_row(w, {"bacc", st.function, st.k, config.n, r.s, st.sigma0, st.lambda_e, r.lambda_d,
                 st.trials, &r.bacc, st.seed});
    w.end_object();
    w.key("letcc_wins").value(r.letcc_wins, 0);
    w.key("letcc_win_fraction").value(r.letcc_win_fraction);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string crossval_scores_csv(const CrossvalResult& result) {
  std::string out = "lambda_e,lambda_d,mean_rmse\n";
  for (const auto& s : result.scores) {
    out += fmt::format("{},{},{}\n", format_number(s.lambda_e), format_number(s.lambda_d),
                       format_number(s.mean_rmse));
  }
  return out;
}

std::string crossval_json(const CrossvalConfig& config, const CrossvalResult& result) {
  const auto& st = config.settings;
  JsonWriter w;
  w.begin_object();
  w.key("kind").value("crossval");
  w.key("f").value(st.function);
  w.key("K").value(st.k, 0);
  w.key("N").value(config.n, 0);
  w.key("S").value(config.s, 0);
  w.key("sigma0").value(st.sigma0);
  w.key("trials").value(st.trials, 0);
  w.key("seed").value(st.seed);
  w.key("best_lambda_e").value(result.best_lambda_e);
  w.key("best_lambda_d").value(result.best_lambda_d);
  w.key("best_rmse").value(result.best_rmse);
  w.key("scores").begin_array();
  for (const auto& s : result.scores) {
    w.begin_object();
    w.key("lambda_e").value(s.lambda_e);
    w.key("lambda_d").value(s.lambda_d);
    w.key("mean_rmse").value(s.mean_rmse);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string trial_json(const TrialConfig& c, const TrialMetrics& m) {
  JsonWriter w;
  w.begin_object();
  w.key("scheme").value(to_string(c.scheme));
  w.key("f").value(c.function.name);
  w.key("K").value(c.k, 0);
  w.key("N").value(c.n, 0);
  w.key("S").value(c.s, 0);
  w.key("sigma0").value(c.sigma0);
  w.key("lambda_e").value(c.lambda_e);
  w.key("lambda_d").value(c.lambda_d);
  w.key("seed").value(m.seed);
  w.key("empirical_risk").value(m.empirical_risk);
  w.key("l_dec").value(m.l_dec);
  w.key("l_enc").value(m.l_enc);
  w.key("encoder_training_error").value(m.encoder_training_error);
  w.key("lipschitz_bound").value(m.lipschitz_bound);
  w.key("rmse").value(m.rmse);
  w.key("relacc").value(m.relacc);
  w.key("survivor_count").value(m.survivor_count, 0);
  w.key("degraded").value(m.degraded);
  w.end_object();
  return w.str();
}

}  // namespace letcc
