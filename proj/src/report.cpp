// Copyright 2026 The synthqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthqa/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "synthqa/error.hpp"

namespace synthqa {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error("report", message); }

double round4(double x) { return std::round(x * 1e4) / 1e4; }

json number_or_null(const std::optional<double>& x) {
  return x ? json(round4(*x)) : json(nullptr);
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string fixed(double x, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  // Avoid "-0.00".
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string metric_text(const std::optional<double>& x) { return x ? fixed(*x, 4) : "n/a"; }

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string shorten(std::string_view label, std::size_t limit = 18) {
  if (label.size() <= limit) return std::string(label);
  std::size_t cut = limit - 1;
  while (cut > 0 && (static_cast<unsigned char>(label[cut]) & 0xC0) == 0x80) --cut;
  return std::string(label.substr(0, cut)) + "…";
}

// JSON inside <script> must not close the element early.
std::string script_safe(std::string text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<' && i + 1 < text.size() && text[i + 1] == '/') {
      out += "<\\/";
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

constexpr const char* kTrnColor = "#1f77b4";
constexpr const char* kSynColor = "#ff7f0e";
constexpr const char* kHolColor = "#2ca02c";

const char* role_color(Role role) {
  switch (role) {
    case Role::kTraining: return kTrnColor;
    case Role::kSynthetic: return kSynColor;
    case Role::kHoldout: return kHolColor;
  }
  return kTrnColor;
}

const char* role_title(Role role) {
  switch (role) {
    case Role::kTraining: return "training";
    case Role::kSynthetic: return "synthetic";
    case Role::kHoldout: return "holdout";
  }
  return "";
}

class Svg {
 public:
  Svg(double width, double height) {
    out_ << "<svg width=\"" << fixed(width, 0) << "\" height=\"" << fixed(height, 0)
         << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0) << "\">";
  }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = {}) {
    out_ << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(w)
         << "\" height=\"" << fixed(h) << "\" fill=\"" << fill << '"' << extra << "/>";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke = "#444") {
    out_ << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2)
         << "\" y2=\"" << fixed(y2) << "\" stroke=\"" << stroke << "\"/>";
  }
  void text(double x, double y, std::string_view content, const std::string& anchor = "middle",
            double rotate = 0.0, int size = 11) {
    out_ << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << '"';
    if (rotate != 0.0) {
      out_ << " transform=\"rotate(" << fixed(rotate, 0) << ' ' << fixed(x) << ' ' << fixed(y)
           << ")\"";
    }
    out_ << '>' << escape_html(content) << "</text>";
  }
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& extra = {}) {
    out_ << "<circle cx=\"" << fixed(cx) << "\" cy=\"" << fixed(cy) << "\" r=\"" << fixed(r)
         << "\" fill=\"" << fill << '"' << extra << "/>";
  }
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke) {
    out_ << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << stroke << "\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0) out_ << ' ';
      out_ << fixed(points[i].first) << ',' << fixed(points[i].second);
    }
    out_ << "\"/>";
  }
  void legend(double x, double y, const std::vector<std::pair<std::string, std::string>>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double yy = y + 16.0 * static_cast<double>(i);
      rect(x, yy - 9, 10, 10, items[i].second);
      text(x + 14, yy, items[i].first, "start");
    }
  }
  std::string finish() {
    out_ << "</svg>";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

std::string figure(const std::string& kind, const std::string& caption, const std::string& svg) {
  return "<figure class=\"chart\" data-kind=\"" + kind + "\">" + svg + "<figcaption>" +
         escape_html(caption) + "</figcaption></figure>\n";
}

// Light-to-dark blue ramp for heat-map cells.
std::string heat_color(double v, double vmax) {
  const double t = vmax > 0.0 ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
  const auto channel = [t](int lo, int hi) {
    return static_cast<int>(std::lround(lo + (hi - lo) * t));
  };
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(247, 8), channel(251, 48),
                channel(255, 107));
  return buf;
}

std::string bar_chart(const UnivariateItem& item) {
  const std::size_t n = item.labels.size();
  const double left = 50, top = 30, plot_w = std::max(240.0, 34.0 * static_cast<double>(n)),
               plot_h = 170, bottom = 90;
  Svg svg(left + plot_w + 20, top + plot_h + bottom);
  double vmax = 0.0;
  for (double p : item.trn.proportions) vmax = std::max(vmax, p);
  for (double p : item.syn.proportions) vmax = std::max(vmax, p);
  if (vmax <= 0.0) vmax = 1.0;
  svg.text(left + plot_w / 2, 16, item.column);
  svg.line(left, top + plot_h, left + plot_w, top + plot_h);
  svg.line(left, top, left, top + plot_h);
  for (int t = 0; t <= 2; ++t) {
    const double v = vmax * t / 2.0;
    const double y = top + plot_h - plot_h * v / vmax;
    svg.text(left - 4, y + 4, fixed(v), "end");
  }
  const double group = plot_w / static_cast<double>(std::max<std::size_t>(n, 1));
  const double bar = group * 0.38;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = left + group * static_cast<double>(i) + group * 0.12;
    const double ht = plot_h * item.trn.proportions[i] / vmax;
    const double hs = plot_h * item.syn.proportions[i] / vmax;
    svg.rect(x0, top + plot_h - ht, bar, ht, kTrnColor);
    svg.rect(x0 + bar, top + plot_h - hs, bar, hs, kSynColor);
    const double lx = left + group * (static_cast<double>(i) + 0.5);
    svg.text(lx, top + plot_h + 12, shorten(item.labels[i]), "end", -40, 10);
  }
  svg.legend(left + plot_w - 70, top + 4, {{"training", kTrnColor}, {"synthetic", kSynColor}});
  return svg.finish();
}

void heat_panel(Svg& svg, double x0, double y0, double size, const ContingencyTable& table,
                double vmax, const std::vector<std::string>& row_labels,
                const std::vector<std::string>& col_labels, const std::string& title) {
  const double cell = size / static_cast<double>(std::max(table.rows, table.cols));
  svg.text(x0 + cell * static_cast<double>(table.cols) / 2, y0 - 8, title);
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      svg.rect(x0 + cell * static_cast<double>(j), y0 + cell * static_cast<double>(i), cell, cell,
               heat_color(table.at(i, j), vmax), " stroke=\"#fff\" stroke-width=\"0.5\"");
    }
  }
  for (std::size_t i = 0; i < table.rows && i < row_labels.size(); ++i) {
    svg.text(x0 - 4, y0 + cell * (static_cast<double>(i) + 0.5) + 3, shorten(row_labels[i], 14),
             "end", 0, 9);
  }
  const double base = y0 + cell * static_cast<double>(table.rows) + 10;
  for (std::size_t j = 0; j < table.cols && j < col_labels.size(); ++j) {
    svg.text(x0 + cell * (static_cast<double>(j) + 0.5), base, shorten(col_labels[j], 14), "end",
             -45, 9);
  }
}

std::string heatmap_pair(const ContingencyTable& trn, const ContingencyTable& syn,
                         const std::vector<std::string>& row_labels,
                         const std::vector<std::string>& col_labels, const std::string& row_name,
                         const std::string& col_name) {
  const double size = 200, label_w = 90, top = 40, gap = 40, bottom = 90;
  double vmax = 0.0;
  for (double v : trn.cells) vmax = std::max(vmax, v);
  for (double v : syn.cells) vmax = std::max(vmax, v);
  Svg svg(2 * (label_w + size) + gap, top + size + bottom);
  heat_panel(svg, label_w, top, size, trn, vmax, row_labels, col_labels, "training");
  heat_panel(svg, 2 * label_w + size + gap, top, size, syn, vmax, row_labels, col_labels,
             "synthetic");
  svg.text(label_w + size + gap / 2, 14, row_name + " × " + col_name);
  return svg.finish();
}

std::string scatter_chart(const PcaProjection& pca) {
  const double left = 50, top = 30, plot = 320;
  Svg svg(left + plot + 130, top + plot + 40);
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto extend = [&](const Point2& p) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  };
  for (const auto& set : pca.sets) {
    for (const auto& p : set.points) extend(p);
    extend(set.centroid);
  }
  if (!(xmax > xmin)) { xmin -= 1; xmax += 1; }
  if (!(ymax > ymin)) { ymin -= 1; ymax += 1; }
  const auto sx = [&](double x) { return left + plot * (x - xmin) / (xmax - xmin); };
  const auto sy = [&](double y) { return top + plot - plot * (y - ymin) / (ymax - ymin); };
  svg.text(left + plot / 2, 16, "PCA projection of record embeddings");
  svg.line(left, top + plot, left + plot, top + plot);
  svg.line(left, top, left, top + plot);
  svg.text(left + plot / 2, top + plot + 28, "PC1");
  svg.text(left - 30, top + plot / 2, "PC2", "middle", -90);
  std::vector<std::pair<std::string, std::string>> legend;
  for (const auto& set : pca.sets) {
    const std::size_t n = set.points.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + kScatterPointsPerSet - 1) /
                                                            kScatterPointsPerSet);
    for (std::size_t i = 0; i < n; i += stride) {
      svg.circle(sx(set.points[i][0]), sy(set.points[i][1]), 1.6, role_color(set.provenance),
                 " fill-opacity=\"0.35\"");
    }
    legend.emplace_back(role_title(set.provenance), role_color(set.provenance));
  }
  for (const auto& set : pca.sets) {
    svg.circle(sx(set.centroid[0]), sy(set.centroid[1]), 6, role_color(set.provenance),
               " stroke=\"#000\" stroke-width=\"1.5\"");
  }
  svg.legend(left + plot + 16, top + 10, legend);
  return svg.finish();
}

std::string cdf_chart(const DistancesResult& distances) {
  const double left = 50, top = 30, plot_w = 360, plot_h = 220;
  Svg svg(left + plot_w + 130, top + plot_h + 45);
  const auto trn = thin_quantiles(distances.dcr_cdf_training, kCdfThinThreshold, kCdfThinPoints);
  const auto hol = thin_quantiles(distances.dcr_cdf_holdout, kCdfThinThreshold, kCdfThinPoints);
  double xmax = 0.0;
  if (!trn.empty()) xmax = std::max(xmax, trn.back());
  if (!hol.empty()) xmax = std::max(xmax, hol.back());
  if (xmax <= 0.0) xmax = 1.0;
  svg.text(left + plot_w / 2, 16, "Cumulative distance to closest record");
  svg.line(left, top + plot_h, left + plot_w, top + plot_h);
  svg.line(left, top, left, top + plot_h);
  for (int t = 0; t <= 2; ++t) {
    svg.text(left - 4, top + plot_h - plot_h * t / 2.0 + 4, fixed(t / 2.0), "end");
    svg.text(left + plot_w * t / 2.0, top + plot_h + 14, fixed(xmax * t / 2.0));
  }
  svg.text(left + plot_w / 2, top + plot_h + 32, "L2 distance in embedding space");
  auto curve = [&](const std::vector<double>& d) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(d.size() + 1);
    pts.emplace_back(left, top + plot_h);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double f = static_cast<double>(i + 1) / static_cast<double>(d.size());
      pts.emplace_back(left + plot_w * d[i] / xmax, top + plot_h - plot_h * f);
    }
    return pts;
  };
  std::vector<std::pair<std::string, std::string>> legend{{"syn to trn", kTrnColor}};
  if (!trn.empty()) svg.polyline(curve(trn), kTrnColor);
  if (!hol.empty()) {
    svg.polyline(curve(hol), kHolColor);
    legend.emplace_back("syn to hol", kHolColor);
  }
  svg.legend(left + plot_w + 16, top + 10, legend);
  return svg.finish();
}

void summary_row(std::ostringstream& out, const std::string& name, const std::string& value,
                 const std::string& reference) {
  out << "<tr><td>" << escape_html(name) << "</td><td>" << value << "</td><td>" << reference
      << "</td></tr>\n";
}

constexpr const char* kStyle =
    "body{font-family:sans-serif;margin:24px;color:#222}"
    "table.summary{border-collapse:collapse}"
    "table.summary td,table.summary th{border:1px solid #ccc;padding:4px 10px;text-align:right}"
    "table.summary td:first-child,table.summary th:first-child{text-align:left}"
    "figure.chart{display:inline-block;margin:8px;vertical-align:top}"
    "figcaption{font-size:12px;color:#555}"
    "section{margin-top:28px}";

}  // namespace

MetricsDocument assemble_metrics(const AccuracyResult& accuracy, const SimilarityResult& similarity,
                                 const DistancesResult& distances, RunEcho config,
                                 std::vector<std::string> warnings) {
  MetricsDocument doc;
  doc.overall = accuracy.overall;
  doc.univariate = accuracy.univariate;
  doc.bivariate = accuracy.bivariate;
  doc.coherence = accuracy.coherence;
  doc.overall_max = accuracy.overall_max;
  doc.univariate_max = accuracy.univariate_max;
  doc.bivariate_max = accuracy.bivariate_max;
  doc.coherence_max = accuracy.coherence_max;
  doc.cosine_similarity_training_synthetic = similarity.cosine_similarity_training_synthetic;
  doc.cosine_similarity_training_holdout = similarity.cosine_similarity_training_holdout;
  doc.discriminator_auc_training_synthetic = similarity.discriminator_auc_training_synthetic;
  doc.discriminator_auc_training_holdout = similarity.discriminator_auc_training_holdout;
  doc.ims_training = distances.ims_training;
  doc.ims_holdout = distances.ims_holdout;
  doc.dcr_training = distances.dcr_training;
  doc.dcr_holdout = distances.dcr_holdout;
  doc.dcr_share = distances.dcr_share;
  doc.univariate_by_column = accuracy.per_column_univariate();
  for (const auto& item : accuracy.bivariates) {
    doc.bivariate_by_pair.push_back({item.column_a, item.column_b, item.accuracy});
  }
  doc.coherence_by_column = accuracy.per_column_coherence();
  doc.warnings = std::move(warnings);
  doc.config = std::move(config);
  return doc;
}

json to_json(const MetricsDocument& doc) {
  json accuracy = {
      {"overall", round4(doc.overall)},
      {"univariate", round4(doc.univariate)},
      {"bivariate", number_or_null(doc.bivariate)},
      {"coherence", number_or_null(doc.coherence)},
      {"overall_max", round4(doc.overall_max)},
      {"univariate_max", round4(doc.univariate_max)},
      {"bivariate_max", number_or_null(doc.bivariate_max)},
      {"coherence_max", number_or_null(doc.coherence_max)},
  };
  json similarity = {
      {"cosine_similarity_training_synthetic", round4(doc.cosine_similarity_training_synthetic)},
      {"cosine_similarity_training_holdout", number_or_null(doc.cosine_similarity_training_holdout)},
      {"discriminator_auc_training_synthetic", round4(doc.discriminator_auc_training_synthetic)},
      {"discriminator_auc_training_holdout", number_or_null(doc.discriminator_auc_training_holdout)},
  };
  json distances = {
      {"ims_training", round4(doc.ims_training)},
      {"ims_holdout", number_or_null(doc.ims_holdout)},
      {"dcr_training", round4(doc.dcr_training)},
      {"dcr_holdout", number_or_null(doc.dcr_holdout)},
      {"dcr_share", number_or_null(doc.dcr_share)},
  };
  json univariate_by_column = json::object();
  for (const auto& [column, value] : doc.univariate_by_column) {
    univariate_by_column[column] = round4(value);
  }
  json bivariate_by_pair = json::array();
  for (const auto& pair : doc.bivariate_by_pair) {
    bivariate_by_pair.push_back(
        {{"columns", {pair.column_a, pair.column_b}}, {"accuracy", round4(pair.accuracy)}});
  }
  json coherence_by_column = json::object();
  for (const auto& [column, value] : doc.coherence_by_column) {
    coherence_by_column[column] = round4(value);
  }
  json columns = json::array();
  for (const auto& c : doc.config.columns) {
    columns.push_back(
        {{"name", c.name}, {"kind", std::string(kind_name(c.kind))}, {"context", c.from_context}});
  }
  const auto& cfg = doc.config;
  json config = {
      {"seed", cfg.seed},
      {"encoder", cfg.encoder},
      {"folds", cfg.folds},
      {"truncation", cfg.truncation},
      {"sequential", cfg.sequential},
      {"sequence_key", cfg.sequence_key ? json(*cfg.sequence_key) : json(nullptr)},
      {"columns", columns},
      {"samples",
       {{"trn", cfg.trn_samples},
        {"syn", cfg.syn_samples},
        {"hol", cfg.hol_samples ? json(*cfg.hol_samples) : json(nullptr)}}},
  };
  return {
      {"schema_version", doc.schema_version},
      {"accuracy", accuracy},
      {"similarity", similarity},
      {"distances", distances},
      {"details",
       {{"univariate", univariate_by_column},
        {"bivariate", bivariate_by_pair},
        {"coherence", coherence_by_column}}},
      {"warnings", doc.warnings},
      {"config", config},
  };
}

MetricsDocument metrics_from_json(const json& j) {
  try {
    MetricsDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != kSchemaVersion) {
      fail("unsupported schema_version " + std::to_string(doc.schema_version));
    }
    const json& a = j.at("accuracy");
    doc.overall = a.at("overall").get<double>();
    doc.univariate = a.at("univariate").get<double>();
    doc.bivariate = optional_number(a, "bivariate");
    doc.coherence = optional_number(a, "coherence");
    doc.overall_max = a.at("overall_max").get<double>();
    doc.univariate_max = a.at("univariate_max").get<double>();
    doc.bivariate_max = optional_number(a, "bivariate_max");
    doc.coherence_max = optional_number(a, "coherence_max");
    const json& s = j.at("similarity");
    doc.cosine_similarity_training_synthetic =
        s.at("cosine_similarity_training_synthetic").get<double>();
    doc.cosine_similarity_training_holdout =
        optional_number(s, "cosine_similarity_training_holdout");
    doc.discriminator_auc_training_synthetic =
        s.at("discriminator_auc_training_synthetic").get<double>();
    doc.discriminator_auc_training_holdout =
        optional_number(s, "discriminator_auc_training_holdout");
    const json& d = j.at("distances");
    doc.ims_training = d.at("ims_training").get<double>();
    doc.ims_holdout = optional_number(d, "ims_holdout");
    doc.dcr_training = d.at("dcr_training").get<double>();
    doc.dcr_holdout = optional_number(d, "dcr_holdout");
    doc.dcr_share = optional_number(d, "dcr_share");
    const json& details = j.at("details");
    for (const auto& [column, value] : details.at("univariate").items()) {
      doc.univariate_by_column[column] = value.get<double>();
    }
    for (const auto& pair : details.at("bivariate")) {
      doc.bivariate_by_pair.push_back({pair.at("columns").at(0).get<std::string>(),
                                       pair.at("columns").at(1).get<std::string>(),
                                       pair.at("accuracy").get<double>()});
    }
    for (const auto& [column, value] : details.at("coherence").items()) {
      doc.coherence_by_column[column] = value.get<double>();
    }
    doc.warnings = j.at("warnings").get<std::vector<std::string>>();
    const json& c = j.at("config");
    doc.config.seed = c.at("seed").get<std::uint64_t>();
    doc.config.encoder = c.at("encoder").get<std::string>();
    doc.config.folds = c.at("folds").get<std::size_t>();
    doc.config.truncation = c.at("truncation").get<std::size_t>();
    doc.config.sequential = c.at("sequential").get<bool>();
    if (!c.at("sequence_key").is_null()) {
      doc.config.sequence_key = c.at("sequence_key").get<std::string>();
    }
    for (const auto& col : c.at("columns")) {
      const auto kind = parse_kind(col.at("kind").get<std::string>());
      if (!kind) fail("unknown column kind in metrics document");
      doc.config.columns.push_back(
          {col.at("name").get<std::string>(), *kind, col.at("context").get<bool>()});
    }
    const json& samples = c.at("samples");
    doc.config.trn_samples = samples.at("trn").get<std::size_t>();
    doc.config.syn_samples = samples.at("syn").get<std::size_t>();
    if (!samples.at("hol").is_null()) doc.config.hol_samples = samples.at("hol").get<std::size_t>();
    return doc;
  } catch (const json::exception& e) {
    fail(std::string("malformed metrics document: ") + e.what());
  }
}

std::string serialize_metrics(const MetricsDocument& doc) { return to_json(doc).dump(2) + "\n"; }

std::string summary_table(const MetricsDocument& doc) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const char* name, const std::string& value, const std::string& reference) {
    std::snprintf(line, sizeof line, "%-34s %12s %12s\n", name, value.c_str(), reference.c_str());
    out << line;
  };
  row("metric", "synthetic", "reference");
  row("accuracy.overall", fixed(doc.overall, 4), fixed(doc.overall_max, 4));
  row("accuracy.univariate", fixed(doc.univariate, 4), fixed(doc.univariate_max, 4));
  row("accuracy.bivariate", metric_text(doc.bivariate), metric_text(doc.bivariate_max));
  if (doc.config.sequential) {
    row("accuracy.coherence", metric_text(doc.coherence), metric_text(doc.coherence_max));
  }
  row("cosine_similarity_training_*", fixed(doc.cosine_similarity_training_synthetic, 4),
      metric_text(doc.cosine_similarity_training_holdout));
  row("discriminator_auc_training_*", fixed(doc.discriminator_auc_training_synthetic, 4),
      metric_text(doc.discriminator_auc_training_holdout));
  row("ims_training / ims_holdout", fixed(doc.ims_training, 4), metric_text(doc.ims_holdout));
  row("dcr_training / dcr_holdout", fixed(doc.dcr_training, 4), metric_text(doc.dcr_holdout));
  row("dcr_share", metric_text(doc.dcr_share), doc.dcr_share ? "0.5000" : "n/a");
  return out.str();
}

std::vector<double> thin_quantiles(std::span<const double> sorted, std::size_t threshold,
                                   std::size_t points) {
  if (sorted.size() <= threshold || points < 2) {
    return std::vector<double>(sorted.begin(), sorted.end());
  }
  std::vector<double> out(points);
  const double last = static_cast<double>(sorted.size() - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(points - 1);
    out[k] = sorted[static_cast<std::size_t>(std::llround(q * last))];
  }
  return out;
}

std::string render_html(const ReportInputs& in) {
  if (in.metrics == nullptr || in.accuracy == nullptr || in.similarity == nullptr ||
      in.distances == nullptr) {
    fail("report inputs are incomplete");
  }
  const MetricsDocument& m = *in.metrics;
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
      << escape_html(in.title) << "</title>\n<style>" << kStyle << "</style>\n</head>\n<body>\n";
  out << "<h1>" << escape_html(in.title) << "</h1>\n";

  out << "<section id=\"summary\">\n<h2>Summary</h2>\n<table class=\"summary\">\n"
      << "<tr><th>metric</th><th>synthetic</th><th>reference</th></tr>\n";
  summary_row(out, "overall accuracy", fixed(m.overall, 4), fixed(m.overall_max, 4));
  summary_row(out, "univariate accuracy", fixed(m.univariate, 4), fixed(m.univariate_max, 4));
  summary_row(out, "bivariate accuracy", metric_text(m.bivariate), metric_text(m.bivariate_max));
  if (m.config.sequential) {
    summary_row(out, "coherence accuracy", metric_text(m.coherence),
                metric_text(m.coherence_max));
  }
  summary_row(out, "centroid cosine similarity", fixed(m.cosine_similarity_training_synthetic, 4),
              metric_text(m.cosine_similarity_training_holdout));
  summary_row(out, "discriminator AUC", fixed(m.discriminator_auc_training_synthetic, 4),
              metric_text(m.discriminator_auc_training_holdout));
  summary_row(out, "identical match share", fixed(m.ims_training, 4), metric_text(m.ims_holdout));
  summary_row(out, "mean DCR", fixed(m.dcr_training, 4), metric_text(m.dcr_holdout));
  summary_row(out, "DCR share", metric_text(m.dcr_share), m.dcr_share ? "0.5000" : "n/a");
  out << "</table>\n<p>Accuracy references are the accuracies expected from a holdout sample of "
         "the same size; the other references are measured on the holdout set.</p>\n</section>\n";

  if (!m.warnings.empty()) {
    out << "<section id=\"warnings\">\n<h2>Warnings</h2>\n<ul>\n";
    for (const auto& w : m.warnings) out << "<li>" << escape_html(w) << "</li>\n";
    out << "</ul>\n</section>\n";
  }

  out << "<section id=\"univariate\">\n<h2>Univariate distributions</h2>\n";
  for (const auto& item : in.accuracy->univariates) {
    out << figure("univariate", item.column + ": accuracy " + fixed(item.accuracy, 4),
                  bar_chart(item));
  }
  out << "</section>\n";

  out << "<section id=\"bivariate\">\n<h2>Bivariate distributions</h2>\n";
  for (const auto& item : in.accuracy->bivariates) {
    out << figure("bivariate",
                  item.column_a + " × " + item.column_b + ": accuracy " +
                      fixed(item.accuracy, 4),
                  heatmap_pair(item.trn, item.syn, item.labels_a, item.labels_b, item.column_a,
                               item.column_b));
  }
  out << "</section>\n";

  if (m.config.sequential) {
    out << "<section id=\"coherence\">\n<h2>Coherence</h2>\n";
    for (const auto& item : in.accuracy->coherences) {
      const std::string successor = item.column + std::string(kSuccessorSuffix);
      out << figure("coherence", item.column + ": accuracy " + fixed(item.accuracy, 4),
                    heatmap_pair(item.trn, item.syn, item.labels, item.labels, item.column,
                                 successor));
    }
    out << "</section>\n";
  }

  out << "<section id=\"similarity\">\n<h2>Embedding similarity</h2>\n";
  out << figure("pca", "Records projected on the first two principal components; large markers "
                       "are centroids",
                scatter_chart(in.similarity->pca));
  out << "</section>\n";

  out << "<section id=\"distances\">\n<h2>Distances to closest records</h2>\n";
  out << figure("dcr", "Share of synthetic records within a given distance of their nearest "
                       "reference record",
                cdf_chart(*in.distances));
  out << "</section>\n";

  json specs = json::array();
  for (const auto& spec : in.specs) specs.push_back(to_json(spec));
  out << "<section id=\"audit\">\n<h2>Binning and configuration</h2>\n"
      << "<script type=\"application/json\" id=\"binning-specs\">" << script_safe(specs.dump())
      << "</script>\n"
      << "<script type=\"application/json\" id=\"metrics\">"
      << script_safe(to_json(m).dump()) << "</script>\n"
      << "<pre>" << escape_html(to_json(m).at("config").dump(2)) << "</pre>\n</section>\n";
  out << "</body>\n</html>\n";
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write '" + temp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      fail("cannot write '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    fail("cannot move output into place at '" + path + "'");
  }
}

}  // namespace synthqa
