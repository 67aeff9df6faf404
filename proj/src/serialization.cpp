#include "mvpure/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mvpure/errors.hpp"

namespace mvpure::io {
namespace {

using nlohmann::ordered_json;

std::string rank_rule_name(RankRule rule) {
  return rule == RankRule::kLiteral ? "literal" : "excess-over-one";
}

template <typename T>
T required(const ordered_json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::kFormatError, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kFormatError, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string to_json(const LocalizationResult& result) {
  ordered_json j;
  j["sources"] = result.sources.indices();
  ordered_json trace = ordered_json::array();
  for (const auto& step : result.index_trace) {
    ordered_json s;
    s["step"] = step.step;
    s["best_value"] = step.best_value;
    s["selected"] = step.selected;
    if (!step.candidate_values.empty()) {
      ordered_json cands = ordered_json::array();
      for (const auto& [idx, value] : step.candidate_values) cands.push_back({{"index", idx}, {"value", value}});
      s["candidates"] = std::move(cands);
    }
    trace.push_back(std::move(s));
  }
  j["index_trace"] = std::move(trace);
  j["rank_used"] = result.rank_used;
  j["index_kind"] = std::string(index_kind_name(result.index_kind));
  ordered_json skipped = ordered_json::array();
  for (const auto& s : result.skipped) skipped.push_back({{"step", s.step}, {"index", s.index}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  ordered_json fallbacks = ordered_json::array();
  for (const auto& f : result.rank_fallbacks) {
    fallbacks.push_back({{"step", f.step}, {"index", f.index}, {"rank", f.rank}});
  }
  j["rank_fallbacks"] = std::move(fallbacks);
  return j.dump(2) + "\n";
}

LocalizationResult localization_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kFormatError, std::string("localization result is not valid JSON: ") + e.what());
  }
  LocalizationResult r;
  r.sources = SourceSet(required<std::vector<int>>(j, "sources"));
  r.index_kind = parse_index_kind(required<std::string>(j, "index_kind"));
  r.rank_used = required<int>(j, "rank_used");
  if (j.contains("index_trace")) {
    for (const auto& s : j["index_trace"]) {
      TraceStep step;
      step.step = required<int>(s, "step");
      step.best_value = required<double>(s, "best_value");
      step.selected = required<int>(s, "selected");
      if (s.contains("candidates")) {
        for (const auto& c : s["candidates"]) {
          step.candidate_values.emplace_back(required<int>(c, "index"), required<double>(c, "value"));
        }
      }
      r.index_trace.push_back(std::move(step));
    }
  }
  if (j.contains("skipped")) {
    for (const auto& s : j["skipped"]) {
      r.skipped.push_back({required<int>(s, "step"), required<int>(s, "index"), required<std::string>(s, "reason")});
    }
  }
  if (j.contains("rank_fallbacks")) {
    for (const auto& f : j["rank_fallbacks"]) {
      r.rank_fallbacks.push_back({required<int>(f, "step"), required<int>(f, "index"), required<int>(f, "rank")});
    }
  }
  return r;
}

void write_localization(const std::filesystem::path& path, const LocalizationResult& result) {
  write_text(path, to_json(result));
}

LocalizationResult read_localization(const std::filesystem::path& path) {
  return localization_from_json(read_text(path));
}

std::string to_json(const SpectrumReport& report) {
  ordered_json j;
  j["lambdas"] = report.lambdas;
  j["l0_est"] = report.l0_est;
  j["r_opt"] = report.r_opt;
  j["thresholds"] = {{"l0_threshold", report.thresholds.l0_threshold},
                     {"rank_threshold", report.thresholds.rank_threshold},
                     {"rank_rule", rank_rule_name(report.thresholds.rank_rule)}};
  return j.dump(2) + "\n";
}

void write_spectrum(const std::filesystem::path& json_path, const std::filesystem::path& csv_path,
                    const SpectrumReport& report) {
  write_text(json_path, to_json(report));
  std::ostringstream os;
  os.precision(17);
  os << "index,lambda\n";
  for (std::size_t i = 0; i < report.lambdas.size(); ++i) os << (i + 1) << ',' << report.lambdas[i] << '\n';
  write_text(csv_path, os.str());
}

std::string filter_sidecar_json(const SpatialFilter& filter) {
  ordered_json j;
  j["kind"] = std::string(filter_kind_name(filter.kind));
  j["rank"] = filter.rank;
  j["sources"] = filter.source_set.indices();
  j["gain_check"] = filter.gain_check;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mvpure::io
