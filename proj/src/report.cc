#include "racetest/report.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace racetest {

Summary Summarize(const RunResult& result, const Trace& trace,
                  std::optional<size_t> window) {
  Summary s;
  s.warnings = result.reports.size();
  s.metadata_work = result.metadata_work;
  s.sampled_events = result.sampled_events;
  s.elapsed = result.elapsed;

  std::set<VarId> vars;
  std::set<std::pair<LocId, LocId>> source_pairs;
  size_t known = 0;
  size_t short_count = 0;
  for (const RaceReport& r : result.reports) {
    if (r.event_index >= trace.size() ||
        (r.prior_index && *r.prior_index >= trace.size())) {
      throw std::out_of_range("race report index outside trace");
    }
    vars.insert(r.var);
    if (r.loc != kNoLoc && r.prior_loc != kNoLoc) {
      source_pairs.insert(std::minmax(r.loc, r.prior_loc));
    }
    if (r.prior_index) {
      ++known;
      if (window && r.event_index - *r.prior_index < *window) ++short_count;
    }
  }
  s.distinct_vars = vars.size();
  s.distinct_source_pairs = source_pairs.size();
  if (window && known > 0) {
    s.short_race_fraction =
        static_cast<double>(short_count) / static_cast<double>(known);
  }
  return s;
}

std::optional<double> ShortRaceFraction(std::span<const RacePair> pairs,
                                        size_t window) {
  if (pairs.empty()) return std::nullopt;
  size_t short_count = static_cast<size_t>(
      std::count_if(pairs.begin(), pairs.end(), [&](const RacePair& p) {
        return p.second - p.first < window;
      }));
  return static_cast<double>(short_count) / static_cast<double>(pairs.size());
}

nlohmann::json ToJson(const Summary& summary, bool include_elapsed) {
  nlohmann::json j;
  j["warnings"] = summary.warnings;
  j["distinct_vars"] = summary.distinct_vars;
  j["distinct_source_pairs"] = summary.distinct_source_pairs;
  if (summary.short_race_fraction) {
    j["short_race_fraction"] = *summary.short_race_fraction;
  }
  j["metadata_work"] = summary.metadata_work;
  j["sampled_events"] = summary.sampled_events;
  if (include_elapsed) {
    j["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(summary.elapsed).count();
  }
  return j;
}

nlohmann::json ToJson(const RaceReport& report, const Trace& trace) {
  nlohmann::json j;
  j["event_index"] = report.event_index;
  j["var"] = trace.vars().Name(report.var);
  j["kind"] = std::string(RaceKindName(report.kind));
  if (auto loc = trace.LocName(report.loc)) j["loc"] = std::string(*loc);
  if (report.prior_index) j["prior_index"] = *report.prior_index;
  if (auto loc = trace.LocName(report.prior_loc)) {
    j["prior_loc"] = std::string(*loc);
  }
  return j;
}

nlohmann::json ToJson(const RacePair& pair, const Trace& trace) {
  return {{"first", pair.first},
          {"second", pair.second},
          {"var", trace.vars().Name(pair.var)}};
}

}  // namespace racetest
