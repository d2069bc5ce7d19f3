#include "cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "racetest/construction.h"
#include "racetest/detectors.h"
#include "racetest/oracle.h"
#include "racetest/report.h"
#include "racetest/rng.h"
#include "racetest/rpt.h"
#include "racetest/trace.h"
#include "racetest/trace_gen.h"
#include "racetest/trace_io.h"

namespace racetest::cli {
namespace {

using nlohmann::json;
using SteadyClock = std::chrono::steady_clock;

// Reported on stderr with exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input = "-";
  std::string output = "-";
  bool json = false;
  uint64_t seed = 0;
  std::optional<size_t> runs;
  bool ignore_unknown = false;
  bool timing = false;
};

struct RptFlags {
  double epsilon = 0.01;
  double delta = 0.1;
  std::optional<size_t> threads;
  std::optional<size_t> locks_held;
};

struct Options {
  Common common;
  RptFlags rpt;
  PacerConfig pacer;
  GenSpec gen;
  std::string gen_mode = "race_free_locked";
  std::optional<size_t> window;  // short-race threshold / oracle windows
  size_t cap = kDefaultOracleCap;
  std::optional<size_t> m;
  std::vector<double> epsilons{0.5, 0.2, 0.1};
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

struct Loaded {
  Trace trace;
  size_t skipped_unknown = 0;
};

Loaded Load(const Common& c, std::istream& in, bool require_well_formed) {
  ParseOptions po;
  po.ignore_unknown = c.ignore_unknown;
  ParsedTrace parsed;
  if (c.input == "-") {
    parsed = ParseTrace(in, po);
  } else {
    std::ifstream file(c.input, std::ios::binary);
    if (!file) throw UsageError("cannot open input file: " + c.input);
    parsed = ParseTrace(file, po);
  }
  if (require_well_formed) {
    if (auto v = CheckWellFormed(parsed.trace)) {
      throw UsageError("trace is not well-formed at event " +
                       std::to_string(v->index) + ": " +
                       std::string(ViolationReasonName(v->reason)));
    }
  }
  return {std::move(parsed.trace), parsed.skipped_unknown};
}

void Emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw UsageError("cannot open output file: " + c.output);
  file << text;
  if (!file) throw UsageError("write failed: " + c.output);
}

json Envelope(std::string_view subcommand, const Common& c, json params) {
  json j;
  j["tool_version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["params"] = std::move(params);
  j["seed"] = c.seed;
  j["rng"] = kRngName;
  return j;
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

json InputJson(const Loaded& l) {
  return {{"events", l.trace.size()},
          {"threads", l.trace.threads().size()},
          {"skipped_unknown", l.skipped_unknown}};
}

json ReportsJson(const std::vector<RaceReport>& reports, const Trace& t) {
  json arr = json::array();
  for (const RaceReport& r : reports) arr.push_back(ToJson(r, t));
  return arr;
}

double Millis(std::chrono::nanoseconds d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

// Runs fn(0..n-1) across worker threads; results are indexed by run.
template <class Fn>
auto RunIndexed(size_t n, Fn fn) -> std::vector<decltype(fn(size_t{}))> {
  using R = decltype(fn(size_t{}));
  std::vector<std::optional<R>> slots(n);
  const size_t workers = std::min<size_t>(
      n, std::max<unsigned>(1, std::thread::hardware_concurrency()));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string SummaryText(const Summary& s, bool timing) {
  std::ostringstream os;
  os << "warnings: " << s.warnings << "\n"
     << "racy variables: " << s.distinct_vars << "\n"
     << "racy source pairs: " << s.distinct_source_pairs << "\n";
  if (s.short_race_fraction) {
    os << "short race fraction: " << *s.short_race_fraction << "\n";
  }
  os << "metadata work: " << s.metadata_work << "\n"
     << "sampled events: " << s.sampled_events << "\n";
  if (timing) os << "elapsed ms: " << Millis(s.elapsed) << "\n";
  return os.str();
}

std::string ReportsText(const std::vector<RaceReport>& reports,
                        const Trace& t) {
  std::ostringstream os;
  for (const RaceReport& r : reports) {
    os << "race " << RaceKindName(r.kind) << " on " << t.vars().Name(r.var)
       << " at event " << r.event_index;
    if (r.prior_index) os << " (prior event " << *r.prior_index << ")";
    if (auto loc = t.LocName(r.loc)) os << " " << *loc;
    if (auto loc = t.LocName(r.prior_loc)) os << " <- " << *loc;
    os << "\n";
  }
  return os.str();
}

// --- detect -----------------------------------------------------------------

int Detect(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  const RunResult result = RunFull(l.trace);
  const Summary s = Summarize(result, l.trace, o.window);
  const bool racy = !result.reports.empty();
  std::string text;
  if (o.common.json) {
    json params = json::object();
    if (o.window) params["window"] = *o.window;
    json j = Envelope("detect", o.common, params);
    j["input"] = InputJson(l);
    j["racy"] = racy;
    j["summary"] = ToJson(s, o.common.timing);
    j["reports"] = ReportsJson(result.reports, l.trace);
    text = Dump(j);
  } else {
    text = "events: " + std::to_string(l.trace.size()) + "\n" +
           SummaryText(s, o.common.timing) +
           ReportsText(result.reports, l.trace);
  }
  Emit(o.common, text, io.out);
  return racy ? kRaceFound : kNoRace;
}

// --- rpt ----------------------------------------------------------------------

RptParams ResolveRptParams(const RptFlags& f, const Trace& trace,
                           uint64_t seed) {
  const MeasuredParams measured = MeasureParams(trace);
  const size_t threads =
      std::max<size_t>(1, f.threads.value_or(measured.num_threads));
  const size_t held = f.locks_held.value_or(measured.max_locks_held);
  return DeriveParams(threads, held, f.epsilon, f.delta, seed);
}

json RptParamsJson(const RptParams& p) {
  return {{"epsilon", p.epsilon},
          {"delta", p.delta},
          {"num_threads", p.num_threads},
          {"max_locks_held", p.max_locks_held},
          {"m", p.m},
          {"window", p.window},
          {"samples", p.samples},
          {"short_threshold", p.short_threshold}};
}

struct RunRow {
  uint64_t seed = 0;
  bool racy = false;
  size_t warnings = 0;
  uint64_t metadata_work = 0;
  uint64_t sampled_events = 0;
  std::string mode;
  std::chrono::nanoseconds elapsed{0};
};

json RowsJson(const std::vector<RunRow>& rows, bool timing) {
  json arr = json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    const RunRow& r = rows[i];
    json j = {{"run", i},
              {"seed", r.seed},
              {"racy", r.racy},
              {"warnings", r.warnings},
              {"metadata_work", r.metadata_work},
              {"sampled_events", r.sampled_events}};
    if (!r.mode.empty()) j["mode"] = r.mode;
    if (timing) j["elapsed_ms"] = Millis(r.elapsed);
    arr.push_back(std::move(j));
  }
  return arr;
}

double DetectionRate(const std::vector<RunRow>& rows) {
  if (rows.empty()) return 0.0;
  const auto hits = std::count_if(rows.begin(), rows.end(),
                                  [](const RunRow& r) { return r.racy; });
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

double MeanWork(const std::vector<RunRow>& rows) {
  if (rows.empty()) return 0.0;
  double total = 0;
  for (const RunRow& r : rows) total += static_cast<double>(r.metadata_work);
  return total / static_cast<double>(rows.size());
}

std::string RowsText(const std::vector<RunRow>& rows, bool timing) {
  std::ostringstream os;
  os << "run  seed  racy  warnings  metadata_work  sampled_events";
  if (timing) os << "  elapsed_ms";
  os << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const RunRow& r = rows[i];
    os << i << "  " << r.seed << "  " << (r.racy ? "yes" : "no") << "  "
       << r.warnings << "  " << r.metadata_work << "  " << r.sampled_events;
    if (timing) os << "  " << Millis(r.elapsed);
    os << "\n";
  }
  os << "detection rate: " << DetectionRate(rows) << "\n"
     << "mean metadata work: " << MeanWork(rows) << "\n";
  return os.str();
}

RunRow TimedRpt(const Trace& trace, const RptParams& params) {
  const auto start = SteadyClock::now();
  const RptVerdict v = RunRpt(trace, params);
  RunRow row;
  row.seed = params.seed;
  row.racy = v.racy;
  row.warnings = v.reports.size();
  row.metadata_work = v.metadata_work;
  row.sampled_events = v.sampled_events;
  row.mode = std::string(RptModeName(v.mode));
  row.elapsed = SteadyClock::now() - start;
  return row;
}

int Rpt(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  const RptParams base = ResolveRptParams(o.rpt, l.trace, o.common.seed);
  std::string text;
  bool any_racy = false;

  if (o.common.runs) {
    const auto rows = RunIndexed(*o.common.runs, [&](size_t i) {
      RptParams p = base;
      p.seed = o.common.seed + i;
      return TimedRpt(l.trace, p);
    });
    any_racy = DetectionRate(rows) > 0.0;
    if (o.common.json) {
      json j = Envelope("rpt", o.common, RptParamsJson(base));
      j["input"] = InputJson(l);
      j["runs"] = RowsJson(rows, o.common.timing);
      j["detection_rate"] = DetectionRate(rows);
      j["mean_metadata_work"] = MeanWork(rows);
      text = Dump(j);
    } else {
      text = RowsText(rows, o.common.timing);
    }
  } else {
    const auto start = SteadyClock::now();
    const RptVerdict v = RunRpt(l.trace, base);
    const auto elapsed = SteadyClock::now() - start;
    const Summary s =
        Summarize(ToRunResult(v, elapsed), l.trace, base.window);
    any_racy = v.racy;
    if (o.common.json) {
      json j = Envelope("rpt", o.common, RptParamsJson(base));
      j["input"] = InputJson(l);
      j["mode"] = RptModeName(v.mode);
      j["racy"] = v.racy;
      j["windows"] = {{"intervals", v.windows.merged.size()},
                      {"total_length", v.windows.total_length()}};
      j["summary"] = ToJson(s, o.common.timing);
      j["reports"] = ReportsJson(v.reports, l.trace);
      text = Dump(j);
    } else {
      std::ostringstream os;
      os << "racy: " << (v.racy ? "yes" : "no") << "\n"
         << "mode: " << RptModeName(v.mode) << "\n"
         << "m: " << base.m << "  window: " << base.window
         << "  samples: " << base.samples << "\n"
         << "merged intervals: " << v.windows.merged.size() << "\n"
         << SummaryText(s, o.common.timing)
         << ReportsText(v.reports, l.trace);
      text = os.str();
    }
  }
  Emit(o.common, text, io.out);
  return any_racy ? kRaceFound : kNoRace;
}

// --- pacer --------------------------------------------------------------------

int Pacer(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  PacerConfig base = o.pacer;
  base.seed = o.common.seed;
  base.Validate();
  const json params = {{"rate", base.rate}, {"period", base.period}};
  std::string text;
  bool any_racy = false;

  if (o.common.runs) {
    const auto rows = RunIndexed(*o.common.runs, [&](size_t i) {
      PacerConfig c = base;
      c.seed = o.common.seed + i;
      const RunResult r = RunPacer(l.trace, c);
      RunRow row;
      row.seed = c.seed;
      row.racy = !r.reports.empty();
      row.warnings = r.reports.size();
      row.metadata_work = r.metadata_work;
      row.sampled_events = r.sampled_events;
      row.elapsed = r.elapsed;
      return row;
    });
    any_racy = DetectionRate(rows) > 0.0;
    if (o.common.json) {
      json j = Envelope("pacer", o.common, params);
      j["input"] = InputJson(l);
      j["runs"] = RowsJson(rows, o.common.timing);
      j["detection_rate"] = DetectionRate(rows);
      j["mean_metadata_work"] = MeanWork(rows);
      text = Dump(j);
    } else {
      text = RowsText(rows, o.common.timing);
    }
  } else {
    const RunResult r = RunPacer(l.trace, base);
    const Summary s = Summarize(r, l.trace, o.window);
    any_racy = !r.reports.empty();
    if (o.common.json) {
      json j = Envelope("pacer", o.common, params);
      j["input"] = InputJson(l);
      j["racy"] = any_racy;
      j["summary"] = ToJson(s, o.common.timing);
      j["reports"] = ReportsJson(r.reports, l.trace);
      text = Dump(j);
    } else {
      text = "events: " + std::to_string(l.trace.size()) + "\n" +
             SummaryText(s, o.common.timing) +
             ReportsText(r.reports, l.trace);
    }
  }
  Emit(o.common, text, io.out);
  return any_racy ? kRaceFound : kNoRace;
}

// --- gen ----------------------------------------------------------------------

int Gen(const Options& o, Io io) {
  GenSpec spec = o.gen;
  auto mode = GenModeFromName(o.gen_mode);
  if (!mode) throw UsageError("unknown generator mode: " + o.gen_mode);
  spec.mode = *mode;
  spec.seed = o.common.seed;
  const Trace trace = GenerateTrace(spec);
  std::string text;
  if (o.common.json) {
    json params = {{"mode", GenModeName(spec.mode)},
                   {"threads", spec.num_threads},
                   {"locks", spec.num_locks},
                   {"vars", spec.num_vars},
                   {"length", spec.length},
                   {"max_nesting", spec.max_nesting},
                   {"window", spec.window},
                   {"race_count", spec.race_count},
                   {"min_gap", spec.min_gap}};
    json j = Envelope("gen", o.common, params);
    j["trace"] = WriteTraceString(trace);
    text = Dump(j);
  } else {
    text = WriteTraceString(trace);
  }
  Emit(o.common, text, io.out);
  return kNoRace;
}

// --- oracle -------------------------------------------------------------------

int Oracle(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  const auto races = EnumerateRaces(SubtraceView(l.trace), o.cap);
  std::optional<size_t> racy_windows;
  std::optional<double> short_fraction;
  if (o.window) {
    racy_windows = CountRacyWindows(l.trace, *o.window, o.cap);
    short_fraction = ShortRaceFraction(races, *o.window);
  }
  std::string text;
  if (o.common.json) {
    json params = {{"cap", o.cap}};
    if (o.window) params["window"] = *o.window;
    json j = Envelope("oracle", o.common, params);
    j["input"] = InputJson(l);
    j["race_count"] = races.size();
    json arr = json::array();
    for (const RacePair& p : races) arr.push_back(ToJson(p, l.trace));
    j["races"] = std::move(arr);
    if (racy_windows) j["racy_windows"] = *racy_windows;
    if (short_fraction) j["short_race_fraction"] = *short_fraction;
    text = Dump(j);
  } else {
    std::ostringstream os;
    os << "races: " << races.size() << "\n";
    if (racy_windows) os << "racy windows: " << *racy_windows << "\n";
    if (short_fraction) os << "short race fraction: " << *short_fraction << "\n";
    for (const RacePair& p : races) {
      os << p.first << " " << p.second << " " << l.trace.vars().Name(p.var)
         << "\n";
    }
    text = os.str();
  }
  Emit(o.common, text, io.out);
  return kNoRace;
}

// --- project ------------------------------------------------------------------

int Project(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  const Projection p = RaceFreeProjection(l.trace, o.m);
  std::string text;
  if (o.common.json) {
    json params = json::object();
    if (o.m) params["m"] = *o.m;
    json j = Envelope("project", o.common, params);
    j["input"] = InputJson(l);
    j["m"] = p.m;
    j["segments"] = p.segments;
    j["changed"] = p.changed;
    j["trace"] = WriteTraceString(p.projected);
    text = Dump(j);
  } else {
    text = "# segments: " + std::to_string(p.segments) +
           "\n# changed: " + std::to_string(p.changed) +
           "\n# m: " + std::to_string(p.m) + "\n" +
           WriteTraceString(p.projected);
  }
  Emit(o.common, text, io.out);
  return kNoRace;
}

// --- stats --------------------------------------------------------------------

int Stats(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, false);
  const Trace& t = l.trace;
  size_t counts[4] = {0, 0, 0, 0};
  for (const Event& e : t.events()) ++counts[static_cast<int>(e.op)];
  const auto violation = CheckWellFormed(t);
  const MeasuredParams mp = MeasureParams(t);
  std::string text;
  if (o.common.json) {
    json j = Envelope("stats", o.common, json::object());
    j["input"] = InputJson(l);
    j["locks"] = t.locks().size();
    j["vars"] = t.vars().size();
    j["locs"] = t.locs().size();
    j["ops"] = {{"r", counts[0]}, {"w", counts[1]},
                {"acq", counts[2]}, {"rel", counts[3]}};
    j["max_locks_held"] = mp.max_locks_held;
    j["m"] = 4 * mp.num_threads + 2 * mp.max_locks_held;
    j["well_formed"] = !violation.has_value();
    if (violation) {
      j["violation"] = {{"index", violation->index},
                        {"reason", ViolationReasonName(violation->reason)}};
    }
    text = Dump(j);
  } else {
    std::ostringstream os;
    os << "events: " << t.size() << "\n"
       << "threads: " << t.threads().size() << "\n"
       << "locks: " << t.locks().size() << "\n"
       << "variables: " << t.vars().size() << "\n"
       << "reads/writes/acquires/releases: " << counts[0] << "/" << counts[1]
       << "/" << counts[2] << "/" << counts[3] << "\n"
       << "max locks held: " << mp.max_locks_held << "\n"
       << "m: " << 4 * mp.num_threads + 2 * mp.max_locks_held << "\n";
    if (l.skipped_unknown) {
      os << "skipped unknown lines: " << l.skipped_unknown << "\n";
    }
    if (violation) {
      os << "well-formed: no (event " << violation->index << ", "
         << ViolationReasonName(violation->reason) << ")\n";
    } else {
      os << "well-formed: yes\n";
    }
    text = os.str();
  }
  Emit(o.common, text, io.out);
  return kNoRace;
}

// --- sweep --------------------------------------------------------------------

int Sweep(const Options& o, Io io) {
  const Loaded l = Load(o.common, io.in, true);
  const size_t runs = o.common.runs.value_or(20);
  json points = json::array();
  std::ostringstream os;
  os << "epsilon  window  samples  detection_rate  mean_metadata_work\n";
  for (double eps : o.epsilons) {
    RptFlags f = o.rpt;
    f.epsilon = eps;
    const RptParams base = ResolveRptParams(f, l.trace, o.common.seed);
    const auto rows = RunIndexed(runs, [&](size_t i) {
      RptParams p = base;
      p.seed = o.common.seed + i;
      return TimedRpt(l.trace, p);
    });
    points.push_back({{"epsilon", eps},
                      {"window", base.window},
                      {"samples", base.samples},
                      {"detection_rate", DetectionRate(rows)},
                      {"mean_metadata_work", MeanWork(rows)}});
    os << eps << "  " << base.window << "  " << base.samples << "  "
       << DetectionRate(rows) << "  " << MeanWork(rows) << "\n";
  }
  std::string text;
  if (o.common.json) {
    json params = {{"epsilons", o.epsilons},
                   {"delta", o.rpt.delta},
                   {"runs", runs}};
    json j = Envelope("sweep", o.common, params);
    j["input"] = InputJson(l);
    j["points"] = std::move(points);
    text = Dump(j);
  } else {
    text = os.str();
  }
  Emit(o.common, text, io.out);
  return kNoRace;
}

// --- flag wiring --------------------------------------------------------------

void AddIoFlags(CLI::App* app, Common& c) {
  app->add_option("--input,-i", c.input, "Trace file, or - for stdin");
  app->add_option("--output,-o", c.output, "Output file, or - for stdout");
  app->add_flag("--json", c.json, "Emit JSON");
  app->add_flag("--ignore-unknown", c.ignore_unknown,
                "Skip lines with unrecognized ops");
}

void AddRptFlags(CLI::App* app, RptFlags& f, bool with_epsilon) {
  if (with_epsilon) {
    app->add_option("--epsilon", f.epsilon, "Distance parameter")
        ->check(CLI::Range(0.0, 1.0));
  }
  app->add_option("--delta", f.delta, "Failure probability")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--threads", f.threads, "Override measured thread count")
      ->check(CLI::PositiveNumber);
  app->add_option("--locks-held", f.locks_held,
                  "Override measured maximum locks held");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Happens-before race detection and race property testing"};
  app.require_subcommand(1);
  Options o;
  Common& c = o.common;

  auto* detect = app.add_subcommand("detect", "Full vector-clock detection");
  AddIoFlags(detect, c);
  detect->add_flag("--timing", c.timing, "Include wall-clock time");
  detect->add_option("--window", o.window,
                     "Threshold for the short race fraction")
      ->check(CLI::PositiveNumber);

  auto* rpt = app.add_subcommand("rpt", "Sampled race property tester");
  AddIoFlags(rpt, c);
  AddRptFlags(rpt, o.rpt, true);
  rpt->add_option("--seed", c.seed, "Sampling seed");
  rpt->add_option("--runs", c.runs, "Repeat with seeds seed..seed+N-1")
      ->check(CLI::PositiveNumber);
  rpt->add_flag("--timing", c.timing, "Include wall-clock time");

  auto* pacer = app.add_subcommand("pacer", "Proportional sampling detector");
  AddIoFlags(pacer, c);
  pacer->add_option("--rate", o.pacer.rate, "Sampling rate")
      ->check(CLI::Range(0.0, 1.0));
  pacer->add_option("--period", o.pacer.period, "Events per period")
      ->check(CLI::PositiveNumber);
  pacer->add_option("--seed", c.seed, "Sampling seed");
  pacer->add_option("--runs", c.runs, "Repeat with seeds seed..seed+N-1")
      ->check(CLI::PositiveNumber);
  pacer->add_flag("--timing", c.timing, "Include wall-clock time");
  pacer->add_option("--window", o.window,
                    "Threshold for the short race fraction")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic trace");
  gen->add_option("--output,-o", c.output, "Output file, or - for stdout");
  gen->add_flag("--json", c.json, "Wrap the trace in JSON");
  gen->add_option("--seed", c.seed, "Generator seed");
  gen->add_option("--mode", o.gen_mode,
                  "race_free_locked, race_free_single_thread, read_only, "
                  "dense_racy, sparse_racy, long_races_only or mixed");
  gen->add_option("--threads", o.gen.num_threads, "Thread count");
  gen->add_option("--locks", o.gen.num_locks, "Lock count");
  gen->add_option("--vars", o.gen.num_vars, "Shared variable count");
  gen->add_option("--length", o.gen.length, "Number of events");
  gen->add_option("--max-nesting", o.gen.max_nesting,
                  "Locks a thread may hold at once");
  gen->add_option("--window", o.gen.window, "dense_racy window length");
  gen->add_option("--race-count", o.gen.race_count, "sparse_racy races");
  gen->add_option("--min-gap", o.gen.min_gap, "long_races_only distance");

  auto* oracle = app.add_subcommand("oracle", "Brute-force race enumeration");
  AddIoFlags(oracle, c);
  oracle->add_option("--cap", o.cap, "Maximum trace length");
  oracle->add_option("--window", o.window, "Also count racy windows")
      ->check(CLI::PositiveNumber);

  auto* project = app.add_subcommand("project", "Race-free projection");
  AddIoFlags(project, c);
  project->add_option("--m", o.m, "Connector length (default 4|T| + 2h)")
      ->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Trace statistics");
  AddIoFlags(stats, c);

  auto* sweep = app.add_subcommand("sweep", "Tester over several epsilons");
  AddIoFlags(sweep, c);
  AddRptFlags(sweep, o.rpt, false);
  sweep->add_option("--epsilons", o.epsilons, "Comma-separated list")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--seed", c.seed, "Base seed");
  sweep->add_option("--runs", c.runs, "Runs per epsilon (default 20)")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kNoRace : kUsageError;
  }

  const Io io{in, out, err};
  try {
    if (detect->parsed()) return Detect(o, io);
    if (rpt->parsed()) return Rpt(o, io);
    if (pacer->parsed()) return Pacer(o, io);
    if (gen->parsed()) return Gen(o, io);
    if (oracle->parsed()) return Oracle(o, io);
    if (project->parsed()) return Project(o, io);
    if (stats->parsed()) return Stats(o, io);
    if (sweep->parsed()) return Sweep(o, io);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace racetest::cli
