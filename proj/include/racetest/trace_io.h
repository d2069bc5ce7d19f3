// Line-based trace log format:
//
//   <thread>|<op>(<operand>)[|<loc>]
//
// with op one of r, w, acq, rel. Blank lines and lines starting with '#' are
// skipped. The location is everything after the second '|'.

#ifndef RACETEST_TRACE_IO_H_
#define RACETEST_TRACE_IO_H_

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "racetest/trace.h"

namespace racetest {

enum class ParseErrorReason { kMalformedLine, kUnknownOp, kEmptyToken };
std::string_view ParseErrorReasonName(ParseErrorReason reason);

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line, ParseErrorReason reason, const std::string& detail);
  size_t line() const { return line_; }
  ParseErrorReason reason() const { return reason_; }

 private:
  size_t line_;
  ParseErrorReason reason_;
};

struct ParseOptions {
  // Skip lines whose op is outside {r, w, acq, rel} instead of failing.
  bool ignore_unknown = false;
};

struct ParsedTrace {
  Trace trace;
  size_t skipped_unknown = 0;
};

// Single pass; ids are assigned in first-appearance order. Well-formedness is
// not checked here.
ParsedTrace ParseTrace(std::istream& in, const ParseOptions& options = {});
ParsedTrace ParseTraceString(std::string_view text,
                             const ParseOptions& options = {});

// Throws std::runtime_error if the stream fails.
void WriteTrace(const Trace& trace, std::ostream& out);
std::string WriteTraceString(const Trace& trace);

}  // namespace racetest

#endif  // RACETEST_TRACE_IO_H_
