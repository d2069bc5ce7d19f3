#include "racetest/trace_io.h"

#include <sstream>

namespace racetest {

std::string_view ParseErrorReasonName(ParseErrorReason reason) {
  switch (reason) {
    case ParseErrorReason::kMalformedLine:
      return "malformed_line";
    case ParseErrorReason::kUnknownOp:
      return "unknown_op";
    case ParseErrorReason::kEmptyToken:
      return "empty_token";
  }
  return "?";
}

ParseError::ParseError(size_t line, ParseErrorReason reason,
                       const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " +
                         std::string(ParseErrorReasonName(reason)) + ": " +
                         detail),
      line_(line),
      reason_(reason) {}

namespace {

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

bool IsTokenChar(char c) { return c != '|' && c != '(' && c != ')'; }

bool IsToken(std::string_view s) {
  for (char c : s) {
    if (!IsTokenChar(c)) return false;
  }
  return true;
}

}  // namespace

ParsedTrace ParseTrace(std::istream& in, const ParseOptions& options) {
  ParsedTrace result;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text(line);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (IsBlank(text) || text.front() == '#') continue;

    size_t bar = text.find('|');
    if (bar == std::string_view::npos) {
      throw ParseError(line_no, ParseErrorReason::kMalformedLine,
                       "missing '|' after thread");
    }
    std::string_view thread = text.substr(0, bar);
    std::string_view rest = text.substr(bar + 1);
    std::string_view loc;
    if (size_t bar2 = rest.find('|'); bar2 != std::string_view::npos) {
      loc = rest.substr(bar2 + 1);
      rest = rest.substr(0, bar2);
    }
    size_t open = rest.find('(');
    if (rest.empty() || open == std::string_view::npos || rest.back() != ')') {
      throw ParseError(line_no, ParseErrorReason::kMalformedLine,
                       "expected <op>(<operand>)");
    }
    std::string_view op_token = rest.substr(0, open);
    std::string_view operand = rest.substr(open + 1, rest.size() - open - 2);
    if (!IsToken(thread) || !IsToken(op_token) || !IsToken(operand)) {
      throw ParseError(line_no, ParseErrorReason::kMalformedLine,
                       "parenthesis inside a token");
    }
    if (thread.empty() || operand.empty() || op_token.empty()) {
      throw ParseError(line_no, ParseErrorReason::kEmptyToken,
                       "empty thread, op or operand");
    }
    std::optional<Op> op = OpFromToken(op_token);
    if (!op) {
      if (options.ignore_unknown) {
        ++result.skipped_unknown;
        continue;
      }
      throw ParseError(line_no, ParseErrorReason::kUnknownOp,
                       std::string(op_token));
    }
    result.trace.Append(thread, *op, operand, loc);
  }
  if (in.bad()) throw std::runtime_error("failed reading trace input");
  return result;
}

ParsedTrace ParseTraceString(std::string_view text,
                             const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return ParseTrace(in, options);
}

void WriteTrace(const Trace& trace, std::ostream& out) {
  for (const Event& e : trace.events()) {
    out << trace.ThreadName(e.thread) << '|' << OpToken(e.op) << '('
        << trace.OperandName(e) << ')';
    if (auto loc = trace.LocName(e.loc)) out << '|' << *loc;
    out << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing trace output");
}

std::string WriteTraceString(const Trace& trace) {
  std::ostringstream out;
  WriteTrace(trace, out);
  return out.str();
}

}  // namespace racetest
