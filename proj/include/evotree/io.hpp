#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evotree/geometry.hpp"
#include "evotree/tree.hpp"

namespace evotree {

// Input/format error carrying a 1-based line number (0 = whole file).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Tab-separated event records: `root <id> <label>` first, then
// `edge <parent> <child> <label> <length>`; '#' lines are comments.
std::vector<Event> parse_events(std::istream& in);
std::vector<Event> parse_events_file(const std::string& path);

// Random-attachment evolving tree: each new node picks a uniformly random
// existing node that still has degree capacity. Returns event-file text.
std::string generate_synthetic(int n_nodes, int max_degree,
                               double desired_length, std::uint64_t seed);

// One trace line: real-node positions by name (insertion order when written
// by this library) and bend polylines per subdivided edge, keyed
// "<parent>-<child>". elapsed_ms is optional wall time (negative = absent);
// it is only written on request so that trace bytes stay run-reproducible.
struct TraceFrame {
    int t = 0;
    double elapsed_ms = -1.0;
    std::vector<std::pair<std::string, Point2>> pos;
    std::vector<std::pair<std::string, std::vector<Point2>>> bends;
};

struct Trace {
    std::string config_json;  // raw first line when it was a config object
    std::vector<TraceFrame> frames;
};

// Coordinates are printed with up to 17 significant digits, so parsing
// recovers the exact double.
std::string frame_to_json(const TraceFrame& frame);
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);  // throws ParseError with line numbers
Trace read_trace_file(const std::string& path);

std::string format_csv(const std::vector<struct MetricsReport>& rows);

}  // namespace evotree
