#include "evotree/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "evotree/metrics.hpp"
#include "evotree/rng.hpp"

#include "json.hpp"

namespace evotree {

namespace {

bool valid_id(const std::string& s) {
    if (s.empty()) return false;
    for (const char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
              c == '-'))
            return false;
    return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_length(const std::string& s, int lineno) {
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &consumed);
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad length: " + s);
    }
    if (consumed != s.size() || !(v > 0.0) || !std::isfinite(v))
        throw ParseError(lineno, "bad length: " + s);
    return v;
}

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_json_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

std::vector<Event> parse_events(std::istream& in) {
    std::vector<Event> events;
    std::unordered_set<std::string> known;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = split_tabs(line);
        if (f[0] == "root") {
            if (!events.empty()) throw ParseError(lineno, "duplicate root");
            if (f.size() != 3) throw ParseError(lineno, "root takes: root <id> <label>");
            if (!valid_id(f[1])) throw ParseError(lineno, "bad id: " + f[1]);
            events.push_back(Event{f[1], "", f[2], 0.0});
            known.insert(f[1]);
        } else if (f[0] == "edge") {
            if (events.empty()) throw ParseError(lineno, "root required first");
            if (f.size() != 5)
                throw ParseError(lineno,
                                 "edge takes: edge <parent> <child> <label> <length>");
            if (!valid_id(f[1])) throw ParseError(lineno, "bad id: " + f[1]);
            if (!valid_id(f[2])) throw ParseError(lineno, "bad id: " + f[2]);
            if (!known.contains(f[1])) throw ParseError(lineno, "unknown parent: " + f[1]);
            if (known.contains(f[2])) throw ParseError(lineno, "duplicate id: " + f[2]);
            events.push_back(Event{f[2], f[1], f[3], parse_length(f[4], lineno)});
            known.insert(f[2]);
        } else {
            throw ParseError(lineno, "unknown record type: " + f[0]);
        }
    }
    if (events.empty()) throw ParseError(0, "no events");
    return events;
}

std::vector<Event> parse_events_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open: " + path);
    return parse_events(in);
}

std::string generate_synthetic(int n_nodes, int max_degree,
                               double desired_length, std::uint64_t seed) {
    if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
    if (max_degree < 2) throw std::invalid_argument("max_degree must be >= 2");
    if (!(desired_length > 0.0))
        throw std::invalid_argument("desired_length must be positive");

    SplitMix64 rng(seed);
    std::vector<int> degree(static_cast<std::size_t>(n_nodes), 0);
    std::string out;
    out += "root\tn0\tn0\n";
    std::string len;
    append_double(len, desired_length);
    std::vector<std::uint32_t> eligible;
    for (int k = 1; k < n_nodes; ++k) {
        eligible.clear();
        for (int i = 0; i < k; ++i)
            if (degree[static_cast<std::size_t>(i)] < max_degree)
                eligible.push_back(static_cast<std::uint32_t>(i));
        const std::uint32_t parent =
            eligible[rng.below(static_cast<std::uint64_t>(eligible.size()))];
        ++degree[parent];
        degree[static_cast<std::size_t>(k)] = 1;
        const std::string child = "n" + std::to_string(k);
        out += "edge\tn" + std::to_string(parent) + "\t" + child + "\t" + child +
               "\t" + len + "\n";
    }
    return out;
}

std::string frame_to_json(const TraceFrame& frame) {
    std::string out;
    out.reserve(64 + frame.pos.size() * 64);
    out += "{\"t\": ";
    out += std::to_string(frame.t);
    out += ", \"pos\": {";
    for (std::size_t i = 0; i < frame.pos.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, frame.pos[i].first);
        out += ": [";
        append_double(out, frame.pos[i].second.x);
        out += ", ";
        append_double(out, frame.pos[i].second.y);
        out += ']';
    }
    out += "}, \"bends\": {";
    for (std::size_t i = 0; i < frame.bends.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, frame.bends[i].first);
        out += ": [";
        for (std::size_t k = 0; k < frame.bends[i].second.size(); ++k) {
            if (k) out += ", ";
            out += '[';
            append_double(out, frame.bends[i].second[k].x);
            out += ", ";
            append_double(out, frame.bends[i].second[k].y);
            out += ']';
        }
        out += ']';
    }
    out += '}';
    if (frame.elapsed_ms >= 0.0) {
        out += ", \"elapsed_ms\": ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", frame.elapsed_ms);
        out += buf;
    }
    out += '}';
    return out;
}

void write_trace(std::ostream& out, const Trace& trace) {
    if (!trace.config_json.empty()) out << trace.config_json << '\n';
    for (const TraceFrame& f : trace.frames) out << frame_to_json(f) << '\n';
}

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(lineno, "expected a JSON object");
        if (!j.contains("t")) {
            if (lineno == 1 && j.contains("config")) {
                trace.config_json = line;
                continue;
            }
            throw ParseError(lineno, "frame missing \"t\"");
        }
        TraceFrame f;
        try {
            f.t = j.at("t").get<int>();
            for (const auto& [name, xy] : j.at("pos").items()) {
                if (!xy.is_array() || xy.size() != 2)
                    throw ParseError(lineno, "position must be [x, y]");
                f.pos.emplace_back(name,
                                   Point2{xy[0].get<double>(), xy[1].get<double>()});
            }
            if (j.contains("bends")) {
                for (const auto& [key, arr] : j.at("bends").items()) {
                    std::vector<Point2> pts;
                    for (const auto& xy : arr) {
                        if (!xy.is_array() || xy.size() != 2)
                            throw ParseError(lineno, "bend must be [x, y]");
                        pts.push_back(Point2{xy[0].get<double>(), xy[1].get<double>()});
                    }
                    f.bends.emplace_back(key, std::move(pts));
                }
            }
            if (j.contains("elapsed_ms")) f.elapsed_ms = j.at("elapsed_ms").get<double>();
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, std::string("bad frame: ") + e.what());
        }
        trace.frames.push_back(std::move(f));
    }
    if (trace.frames.empty()) throw ParseError(0, "trace must contain >= 1 frame");
    return trace;
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open: " + path);
    return read_trace(in);
}

std::string format_csv(const std::vector<MetricsReport>& rows) {
    std::string out = "step,nodes,del,compactness,stability,stress,crossings,elapsed_ms\n";
    char buf[64];
    for (const MetricsReport& r : rows) {
        out += std::to_string(r.timestep);
        out += ',';
        out += std::to_string(r.node_count);
        for (const double v : {r.del, r.compactness, r.stability, r.stress}) {
            std::snprintf(buf, sizeof buf, ",%.9g", v);
            out += buf;
        }
        out += ',';
        out += std::to_string(r.crossings);
        std::snprintf(buf, sizeof buf, ",%.3f\n", r.elapsed_ms);
        out += buf;
    }
    return out;
}

}  // namespace evotree
