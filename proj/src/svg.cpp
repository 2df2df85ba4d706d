#include "evotree/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace evotree {

namespace {

void append_num(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    out += buf;
}

void append_xml_escaped(std::string& out, const std::string& s) {
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
}

std::string truncate_codepoints(const std::string& s, int max_chars) {
    int count = 0;
    std::size_t end = 0;
    while (end < s.size()) {
        if ((static_cast<unsigned char>(s[end]) & 0xC0u) != 0x80u) {
            if (count == max_chars) break;
            ++count;
        }
        ++end;
    }
    return s.substr(0, end);
}

}  // namespace

std::string render_svg(const EvolvingTree& tree, const std::vector<Point2>& positions,
                       const LabelSpec& labels, bool with_labels) {
    if (tree.empty()) throw std::invalid_argument("cannot render an empty tree");
    if (positions.size() != tree.node_count())
        throw std::invalid_argument("position count does not match tree");

    constexpr double node_radius = 3.0;
    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = std::numeric_limits<double>::infinity();
    double hi_x = -std::numeric_limits<double>::infinity();
    double hi_y = -std::numeric_limits<double>::infinity();
    const auto grow = [&](double x0, double y0, double x1, double y1) {
        lo_x = std::min(lo_x, x0);
        lo_y = std::min(lo_y, y0);
        hi_x = std::max(hi_x, x1);
        hi_y = std::max(hi_y, y1);
    };
    for (NodeId i = 0; i < tree.node_count(); ++i) {
        const Point2 p = positions[i];
        grow(p.x - node_radius, p.y - node_radius, p.x + node_radius, p.y + node_radius);
        if (with_labels && tree.node(i).kind == NodeKind::real) {
            const double hw = 0.5 * label_width(tree.node(i).label, labels);
            const double hh = 0.5 * labels.line_height;
            grow(p.x - hw, p.y - hh, p.x + hw, p.y + hh);
        }
    }
    const auto margin = [](double lo, double hi) {
        const double span = hi - lo;
        return span > 0.0 ? 0.05 * span : 10.0;
    };
    const double mx = margin(lo_x, hi_x);
    const double my = margin(lo_y, hi_y);
    lo_x -= mx;
    hi_x += mx;
    lo_y -= my;
    hi_y += my;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    append_num(out, lo_x);
    out += ' ';
    append_num(out, lo_y);
    out += ' ';
    append_num(out, hi_x - lo_x);
    out += ' ';
    append_num(out, hi_y - lo_y);
    out += "\">\n";

    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        out += "  <polyline fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" points=\"";
        const EdgeRecord& edge = tree.edge(e);
        for (std::size_t k = 0; k < edge.chain.size(); ++k) {
            if (k) out += ' ';
            const Point2 p = positions[edge.chain[k]];
            append_num(out, p.x);
            out += ',';
            append_num(out, p.y);
        }
        out += "\"/>\n";
    }

    for (NodeId i = 0; i < tree.node_count(); ++i) {
        if (tree.node(i).kind != NodeKind::real) continue;
        const Point2 p = positions[i];
        out += "  <circle cx=\"";
        append_num(out, p.x);
        out += "\" cy=\"";
        append_num(out, p.y);
        out += "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }

    if (with_labels) {
        for (NodeId i = 0; i < tree.node_count(); ++i) {
            if (tree.node(i).kind != NodeKind::real) continue;
            const Point2 p = positions[i];
            out += "  <text x=\"";
            append_num(out, p.x);
            out += "\" y=\"";
            append_num(out, p.y);
            out +=
                "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
                "dominant-baseline=\"middle\">";
            append_xml_escaped(out,
                               truncate_codepoints(tree.node(i).label, labels.max_chars));
            out += "</text>\n";
        }
    }

    out += "</svg>\n";
    return out;
}

}  // namespace evotree
