// Copyright 2026 The cliffproxy Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cliffproxy/bench/csv.hpp"

namespace cliffproxy::bench {

namespace detail {

constexpr double kWidth = 720, kHeight = 440, kLeft = 70, kRight = 160, kTop = 30, kBottom = 60;

inline const char *palette(size_t i) {
    static const char *colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return colors[i % 8];
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    if (v == 0) return "0";
    double a = std::abs(v);
    if (a >= 1e-2 && a < 1e4) {
        std::snprintf(buf, sizeof buf, "%.4g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.2e", v);
    }
    return buf;
}

inline std::string escape_xml(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

inline double parse_number(const std::string &s) {
    try {
        return parse_decimal(s);
    } catch (const std::exception &) {
        throw Error("non-numeric summary value '" + s + "'");
    }
}

struct Axis {
    double lo, hi;
    double map(double v, double a, double b) const {
        return hi == lo ? 0.5 * (a + b) : a + (v - lo) / (hi - lo) * (b - a);
    }
};

inline Axis padded(double lo, double hi) {
    if (lo == hi) {
        double pad = lo == 0 ? 1 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

inline std::string frame(const std::string &title, const Axis &x, const Axis &y, bool x_ticks) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" + escape_xml(title) + "</text>\n";
    double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y1) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; k++) {
        double v = y.lo + (y.hi - y.lo) * k / 4.0;
        double py = y.map(v, y0, y1);
        s += "<line x1=\"" + fmt(x0 - 4) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(py) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\">" + tick_label(v) + "</text>\n";
    }
    if (x_ticks) {
        for (int k = 0; k <= 4; k++) {
            double v = x.lo + (x.hi - x.lo) * k / 4.0;
            double px = x.map(v, x0, x1);
            s += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(px) + "\" y2=\"" + fmt(y0 + 4) + "\" stroke=\"black\"/>\n";
            s += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(y0 + 16) + "\" text-anchor=\"middle\">" + tick_label(v) + "</text>\n";
        }
    }
    return s;
}

inline std::string legend(const std::vector<std::string> &names) {
    std::string s;
    double x = kWidth - kRight + 15;
    for (size_t i = 0; i < names.size(); i++) {
        double y = kTop + 10 + 18.0 * static_cast<double>(i);
        s += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" + palette(i) + "\"/>\n";
        s += "<text x=\"" + fmt(x + 15) + "\" y=\"" + fmt(y) + "\">" + escape_xml(names[i]) + "</text>\n";
    }
    return s;
}

inline std::vector<std::string> ordered_unique(const std::vector<std::string> &v) {
    std::vector<std::string> out;
    for (const auto &s : v) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

inline std::string render_hist(const CsvTable &t) {
    std::vector<std::string> groups;
    std::vector<double> values;
    for (const auto &r : t.rows) {
        groups.push_back(r[0]);
        values.push_back(parse_number(r[1]));
    }
    auto names = ordered_unique(groups);
    double lo = *std::min_element(values.begin(), values.end()), hi = *std::max_element(values.begin(), values.end());
    const size_t bins = 20;
    if (lo == hi) hi = lo + (lo == 0 ? 1 : std::abs(lo));
    std::vector<std::vector<size_t>> counts(names.size(), std::vector<size_t>(bins, 0));
    for (size_t i = 0; i < values.size(); i++) {
        size_t g = static_cast<size_t>(std::find(names.begin(), names.end(), groups[i]) - names.begin());
        size_t b = std::min(bins - 1, static_cast<size_t>((values[i] - lo) / (hi - lo) * bins));
        counts[g][b]++;
    }
    size_t top = 1;
    for (size_t b = 0; b < bins; b++) {
        size_t s = 0;
        for (const auto &c : counts) s += c[b];
        top = std::max(top, s);
    }
    Axis x{lo, hi}, y{0, static_cast<double>(top)};
    std::string s = frame("histogram", x, y, true);
    double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    double bw = (x1 - x0) / bins;
    for (size_t b = 0; b < bins; b++) {
        double base = 0;
        for (size_t g = 0; g < names.size(); g++) {
            if (!counts[g][b]) continue;
            double h = static_cast<double>(counts[g][b]);
            double ya = y.map(base + h, y0, y1), yb = y.map(base, y0, y1);
            s += "<rect x=\"" + fmt(x0 + bw * b) + "\" y=\"" + fmt(ya) + "\" width=\"" + fmt(bw - 1) + "\" height=\"" +
                 fmt(yb - ya) + "\" fill=\"" + palette(g) + "\"/>\n";
            base += h;
        }
    }
    s += legend(names);
    return s + "</svg>\n";
}

inline std::string render_bars(const CsvTable &t) {
    std::vector<std::string> groups, series;
    for (const auto &r : t.rows) {
        groups.push_back(r[0]);
        series.push_back(r[1]);
    }
    auto gnames = ordered_unique(groups), snames = ordered_unique(series);
    double lo = 0, hi = 0;
    for (const auto &r : t.rows) {
        double v = parse_number(r[2]), e = parse_number(r[3]);
        lo = std::min(lo, v - e);
        hi = std::max(hi, v + e);
    }
    Axis y = padded(lo, hi);
    y.lo = std::min(y.lo, 0.0);
    std::string s = frame("grouped bars", {0, 1}, y, false);
    double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    double gw = (x1 - x0) / static_cast<double>(gnames.size());
    double bw = gw * 0.8 / static_cast<double>(snames.size());
    for (size_t g = 0; g < gnames.size(); g++) {
        s += "<text x=\"" + fmt(x0 + gw * (g + 0.5)) + "\" y=\"" + fmt(y0 + 16) + "\" text-anchor=\"middle\">" +
             escape_xml(gnames[g]) + "</text>\n";
    }
    for (const auto &r : t.rows) {
        size_t g = static_cast<size_t>(std::find(gnames.begin(), gnames.end(), r[0]) - gnames.begin());
        size_t k = static_cast<size_t>(std::find(snames.begin(), snames.end(), r[1]) - snames.begin());
        double v = parse_number(r[2]), e = parse_number(r[3]);
        double bx = x0 + gw * g + gw * 0.1 + bw * k;
        double yv = y.map(v, y0, y1), yz = y.map(0, y0, y1);
        s += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(std::min(yv, yz)) + "\" width=\"" + fmt(bw - 1) + "\" height=\"" +
             fmt(std::abs(yz - yv)) + "\" fill=\"" + palette(k) + "\"/>\n";
        double cx = bx + bw / 2, ya = y.map(v + e, y0, y1), yb = y.map(v - e, y0, y1);
        s += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(ya) + "\" x2=\"" + fmt(cx) + "\" y2=\"" + fmt(yb) + "\" stroke=\"black\"/>\n";
        s += "<line x1=\"" + fmt(cx - 3) + "\" y1=\"" + fmt(ya) + "\" x2=\"" + fmt(cx + 3) + "\" y2=\"" + fmt(ya) + "\" stroke=\"black\"/>\n";
        s += "<line x1=\"" + fmt(cx - 3) + "\" y1=\"" + fmt(yb) + "\" x2=\"" + fmt(cx + 3) + "\" y2=\"" + fmt(yb) + "\" stroke=\"black\"/>\n";
    }
    s += legend(snames);
    return s + "</svg>\n";
}

inline std::string render_scatter(const CsvTable &t) {
    std::vector<std::string> groups;
    std::vector<double> xs, ys;
    for (const auto &r : t.rows) {
        groups.push_back(r[0]);
        xs.push_back(parse_number(r[1]));
        ys.push_back(parse_number(r[2]));
    }
    auto names = ordered_unique(groups);
    Axis x = padded(*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end()));
    Axis y = padded(*std::min_element(ys.begin(), ys.end()), *std::max_element(ys.begin(), ys.end()));
    std::string s = frame("scatter", x, y, true);
    double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    for (size_t i = 0; i < xs.size(); i++) {
        size_t g = static_cast<size_t>(std::find(names.begin(), names.end(), groups[i]) - names.begin());
        s += "<circle cx=\"" + fmt(x.map(xs[i], x0, x1)) + "\" cy=\"" + fmt(y.map(ys[i], y0, y1)) + "\" r=\"3\" fill=\"" +
             palette(g) + "\"/>\n";
    }
    s += legend(names);
    return s + "</svg>\n";
}

}  // namespace detail

/// Self-contained SVG for a summary table of the given kind.
inline std::string render_figure(const CsvTable &t, FigureKind kind) {
    if (t.header != summary_header(kind)) throw Error("summary columns do not match the requested figure kind");
    if (t.rows.empty()) throw Error("summary has no data rows; no figure written");
    switch (kind) {
        case FigureKind::Hist: return detail::render_hist(t);
        case FigureKind::Bars: return detail::render_bars(t);
        case FigureKind::Scatter: return detail::render_scatter(t);
    }
    return {};
}

/// Reads a summary CSV and writes its SVG; nothing is written on error.
inline void emit_figure(const std::string &csv_path, FigureKind kind, const std::string &svg_path) {
    CsvTable t = parse_csv(read_file(csv_path));
    std::string svg = render_figure(t, kind);
    write_file_atomic(svg_path, svg);
}

}  // namespace cliffproxy::bench
