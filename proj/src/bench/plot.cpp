// SPDX-License-Identifier: Apache-2.0
//
// hris-sim: link-level simulation and optimization for hybrid RIS assisted MIMO
// Copyright (C) 2026 The hris-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "hris/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hris::bench
{

namespace
{

struct Series
{
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart
{
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

double parse_number(const std::string &s, const std::string &what)
{
    double v = 0.0;
    const auto *end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
        throw ConfigError("malformed number '" + s + "' in column " + what);
    return v;
}

std::size_t column(const CsvTable &t, const std::string &name)
{
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end())
        throw ConfigError("missing column " + name);
    return static_cast<std::size_t>(it - t.header.begin());
}

// Groups rows into one series per value of `key_col` (or one series).
Chart build_chart(const CsvTable &t)
{
    Chart c;
    std::string key, x, y;
    if (t.header == reward_header)
    {
        c.x_label = "episode";
        c.y_label = "mean SE (bps/Hz)";
        x = "episode";
        y = "mean_se_bpshz";
    }
    else if (t.header == se_header)
    {
        c.x_label = "active elements K";
        c.y_label = "mean SE (bps/Hz)";
        key = "mode";
        x = "k_active";
        y = "mean_se_bpshz";
    }
    else if (t.header == runtime_header)
    {
        c.x_label = "surface elements N";
        c.y_label = "median runtime (ms, log scale)";
        c.log_y = true;
        key = "method";
        x = "n_ris";
        y = "median_ms";
    }
    else
        throw ConfigError("no chart for this header (expected reward curve, SE or runtime columns)");

    if (t.rows.empty())
        throw ConfigError("empty data series");
    const std::size_t xi = column(t, x), yi = column(t, y);
    std::map<std::string, std::size_t> index;
    for (const auto &r : t.rows)
    {
        const std::string name = key.empty() ? "mean SE" : r[column(t, key)];
        auto [it, fresh] = index.emplace(name, c.series.size());
        if (fresh)
            c.series.push_back({name, {}});
        const double yv = parse_number(r[yi], y);
        if (c.log_y && !(yv > 0.0))
            throw ConfigError("non-positive value on a log axis in column " + y);
        c.series[it->second].points.emplace_back(parse_number(r[xi], x), yv);
    }
    return c;
}

std::string escape(const std::string &s)
{
    std::string out;
    for (char ch : s)
        switch (ch)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    return out;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<double> nice_ticks(double lo, double hi)
{
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (m * mag >= raw)
        {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

} // namespace

std::string render_svg(const CsvTable &table, const std::string &title)
{
    const Chart c = build_chart(table);
    const double w = 760, h = 460, ml = 80, mr = 200, mt = 50, mb = 60;
    const double pw = w - ml - mr, ph = h - mt - mb;

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto &s : c.series)
        for (auto [x, y] : s.points)
        {
            const double yy = c.log_y ? std::log10(y) : y;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, yy);
            y1 = std::max(y1, yy);
        }
    if (x1 - x0 < 1e-12)
    {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (c.log_y)
    {
        y0 = std::floor(y0);
        y1 = std::max(std::ceil(y1), y0 + 1.0);
    }
    else
    {
        const double pad = y1 - y0 < 1e-12 ? 1.0 : 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + ph - ((c.log_y ? std::log10(y) : y) - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "  <title>" << escape(title) << "</title>\n";
    o << "  <desc>";
    for (std::size_t i = 0; i < table.comments.size(); ++i)
        o << (i ? "; " : "") << escape(table.comments[i]);
    o << "</desc>\n";
    o << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    o << "  <text x=\"" << num(ml + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";

    // Axes and grid.
    o << "  <g stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
    std::vector<double> yt;
    if (c.log_y)
        for (double e = y0; e <= y1 + 1e-9; e += 1.0)
            yt.push_back(std::pow(10.0, e));
    else
        yt = nice_ticks(y0, y1);
    const auto xt = nice_ticks(x0, x1);
    for (double v : yt)
        o << "    <line x1=\"" << num(ml) << "\" x2=\"" << num(ml + pw) << "\" y1=\"" << num(py(v)) << "\" y2=\""
          << num(py(v)) << "\"/>\n";
    for (double v : xt)
        o << "    <line x1=\"" << num(px(v)) << "\" x2=\"" << num(px(v)) << "\" y1=\"" << num(mt) << "\" y2=\""
          << num(mt + ph) << "\"/>\n";
    o << "  </g>\n";
    o << "  <rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double v : yt)
        o << "  <text x=\"" << num(ml - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
          << tick_label(v) << "</text>\n";
    for (double v : xt)
        o << "  <text x=\"" << num(px(v)) << "\" y=\"" << num(mt + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(v) << "</text>\n";
    o << "  <text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(h - 15) << "\" text-anchor=\"middle\">"
      << escape(c.x_label) << "</text>\n";
    o << "  <text transform=\"translate(20," << num(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(c.y_label) << "</text>\n";

    // Data and legend.
    for (std::size_t i = 0; i < c.series.size(); ++i)
    {
        const auto &s = c.series[i];
        const char *colour = palette[i % std::size(palette)];
        o << "  <polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.6\" data-series=\""
          << escape(s.name) << "\" points=\"";
        for (std::size_t k = 0; k < s.points.size(); ++k)
            o << (k ? " " : "") << num(px(s.points[k].first)) << ',' << num(py(s.points[k].second));
        o << "\"/>\n";
        // Markers keep single-point series visible.
        if (s.points.size() <= 60)
            for (auto [x, y] : s.points)
                o << "  <circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2.5\" fill=\"" << colour
                  << "\"/>\n";
        const double ly = mt + 10 + 18 * static_cast<double>(i);
        o << "  <line x1=\"" << num(ml + pw + 15) << "\" x2=\"" << num(ml + pw + 40) << "\" y1=\"" << num(ly)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        o << "  <text x=\"" << num(ml + pw + 46) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<std::filesystem::path> cmd_plot(const std::vector<std::filesystem::path> &csvs,
                                            const std::optional<std::filesystem::path> &out_dir)
{
    if (csvs.empty())
        throw ConfigError("plot: no CSV files given");
    // Render everything first so a bad input leaves no partial output behind.
    std::vector<std::pair<std::filesystem::path, std::string>> docs;
    for (const auto &p : csvs)
    {
        const CsvTable t = read_csv(p);
        std::string svg;
        try
        {
            svg = render_svg(t, p.stem().string());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(p.string() + ": " + e.what());
        }
        auto target = p;
        target.replace_extension(".svg");
        if (out_dir)
            target = *out_dir / target.filename();
        docs.emplace_back(target, std::move(svg));
    }
    std::vector<std::filesystem::path> written;
    for (const auto &[path, svg] : docs)
    {
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::trunc);
        os << svg;
        if (!os)
            throw std::runtime_error("cannot write " + path.string());
        written.push_back(path);
    }
    return written;
}

} // namespace hris::bench
