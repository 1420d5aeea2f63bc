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

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hris::bench
{

std::string fmt_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<std::string> provenance(const ExperimentConfig &cfg, const std::string &what)
{
    return {"build=" + build_version(),
            "artifact=" + what,
            "config_hash=" + cfg.hash(),
            "seed=" + std::to_string(cfg.seed),
            "profile=" + cfg.profile};
}

void write_csv(const std::filesystem::path &path, const std::vector<std::string> &comments,
               const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    // Write to a sibling and rename, so a reader never sees a half-written file.
    const auto tmp = std::filesystem::path(path.string() + ".part");
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot write " + tmp.string());
        for (const auto &c : comments)
            os << "# " << c << '\n';
        auto line = [&os](const std::vector<std::string> &cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << cells[i];
            os << '\n';
        };
        line(header);
        for (const auto &r : rows)
        {
            if (r.size() != header.size())
                throw std::logic_error("csv row width does not match the header");
            line(r);
        }
        if (!os)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_results(const std::filesystem::path &path, const ExperimentConfig &cfg, const std::vector<ResultRow> &rows)
{
    std::vector<std::vector<std::string>> cells;
    for (const auto &r : rows)
        cells.push_back({r.experiment, r.config_hash, std::to_string(r.seed), r.mode, std::to_string(r.n_ris),
                         std::to_string(r.k_active), r.metric, fmt_double(r.value), r.unit, fmt_double(r.wall_ms)});
    write_csv(path, provenance(cfg, "results"), result_header, cells);
}

std::filesystem::path checkpoint_path(const ExperimentConfig &cfg, Mode mode, std::size_t n_ris, std::size_t k_active)
{
    std::string name = std::string(to_string(mode)) + "_N" + std::to_string(n_ris);
    if (mode != Mode::passive)
        name += "_K" + std::to_string(k_active);
    name += "_seed" + std::to_string(cfg.seed) + ".ckpt";
    return cfg.output_dir / "checkpoints" / name;
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw MissingArtifact("CSV not found: " + path.string());
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        if (!s.empty() && s.back() == ',')
            out.emplace_back();
        return out;
    };
    while (std::getline(is, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        auto cells = split(line);
        if (t.header.empty())
        {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " fields, found " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty())
        throw ConfigError(path.string() + ": no header line");
    return t;
}

} // namespace hris::bench
