// SPDX-License-Identifier: Apache-2.0
//
// arcssl - antenna response consistency SSL for WiFi channel state information
// Copyright (C) 2026 the arcssl authors
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

#include "arcssl/report.hpp"

#include "arcssl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace arcssl::report {

using probe::RunReport;

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

std::string row_to_csv(const RunReport& r) {
    return r.algo + "," + r.feature_mode + "," + r.probe + "," + std::to_string(r.seed) + "," +
           fmt(r.alpha, "%g") + "," + fmt(r.accuracy) + "," + fmt(r.macro_f1) + "," +
           fmt(r.seconds, "%.3f");
}

std::string fmt_cell(const std::string& s, std::size_t width = 20) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

} // namespace

std::string result_key(const RunReport& r) {
    return r.algo + "|" + r.feature_mode + "|" + r.probe + "|" + std::to_string(r.seed) + "|" +
           fmt(r.alpha, "%g");
}

std::vector<RunReport> read_results_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw DataError("cannot open results file: " + path.string());
    std::string line;
    if (!std::getline(is, line))
        throw DataError("empty results file: " + path.string());
    if (line != kResultsHeader)
        throw DataError("inconsistent results schema in " + path.string() + ": '" + line + "'");
    std::vector<RunReport> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8)
            throw DataError("malformed results row at " + path.string() + ":" +
                            std::to_string(lineno));
        RunReport r;
        r.algo = f[0];
        r.feature_mode = f[1];
        r.probe = f[2];
        try {
            r.seed = std::stoull(f[3]);
            r.alpha = std::stod(f[4]);
            r.accuracy = std::stod(f[5]);
            r.macro_f1 = std::stod(f[6]);
            r.seconds = std::stod(f[7]);
        } catch (const std::exception&) {
            throw DataError("unparseable results row at " + path.string() + ":" +
                            std::to_string(lineno));
        }
        if (r.accuracy < 0.0 || r.accuracy > 1.0 || r.macro_f1 < 0.0 || r.macro_f1 > 1.0)
            throw DataError("metric out of [0,1] at " + path.string() + ":" +
                            std::to_string(lineno));
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<RunReport>& rows) {
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + path.string());
    os << kResultsHeader << "\n";
    for (const auto& r : rows)
        os << row_to_csv(r) << "\n";
}

void append_results_jsonl(const std::filesystem::path& path, const std::vector<RunReport>& rows) {
    std::ofstream os(path, std::ios::app);
    if (!os)
        throw DataError("cannot open for writing: " + path.string());
    for (const auto& r : rows) {
        nlohmann::json j;
        j["algo"] = r.algo;
        j["feature_mode"] = r.feature_mode;
        j["probe"] = r.probe;
        j["seed"] = r.seed;
        j["alpha"] = r.alpha;
        j["accuracy"] = r.accuracy;
        j["macro_f1"] = r.macro_f1;
        j["seconds"] = r.seconds;
        os << j.dump() << "\n";
    }
}

std::size_t merge_results_csv(const std::filesystem::path& path,
                              const std::vector<RunReport>& rows) {
    std::vector<RunReport> existing;
    if (std::filesystem::exists(path))
        existing = read_results_csv(path);
    std::set<std::string> keys;
    for (const auto& r : existing)
        keys.insert(result_key(r));
    std::size_t added = 0;
    for (const auto& r : rows) {
        if (keys.contains(result_key(r)))
            continue; // idempotent per (run, probe) key
        keys.insert(result_key(r));
        existing.push_back(r);
        ++added;
    }
    write_results_csv(path, existing);
    return added;
}

std::map<std::string, CellStats> aggregate(const std::vector<RunReport>& rows,
                                           const std::string& probe_kind) {
    std::map<std::string, std::vector<const RunReport*>> groups;
    for (const auto& r : rows)
        if (r.probe == probe_kind)
            groups[r.algo + "|" + r.feature_mode].push_back(&r);
    std::map<std::string, CellStats> out;
    for (const auto& [key, g] : groups) {
        CellStats c;
        c.runs = g.size();
        for (const auto* r : g) {
            c.mean_acc += r->accuracy;
            c.mean_f1 += r->macro_f1;
        }
        c.mean_acc /= static_cast<double>(g.size());
        c.mean_f1 /= static_cast<double>(g.size());
        for (const auto* r : g) {
            c.std_acc += (r->accuracy - c.mean_acc) * (r->accuracy - c.mean_acc);
            c.std_f1 += (r->macro_f1 - c.mean_f1) * (r->macro_f1 - c.mean_f1);
        }
        c.std_acc = std::sqrt(c.std_acc / static_cast<double>(g.size()));
        c.std_f1 = std::sqrt(c.std_f1 / static_cast<double>(g.size()));
        out[key] = c;
    }
    return out;
}

void write_report_tables(const std::vector<RunReport>& rows,
                         const std::filesystem::path& out_dir) {
    if (rows.empty())
        throw DataError("no result rows to report");
    std::set<std::string> keys;
    for (const auto& r : rows)
        if (!keys.insert(result_key(r)).second)
            throw DataError("duplicate result row: " + result_key(r));

    std::filesystem::create_directories(out_dir);
    std::set<std::string> probes, algos, modes;
    for (const auto& r : rows) {
        probes.insert(r.probe);
        algos.insert(r.algo);
        modes.insert(r.feature_mode);
    }

    for (const auto& pk : probes) {
        const auto cells = aggregate(rows, pk);
        // locate the best cells (max mean accuracy and max mean F1)
        std::string best_acc_key, best_f1_key;
        double best_acc = -1.0, best_f1 = -1.0;
        for (const auto& [key, c] : cells) {
            if (c.mean_acc > best_acc) {
                best_acc = c.mean_acc;
                best_acc_key = key;
            }
            if (c.mean_f1 > best_f1) {
                best_f1 = c.mean_f1;
                best_f1_key = key;
            }
        }

        std::ofstream csv(out_dir / ("report_" + pk + ".csv"), std::ios::trunc);
        csv << "algo";
        for (const auto& m : modes)
            csv << "," << m << "_acc," << m << "_f1";
        csv << "\n";
        for (const auto& a : algos) {
            csv << a;
            for (const auto& m : modes) {
                const auto it = cells.find(a + "|" + m);
                if (it == cells.end())
                    csv << ",,";
                else
                    csv << "," << fmt(it->second.mean_acc) << "," << fmt(it->second.mean_f1);
            }
            csv << "\n";
        }
        csv.close();

        std::ofstream txt(out_dir / ("report_" + pk + ".txt"), std::ios::trunc);
        txt << "probe: " << pk << " (mean over seeds; * marks the best cell)\n\n";
        txt << fmt_cell("algo \\ mode");
        for (const auto& m : modes)
            txt << fmt_cell(m + " acc") << fmt_cell(m + " f1");
        txt << "\n";
        for (const auto& a : algos) {
            txt << fmt_cell(a);
            for (const auto& m : modes) {
                const auto it = cells.find(a + "|" + m);
                if (it == cells.end()) {
                    txt << fmt_cell("-") << fmt_cell("-");
                    continue;
                }
                const bool star_acc = (a + "|" + m) == best_acc_key;
                const bool star_f1 = (a + "|" + m) == best_f1_key;
                txt << fmt_cell(fmt(it->second.mean_acc, "%.4f") + (star_acc ? "*" : ""));
                txt << fmt_cell(fmt(it->second.mean_f1, "%.4f") + (star_f1 ? "*" : ""));
            }
            txt << "\n";
        }
    }
}

void write_sweep_summary(const std::vector<SweepPoint>& points, const std::string& param,
                         const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path, std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + csv_path.string());
    os << param << ",runs,mean_accuracy,std_accuracy,mean_macro_f1,std_macro_f1\n";
    for (const auto& p : points)
        os << p.value << "," << p.stats.runs << "," << fmt(p.stats.mean_acc) << ","
           << fmt(p.stats.std_acc) << "," << fmt(p.stats.mean_f1) << "," << fmt(p.stats.std_f1)
           << "\n";
}

void write_sweep_svg(const std::vector<SweepPoint>& points, const std::string& param,
                     const std::string& metric, const std::filesystem::path& svg_path) {
    const int width = 560, height = 360, ml = 70, mr = 20, mt = 30, mb = 50;
    const int pw = width - ml - mr, ph = height - mt - mb;
    const std::size_t n = points.size();
    std::ofstream os(svg_path, std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + svg_path.string());

    auto value_of = [&](const SweepPoint& p) {
        return metric == "macro_f1" ? p.stats.mean_f1 : p.stats.mean_acc;
    };
    auto std_of = [&](const SweepPoint& p) {
        return metric == "macro_f1" ? p.stats.std_f1 : p.stats.std_acc;
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
       << metric << " vs " << param << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
       << mt + ph << "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double frac = g / 4.0;
        const int y = mt + ph - static_cast<int>(frac * ph);
        os << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(frac, "%.2f") << "</text>\n";
        os << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n";
    }
    // polyline over evenly spaced x positions (categorical/log-ish sweeps)
    std::string pts;
    for (std::size_t i = 0; i < n; ++i) {
        const int x = ml + static_cast<int>((n == 1 ? 0.5 : static_cast<double>(i) / (n - 1)) * pw);
        const int y = mt + ph - static_cast<int>(std::clamp(value_of(points[i]), 0.0, 1.0) * ph);
        pts += std::to_string(x) + "," + std::to_string(y) + " ";
        const int yerr = static_cast<int>(std::clamp(std_of(points[i]), 0.0, 1.0) * ph);
        os << "<line x1=\"" << x << "\" y1=\"" << y - yerr << "\" x2=\"" << x << "\" y2=\""
           << y + yerr << "\" stroke=\"#4477aa\"/>\n";
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"#4477aa\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << points[i].value << "</text>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"1.5\" points=\"" << pts
       << "\"/>\n";
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << param << "</text>\n";
    os << "</svg>\n";
}

} // namespace arcssl::report
