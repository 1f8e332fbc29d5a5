// io.hpp
// Text formats: stats files and gram files as key=value lines, reports as
// CSV.  Serialization is canonical (fixed key order, 12 significant digits)
// so identical inputs produce byte-identical files.

#pragma once

#include <cstdio>
#include <sstream>

#include "qkd/report.hpp"
#include "qkd/tomography.hpp"

namespace qkd {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::pair<std::string, std::string>> parse_lines(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw domain_error("stats parse: line without '=': " + t);
        out.push_back({trimmed(t.substr(0, eq)), trimmed(t.substr(eq + 1))});
    }
    return out;
}

inline double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw domain_error("");
        return v;
    } catch (...) {
        throw domain_error("stats parse: bad numeric value for " + key);
    }
}

inline std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto comma = key.find(',', pos);
        if (comma == std::string::npos) {
            parts.push_back(key.substr(pos));
            break;
        }
        parts.push_back(key.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return parts;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One-way stats files

inline std::string serialize_stats(const AttackStats& stats) {
    std::ostringstream out;
    out << "psi=" << (stats.psi == PsiMode::Three ? 3 : 4) << "\n";
    out << "alpha=" << format_value(stats.alpha) << "\n";
    if (stats.psi == PsiMode::Four) out << "beta=" << format_value(stats.beta) << "\n";
    for (const auto& [key, value] : stats.entries)
        out << "p," << key.first << "," << key.second << "=" << format_value(value) << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Two-way stats files

inline std::string serialize_two_way_stats(const TwoWayStats& tw) {
    std::ostringstream out;
    out << "psi=3\n";
    out << "alpha=" << format_value(tw.alpha) << "\n";
    out << "qa=" << format_value(tw.qa) << "\n";
    const char* sends[3] = {"0", "1", "a"};
    std::map<std::string, double> body;
    for (int x = 0; x < 3; ++x)
        for (int i = 0; i < 2; ++i) {
            body["p," + std::string(sends[x]) + "," + std::to_string(i)] = tw.forward[x][i];
            if (x < 2)
                for (int j = 0; j < 2; ++j)
                    body["p," + std::string(sends[x]) + "," + std::to_string(i) + "," +
                         std::to_string(j)] = tw.second_z[x][i][j];
            body["p," + std::string(sends[x]) + "," + std::to_string(i) + ",a"] =
                tw.second_a[x][i];
            body["p," + std::string(sends[x]) + "," + std::to_string(i) + ",abar"] =
                1.0 - tw.second_a[x][i];
        }
    for (const auto& [key, value] : tw.reflect.entries)
        body["r," + key.first + "," + key.second] = value;
    for (const auto& [key, value] : body) out << key << "=" << format_value(value) << "\n";
    return out.str();
}

struct StatsDocument {
    bool two_way = false;
    AttackStats one_way;
    TwoWayStats two;
};

inline StatsDocument parse_stats_file(const std::string& text) {
    const auto lines = detail::parse_lines(text);
    StatsDocument doc;
    bool saw_psi = false;
    for (const auto& [key, value] : lines)
        if (key == "qa") doc.two_way = true;

    int psi = 4;
    double alpha = 0.7071067811865475244, beta = 0.7071067811865475244;
    for (const auto& [key, value] : lines) {
        if (key == "psi") {
            psi = static_cast<int>(detail::parse_number(key, value));
            if (psi != 3 && psi != 4) throw domain_error("stats parse: psi must be 3 or 4");
            saw_psi = true;
        } else if (key == "alpha") {
            alpha = detail::parse_number(key, value);
        } else if (key == "beta") {
            beta = detail::parse_number(key, value);
        } else if (key == "qa") {
            doc.two.qa = detail::parse_number(key, value);
        } else if (key.rfind("p,", 0) == 0 || key.rfind("r,", 0) == 0) {
            const auto parts = detail::split_key(key);
            const double v = detail::parse_number(key, value);
            auto known = [](const std::string& label) {
                return label == "0" || label == "1" || label == "a" || label == "abar" ||
                       label == "b" || label == "bbar";
            };
            if (parts.size() < 3 || !known(parts[1]) || !known(parts[2]))
                throw domain_error("stats parse: bad key " + key);
            if (!doc.two_way) {
                if (parts.size() != 3) throw domain_error("stats parse: bad key " + key);
                doc.one_way.set(parts[1], parts[2], v);
            } else if (parts[0] == "r") {
                if (parts.size() != 3) throw domain_error("stats parse: bad key " + key);
                doc.two.reflect.set(parts[1], parts[2], v);
            } else if (parts.size() == 3) {
                const int x = TwoWayStats::send_index(parts[1]);
                if (parts[2] != "0" && parts[2] != "1")
                    throw domain_error("stats parse: bad middle outcome in " + key);
                const int i = parts[2] == "1" ? 1 : 0;
                doc.two.forward[x][i] = v;
            } else if (parts.size() == 4) {
                const int x = TwoWayStats::send_index(parts[1]);
                if (parts[2] != "0" && parts[2] != "1")
                    throw domain_error("stats parse: bad middle outcome in " + key);
                const int i = parts[2] == "1" ? 1 : 0;
                if (parts[3] == "a") {
                    doc.two.second_a[x][i] = v;
                } else if (parts[3] == "0" || parts[3] == "1") {
                    if (x > 1) throw domain_error("stats parse: bad key " + key);
                    doc.two.second_z[x][i][parts[3] == "1" ? 1 : 0] = v;
                } else if (parts[3] != "abar") {
                    throw domain_error("stats parse: bad final outcome in " + key);
                }
            } else {
                throw domain_error("stats parse: bad key " + key);
            }
        } else {
            throw domain_error("stats parse: unknown key " + key);
        }
    }
    if (!saw_psi) throw domain_error("stats parse: missing psi header");
    doc.one_way.psi = psi == 3 ? PsiMode::Three : PsiMode::Four;
    doc.one_way.alpha = alpha;
    doc.one_way.beta = beta;
    doc.two.alpha = alpha;
    doc.two.reflect.psi = PsiMode::Three;
    doc.two.reflect.alpha = alpha;
    return doc;
}

// ---------------------------------------------------------------------------
// Gram files

namespace detail {

inline void write_interval(std::ostringstream& out, const std::string& prefix,
                           const std::string& name, const Interval& v) {
    if (v.is_point()) {
        out << prefix << name << "=" << format_value(v.lo) << "\n";
    } else {
        out << prefix << name << "_lo=" << format_value(v.lo) << "\n";
        out << prefix << name << "_hi=" << format_value(v.hi) << "\n";
    }
}

}  // namespace detail

inline std::string serialize_gram(const GramEstimates& g, const std::string& prefix = "") {
    std::ostringstream out;
    out << prefix << "psi=" << (g.psi == PsiMode::Three ? 3 : 4) << "\n";
    out << prefix << "alpha=" << format_value(g.alpha) << "\n";
    if (g.psi == PsiMode::Four) out << prefix << "beta=" << format_value(g.beta) << "\n";
    for (int i = 0; i < 4; ++i)
        out << prefix << "norm_" << i << "=" << format_value(g.norm[i]) << "\n";
    detail::write_interval(out, prefix, "re_01", g.re01);
    detail::write_interval(out, prefix, "re_02", g.re02);
    detail::write_interval(out, prefix, "re_03", g.re03);
    detail::write_interval(out, prefix, "re_12", g.re12);
    detail::write_interval(out, prefix, "re_13", g.re13);
    detail::write_interval(out, prefix, "re_23", g.re23);
    detail::write_interval(out, prefix, "im_01", g.im01);
    detail::write_interval(out, prefix, "im_02", g.im02);
    detail::write_interval(out, prefix, "im_03", g.im03);
    detail::write_interval(out, prefix, "im_12", g.im12);
    detail::write_interval(out, prefix, "im_13", g.im13);
    detail::write_interval(out, prefix, "im_23", g.im23);
    return out.str();
}

namespace detail {

inline GramEstimates gram_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& lines) {
    std::map<std::string, double> kv;
    for (const auto& [key, value] : lines) kv[key] = parse_number(key, value);

    GramEstimates g;
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw infeasible_error("gram parse: missing key " + key);
        return it->second;
    };
    const int psi = static_cast<int>(need("psi"));
    if (psi != 3 && psi != 4) throw domain_error("gram parse: psi must be 3 or 4");
    g.psi = psi == 3 ? PsiMode::Three : PsiMode::Four;
    g.alpha = need("alpha");
    g.beta = kv.count("beta") ? kv["beta"] : g.beta;
    for (int i = 0; i < 4; ++i) g.norm[i] = need("norm_" + std::to_string(i));

    auto interval = [&](const std::string& name) {
        if (kv.count(name)) return Interval::point(kv[name]);
        if (kv.count(name + "_lo") && kv.count(name + "_hi"))
            return Interval{kv[name + "_lo"], kv[name + "_hi"]};
        throw infeasible_error("gram parse: missing key " + name);
    };
    g.re01 = interval("re_01");
    g.re02 = interval("re_02");
    g.re03 = interval("re_03");
    g.re12 = interval("re_12");
    g.re13 = interval("re_13");
    g.re23 = interval("re_23");
    g.im01 = interval("im_01");
    g.im02 = interval("im_02");
    g.im03 = interval("im_03");
    g.im12 = interval("im_12");
    g.im13 = interval("im_13");
    g.im23 = interval("im_23");
    return g;
}

}  // namespace detail

inline GramEstimates parse_gram(const std::string& text) {
    return detail::gram_from_pairs(detail::parse_lines(text));
}

inline std::string serialize_two_way_gram(const TwoWayGram& g) {
    std::ostringstream out;
    out << "alpha=" << format_value(g.alpha) << "\n";
    out << "qa=" << format_value(g.qa) << "\n";
    out << "c=" << format_value(g.c) << "\n";
    out << "s0=" << format_value(g.s0) << "\n";
    out << "s1=" << format_value(g.s1) << "\n";
    for (int idx = 0; idx < 4; ++idx)
        out << "cap_" << (idx + 1) << "=" << format_value(g.cap[idx]) << "\n";
    for (int x = 0; x < 2; ++x)
        for (int i = 0; i < 2; ++i) {
            const int j = 2 * x + i;
            for (int k = 0; k < 2; ++k)
                out << "norm_e_" << i << "_" << j << "_" << k << "="
                    << format_value(g.pair_norm[x][i][k]) << "\n";
            out << "rehop_" << i << "_" << j << "=" << format_value(g.rehop[x][i]) << "\n";
        }
    out << serialize_gram(g.reflect, "reflect_");
    return out.str();
}

inline bool is_two_way_gram_text(const std::string& text) {
    return text.find("\nc=") != std::string::npos || text.rfind("c=", 0) == 0;
}

inline TwoWayGram parse_two_way_gram(const std::string& text) {
    const auto lines = detail::parse_lines(text);
    std::map<std::string, double> kv;
    std::vector<std::pair<std::string, std::string>> reflect_lines;
    for (const auto& [key, value] : lines) {
        if (key.rfind("reflect_", 0) == 0)
            reflect_lines.push_back({key.substr(8), value});
        else
            kv[key] = detail::parse_number(key, value);
    }
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw infeasible_error("gram parse: missing key " + key);
        return it->second;
    };
    TwoWayGram g;
    g.alpha = need("alpha");
    g.qa = need("qa");
    g.c = need("c");
    g.s0 = need("s0");
    g.s1 = need("s1");
    for (int idx = 0; idx < 4; ++idx) g.cap[idx] = need("cap_" + std::to_string(idx + 1));
    for (int x = 0; x < 2; ++x)
        for (int i = 0; i < 2; ++i) {
            const int j = 2 * x + i;
            for (int k = 0; k < 2; ++k)
                g.pair_norm[x][i][k] = need("norm_e_" + std::to_string(i) + "_" +
                                            std::to_string(j) + "_" + std::to_string(k));
            g.rehop[x][i] = need("rehop_" + std::to_string(i) + "_" + std::to_string(j));
        }
    g.reflect = detail::gram_from_pairs(reflect_lines);
    return g;
}

// ---------------------------------------------------------------------------
// Report CSV

inline std::string report_csv_header() {
    return "protocol,psi,alpha_key,rate,entropy_bound,cond_shannon,minimizer";
}

inline std::string report_csv_row(const KeyRateReport& r) {
    std::ostringstream out;
    out << r.protocol << "," << (r.psi == PsiMode::Three ? 3 : 4) << ","
        << format_value(r.alpha_key) << "," << format_value(r.rate) << ","
        << format_value(r.entropy_bound) << "," << format_value(r.cond_shannon) << ",";
    bool first = true;
    for (const auto& [key, value] : r.minimizer) {
        if (!first) out << ";";
        out << key << "=" << format_value(value);
        first = false;
    }
    return out.str();
}

}  // namespace qkd
