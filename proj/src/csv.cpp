#include "humsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "humsim/errors.hpp"

namespace humsim {

namespace {

constexpr double kPico = 1e12;

const char* const kSweepColumns[] = {"rh_percent", "temp_c", "branch", "water_fill", "eps_eff", "capacitance_pf"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.emplace_back(trim(line.substr(pos, comma == line.npos ? line.npos : comma - pos)));
        if (comma == line.npos) break;
        pos = comma + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::string& column, std::size_t line) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw DataError("bad value '" + s + "' in column " + column, line);
    return v;
}

// Reads a header plus rows, skipping blank and '#' lines.
struct Table {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, fields)
    std::size_t header_line = 0;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return header.size();
    }
};

Table read_table(std::istream& is) {
    Table t;
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        auto fields = split(view);
        if (t.header.empty()) {
            t.header = std::move(fields);
            t.header_line = n;
            std::set<std::string> seen;
            for (const auto& h : t.header)
                if (!seen.insert(h).second) throw DataError("duplicate column '" + h + "'", n);
            continue;
        }
        if (fields.size() != t.header.size())
            throw DataError("expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()), n);
        t.rows.emplace_back(n, std::move(fields));
    }
    if (t.header.empty()) throw DataError("no header row");
    if (t.rows.empty()) throw DataError("no data rows", t.header_line);
    return t;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& footer) {
    for (std::size_t i = 0; i < std::size(kSweepColumns); ++i) os << (i ? "," : "") << kSweepColumns[i];
    os << '\n';
    for (const auto& r : result.rows) {
        os << format_number(r.rh_percent) << ',' << format_number(r.temp_c) << ',' << to_string(r.branch) << ','
           << format_number(r.water_fill) << ',' << format_number(r.eps_eff) << ','
           << format_number(r.capacitance * kPico) << '\n';
    }
    for (const auto& f : footer) os << "# " << f << '\n';
}

SweepResult read_sweep_csv(std::istream& is) {
    const auto t = read_table(is);
    std::vector<std::size_t> idx;
    for (const char* c : kSweepColumns) {
        const auto i = t.column(c);
        if (i == t.header.size()) throw DataError(std::string("missing column ") + c, t.header_line);
        idx.push_back(i);
    }
    SweepResult out;
    for (const auto& [line, f] : t.rows) {
        SweepRow r{};
        r.rh_percent = parse_double(f[idx[0]], "rh_percent", line);
        r.temp_c = parse_double(f[idx[1]], "temp_c", line);
        try {
            r.branch = parse_direction(f[idx[2]]);
        } catch (const DataError& e) {
            throw DataError(e.what(), line);
        }
        r.water_fill = parse_double(f[idx[3]], "water_fill", line);
        r.eps_eff = parse_double(f[idx[4]], "eps_eff", line);
        r.capacitance = parse_double(f[idx[5]], "capacitance_pf", line) / kPico;
        out.rows.push_back(r);
    }
    return out;
}

MeasurementSet read_measurement_csv(std::istream& is) {
    const auto t = read_table(is);
    static const std::set<std::string> known = {"rh_percent", "capacitance_pf", "temp_c", "branch",
                                                "weight",     "water_fill",     "eps_eff"};
    for (const auto& h : t.header)
        if (!known.count(h)) throw DataError("unknown column '" + h + "'", t.header_line);
    const auto rh = t.column("rh_percent");
    const auto cap = t.column("capacitance_pf");
    if (rh == t.header.size()) throw DataError("missing column rh_percent", t.header_line);
    if (cap == t.header.size()) throw DataError("missing column capacitance_pf", t.header_line);
    const auto temp = t.column("temp_c");
    const auto branch = t.column("branch");
    const auto weight = t.column("weight");
    const auto n = t.header.size();

    MeasurementSet out;
    for (const auto& [line, f] : t.rows) {
        MeasurementRow r;
        r.rh_percent = parse_double(f[rh], "rh_percent", line);
        r.capacitance = parse_double(f[cap], "capacitance_pf", line) / kPico;
        if (temp != n) r.temp_c = parse_double(f[temp], "temp_c", line);
        if (weight != n) r.weight = parse_double(f[weight], "weight", line);
        if (branch != n && !f[branch].empty()) {
            try {
                r.branch = parse_direction(f[branch]);
            } catch (const DataError& e) {
                throw DataError(e.what(), line);
            }
        }
        if (!(r.rh_percent >= 0 && r.rh_percent <= 100)) throw DataError("RH outside [0, 100]", line);
        if (!(r.capacitance > 0)) throw DataError("capacitance must be positive", line);
        if (!(r.weight > 0)) throw DataError("weight must be positive", line);
        out.rows.push_back(r);
    }
    return out;
}

void write_measurement_csv(std::ostream& os, const MeasurementSet& data) {
    os << "rh_percent,temp_c,branch,capacitance_pf,weight\n";
    for (const auto& r : data.rows) {
        os << format_number(r.rh_percent) << ',' << format_number(r.temp_c) << ','
           << (r.branch ? to_string(*r.branch) : std::string_view{}) << ',' << format_number(r.capacitance * kPico)
           << ',' << format_number(r.weight) << '\n';
    }
}

}  // namespace humsim
