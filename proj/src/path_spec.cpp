#include "humsim/path_spec.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "humsim/errors.hpp"

namespace humsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, std::string_view segment) {
    s = trim(s);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError("malformed number '" + std::string(s) + "' in path segment '" + std::string(segment) + "'");
    return v;
}

}  // namespace

std::vector<double> parse_path_spec(std::string_view spec) {
    if (trim(spec).empty()) throw UsageError("empty path spec");
    std::vector<double> points;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = spec.find(',', pos);
        const std::string_view segment = trim(spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos));
        pos = comma == std::string_view::npos ? spec.size() + 1 : comma + 1;

        const std::size_t c1 = segment.find(':');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : segment.find(':', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
            segment.find(':', c2 + 1) != std::string_view::npos)
            throw UsageError("path segment '" + std::string(segment) + "' is not of the form start:end:step");
        const double a = parse_number(segment.substr(0, c1), segment);
        const double b = parse_number(segment.substr(c1 + 1, c2 - c1 - 1), segment);
        const double step = parse_number(segment.substr(c2 + 1), segment);
        if (!(step > 0)) throw UsageError("path step must be positive in segment '" + std::string(segment) + "'");

        const double dir = b >= a ? 1.0 : -1.0;
        const auto count = static_cast<long long>(std::floor(std::abs(b - a) / step + 1e-9));
        std::vector<double> seg;
        for (long long k = 0; k <= count; ++k) seg.push_back(a + dir * step * static_cast<double>(k));
        if (std::abs(seg.back() - b) <= 1e-9 * step)
            seg.back() = b;
        else
            seg.push_back(b);

        std::size_t first = 0;
        if (!points.empty() && std::abs(points.back() - seg.front()) <= 1e-12 * std::max(1.0, std::abs(seg.front())))
            first = 1;
        points.insert(points.end(), seg.begin() + static_cast<std::ptrdiff_t>(first), seg.end());
    }
    return points;
}

}  // namespace humsim
