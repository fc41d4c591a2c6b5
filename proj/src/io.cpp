#include "denaturefit/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace denaturefit::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& field, std::size_t line_no) {
    const std::string t = trim(field);
    if (t.empty()) throw ParseError("empty numeric field", line_no);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size())
        throw ParseError("not a number: '" + t + "'", line_no);
    return v;
}

}  // namespace

DenaturationDataset parse_dataset_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<DataPoint> pts;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
            line[1] == '\xBB' && line[2] == '\xBF')
            line.erase(0, 3);
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        if (!header_seen) {
            std::string squashed;
            for (char ch : t)
                if (!std::isspace(static_cast<unsigned char>(ch))) squashed += ch;
            if (squashed != "denaturant,signal")
                throw ParseError("expected header 'denaturant,signal'", line_no);
            header_seen = true;
            continue;
        }

        const std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected two comma-separated values", line_no);
        if (t.find(',', comma + 1) != std::string::npos)
            throw ParseError("expected exactly two columns", line_no);
        const double d = parse_number(t.substr(0, comma), line_no);
        const double y = parse_number(t.substr(comma + 1), line_no);
        if (!(d >= 0.0))
            throw ParseError("denaturant concentration must be >= 0", line_no);
        pts.push_back({d, y});
    }
    if (!header_seen) throw ParseError("no header found", line_no);
    if (pts.empty()) throw ParseError("no data rows", line_no);
    return DenaturationDataset(std::move(pts));
}

DenaturationDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_dataset_csv(in);
}

void write_dataset_csv(const std::string& path, const DenaturationDataset& data,
                       const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "denaturant,signal\n";
    for (const auto& p : data.points())
        out << format_double(p.denaturant) << ',' << format_double(p.signal)
            << '\n';
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace denaturefit::io
