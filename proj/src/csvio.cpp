#include "ganscan/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ganscan/errors.hpp"

namespace ganscan {

std::string csv_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string short_double(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, std::string("cannot open ") + what, path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

double parse_csv_double(const std::string& field, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad numeric field '" + field + "'", path.string());
    }
}

int parse_label(const std::string& field, const std::filesystem::path& path) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw Error(ErrorCode::ParseError, "label must be 0 or 1, got '" + field + "'", path.string());
}

} // namespace

void write_features_csv(std::span<const FeatureRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write features CSV", path.string());
    const std::size_t dim = rows.empty() ? 0 : rows.front().values.size();
    out << "path,label";
    for (std::size_t d = 1; d <= dim; ++d) out << ",f" << d;
    out << '\n';
    for (const FeatureRow& row : rows) {
        if (row.values.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "feature rows have mixed dimensions");
        }
        out << quote_field(row.path) << ',' << row.label;
        for (double v : row.values) out << ',' << csv_double(v);
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing features CSV", path.string());
}

std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path, "features CSV");
    if (lines.empty()) throw Error(ErrorCode::ParseError, "empty features CSV", path.string());
    const std::vector<std::string> header = split_csv_line(lines.front());
    if (header.size() < 2 || header[0] != "path" || header[1] != "label") {
        throw Error(ErrorCode::ParseError, "features CSV must start with path,label", path.string());
    }
    const std::size_t dim = header.size() - 2;
    std::vector<FeatureRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_csv_line(lines[i]);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError, "row has wrong field count", path.string());
        }
        FeatureRow row;
        row.path = fields[0];
        row.label = parse_label(fields[1], path);
        row.values.reserve(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            row.values.push_back(parse_csv_double(fields[2 + d], path));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_scores_csv(std::span<const ScoreRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write scores CSV", path.string());
    out << "path,label,score\n";
    for (const ScoreRow& row : rows) {
        out << quote_field(row.path) << ',' << row.label << ',' << csv_double(row.score) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing scores CSV", path.string());
}

std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path, "scores CSV");
    if (lines.empty() || split_csv_line(lines.front()) != std::vector<std::string>{"path", "label", "score"}) {
        throw Error(ErrorCode::ParseError, "scores CSV must start with path,label,score", path.string());
    }
    std::vector<ScoreRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_csv_line(lines[i]);
        if (fields.size() != 3) {
            throw Error(ErrorCode::ParseError, "scores row has wrong field count", path.string());
        }
        rows.push_back({fields[0], parse_label(fields[1], path), parse_csv_double(fields[2], path)});
    }
    return rows;
}

void write_manifest_csv(std::span<const ManifestRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write manifest", path.string());
    out << "path,label,seed\n";
    for (const ManifestRow& row : rows) {
        out << quote_field(row.path) << ',' << row.label << ',' << row.seed << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing manifest", path.string());
}

std::vector<ManifestRow> read_manifest_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path, "manifest");
    if (lines.empty() || split_csv_line(lines.front()) != std::vector<std::string>{"path", "label", "seed"}) {
        throw Error(ErrorCode::ParseError, "manifest must start with path,label,seed", path.string());
    }
    std::vector<ManifestRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_csv_line(lines[i]);
        if (fields.size() != 3) {
            throw Error(ErrorCode::ParseError, "manifest row has wrong field count", path.string());
        }
        ManifestRow row;
        row.path = fields[0];
        row.label = parse_label(fields[1], path);
        try {
            row.seed = std::stoull(fields[2]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad seed field '" + fields[2] + "'", path.string());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ganscan
