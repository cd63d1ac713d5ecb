#include "zonosvm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace zonosvm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view token, long line, const std::string& what) {
    token = trim(token);
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;  // from_chars rejects a leading '+'
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw ParseError(line, what + " '" + std::string(token) + "'.");
    }
    return value;
}

int parse_label(std::string_view token, long line) {
    token = trim(token);
    if (token == "+1" || token == "1") return 1;
    if (token == "-1") return -1;
    throw ParseError(line, "parse_dataset: label must be +1 or -1, got '" +
                               std::string(token) + "'.");
}

struct RawRows {
    std::vector<std::vector<double>> coords;
    std::vector<int> labels;
};

LabeledDataset assemble(RawRows rows, Index dim) {
    if (rows.coords.empty()) {
        throw ValidationError("parse_dataset: no data rows found.");
    }
    Mat points(static_cast<Index>(rows.coords.size()), dim);
    points.setZero();
    for (std::size_t r = 0; r < rows.coords.size(); ++r) {
        for (std::size_t c = 0; c < rows.coords[r].size(); ++c) {
            points(static_cast<Index>(r), static_cast<Index>(c)) = rows.coords[r][c];
        }
    }
    return LabeledDataset(std::move(points), std::move(rows.labels));
}

LabeledDataset parse_csv(std::istream& in) {
    RawRows rows;
    Index dim = -1;
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> coords;
        int label = 0;
        std::size_t field = 0;
        std::string_view rest = line;
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view token = rest.substr(0, comma);
            if (field == 0) {
                label = parse_label(token, line_no);
            } else {
                coords.push_back(parse_double(token, line_no,
                                              "parse_dataset: bad coordinate"));
            }
            ++field;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (coords.empty()) {
            throw ParseError(line_no, "parse_dataset: row has a label but no coordinates.");
        }
        if (dim < 0) {
            dim = static_cast<Index>(coords.size());
        } else if (static_cast<Index>(coords.size()) != dim) {
            throw ParseError(line_no, "parse_dataset: expected " + std::to_string(dim) +
                                          " coordinates, got " +
                                          std::to_string(coords.size()) + ".");
        }
        rows.labels.push_back(label);
        rows.coords.push_back(std::move(coords));
    }
    return assemble(std::move(rows), dim < 0 ? 0 : dim);
}

LabeledDataset parse_svmlight(std::istream& in) {
    RawRows rows;
    Index dim = 0;
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields{std::string(line)};
        std::string token;
        if (!(fields >> token)) continue;
        rows.labels.push_back(parse_label(token, line_no));
        std::vector<double> coords;
        long prev_index = 0;
        while (fields >> token) {
            const std::size_t colon = token.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
                throw ParseError(line_no, "parse_dataset: expected 'index:value', got '" +
                                              token + "'.");
            }
            long index = 0;
            const char* first = token.data();
            auto [ptr, ec] = std::from_chars(first, first + colon, index);
            if (ec != std::errc{} || ptr != first + colon || index < 1) {
                throw ParseError(line_no, "parse_dataset: bad feature index in '" + token +
                                              "'.");
            }
            if (index <= prev_index) {
                throw ParseError(line_no,
                                 "parse_dataset: feature indices must be strictly "
                                 "increasing.");
            }
            prev_index = index;
            const double value = parse_double(std::string_view(token).substr(colon + 1),
                                              line_no, "parse_dataset: bad feature value");
            coords.resize(static_cast<std::size_t>(index), 0.0);
            coords[static_cast<std::size_t>(index - 1)] = value;
        }
        dim = std::max(dim, static_cast<Index>(coords.size()));
        rows.coords.push_back(std::move(coords));
    }
    if (dim == 0 && !rows.coords.empty()) {
        throw ValidationError("parse_dataset: no feature values in any row.");
    }
    return assemble(std::move(rows), dim);
}

void write_value(std::ostream& out, double v) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    if (ec != std::errc{}) {
        throw ValidationError("write_dataset: failed to format a value.");
    }
    out.write(buffer, ptr - buffer);
}

}  // namespace

LabeledDataset parse_dataset(std::istream& in, DatasetFormat format) {
    return format == DatasetFormat::csv ? parse_csv(in) : parse_svmlight(in);
}

LabeledDataset load_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("load_dataset: cannot open '" + path + "'.");
    }
    return parse_dataset(in, format);
}

void write_dataset(std::ostream& out, const LabeledDataset& ds, DatasetFormat format) {
    for (Index i = 0; i < ds.size(); ++i) {
        out << (ds.label(i) > 0 ? "+1" : "-1");
        if (format == DatasetFormat::csv) {
            for (Index j = 0; j < ds.dim(); ++j) {
                out << ',';
                write_value(out, ds.point(i)[j]);
            }
        } else {
            for (Index j = 0; j < ds.dim(); ++j) {
                const double v = ds.point(i)[j];
                if (v == 0.0 && j + 1 != ds.dim()) continue;
                out << ' ' << (j + 1) << ':';
                write_value(out, v);
            }
        }
        out << '\n';
    }
}

DatasetFormat parse_format_name(const std::string& name) {
    if (name == "csv") return DatasetFormat::csv;
    if (name == "svmlight") return DatasetFormat::svmlight;
    throw ValidationError("parse_format_name: unknown format '" + name +
                          "' (expected csv or svmlight).");
}

}  // namespace zonosvm
