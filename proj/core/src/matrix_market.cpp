#include "beamlu/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace beamlu {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Header {
    bool coordinate = false;
    bool symmetric = false;
};

} // namespace

Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("matrix market: cannot open '" + path + "'");

    std::size_t lineno = 0;
    std::string line;
    if (!std::getline(in, line)) throw mm_parse_error("matrix market: empty file", 1);
    ++lineno;

    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw mm_parse_error("matrix market: malformed header", lineno);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    Header h;
    if (format == "coordinate") h.coordinate = true;
    else if (format != "array") throw mm_parse_error("matrix market: unsupported format '" + format + "'", lineno);
    if (field != "real" && field != "integer")
        throw mm_parse_error("matrix market: unsupported field '" + field + "'", lineno);
    if (symmetry == "symmetric") h.symmetric = true;
    else if (symmetry != "general")
        throw mm_parse_error("matrix market: unsupported symmetry '" + symmetry + "'", lineno);

    // skip comments and blank lines up to the size line
    std::size_t rows = 0, cols = 0, nnz = 0;
    for (;;) {
        if (!std::getline(in, line)) throw mm_parse_error("matrix market: missing size line", lineno + 1);
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream ss(line);
        if (h.coordinate) {
            if (!(ss >> rows >> cols >> nnz))
                throw mm_parse_error("matrix market: bad size line", lineno);
        } else {
            if (!(ss >> rows >> cols))
                throw mm_parse_error("matrix market: bad size line", lineno);
        }
        break;
    }
    if (rows == 0 || cols == 0) throw mm_parse_error("matrix market: zero dimension", lineno);
    if (h.symmetric && rows != cols)
        throw mm_parse_error("matrix market: symmetric matrix must be square", lineno);

    Matrix a(rows, cols);
    if (h.coordinate) {
        std::size_t seen = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '%') continue;
            std::istringstream ss(line);
            std::size_t i = 0, j = 0;
            double v = 0.0;
            if (!(ss >> i >> j >> v))
                throw mm_parse_error("matrix market: bad coordinate entry", lineno);
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw mm_parse_error("matrix market: index out of range", lineno);
            a(i - 1, j - 1) = v;
            if (h.symmetric) a(j - 1, i - 1) = v;
            ++seen;
        }
        if (seen != nnz)
            throw mm_parse_error("matrix market: entry count does not match header", lineno);
    } else {
        // array: column-major; symmetric stores the lower triangle only
        std::vector<double> vals;
        const std::size_t expect =
            h.symmetric ? rows * (rows + 1) / 2 : rows * cols;
        vals.reserve(expect);
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '%') continue;
            std::istringstream ss(line);
            double v;
            while (ss >> v) vals.push_back(v);
            if (!ss.eof()) throw mm_parse_error("matrix market: bad array entry", lineno);
        }
        if (vals.size() != expect)
            throw mm_parse_error("matrix market: entry count does not match header", lineno);
        std::size_t idx = 0;
        if (h.symmetric) {
            for (std::size_t j = 0; j < cols; ++j)
                for (std::size_t i = j; i < rows; ++i) {
                    a(i, j) = vals[idx];
                    a(j, i) = vals[idx];
                    ++idx;
                }
        } else {
            for (std::size_t j = 0; j < cols; ++j)
                for (std::size_t i = 0; i < rows; ++i) a(i, j) = vals[idx++];
        }
    }
    return a;
}

void write_matrix_market(const std::string& path, const Matrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("matrix market: cannot write '" + path + "'");
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    char buf[64];
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            out << buf << "\n";
        }
    }
    if (!out) throw std::runtime_error("matrix market: write failed for '" + path + "'");
}

} // namespace beamlu
