#include "steig/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace steig {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '%') continue;
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        if (!blank) return true;
    }
    return false;
}

double parse_value(const std::string& tok) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw MatrixMarketError("bad numeric value: " + tok);
        if (!std::isfinite(v)) throw MatrixMarketError("non-finite value: " + tok);
        return v;
    } catch (const MatrixMarketError&) {
        throw;
    } catch (const std::exception&) {
        throw MatrixMarketError("bad numeric value: " + tok);
    }
}

long parse_index(const std::string& tok) {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw MatrixMarketError("bad index: " + tok);
    return v;
}

} // namespace

SymMatrix read_matrix_market(std::istream& in, MatrixMarketInfo* info) {
    std::string line;
    if (!std::getline(in, line)) throw MatrixMarketError("empty file");
    std::vector<std::string> head = split_ws(line);
    if (head.size() != 5 || lower(head[0]) != "%%matrixmarket" || lower(head[1]) != "matrix")
        throw MatrixMarketError("malformed MatrixMarket header");

    const std::string format = lower(head[2]);
    const std::string field = lower(head[3]);
    const std::string symmetry = lower(head[4]);
    if (field != "real")
        throw MatrixMarketError("unsupported field '" + field + "' (only real)");

    MatrixMarketInfo mmi;
    if (format == "coordinate") {
        if (symmetry != "symmetric")
            throw MatrixMarketError("coordinate format requires symmetric symmetry");
        mmi.kind = MatrixMarketInfo::Kind::coordinate;
    } else if (format == "array") {
        if (symmetry != "symmetric" && symmetry != "general")
            throw MatrixMarketError("array format requires symmetric or general symmetry");
        mmi.kind = MatrixMarketInfo::Kind::array;
    } else {
        throw MatrixMarketError("unsupported format '" + format + "'");
    }
    mmi.symmetry = symmetry;

    if (!next_content_line(in, line)) throw MatrixMarketError("missing size line");
    std::vector<std::string> size_toks = split_ws(line);

    if (mmi.kind == MatrixMarketInfo::Kind::coordinate) {
        if (size_toks.size() != 3) throw MatrixMarketError("bad coordinate size line");
        const long n = parse_index(size_toks[0]);
        const long m = parse_index(size_toks[1]);
        const long nnz = parse_index(size_toks[2]);
        if (n != m) throw MatrixMarketError("matrix not square");
        if (n <= 0 || nnz < 0) throw MatrixMarketError("bad dimensions");
        mmi.n = int(n);
        mmi.m = int(m);
        mmi.nnz = nnz;

        SymMatrix mat{int(n)};
        std::vector<bool> seen(size_t(n) * (n + 1) / 2, false);
        auto tri_index = [n](long i, long j) { // i >= j, 0-based
            return size_t(j) * (2 * n - j - 1) / 2 + i;
        };
        for (long e = 0; e < nnz; ++e) {
            if (!next_content_line(in, line))
                throw MatrixMarketError("unexpected end of file in entry list");
            std::vector<std::string> toks = split_ws(line);
            if (toks.size() != 3) throw MatrixMarketError("bad coordinate entry: " + line);
            long i = parse_index(toks[0]) - 1;
            long j = parse_index(toks[1]) - 1;
            const double v = parse_value(toks[2]);
            if (i < 0 || i >= n || j < 0 || j >= n)
                throw MatrixMarketError("index out of range: " + line);
            if (i < j) std::swap(i, j); // canonicalize to the lower triangle
            const size_t slot = tri_index(i, j);
            if (seen[slot]) throw MatrixMarketError("duplicate entry: " + line);
            seen[slot] = true;
            mat.set(int(i), int(j), v);
        }
        if (next_content_line(in, line))
            throw MatrixMarketError("trailing data after declared entries");
        if (info != nullptr) *info = mmi;
        return mat;
    }

    // Array format.
    if (size_toks.size() != 2) throw MatrixMarketError("bad array size line");
    const long n = parse_index(size_toks[0]);
    const long m = parse_index(size_toks[1]);
    if (n != m) throw MatrixMarketError("matrix not square");
    if (n <= 0) throw MatrixMarketError("bad dimensions");
    mmi.n = int(n);
    mmi.m = int(m);

    const long count = symmetry == "symmetric" ? n * (n + 1) / 2 : n * n;
    std::vector<double> vals;
    vals.reserve(size_t(count));
    while (long(vals.size()) < count) {
        if (!next_content_line(in, line))
            throw MatrixMarketError("unexpected end of file in array data");
        for (const std::string& tok : split_ws(line)) vals.push_back(parse_value(tok));
    }
    if (long(vals.size()) != count) throw MatrixMarketError("excess array data");
    if (next_content_line(in, line)) throw MatrixMarketError("trailing data after array values");

    SymMatrix mat{int(n)};
    if (symmetry == "symmetric") {
        // Packed lower triangle, column-major.
        size_t k = 0;
        for (long j = 0; j < n; ++j)
            for (long i = j; i < n; ++i) mat.set(int(i), int(j), vals[k++]);
    } else {
        for (long j = 0; j < n; ++j)
            for (long i = j; i < n; ++i) {
                const double lo = vals[size_t(j) * n + i];
                const double up = vals[size_t(i) * n + j];
                if (lo != up) throw MatrixMarketError("general array matrix is not symmetric");
                mat.set(int(i), int(j), lo);
            }
    }
    if (info != nullptr) *info = mmi;
    return mat;
}

SymMatrix read_matrix_market(const std::string& path, MatrixMarketInfo* info) {
    std::ifstream in(path);
    if (!in) throw MatrixMarketError("cannot open '" + path + "'");
    return read_matrix_market(in, info);
}

void write_matrix_market(std::ostream& out, const SymMatrix& m) {
    const int n = m.dim();
    long nnz = 0;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i)
            if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n << " " << n << " " << nnz << "\n";
    char buf[64];
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) {
            const double v = m(i, j);
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
        }
}

void write_matrix_market(const std::string& path, const SymMatrix& m) {
    std::ofstream out(path);
    if (!out) throw MatrixMarketError("cannot open '" + path + "' for writing");
    write_matrix_market(out, m);
    if (!out) throw MatrixMarketError("write to '" + path + "' failed");
}

} // namespace steig
