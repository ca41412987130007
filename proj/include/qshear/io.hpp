#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qst.hpp"

namespace qshear::io {

using json = nlohmann::json;

inline constexpr char qshc_magic[4] = {'Q', 'S', 'H', 'C'};
inline constexpr std::uint32_t qshc_version = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(char((v >> (8 * b)) & 0xff));
}

inline void put_f64(std::string& out, double d) {
    auto v = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(char((v >> (8 * b)) & 0xff));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    bool has(std::size_t n) const { return pos + n <= buf.size(); }

    std::uint64_t take(int bytes, const char* what) {
        if (!has(std::size_t(bytes))) throw Error(what);
        std::uint64_t v = 0;
        for (int b = 0; b < bytes; ++b) v |= std::uint64_t(static_cast<unsigned char>(buf[pos++])) << (8 * b);
        return v;
    }
    std::uint32_t u32(const char* what) { return std::uint32_t(take(4, what)); }
    double f64(const char* what) { return std::bit_cast<double>(take(8, what)); }
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace detail

/// QSHC layout, little-endian: magic, version, N1, N2, M, L (u32); M scales, L shears, M*L weights (f64);
/// coefficients as 4 f64 per quaternion in (m, l, n1, n2) row-major order.
inline std::string encode_qshc(const CoefficientVolume& V) {
    std::string out(qshc_magic, 4);
    detail::put_u32(out, qshc_version);
    for (std::size_t v : {V.n1, V.n2, V.grid.M(), V.grid.L()}) detail::put_u32(out, std::uint32_t(v));
    for (double a : V.grid.scales) detail::put_f64(out, a);
    for (double s : V.grid.shears) detail::put_f64(out, s);
    for (double w : V.grid.w) detail::put_f64(out, w);
    for (const auto& h : V.data)
        for (double c : {h.a0, h.a1, h.a2, h.a3}) detail::put_f64(out, c);
    return out;
}

inline CoefficientVolume decode_qshc(const std::string& buf) {
    detail::Reader r{buf};
    if (!r.has(4) || buf.compare(0, 4, qshc_magic, 4) != 0) throw Error("not a QSHC file (bad magic)");
    r.pos = 4;
    const char* hdr = "unexpected end of QSHC header";
    std::uint32_t version = r.u32(hdr);
    if (version != qshc_version) throw Error("unsupported QSHC version " + std::to_string(version));
    std::uint32_t n1 = r.u32(hdr), n2 = r.u32(hdr), M = r.u32(hdr), L = r.u32(hdr);
    if (n1 < 2 || n2 < 2 || n1 % 2 || n2 % 2 || M == 0 || L == 0)
        throw Error("invalid QSHC shape " + std::to_string(n1) + "x" + std::to_string(n2) + " M=" +
                    std::to_string(M) + " L=" + std::to_string(L));
    std::vector<double> scales(M), shears(L), w(std::size_t(M) * L);
    for (auto& a : scales) a = r.f64(hdr);
    for (auto& s : shears) s = r.f64(hdr);
    for (auto& x : w) x = r.f64(hdr);
    CoefficientVolume V(SamplingGrid::from_nodes(scales, shears, w), n1, n2);
    const char* body = "unexpected end of coefficient stream";
    if (!r.has(V.data.size() * 32)) throw Error(body);
    for (auto& h : V.data) {
        h.a0 = r.f64(body);
        h.a1 = r.f64(body);
        h.a2 = r.f64(body);
        h.a3 = r.f64(body);
    }
    if (r.pos != buf.size()) throw Error("trailing bytes after coefficient stream");
    return V;
}

inline void write_qshc(const std::string& path, const CoefficientVolume& V) {
    detail::spit(path, encode_qshc(V));
}

inline CoefficientVolume read_qshc(const std::string& path) {
    return decode_qshc(detail::slurp(path));
}

// ---- fields ----

inline std::vector<std::vector<double>> parse_csv_rows(const std::string& text, std::vector<std::size_t>* breaks) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool blank_pending = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            blank_pending = true;
            continue;
        }
        if (blank_pending && !rows.empty() && breaks) breaks->push_back(rows.size());
        blank_pending = false;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error("CSV: cannot parse value '" + cell + "' on data row " + std::to_string(rows.size() + 1));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error("CSV: ragged row " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error("CSV: no data");
    return rows;
}

/// Real grid mapped to the scalar part.
inline QField read_csv(const std::string& path) {
    auto rows = parse_csv_rows(detail::slurp(path), nullptr);
    QField F(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < F.n1(); ++i)
        for (std::size_t j = 0; j < F.n2(); ++j) F(i, j) = Quaternion(rows[i][j]);
    return F;
}

/// Four blank-line separated planes a0, a1, a2, a3.
inline QField read_csv4(const std::string& path) {
    std::vector<std::size_t> breaks;
    auto rows = parse_csv_rows(detail::slurp(path), &breaks);
    if (breaks.size() != 3 || rows.size() % 4 != 0)
        throw Error("4-plane CSV: expected four equally sized blocks separated by blank lines");
    std::size_t n1 = rows.size() / 4;
    for (std::size_t b = 0; b < 3; ++b)
        if (breaks[b] != (b + 1) * n1) throw Error("4-plane CSV: planes differ in height");
    QField F(n1, rows.front().size());
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < F.n2(); ++j)
            F(i, j) = {rows[i][j], rows[n1 + i][j], rows[2 * n1 + i][j], rows[3 * n1 + i][j]};
    return F;
}

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv4(const std::string& path, const QField& F) {
    std::string out;
    for (int plane = 0; plane < 4; ++plane) {
        if (plane) out += '\n';
        for (std::size_t i = 0; i < F.n1(); ++i) {
            for (std::size_t j = 0; j < F.n2(); ++j) {
                const auto& h = F(i, j);
                double v = plane == 0 ? h.a0 : plane == 1 ? h.a1 : plane == 2 ? h.a2 : h.a3;
                if (j) out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    detail::spit(path, out);
}

inline void write_csv(const std::string& path, const QField& F) {
    std::string out;
    for (std::size_t i = 0; i < F.n1(); ++i) {
        for (std::size_t j = 0; j < F.n2(); ++j) {
            if (j) out += ',';
            out += format_double(F(i, j).a0);
        }
        out += '\n';
    }
    detail::spit(path, out);
}

/// Binary PGM (P5, maxval 255), scaled to [0, 1] in the scalar part.
inline QField read_pgm(const std::string& path) {
    std::string buf = detail::slurp(path);
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < buf.size()) {
            if (buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
        if (start == pos) throw Error("PGM: truncated header");
        return buf.substr(start, pos - start);
    };
    if (token() != "P5") throw Error("PGM: expected binary P5 format");
    std::size_t w = 0, h = 0, maxval = 0;
    try {
        w = std::stoul(token());
        h = std::stoul(token());
        maxval = std::stoul(token());
    } catch (const std::invalid_argument&) {
        throw Error("PGM: malformed header");
    }
    if (maxval != 255) throw Error("PGM: maxval must be 255, got " + std::to_string(maxval));
    ++pos;
    if (buf.size() < pos + w * h) throw Error("PGM: truncated pixel data");
    QField F(h, w);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            F(i, j) = Quaternion(static_cast<unsigned char>(buf[pos + i * w + j]) / 255.0);
    return F;
}

inline void write_pgm(const std::string& path, const Grid2<unsigned char>& img) {
    std::string out = "P5\n" + std::to_string(img.n2()) + " " + std::to_string(img.n1()) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data().data()), img.size());
    detail::spit(path, out);
}

inline QField read_field(const std::string& path, const std::string& format) {
    if (format == "csv") return read_csv(path);
    if (format == "csv4") return read_csv4(path);
    if (format == "pgm") return read_pgm(path);
    throw Error("unknown input format '" + format + "' (expected csv, csv4 or pgm)");
}

// ---- JSON ----

namespace detail {

inline void dump(const json& j, std::string& out, int indent) {
    std::string pad(std::size_t(indent) * 2, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + "  " + json(it.key()).dump() + ": ";
            dump(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) out += ",\n";
            out += pad + "  ";
            dump(j[k], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case json::value_t::number_float: {
        double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// Deterministic JSON: sorted keys, two-space indent, floats with 17 significant digits.
inline std::string dump_json(const json& j) {
    std::string out;
    detail::dump(j, out, 0);
    out += '\n';
    return out;
}

inline void write_json(const std::string& path, const json& j) {
    detail::spit(path, dump_json(j));
}

inline json read_json(const std::string& path) {
    std::string text = detail::slurp(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("invalid JSON in '" + path + "': " + e.what());
    }
}

} // namespace qshear::io
