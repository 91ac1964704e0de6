#include "rsde/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsde {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

double parse_double(std::string_view tok, const std::string& where) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw IoError("malformed CSV: bad number '" + std::string(tok) + "' in " + where);
    }
    return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::ofstream open_out(const std::string& file) {
    std::ofstream os(file, std::ios::binary); // binary: byte-stable newlines
    if (!os) throw IoError("cannot open '" + file + "' for writing");
    return os;
}

} // namespace

void write_path_csv(const std::string& file, const SampledPath& p) {
    std::ofstream os = open_out(file);
    os << "t";
    for (int i = 1; i <= p.dim(); ++i) os << ",v" << i;
    os << "\n";
    for (std::int64_t k = 0; k < p.n_nodes(); ++k) {
        os << format_double(p.grid().node_time(k));
        for (double v : p.node(k)) os << "," << format_double(v);
        os << "\n";
    }
    if (!os) throw IoError("write failed for '" + file + "'");
}

SampledPath read_path_csv(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IoError("cannot open '" + file + "'");
    std::string line;
    if (!std::getline(is, line)) throw IoError("malformed CSV: empty file '" + file + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t") {
        throw IoError("malformed CSV: expected header t,v1,... in '" + file + "'");
    }
    const int dim = static_cast<int>(header.size()) - 1;
    std::vector<double> times;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto toks = split_csv_line(line);
        if (static_cast<int>(toks.size()) != dim + 1) {
            throw IoError("malformed CSV: wrong column count at data row " + std::to_string(row) +
                          " in '" + file + "'");
        }
        times.push_back(parse_double(toks[0], file));
        for (int i = 0; i < dim; ++i) values.push_back(parse_double(toks[1 + i], file));
        ++row;
    }
    if (times.size() < 2) throw IoError("malformed CSV: need at least two nodes in '" + file + "'");
    const auto n = static_cast<std::int64_t>(times.size()) - 1;
    const double T = times.back();
    if (!(T > 0.0) || times.front() != 0.0) {
        throw IoError("malformed CSV: node times must run from 0 to T > 0 in '" + file + "'");
    }
    TimeGrid grid(T, n);
    for (std::int64_t k = 0; k <= n; ++k) {
        if (std::abs(times[k] - grid.node_time(k)) > 1e-9 * std::max(1.0, T)) {
            throw IoError("malformed CSV: nonuniform node times in '" + file + "'");
        }
    }
    return SampledPath(grid, dim, std::move(values));
}

void write_reflected_csv(const std::string& file, const ReflectedPair& rp) {
    std::ofstream os = open_out(file);
    const int d = rp.x.dim();
    os << "t";
    for (int i = 1; i <= d; ++i) os << ",x" << i;
    for (int i = 1; i <= d; ++i) os << ",k" << i;
    os << ",ktv\n";
    for (std::int64_t j = 0; j < rp.x.n_nodes(); ++j) {
        os << format_double(rp.x.grid().node_time(j));
        for (double v : rp.x.node(j)) os << "," << format_double(v);
        for (double v : rp.k.node(j)) os << "," << format_double(v);
        os << "," << format_double(rp.k_tv[j]) << "\n";
    }
    if (!os) throw IoError("write failed for '" + file + "'");
}

void write_coupled_csv(const std::string& file, const ReflectedSolution& ito,
                       const ReflectedSolution& driven) {
    std::ofstream os = open_out(file);
    const int d = ito.x.dim();
    os << "t";
    for (int i = 1; i <= d; ++i) os << ",x" << i;
    for (int i = 1; i <= d; ++i) os << ",k" << i;
    for (int i = 1; i <= d; ++i) os << ",xdelta" << i;
    for (int i = 1; i <= d; ++i) os << ",kdelta" << i;
    os << "\n";
    for (std::int64_t j = 0; j < ito.x.n_nodes(); ++j) {
        os << format_double(ito.x.grid().node_time(j));
        for (double v : ito.x.node(j)) os << "," << format_double(v);
        for (double v : ito.k.node(j)) os << "," << format_double(v);
        for (double v : driven.x.node(j)) os << "," << format_double(v);
        for (double v : driven.k.node(j)) os << "," << format_double(v);
        os << "\n";
    }
    if (!os) throw IoError("write failed for '" + file + "'");
}

void write_report_csv(const std::string& file, const ConvergenceReport& report) {
    std::ofstream os = open_out(file);
    os << "delta,n_delta,p,error,stderr,n_paths\n";
    for (const auto& row : report.rows) {
        os << format_double(row.delta) << "," << row.n_delta << "," << format_double(row.p) << ","
           << format_double(row.error) << "," << format_double(row.stderr_) << "," << row.n_paths
           << "\n";
    }
    if (!os) throw IoError("write failed for '" + file + "'");
}

} // namespace rsde
