#include "nsdecay/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace nsd {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

void put_u32(std::ofstream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

uint32_t get_u32(std::ifstream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}

void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}

double get_f64(std::ifstream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

}  // namespace

void ensure_dir(const std::filesystem::path& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_snapshot(const std::filesystem::path& path, const GridField& f, double time) {
    GridField tmp = f;
    tmp.ensure_phys();
    ensure_dir(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw validation_error("write_snapshot: cannot open " + path.string());
    os.write("NSDF", 4);
    put_u32(os, 1);
    put_u32(os, uint32_t(f.g.n));
    put_u32(os, uint32_t(f.ncomp));
    for (int a = 0; a < f.g.n; ++a) put_u32(os, uint32_t(f.g.dims[a]));
    put_f64(os, f.g.L);
    put_f64(os, time);
    for (int c = 0; c < f.ncomp; ++c)
        os.write(reinterpret_cast<const char*>(tmp.phys[c].data()),
                 std::streamsize(tmp.phys[c].size() * sizeof(double)));
    if (!os) throw validation_error("write_snapshot: short write to " + path.string());
}

GridField read_snapshot(const std::filesystem::path& path, double* time) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("read_snapshot: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NSDF", 4) != 0)
        throw validation_error("read_snapshot: bad magic in " + path.string());
    const uint32_t version = get_u32(is);
    if (version != 1)
        throw validation_error("read_snapshot: unsupported version in " + path.string());
    const uint32_t n = get_u32(is);
    const uint32_t ncomp = get_u32(is);
    if (n < 1 || n > 3 || ncomp < 1 || ncomp > 16)
        throw validation_error("read_snapshot: implausible header in " + path.string());
    std::vector<int> dims(n);
    for (uint32_t a = 0; a < n; ++a) dims[a] = int(get_u32(is));
    const double L = get_f64(is);
    const double t = get_f64(is);
    if (!is) throw validation_error("read_snapshot: truncated header in " + path.string());
    GridSpec g(int(n), dims, L);
    GridField f(g, int(ncomp));
    f.phys.resize(ncomp);
    for (uint32_t c = 0; c < ncomp; ++c) {
        f.phys[c].resize(g.size());
        is.read(reinterpret_cast<char*>(f.phys[c].data()),
                std::streamsize(g.size() * sizeof(double)));
        if (!is) throw validation_error("read_snapshot: truncated data in " + path.string());
    }
    f.has_phys = true;
    if (time) *time = t;
    return f;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    ensure_dir(path.parent_path());
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw validation_error("write_csv: cannot open " + path.string());
    for (size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "\n");
    char buf[40];
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw validation_error("write_csv: row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << buf << (i + 1 < row.size() ? "," : "\n");
        }
    }
}

void write_csv_labeled(const std::filesystem::path& path, const std::string& label_header,
                       const std::vector<std::string>& header,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& rows) {
    if (labels.size() != rows.size())
        throw validation_error("write_csv_labeled: label count does not match rows");
    ensure_dir(path.parent_path());
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw validation_error("write_csv_labeled: cannot open " + path.string());
    os << label_header;
    for (const auto& h : header) os << "," << h;
    os << "\n";
    char buf[40];
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw validation_error("write_csv_labeled: row width does not match header");
        os << labels[r];
        for (double v : rows[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace nsd
