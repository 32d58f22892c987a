#include "ferro/trajectory_io.hpp"

#include "ferro/config.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ferro {

namespace {

void put_u64(std::string& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const char* p)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::string header_value(std::string s)
{
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s.empty() ? "none" : s;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr std::string_view kMagic = "ferro-trajectory\n";
constexpr std::string_view kEnd = "end_header\n";

}  // namespace

void write_trajectory(const std::string& path, const TrajectoryRecord& rec, const TrajectoryHeader& h)
{
    const std::size_t n = rec.states.size();
    const std::size_t dim = n ? rec.states.front().y.size() : Layout::get(h.kmax).total;
    std::ostringstream hs;
    hs << kMagic << "schema_version = " << kTrajectorySchema << "\n"
       << "config_hash = " << hex64(h.config_hash) << "\n"
       << "layout_digest = " << hex64(layout_digest(h.kmax)) << "\n"
       << "seed = " << h.seed << "\n"
       << "member = " << h.member << "\n"
       << "kmax = " << h.kmax << "\n"
       << "dim = " << dim << "\n"
       << "snapshots = " << n << "\n"
       << "stopped_at = " << (rec.stopped_at ? csv_number(*rec.stopped_at) : std::string("none")) << "\n"
       << "failure = " << header_value(rec.failure) << "\n"
       << "layout = blocks a b c d e\n"
       << "body = index(f64 time, u64 offset) x snapshots, then f64 row-major snapshots x dim, little-endian\n"
       << kEnd;
    std::string out = hs.str();
    const std::size_t body0 = out.size() + n * 16;
    for (std::size_t j = 0; j < n; ++j) {
        put_u64(out, std::bit_cast<std::uint64_t>(rec.times[j]));
        put_u64(out, body0 + j * dim * 8);
    }
    for (const auto& s : rec.states) {
        if (s.y.size() != dim) throw std::invalid_argument("snapshot dimension mismatch");
        for (double v : s.y) put_u64(out, std::bit_cast<std::uint64_t>(v));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f.write(out.data(), std::streamsize(out.size()));
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::uint64_t TrajectoryFile::config_hash() const
{
    auto it = header.find("config_hash");
    if (it == header.end()) throw std::runtime_error("trajectory header lacks config_hash");
    return std::stoull(it->second, nullptr, 16);
}

TrajectoryFile read_trajectory(const std::string& path)
{
    const std::string data = read_file(path);
    if (data.compare(0, kMagic.size(), kMagic) != 0) throw std::runtime_error("'" + path + "' is not a trajectory");
    const std::size_t end = data.find(kEnd);
    if (end == std::string::npos) throw std::runtime_error("unterminated trajectory header in '" + path + "'");
    TrajectoryFile tf;
    std::istringstream hs(data.substr(kMagic.size(), end - kMagic.size()));
    std::string line;
    while (std::getline(hs, line)) {
        auto eq = line.find(" = ");
        if (eq == std::string::npos) throw std::runtime_error("malformed header line '" + line + "'");
        tf.header[line.substr(0, eq)] = line.substr(eq + 3);
    }
    auto get = [&](const char* k) {
        auto it = tf.header.find(k);
        if (it == tf.header.end()) throw std::runtime_error(std::string("trajectory header lacks ") + k);
        return it->second;
    };
    if (std::stoi(get("schema_version")) != kTrajectorySchema) throw std::runtime_error("unsupported schema version");
    const int kmax = std::stoi(get("kmax"));
    const std::size_t dim = std::stoull(get("dim"));
    const std::size_t n = std::stoull(get("snapshots"));
    if (std::stoull(get("layout_digest"), nullptr, 16) != layout_digest(kmax))
        throw std::runtime_error("basis ordering digest mismatch in '" + path + "'");
    if (dim != Layout::get(kmax).total) throw std::runtime_error("dimension does not match the layout");

    std::size_t pos = end + kEnd.size();
    if (data.size() != pos + n * 16 + n * dim * 8) throw std::runtime_error("truncated trajectory body");
    for (std::size_t j = 0; j < n; ++j) {
        tf.times.push_back(std::bit_cast<double>(get_u64(data.data() + pos + 16 * j)));
        std::size_t off = get_u64(data.data() + pos + 16 * j + 8);
        if (off + dim * 8 > data.size()) throw std::runtime_error("index offset out of range");
        GalerkinState s(kmax);
        for (std::size_t i = 0; i < dim; ++i) s.y[i] = std::bit_cast<double>(get_u64(data.data() + off + 8 * i));
        tf.states.push_back(std::move(s));
    }
    return tf;
}

std::string csv_quote(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
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
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << csv_quote(r[i]);
        f << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

std::string csv_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> ledger_header()
{
    std::vector<std::string> h{"step", "t"};
    for (auto n : kLedgerNames) h.emplace_back(n);
    return h;
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger)
{
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ledger.size());
    for (const auto& r : ledger) {
        std::vector<std::string> row{std::to_string(r.step), csv_number(r.t)};
        for (double v : r.v) row.push_back(csv_number(v));
        rows.push_back(std::move(row));
    }
    write_csv(path, ledger_header(), rows);
}

EnergyLedger read_ledger_csv(const std::string& path)
{
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty ledger file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (csv_split(line) != ledger_header()) throw std::runtime_error("unexpected ledger header");
    EnergyLedger out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = csv_split(line);
        if (f.size() != std::size_t(kLedgerWidth) + 2) throw std::runtime_error("ledger row has wrong width");
        LedgerRow r;
        r.step = std::stoull(f[0]);
        r.t = std::strtod(f[1].c_str(), nullptr);
        for (int i = 0; i < kLedgerWidth; ++i) r.v[i] = std::strtod(f[2 + i].c_str(), nullptr);
        out.push_back(r);
    }
    return out;
}

}  // namespace ferro
