#include "rholab/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rholab {

namespace {

constexpr const char* kMagic = "RSF1";
constexpr const char* kPayload = "payload float64 little-endian row-major";

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string next_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(std::string("truncated header: missing ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

template <class T>
std::vector<T> parse_keyed(const std::string& line, const std::string& key, std::size_t expected) {
    std::istringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) throw std::runtime_error("expected header key '" + key + "', got '" + k + "'");
    std::vector<T> out;
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            if constexpr (std::is_same_v<T, double>) {
                out.push_back(std::stod(tok, &used));
            } else {
                out.push_back(static_cast<T>(std::stoll(tok, &used)));
            }
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed value in '" + key + "' header: " + tok);
        }
    }
    if (expected != 0 && out.size() != expected)
        throw std::runtime_error("dimension mismatch in '" + key + "' header");
    return out;
}

void put_le(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffU);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

}  // namespace

void write_field(std::ostream& out, const GridField& field) {
    out << kMagic << '\n' << "dim " << field.dim() << '\n' << "counts";
    for (auto c : field.counts()) out << ' ' << c;
    out << '\n' << "origin";
    for (double o : field.origin()) out << ' ' << format_double(o);
    out << '\n' << "spacing";
    for (double h : field.spacing()) out << ' ' << format_double(h);
    out << '\n' << "kind " << to_string(field.kind()) << '\n' << kPayload << '\n' << '\n';
    for (double v : field.values()) put_le(out, v);
    if (!out) throw std::runtime_error("failed to write field");
}

GridField read_field(std::istream& in) {
    if (next_line(in, "magic") != kMagic) throw std::runtime_error("bad magic: not an RSF1 file");
    const auto dim = parse_keyed<std::int64_t>(next_line(in, "dim"), "dim", 1);
    if (dim[0] < 1) throw std::runtime_error("dim must be >= 1");
    const auto d = static_cast<std::size_t>(dim[0]);
    auto counts = parse_keyed<std::int64_t>(next_line(in, "counts"), "counts", d);
    auto origin = parse_keyed<double>(next_line(in, "origin"), "origin", d);
    auto spacing = parse_keyed<double>(next_line(in, "spacing"), "spacing", d);
    std::istringstream kind_line(next_line(in, "kind"));
    std::string key, tag;
    kind_line >> key >> tag;
    if (key != "kind") throw std::runtime_error("expected header key 'kind'");
    const FieldKind kind = parse_field_kind(tag);
    if (next_line(in, "payload") != kPayload) throw std::runtime_error("unsupported payload description");
    if (!next_line(in, "blank line").empty()) throw std::runtime_error("header must end with a blank line");

    std::size_t total = 1;
    for (auto c : counts) {
        if (c <= 0) throw std::runtime_error("counts must be positive");
        total *= static_cast<std::size_t>(c);
    }
    std::vector<double> values(total);
    for (std::size_t i = 0; i < total; ++i) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("payload shorter than counts imply");
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
        values[i] = std::bit_cast<double>(bits);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("payload longer than counts imply");
    return GridField(std::move(counts), std::move(origin), std::move(spacing), std::move(values), kind);
}

void write_field(const std::filesystem::path& path, const GridField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    write_field(out, field);
}

GridField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    return read_field(in);
}

GridField read_csv_field(std::istream& in) {
    std::string header = next_line(in, "csv header");
    const std::string tag = "# rsf-csv";
    if (header.rfind(tag, 0) != 0) throw std::runtime_error("bad magic: missing '# rsf-csv' header");
    std::istringstream ss(header.substr(tag.size()));
    std::string tok;
    std::size_t d = 0;
    std::vector<std::int64_t> counts;
    std::vector<double> origin, spacing;
    FieldKind kind = FieldKind::function;
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        std::istringstream ps(s);
        while (std::getline(ps, cur, ',')) parts.push_back(cur);
        return parts;
    };
    auto to_double = [](const std::string& s) {
        try {
            return std::stod(s);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed csv header number: " + s);
        }
    };
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed csv header token: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "dim") {
            d = static_cast<std::size_t>(to_double(val));
        } else if (key == "counts") {
            for (auto& p : split(val)) counts.push_back(static_cast<std::int64_t>(to_double(p)));
        } else if (key == "origin") {
            for (auto& p : split(val)) origin.push_back(to_double(p));
        } else if (key == "spacing") {
            for (auto& p : split(val)) spacing.push_back(to_double(p));
        } else if (key == "kind") {
            kind = parse_field_kind(val);
        } else {
            throw std::runtime_error("unknown csv header key: " + key);
        }
    }
    if (d == 0 || counts.size() != d) throw std::runtime_error("dimension mismatch in csv header");
    if (origin.empty()) origin.assign(d, 0.0);
    if (spacing.empty()) spacing.assign(d, 1.0);
    if (origin.size() != d || spacing.size() != d) throw std::runtime_error("dimension mismatch in csv header");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(line, &used));
            while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) ++used;
            if (used != line.size()) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed csv value: " + line);
        }
    }
    std::size_t total = 1;
    for (auto c : counts) total *= static_cast<std::size_t>(std::max<std::int64_t>(c, 0));
    if (values.size() != total) throw std::runtime_error("csv value count does not match counts");
    return GridField(std::move(counts), std::move(origin), std::move(spacing), std::move(values), kind);
}

GridField read_csv_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    return read_csv_field(in);
}

void write_csv_field(std::ostream& out, const GridField& field) {
    auto join = [](const auto& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, double>) {
                s += format_double(v[i]);
            } else {
                s += std::to_string(v[i]);
            }
        }
        return s;
    };
    out << "# rsf-csv dim=" << field.dim() << " counts=" << join(field.counts()) << " origin=" << join(field.origin())
        << " spacing=" << join(field.spacing()) << " kind=" << to_string(field.kind()) << '\n';
    for (double v : field.values()) out << format_double(v) << '\n';
}

GridField load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    char head[9] = {};
    in.read(head, 9);
    in.clear();
    in.seekg(0);
    if (std::strncmp(head, "# rsf-csv", 9) == 0) return read_csv_field(in);
    return read_field(in);
}

}  // namespace rholab
