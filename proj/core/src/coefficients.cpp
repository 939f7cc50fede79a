#include "sfd/coefficients.hpp"

#include <bit>
#include <cstring>
#include <sstream>
#include <string>

#include "sfd/error.hpp"
#include "text_io.hpp"

namespace sfd {

CoefficientSet::CoefficientSet(int L, double time) : L_(L), time_(time) {
    if (L < 0) throw DomainError("CoefficientSet: degree must be non-negative");
    values_.assign(sizeFor(L), value_type{});
}

CoefficientSet::value_type CoefficientSet::at(int ell, int m) const {
    if (ell < 0 || ell > L_ || m > ell || m < -ell)
        throw DomainError("CoefficientSet: index (" + std::to_string(ell) + "," + std::to_string(m) +
                          ") outside degree " + std::to_string(L_));
    if (m >= 0) return values_[index(ell, m)];
    const value_type v = std::conj(values_[index(ell, -m)]);
    return (-m) % 2 == 0 ? v : -v;
}

double CoefficientSet::degreeEnergy(int ell) const {
    const value_type* row = values_.data() + index(ell, 0);
    double e = std::norm(row[0]);
    double rest = 0.0;
    for (int m = 1; m <= ell; ++m) rest += std::norm(row[m]);
    return e + 2.0 * rest;
}

CoefficientSet& CoefficientSet::operator+=(const CoefficientSet& other) {
    if (other.L_ != L_) throw DomainError("CoefficientSet: degree mismatch in +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

CoefficientSet& CoefficientSet::operator-=(const CoefficientSet& other) {
    if (other.L_ != L_) throw DomainError("CoefficientSet: degree mismatch in -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

CoefficientSet& CoefficientSet::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

void writeCoefficientsCsv(const CoefficientSet& set, const std::filesystem::path& path) {
    std::string out = "ell,m,re,im\n";
    for (int ell = 0; ell <= set.degree(); ++ell) {
        for (int m = 0; m <= ell; ++m) {
            const auto v = set(ell, m);
            out += std::to_string(ell) + ',' + std::to_string(m) + ',' + io::formatDouble(v.real()) + ',' +
                   io::formatDouble(v.imag()) + '\n';
        }
    }
    io::writeFileAtomically(path, out);
}

CoefficientSet readCoefficientsCsv(const std::filesystem::path& path) {
    const std::string text = io::readFile(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("ell,m,re,im", 0) != 0)
        throw InputError("'" + path.string() + "': missing header ell,m,re,im");

    struct Row {
        int ell, m;
        double re, im;
    };
    std::vector<Row> rows;
    int L = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::string_view sv(line);
        std::string_view fields[4];
        for (int i = 0; i < 4; ++i) {
            const auto comma = sv.find(',');
            if (i < 3 && comma == std::string_view::npos)
                throw InputError("'" + path.string() + "': malformed row '" + line + "'");
            fields[i] = sv.substr(0, comma);
            sv = comma == std::string_view::npos ? std::string_view{} : sv.substr(comma + 1);
        }
        Row r{static_cast<int>(io::parseInteger(fields[0])), static_cast<int>(io::parseInteger(fields[1])),
              io::parseDouble(fields[2]), io::parseDouble(fields[3])};
        if (r.ell < 0 || r.m < 0 || r.m > r.ell)
            throw InputError("'" + path.string() + "': invalid index in row '" + line + "'");
        L = std::max(L, r.ell);
        rows.push_back(r);
    }
    if (L < 0) throw InputError("'" + path.string() + "': no coefficient rows");
    CoefficientSet set(L);
    for (const Row& r : rows) set(r.ell, r.m) = {r.re, r.im};
    return set;
}

namespace {

constexpr char kMagic[4] = {'S', 'F', 'D', 'C'};
constexpr std::uint32_t kBinaryVersion = 1;

template <typename T>
void appendLittleEndian(std::string& out, T value) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T readLittleEndian(const std::string& in, std::size_t& pos, const std::filesystem::path& path) {
    if (pos + sizeof(T) > in.size()) throw InputError("'" + path.string() + "': truncated coefficient file");
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    pos += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void writeCoefficientsBinary(const CoefficientSet& set, const std::filesystem::path& path) {
    std::string out(kMagic, 4);
    appendLittleEndian<std::uint32_t>(out, kBinaryVersion);
    appendLittleEndian<std::uint32_t>(out, static_cast<std::uint32_t>(set.degree()));
    for (const auto& v : set.values()) {
        appendLittleEndian<double>(out, v.real());
        appendLittleEndian<double>(out, v.imag());
    }
    io::writeFileAtomically(path, out);
}

CoefficientSet readCoefficientsBinary(const std::filesystem::path& path) {
    const std::string in = io::readFile(path);
    if (in.size() < 12 || std::memcmp(in.data(), kMagic, 4) != 0)
        throw InputError("'" + path.string() + "': not an SFDC coefficient file");
    std::size_t pos = 4;
    const auto version = readLittleEndian<std::uint32_t>(in, pos, path);
    if (version != kBinaryVersion)
        throw InputError("'" + path.string() + "': unsupported SFDC version " + std::to_string(version));
    const auto L = readLittleEndian<std::uint32_t>(in, pos, path);
    CoefficientSet set(static_cast<int>(L));
    for (auto& v : set.values()) {
        const double re = readLittleEndian<double>(in, pos, path);
        const double im = readLittleEndian<double>(in, pos, path);
        v = {re, im};
    }
    if (pos != in.size()) throw InputError("'" + path.string() + "': trailing bytes after coefficients");
    return set;
}

}  // namespace sfd
