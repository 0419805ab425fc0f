#include "sqz/csv.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                   nullptr) != 1)
        throw InternalConsistencyError("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // defensive against comma-decimal locales
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

std::string csv_join(const std::vector<double>& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += format_double(row[i]);
    }
    return out;
}

std::string ArtifactWriter::stamp() const {
    return "# tool=" + tool + " version=" + version + " spec_sha256=" +
           spec_hash + " seed=" + std::to_string(seed) + "\n";
}

std::string ArtifactWriter::path_of(const std::string& name) const {
    return (std::filesystem::path(dir) / name).string();
}

void ArtifactWriter::write_csv(const std::string& name,
                               const std::string& header,
                               const std::vector<std::vector<double>>& rows)
    const {
    std::string body = stamp() + header + "\n";
    for (const auto& row : rows) {
        body += csv_join(row);
        body.push_back('\n');
    }
    write_text(name, body, false);
}

void ArtifactWriter::write_text(const std::string& name,
                                const std::string& body, bool stamped) const {
    std::filesystem::create_directories(dir);
    const std::string path = path_of(name);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path);
    if (stamped) out << stamp();
    out << body;
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace sqz
