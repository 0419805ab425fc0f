#ifndef SQZ_CSV_HPP
#define SQZ_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sqz {

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

/// Whole file as bytes; throws InputError when unreadable.
std::string read_file(const std::string& path);

/// Shortest round-trip decimal form (%.17g); '.' decimal point regardless
/// of locale, so CSV bodies are byte-stable across environments.
std::string format_double(double v);

std::string csv_join(const std::vector<double>& row);

/// Writes run outputs into one directory, every file stamped with the
/// provenance line "# tool=<t> version=<v> spec_sha256=<h> seed=<s>".
/// Identical spec + seed reruns produce byte-identical bodies.
struct ArtifactWriter {
    std::string dir;
    std::string tool;
    std::string version;
    std::string spec_hash;
    std::uint64_t seed = 0;

    std::string stamp() const;
    std::string path_of(const std::string& name) const;
    /// header is the comma-joined column-name row (no newline).
    void write_csv(const std::string& name, const std::string& header,
                   const std::vector<std::vector<double>>& rows) const;
    /// Raw body with the provenance line prepended (JSON sidecars embed the
    /// stamp as fields instead; pass stamped = false to skip the line).
    void write_text(const std::string& name, const std::string& body,
                    bool stamped = true) const;
};

}  // namespace sqz

#endif
