#ifndef SQZ_PIPELINE_HPP
#define SQZ_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sqz/csv.hpp"
#include "sqz/raman.hpp"
#include "sqz/trap.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// (r, phi, epsilon) triple as it appears in protocol spec files.
struct StateTriple {
    double r = 0.0;
    double phi = 0.0;
    double epsilon = 1.0;
};

enum class Scheme { trap_closed, trap_open, raman_closed, raman_open, jc_open };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);

/// Parsed protocol spec. The reference frequency omega_0 = 1 sets the time
/// unit; trap endpoints are encoded through r (omega_f = e^{2 r_f}) and
/// epsilon (= hbar omega beta at each end).
struct ProtocolSpec {
    Scheme scheme = Scheme::trap_closed;
    StateTriple initial;
    StateTriple target;
    double tf = 1.0;
    int grid_points = 2000;
    int fock_dim = 0;  // 0 = resolve by the dimension default rule
    std::uint64_t seed = 0;
    UnitSystem units;
    /// Acknowledges deviating from the raman-closed phase constraint
    /// target.phi = wrap(-2 omega0 tf).
    bool phase_override = false;

    static ProtocolSpec from_json_text(const std::string& text);
    void validate() const;

    /// fock_dim when set; otherwise 100 inside the Fock envelope
    /// (r <= 1.5, epsilon >= 0.5 at both ends) and 0 meaning the run is
    /// Gaussian-only.
    int effective_fock_dim() const;
    bool gaussian_only() const { return effective_fock_dim() == 0; }
};

// --- protocol builders ------------------------------------------------------

TrapProtocol build_trap(const ProtocolSpec& spec);
RamanClosedProtocol build_raman_closed(const ProtocolSpec& spec);
RamanOpenProtocol build_raman_open(const ProtocolSpec& spec);

// --- ingested control tables ------------------------------------------------

/// Columns of a controls CSV; rows must be time-sorted. Lookup is linear
/// interpolation, so verification sees exactly what the file says, not the
/// designing protocol object.
struct ControlTable {
    std::vector<std::string> names;
    std::vector<RealVec> cols;

    static ControlTable read_csv(const std::string& path);
    int column(const std::string& name) const;  // -1 when absent
    double interp(int col, double t) const;
    double t_min() const;
    double t_max() const;
};

// --- drivers ----------------------------------------------------------------

struct DesignArtifacts {
    std::vector<std::string> files;
    bool non_lindblad = false;
    bool inverted_trap = false;
    double max_condition = 0.0;
};

/// Writes controls.csv + design.json.
DesignArtifacts run_design(const ProtocolSpec& spec, const ArtifactWriter& w);

struct VerifyReport {
    bool pass = false;
    bool gaussian_only = false;
    double final_fidelity = 0.0;
    double fidelity_min = 0.0;
    double entropy_final = 0.0;
    double entropy_target = 0.0;
    double entropy_tol = 0.0;
    /// Relative gap between the Fock and Gaussian oracle variances at tf.
    double oracle_var_gap = 0.0;
    double oracle_var_tol = 0.0;
    /// Gaussian-only runs: achieved vs designed variance ratio.
    double var_ratio_error = 0.0;
    std::string failure_reason;
};

/// Simulates the ingested controls against the spec's target with the Fock
/// and Gaussian oracles, writes trajectory.csv + verify.json.
VerifyReport run_verify(const ProtocolSpec& spec, const ControlTable& table,
                        const ArtifactWriter& w);

/// dB map rows (omega_ratio, beta_ratio, delta_db, isentropic_beta_ratio).
void run_variance_map(int points, double lo, double hi,
                      const ArtifactWriter& w);

/// Wigner grids from the simulated state and the Gaussian parametrization
/// at the requested times (within [0, tf]); grids in CSV, discrepancy and
/// normalization in wigner.json.
void run_wigner(const ProtocolSpec& spec, const std::vector<double>& times,
                int points, const ArtifactWriter& w);

struct IonSweepRow {
    double Delta = 0.0;
    double fidelity = 0.0;
    double max_excited = 0.0;
};

/// Full two-level ion model vs the eliminated effective drive across
/// detunings, for a quintic closed squeezing ramp 0 -> r_f.
std::vector<IonSweepRow> run_ion_check(const std::vector<double>& Deltas,
                                       double r_f, double tf, int fock_dim,
                                       const ArtifactWriter& w);

}  // namespace sqz

#endif
