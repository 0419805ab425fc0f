#include "sqz/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sqz/errors.hpp"
#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/ion.hpp"
#include "sqz/master.hpp"
#include "sqz/wigner.hpp"

namespace sqz {

namespace {

using nlohmann::json;

// Reference frequency fixing the time unit. Endpoint frequencies are encoded
// through r (omega_f = e^{2 r_f}), so the spec format has no frequency field.
constexpr double kOmega0 = 1.0;

constexpr double kTrapFidelityMin = 0.999;
constexpr double kRamanFidelityMin = 0.995;
constexpr double kEntropyTol = 5e-3;
constexpr double kOracleVarTol = 1e-3;
constexpr double kVarRatioTol = 1e-4;
constexpr double kTraceDriftError = 1e-6;

json stamp_json(const ArtifactWriter& w) {
    json j;
    j["tool"] = w.tool;
    j["version"] = w.version;
    j["spec_sha256"] = w.spec_hash;
    j["seed"] = w.seed;
    return j;
}

void write_json(const ArtifactWriter& w, const std::string& name, json body) {
    const json s = stamp_json(w);
    for (auto it = s.begin(); it != s.end(); ++it) body[it.key()] = it.value();
    w.write_text(name, body.dump(2) + "\n", false);
}

StateTriple parse_triple(const json& j, const std::string& which) {
    if (!j.is_object())
        throw InputError("'" + which + "' must be an object with r, phi, epsilon");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "r" && it.key() != "phi" && it.key() != "epsilon")
            throw InputError("unknown key '" + it.key() + "' in '" + which + "'");
    if (!j.contains("epsilon"))
        throw InputError("'" + which + "' needs the thermal exponent 'epsilon'");
    StateTriple s;
    s.epsilon = j.at("epsilon").get<double>();
    s.r = j.value("r", 0.0);
    s.phi = j.value("phi", 0.0);
    return s;
}

bool is_trap(Scheme s) {
    return s == Scheme::trap_closed || s == Scheme::trap_open;
}

double rel_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

/// Target in the frame the simulation runs in: lab for the trap, rotated for
/// the drives. The closed drive's lab phase -2 omega0 tf is unwound by the
/// frame, so its rotated-frame target sits on the phi = 0 branch.
SqueezedThermalParams verify_target(const ProtocolSpec& spec) {
    double phi = spec.target.phi;
    if (is_trap(spec.scheme) || spec.scheme == Scheme::raman_closed) phi = 0.0;
    return SqueezedThermalParams::make(spec.target.r, phi, spec.target.epsilon);
}

std::vector<std::vector<double>> flatten_grid(const WignerGrid& g) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(g.xs.size()) * g.ps.size());
    for (Eigen::Index i = 0; i < g.xs.size(); ++i)
        for (Eigen::Index j = 0; j < g.ps.size(); ++j)
            rows.push_back({g.xs[i], g.ps[j], g.w(i, j)});
    return rows;
}

}  // namespace

Scheme scheme_from_name(const std::string& name) {
    if (name == "trap-closed") return Scheme::trap_closed;
    if (name == "trap-open") return Scheme::trap_open;
    if (name == "raman-closed") return Scheme::raman_closed;
    if (name == "raman-open") return Scheme::raman_open;
    if (name == "jc-open") return Scheme::jc_open;
    throw InputError("unknown scheme '" + name +
                     "'; expected trap-closed, trap-open, raman-closed, "
                     "raman-open or jc-open");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::trap_closed: return "trap-closed";
        case Scheme::trap_open: return "trap-open";
        case Scheme::raman_closed: return "raman-closed";
        case Scheme::raman_open: return "raman-open";
        case Scheme::jc_open: return "jc-open";
    }
    throw InternalConsistencyError("unmapped scheme");
}

ProtocolSpec ProtocolSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("spec is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw InputError("spec root must be an object");
        static const std::set<std::string> allowed = {
            "scheme", "initial",  "target", "tf",
            "grid_points", "fock_dim", "seed",   "units",
            "phase_override"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (allowed.find(it.key()) == allowed.end())
                throw InputError("unknown key '" + it.key() + "' in spec");
        ProtocolSpec s;
        s.scheme = scheme_from_name(j.at("scheme").get<std::string>());
        s.initial = parse_triple(j.at("initial"), "initial");
        s.target = parse_triple(j.at("target"), "target");
        s.tf = j.at("tf").get<double>();
        s.grid_points = j.value("grid_points", 2000);
        s.fock_dim = j.value("fock_dim", 0);
        s.seed = j.value("seed", std::uint64_t{0});
        s.phase_override = j.value("phase_override", false);
        if (j.contains("units")) {
            const json& u = j.at("units");
            if (!u.is_object()) throw InputError("'units' must be an object");
            for (auto it = u.begin(); it != u.end(); ++it)
                if (it.key() != "hbar" && it.key() != "mass")
                    throw InputError("unknown key '" + it.key() + "' in units");
            s.units.hbar = u.value("hbar", 1.0);
            s.units.mass = u.value("mass", 1.0);
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed spec: ") + e.what());
    }
}

void ProtocolSpec::validate() const {
    if (!(tf > 0.0) || !std::isfinite(tf))
        throw InvalidScheduleError("tf must be positive and finite");
    if (grid_points < 16) throw InputError("grid_points must be >= 16");
    if (fock_dim != 0 && fock_dim < 2)
        throw InvalidDimensionError("fock_dim must be >= 2 (or 0 for the default rule)");
    if (!(units.hbar > 0.0) || !(units.mass > 0.0))
        throw InputError("units.hbar and units.mass must be positive");
    const auto check = [](const StateTriple& s, const char* which) {
        if (!std::isfinite(s.r) || !std::isfinite(s.phi))
            throw InputError(std::string(which) + " has a non-finite entry");
        if (!(s.epsilon > 0.0) || !std::isfinite(s.epsilon))
            throw UnsupportedTemperatureError(
                std::string(which) +
                ".epsilon must be positive (thermal exponent hbar omega beta)");
    };
    check(initial, "initial");
    check(target, "target");
    const double eps_scale = std::max(1.0, initial.epsilon);
    if (is_trap(scheme)) {
        if (initial.r != 0.0 || initial.phi != 0.0 || target.phi != 0.0)
            throw InputError(
                "trap schemes run between bare thermal states: initial r = "
                "phi = 0 and target phi = 0; the frequency endpoint is "
                "encoded as omega_f = e^{2 r_target}");
    }
    if (scheme == Scheme::trap_closed &&
        std::abs(target.epsilon - initial.epsilon) > 1e-12 * eps_scale)
        throw InputError(
            "trap-closed is isentropic: target.epsilon must equal "
            "initial.epsilon");
    if (scheme == Scheme::raman_closed) {
        if (std::abs(initial.phi) > 1e-12)
            throw InputError("raman-closed starts on the phi = 0 branch");
        if (std::abs(target.epsilon - initial.epsilon) > 1e-12 * eps_scale)
            throw InputError(
                "raman-closed is unitary: target.epsilon must equal "
                "initial.epsilon");
        const double phi_req = wrap_angle(-2.0 * kOmega0 * tf);
        if (!phase_override &&
            std::abs(wrap_angle(target.phi - phi_req)) > 1e-9)
            throw InvalidScheduleError(
                "the closed drive's lab phase is slaved to the clock: "
                "target.phi must equal wrap(-2 omega0 tf) = " +
                std::to_string(phi_req) +
                " for tf = " + std::to_string(tf) +
                "; set phase_override to deviate knowingly");
    }
}

int ProtocolSpec::effective_fock_dim() const {
    if (fock_dim != 0) return fock_dim;
    const double rmax = std::max(std::abs(initial.r), std::abs(target.r));
    const double emin = std::min(initial.epsilon, target.epsilon);
    // Outside this envelope a 100-level ladder cannot hold the occupation
    // tail; such runs fall back to the Gaussian-only route.
    return (rmax <= 1.5 && emin >= 0.5) ? 100 : 0;
}

TrapProtocol build_trap(const ProtocolSpec& spec) {
    if (!is_trap(spec.scheme))
        throw InternalConsistencyError("build_trap on a non-trap scheme");
    const double omega_f = std::exp(2.0 * spec.target.r);
    if (spec.scheme == Scheme::trap_closed)
        return TrapProtocol::closed(kOmega0, omega_f, spec.initial.epsilon,
                                    spec.tf, spec.units);
    const double beta0 = spec.initial.epsilon / (spec.units.hbar * kOmega0);
    const double betaf = spec.target.epsilon / (spec.units.hbar * omega_f);
    return TrapProtocol::open(kOmega0, omega_f, beta0, betaf, spec.tf,
                              spec.units);
}

RamanClosedProtocol build_raman_closed(const ProtocolSpec& spec) {
    if (spec.scheme != Scheme::raman_closed)
        throw InternalConsistencyError("build_raman_closed on a wrong scheme");
    return RamanClosedProtocol::design(spec.initial.r, spec.target.r, kOmega0,
                                       spec.tf);
}

RamanOpenProtocol build_raman_open(const ProtocolSpec& spec) {
    if (spec.scheme != Scheme::raman_open && spec.scheme != Scheme::jc_open)
        throw InternalConsistencyError("build_raman_open on a wrong scheme");
    const auto pi = SqueezedThermalParams::make(
        spec.initial.r, spec.initial.phi, spec.initial.epsilon);
    const auto pt = SqueezedThermalParams::make(spec.target.r, spec.target.phi,
                                                spec.target.epsilon);
    const RamanScheme sch = spec.scheme == Scheme::jc_open
                                ? RamanScheme::four_laser
                                : RamanScheme::two_laser;
    return RamanOpenProtocol::design(pi, pt, spec.tf, sch, spec.grid_points);
}

// --- control tables ---------------------------------------------------------

ControlTable ControlTable::read_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    ControlTable tb;
    std::vector<std::vector<double>> data;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            tb.names = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (end == c.c_str() || *end != '\0' || !std::isfinite(v))
                throw InputError(path + ":" + std::to_string(lineno) +
                                 ": '" + c + "' is not a finite number");
            row.push_back(v);
        }
        if (row.size() != tb.names.size())
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": row width does not match the header");
        data.push_back(std::move(row));
    }
    if (!have_header || data.size() < 2)
        throw InputError(path + ": controls need a header and at least two rows");
    int tcol = -1;
    for (size_t i = 0; i < tb.names.size(); ++i)
        if (tb.names[i] == "t") tcol = static_cast<int>(i);
    if (tcol < 0) throw InputError(path + ": controls need a 't' column");
    tb.cols.assign(tb.names.size(), RealVec(data.size()));
    for (size_t k = 0; k < data.size(); ++k)
        for (size_t i = 0; i < tb.names.size(); ++i)
            tb.cols[i][static_cast<Eigen::Index>(k)] = data[k][i];
    const RealVec& tv = tb.cols[tcol];
    for (Eigen::Index k = 1; k < tv.size(); ++k)
        if (!(tv[k] > tv[k - 1]))
            throw InputError(path + ": 't' must be strictly increasing");
    return tb;
}

int ControlTable::column(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

double ControlTable::interp(int col, double t) const {
    if (col < 0 || col >= static_cast<int>(cols.size()))
        throw InternalConsistencyError("control column index out of range");
    const int tcol = column("t");
    const RealVec& tv = cols[tcol];
    const RealVec& yv = cols[col];
    const Eigen::Index n = tv.size();
    if (t <= tv[0]) return yv[0];
    if (t >= tv[n - 1]) return yv[n - 1];
    const double* beg = tv.data();
    const Eigen::Index i = std::upper_bound(beg, beg + n, t) - beg;
    const double u = (t - tv[i - 1]) / (tv[i] - tv[i - 1]);
    return yv[i - 1] + u * (yv[i] - yv[i - 1]);
}

double ControlTable::t_min() const { return cols[column("t")][0]; }

double ControlTable::t_max() const {
    const RealVec& tv = cols[column("t")];
    return tv[tv.size() - 1];
}

// --- design -----------------------------------------------------------------

DesignArtifacts run_design(const ProtocolSpec& spec, const ArtifactWriter& w) {
    spec.validate();
    DesignArtifacts art;
    json meta;
    meta["scheme"] = scheme_name(spec.scheme);
    meta["tf"] = spec.tf;
    meta["grid_points"] = spec.grid_points;
    std::vector<std::vector<double>> rows;
    const int n = spec.grid_points;
    rows.reserve(n + 1);
    if (is_trap(spec.scheme)) {
        const TrapProtocol pr = build_trap(spec);
        const TrapDesignReport rep = pr.scan(n);
        art.non_lindblad = rep.non_lindblad_segment;
        art.inverted_trap = rep.inverted_trap_segment;
        for (int k = 0; k <= n; ++k) {
            const TrapControls c = pr.controls(spec.tf * k / n);
            rows.push_back(
                {c.t, c.omega, c.omega_c_sq, c.gamma, c.Omega0, c.Omega1});
        }
        w.write_csv("controls.csv", "t,omega_t,omega_c_sq,gamma,Omega0,Omega1",
                    rows);
        const TrapControls c0 = pr.controls(0.0);
        const TrapControls cf = pr.controls(spec.tf);
        meta["omega_f"] = pr.omega_f();
        meta["isentropic"] = pr.isentropic();
        meta["inverted_trap_segment"] = rep.inverted_trap_segment;
        meta["non_lindblad_segment"] = rep.non_lindblad_segment;
        meta["min_omega_c_sq"] = rep.min_omega_c_sq;
        meta["max_abs_gamma"] = rep.max_abs_gamma;
        meta["boundary"] = json{{"omega_c_sq_0", c0.omega_c_sq},
                                {"omega_c_sq_tf", cf.omega_c_sq},
                                {"gamma_0", c0.gamma},
                                {"gamma_tf", cf.gamma}};
    } else if (spec.scheme == Scheme::raman_closed) {
        const RamanClosedProtocol pr = build_raman_closed(spec);
        const double pd = laser_phase_difference(pr);
        for (int k = 0; k <= n; ++k) {
            const double t = spec.tf * k / n;
            const Complex a = pr.alpha(t);
            rows.push_back({t, a.real(), a.imag(), std::abs(a), pd, 0.0});
        }
        w.write_csv("controls.csv", "t,alpha_R,alpha_I,abs_alpha,phase_diff,kappa",
                    rows);
        meta["laser_phase_difference"] = pd;
        meta["phi_f_lab"] = wrap_angle(-2.0 * kOmega0 * spec.tf);
    } else {
        const RamanOpenProtocol pr = build_raman_open(spec);
        art.max_condition = pr.max_condition();
        art.non_lindblad = pr.non_lindblad_segment();
        for (int k = 0; k <= n; ++k) {
            const RamanControls c = pr.controls(spec.tf * k / n);
            const double pd = std::abs(c.alpha) > 0.0 ? std::arg(c.alpha) : 0.0;
            rows.push_back({c.t, c.alpha.real(), c.alpha.imag(),
                            std::abs(c.alpha), pd, c.kappa});
        }
        w.write_csv("controls.csv", "t,alpha_R,alpha_I,abs_alpha,phase_diff,kappa",
                    rows);
        meta["lasers"] = spec.scheme == Scheme::jc_open ? 4 : 2;
        meta["max_condition"] = pr.max_condition();
        meta["non_lindblad_segment"] = pr.non_lindblad_segment();
    }
    meta["fock_dim"] = spec.effective_fock_dim();
    write_json(w, "design.json", meta);
    art.files = {"controls.csv", "design.json"};
    return art;
}

// --- verify -----------------------------------------------------------------

VerifyReport run_verify(const ProtocolSpec& spec, const ControlTable& table,
                        const ArtifactWriter& w) {
    spec.validate();
    const double tf = spec.tf;
    if (table.t_min() > 1e-9 || table.t_max() < tf - 1e-9)
        throw CoverageError(
            "controls cover [" + std::to_string(table.t_min()) + ", " +
            std::to_string(table.t_max()) + "] but the run needs [0, " +
            std::to_string(tf) + "]");
    const bool trap = is_trap(spec.scheme);
    const bool jc = spec.scheme == Scheme::jc_open;

    VerifyReport rep;
    rep.fidelity_min = trap ? kTrapFidelityMin : kRamanFidelityMin;
    rep.entropy_tol = kEntropyTol;
    rep.oracle_var_tol = jc ? 0.0 : kOracleVarTol;
    rep.gaussian_only = spec.gaussian_only();

    const auto p_init = SqueezedThermalParams::make(
        spec.initial.r, spec.initial.phi, spec.initial.epsilon);
    const SqueezedThermalParams p_target = verify_target(spec);
    rep.entropy_target = p_target.entropy();

    // Controls come from the table, not the designing protocol object, so a
    // hand-edited file is verified as-is.
    std::function<double(double)> csq_fn, gam_fn;
    std::function<RamanControls(double)> controls_fn;
    std::function<QuadraticGenerator(double)> gen;
    double rate = 0.0;
    if (trap) {
        const int c_csq = table.column("omega_c_sq");
        const int c_gam = table.column("gamma");
        if (c_csq < 0 || c_gam < 0)
            throw InputError(
                "trap controls need columns 'omega_c_sq' and 'gamma'");
        csq_fn = [&table, c_csq](double t) { return table.interp(c_csq, t); };
        gam_fn = [&table, c_gam](double t) { return table.interp(c_gam, t); };
        const double x0 = x_zpf(kOmega0, spec.units);
        for (int k = 0; k <= 2000; ++k) {
            const double t = tf * k / 2000.0;
            rate = std::max(rate, std::sqrt(std::abs(csq_fn(t))));
            rate = std::max(rate, std::abs(gam_fn(t)) * x0 * x0);
        }
        const double m = spec.units.mass;
        const double hbar = spec.units.hbar;
        gen = [csq_fn, gam_fn, m, hbar](double t) {
            QuadraticGenerator g;
            g.h_pp = 1.0 / m;
            g.h_xx = m * csq_fn(t);
            g.d_pp = 2.0 * hbar * hbar * gam_fn(t);
            return g;
        };
    } else {
        const int c_ar = table.column("alpha_R");
        const int c_ai = table.column("alpha_I");
        const int c_kp = table.column("kappa");
        if (c_ar < 0 || c_ai < 0 || c_kp < 0)
            throw InputError(
                "drive controls need columns 'alpha_R', 'alpha_I' and 'kappa'");
        controls_fn = [&table, c_ar, c_ai, c_kp](double t) {
            RamanControls c;
            c.t = t;
            c.alpha = Complex(table.interp(c_ar, t), table.interp(c_ai, t));
            c.kappa = table.interp(c_kp, t);
            return c;
        };
        rate = raman_rate_scale(controls_fn, tf);
        if (!jc) {
            const UnitSystem units = spec.units;
            gen = [controls_fn, units](double t) {
                return raman_generator(controls_fn(t), kOmega0, units);
            };
        }
    }

    int steps = std::max(spec.grid_points, 2000);
    steps = std::max(steps, static_cast<int>(std::ceil(tf * rate / 0.005)));
    const TimeGrid grid = TimeGrid::uniform(tf, steps);
    require_step(grid.dt(), rate);
    const int stride = std::max(1, steps / 200);

    const Covariance v0 = covariance_closed(p_init, kOmega0, spec.units);
    const Covariance v_target = covariance_closed(p_target, kOmega0, spec.units);
    Covariance v_final = v0;
    std::vector<std::array<double, 4>> gauss_track;
    if (gen) {
        if (rep.gaussian_only) {
            v_final = evolve_covariance(
                v0, grid, gen,
                [&](int step, double t, const Covariance& v) {
                    if (step % stride == 0 || step == steps)
                        gauss_track.push_back({t, v.vx, v.vp, v.c});
                });
        } else {
            v_final = evolve_covariance(v0, grid, gen);
        }
    } else if (rep.gaussian_only) {
        throw UnsupportedRegimeError(
            "the four-laser flow has no Gaussian-oracle route; give the spec "
            "a fock_dim that holds the state");
    }

    std::vector<std::vector<double>> rows;
    PropagateStats pstats;
    TrajectoryPoint last{};
    const int N = spec.effective_fock_dim();
    if (!rep.gaussian_only) {
        const Mat rho0 = squeezed_thermal_dense(p_init, N).m;
        const Mat target = squeezed_thermal_dense(p_target, N).m;
        const MasterRhs rhs =
            trap ? trap_coeff_rhs(csq_fn, gam_fn, kOmega0, N, Backend::parallel,
                                  spec.units)
                 : raman_rhs(controls_fn, N,
                             jc ? RamanScheme::four_laser
                                : RamanScheme::two_laser,
                             Backend::parallel);
        PropagateOptions opt;
        opt.hermitize = true;
        if (jc)
            opt.renormalize_trace = true;
        else
            opt.max_trace_drift = kTraceDriftError;
        propagate(rho0, grid, rhs, opt,
                  [&](int step, double t, const Mat& rho) {
                      if (step % stride == 0 || step == steps) {
                          last = observe_state(t, rho, target, kOmega0,
                                               spec.units);
                          rows.push_back({last.t, last.fidelity_to_target,
                                          last.entropy, last.var_x, last.var_p,
                                          last.cov_xp, last.trace_error});
                      }
                  },
                  &pstats);
        rep.final_fidelity = last.fidelity_to_target;
        rep.entropy_final = last.entropy;
        if (gen)
            rep.oracle_var_gap = std::max(rel_gap(last.var_x, v_final.vx),
                                          rel_gap(last.var_p, v_final.vp));
    } else {
        for (const auto& gtrack : gauss_track) {
            const Covariance v{gtrack[1], gtrack[2], gtrack[3]};
            rows.push_back({gtrack[0],
                            gaussian_fidelity(v, v_target, spec.units),
                            covariance_entropy(v, spec.units), v.vx, v.vp, v.c,
                            0.0});
        }
        rep.final_fidelity = gaussian_fidelity(v_final, v_target, spec.units);
        rep.entropy_final = covariance_entropy(v_final, spec.units);
        rep.var_ratio_error = std::max(rel_gap(v_final.vx, v_target.vx),
                                       rel_gap(v_final.vp, v_target.vp));
    }

    std::string why;
    if (rep.final_fidelity < rep.fidelity_min)
        why = "final fidelity " + format_double(rep.final_fidelity) +
              " is below " + format_double(rep.fidelity_min);
    else if (std::abs(rep.entropy_final - rep.entropy_target) > rep.entropy_tol)
        why = "final entropy " + format_double(rep.entropy_final) +
              " misses the target entropy " +
              format_double(rep.entropy_target) + " beyond " +
              format_double(rep.entropy_tol);
    else if (!rep.gaussian_only && gen && rep.oracle_var_gap > rep.oracle_var_tol)
        why = "Fock and Gaussian oracles disagree: relative variance gap " +
              format_double(rep.oracle_var_gap) + " (fock var_x " +
              format_double(last.var_x) + ", gaussian var_x " +
              format_double(v_final.vx) + ")";
    else if (rep.gaussian_only && rep.var_ratio_error > kVarRatioTol)
        why = "achieved variances miss the designed endpoint: relative error " +
              format_double(rep.var_ratio_error);
    rep.pass = why.empty();
    rep.failure_reason = why;

    w.write_csv("trajectory.csv",
                "t,fidelity_to_target,entropy,var_x,var_p,cov_xp,trace_error",
                rows);
    json meta;
    meta["pass"] = rep.pass;
    meta["scheme"] = scheme_name(spec.scheme);
    meta["gaussian_only"] = rep.gaussian_only;
    meta["final_fidelity"] = rep.final_fidelity;
    meta["fidelity_min"] = rep.fidelity_min;
    meta["entropy_final"] = rep.entropy_final;
    meta["entropy_target"] = rep.entropy_target;
    meta["entropy_tol"] = rep.entropy_tol;
    meta["oracle_var_gap"] = rep.oracle_var_gap;
    meta["oracle_var_tol"] = rep.oracle_var_tol;
    meta["var_ratio_error"] = rep.var_ratio_error;
    meta["failure_reason"] = rep.failure_reason;
    meta["steps"] = steps;
    meta["dt"] = grid.dt();
    meta["rows"] = rows.size();
    meta["fock_dim"] = rep.gaussian_only ? 0 : N;
    meta["max_hermitization_norm"] = pstats.max_hermiticity_correction;
    meta["max_trace_drift"] = pstats.max_trace_drift;
    if (gen)
        meta["gaussian_final"] =
            json{{"var_x", v_final.vx}, {"var_p", v_final.vp},
                 {"cov_xp", v_final.c}};
    if (!trap && controls_fn) {
        // independent endpoint check on the factorized-coordinate flow
        const FactorizedForm f0 = factorize(p_init);
        const FactorizedForm ft = factorize(p_target);
        try {
            const FlowState end = forward_parameter_flow(
                controls_fn, FlowState{f0.J, f0.B}, grid,
                jc ? RamanScheme::four_laser : RamanScheme::two_laser);
            meta["flow_endpoint_gap"] = std::max(std::abs(end.J - ft.J),
                                                 std::abs(end.B - ft.B));
        } catch (const FlowDomainError& e) {
            meta["flow_domain_error"] = e.what();
        }
    }
    write_json(w, "verify.json", meta);
    return rep;
}

// --- variance map -----------------------------------------------------------

void run_variance_map(int points, double lo, double hi,
                      const ArtifactWriter& w) {
    if (points < 2) throw InputError("variance map needs >= 2 points per axis");
    if (!(lo > 0.0) || !(hi > lo))
        throw InputError("ratio range must satisfy 0 < lo < hi");
    const double eps0 = 1.0;
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(points) * points);
    for (int i = 0; i < points; ++i) {
        const double rw = lo + (hi - lo) * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            const double rb = lo + (hi - lo) * j / (points - 1);
            rows.push_back(
                {rw, rb, variance_ratio_db(rw, rb, eps0), 1.0 / rw});
        }
    }
    w.write_csv("variance_map.csv",
                "omega_ratio,beta_ratio,delta_db,isentropic_beta_ratio", rows);
}

// --- wigner snapshots -------------------------------------------------------

void run_wigner(const ProtocolSpec& spec, const std::vector<double>& times,
                int points, const ArtifactWriter& w) {
    spec.validate();
    if (times.empty()) throw InputError("wigner needs at least one time");
    if (points < 16) throw InputError("wigner grid needs >= 16 points per axis");
    for (double t : times)
        if (t < -1e-12 || t > spec.tf + 1e-12)
            throw InputError("requested time " + std::to_string(t) +
                             " lies outside [0, " + std::to_string(spec.tf) +
                             "]");
    const bool trap = is_trap(spec.scheme);
    const bool jc = spec.scheme == Scheme::jc_open;
    const double tf = spec.tf;

    std::function<double(double)> csq_fn, gam_fn;
    std::function<RamanControls(double)> controls_fn;
    std::function<QuadraticGenerator(double)> gen;
    std::shared_ptr<RamanOpenProtocol> open_pr;
    double rate = 0.0;
    if (trap) {
        auto pr = std::make_shared<TrapProtocol>(build_trap(spec));
        csq_fn = [pr](double t) { return pr->controls(t).omega_c_sq; };
        gam_fn = [pr](double t) { return pr->controls(t).gamma; };
        gen = [pr](double t) { return trap_generator(*pr, t); };
        rate = trap_rate_scale(*pr);
    } else if (spec.scheme == Scheme::raman_closed) {
        auto pr = std::make_shared<RamanClosedProtocol>(build_raman_closed(spec));
        controls_fn = [pr](double t) {
            return RamanControls{t, pr->alpha(t), 0.0};
        };
        rate = raman_rate_scale(controls_fn, tf);
    } else {
        open_pr = std::make_shared<RamanOpenProtocol>(build_raman_open(spec));
        auto pr = open_pr;
        controls_fn = [pr](double t) { return pr->controls(t); };
        rate = raman_rate_scale(controls_fn, tf);
    }
    if (!trap && !jc) {
        const UnitSystem units = spec.units;
        gen = [controls_fn, units](double t) {
            return raman_generator(controls_fn(t), kOmega0, units);
        };
    }

    int steps = std::max(spec.grid_points, 2000);
    steps = std::max(steps, static_cast<int>(std::ceil(tf * rate / 0.005)));
    const TimeGrid grid = TimeGrid::uniform(tf, steps);
    require_step(grid.dt(), rate);

    std::vector<int> idx(times.size());
    for (size_t q = 0; q < times.size(); ++q) {
        const long k = std::lround(times[q] / grid.dt());
        idx[q] = static_cast<int>(std::clamp<long>(k, 0, steps));
    }

    const auto p_init = SqueezedThermalParams::make(
        spec.initial.r, spec.initial.phi, spec.initial.epsilon);
    const Covariance v0 = covariance_closed(p_init, kOmega0, spec.units);
    std::vector<Covariance> vsnap(times.size(), v0);
    if (gen) {
        evolve_covariance(v0, grid, gen,
                          [&](int step, double, const Covariance& v) {
                              for (size_t q = 0; q < idx.size(); ++q)
                                  if (idx[q] == step) vsnap[q] = v;
                          });
    } else {
        // four-laser: the renormalized flow is not an additive-noise Gaussian
        // channel, so the reference surface is the designed family itself
        for (size_t q = 0; q < idx.size(); ++q) {
            const FlowState s = open_pr->state(grid.t(idx[q]));
            vsnap[q] = covariance_closed(
                unfactorize(FactorizedForm{1.0, s.J, s.B}), kOmega0,
                spec.units);
        }
    }

    double xh = std::sqrt(v0.vx), ph = std::sqrt(v0.vp);
    for (const Covariance& v : vsnap) {
        xh = std::max(xh, std::sqrt(v.vx));
        ph = std::max(ph, std::sqrt(v.vp));
    }
    const RealVec xs = linspace(-5.0 * xh, 5.0 * xh, points);
    const RealVec ps = linspace(-5.0 * ph, 5.0 * ph, points);

    const int N = spec.effective_fock_dim();
    std::vector<Mat> snaps(times.size());
    if (N > 0) {
        const Mat rho0 = squeezed_thermal_dense(p_init, N).m;
        const MasterRhs rhs =
            trap ? trap_coeff_rhs(csq_fn, gam_fn, kOmega0, N, Backend::parallel,
                                  spec.units)
                 : raman_rhs(controls_fn, N,
                             jc ? RamanScheme::four_laser
                                : RamanScheme::two_laser,
                             Backend::parallel);
        PropagateOptions opt;
        opt.hermitize = true;
        if (jc)
            opt.renormalize_trace = true;
        else
            opt.max_trace_drift = kTraceDriftError;
        propagate(rho0, grid, rhs, opt,
                  [&](int step, double, const Mat& rho) {
                      for (size_t q = 0; q < idx.size(); ++q)
                          if (idx[q] == step) snaps[q] = rho;
                  });
    }

    json snap_meta = json::array();
    std::vector<std::string> files;
    for (size_t q = 0; q < times.size(); ++q) {
        const double tq = grid.t(idx[q]);
        const WignerGrid gg = wigner_gaussian(vsnap[q], xs, ps, spec.units);
        const std::string gname = "wigner_gauss_" + std::to_string(q) + ".csv";
        w.write_csv(gname, "x,p,w", flatten_grid(gg));
        files.push_back(gname);
        json e;
        e["t_requested"] = times[q];
        e["t"] = tq;
        e["norm_gauss"] = gg.norm_estimate();
        if (N > 0) {
            const WignerGrid gf = wigner_from_state(snaps[q], xs, ps, kOmega0,
                                                    spec.units);
            const std::string fname =
                "wigner_fock_" + std::to_string(q) + ".csv";
            w.write_csv(fname, "x,p,w", flatten_grid(gf));
            files.push_back(fname);
            e["norm_fock"] = gf.norm_estimate();
            e["max_abs_diff"] = max_abs_diff(gf, gg);
        }
        snap_meta.push_back(e);
    }
    json meta;
    meta["scheme"] = scheme_name(spec.scheme);
    meta["snapshots"] = snap_meta;
    meta["points"] = points;
    meta["steps"] = steps;
    meta["dt"] = grid.dt();
    meta["fock_dim"] = N;
    meta["grid_half_width_x"] = 5.0 * xh;
    meta["grid_half_width_p"] = 5.0 * ph;
    meta["gaussian_route"] = gen ? "moment-ode" : "designed-family";
    write_json(w, "wigner.json", meta);
}

// --- adiabatic-elimination sweep --------------------------------------------

std::vector<IonSweepRow> run_ion_check(const std::vector<double>& Deltas,
                                       double r_f, double tf, int fock_dim,
                                       const ArtifactWriter& w) {
    if (Deltas.empty()) throw InputError("the sweep needs detunings");
    if (!(tf > 0.0) || !std::isfinite(tf))
        throw InvalidScheduleError("tf must be positive");
    if (fock_dim < 4)
        throw InvalidDimensionError("the ion ladder needs fock_dim >= 4");
    const RamanClosedProtocol ramp =
        RamanClosedProtocol::design(0.0, r_f, kOmega0, tf);
    const double pd = laser_phase_difference(ramp);
    // The closed drive integrates exactly to the squeeze of the vacuum, so
    // the eliminated model's endpoint has a closed form.
    const Mat s_op = squeeze_operator(r_f, 0.0, fock_dim);
    const Vec ket = s_op.col(0);
    const Mat rho_eff = ket * ket.adjoint();
    const TwoLevelFock tl{fock_dim};

    std::vector<IonSweepRow> out;
    std::vector<std::vector<double>> rows;
    for (const double D : Deltas) {
        if (!(D > 0.0)) throw InputError("detunings must be positive");
        IonModelConfig cfg;
        cfg.omega0 = kOmega0;
        cfg.Delta = D;
        cfg.Phi1 = pd;
        cfg.Phi2 = 0.0;
        cfg.fock_dim = fock_dim;
        const IonModelConfig geom = cfg;
        cfg.rabi = [geom, ramp](double t) {
            return ion_rabi_envelope(geom, std::abs(ramp.alpha(t)));
        };
        const int steps = static_cast<int>(std::ceil(tf * D / 0.05));
        const TimeGrid grid = TimeGrid::uniform(tf, steps);
        const IonRunResult res =
            ion_propagate(cfg, ion_ground_vacuum(fock_dim), grid);
        const Mat rho_mot = tl.reduce_motional(res.rho_full);
        const double fid = fidelity(rho_mot, rho_eff);
        out.push_back({D, fid, res.max_excited});
        rows.push_back({D, fid, 1.0 - fid, res.max_excited});
    }
    w.write_csv("ion_check.csv", "Delta,fidelity,infidelity,max_excited", rows);
    bool monotone = true;
    for (size_t i = 1; i < out.size(); ++i)
        if (!(1.0 - out[i].fidelity < 1.0 - out[i - 1].fidelity))
            monotone = false;
    json meta;
    meta["r_f"] = r_f;
    meta["tf"] = tf;
    meta["fock_dim"] = fock_dim;
    meta["laser_phase_difference"] = pd;
    meta["eta"] = json::array({-0.25, 0.25});
    meta["mismatch_monotone_decreasing"] = monotone;
    write_json(w, "ion_check.json", meta);
    return out;
}

}  // namespace sqz
