#include "accstab/io.hpp"

#include <cstdio>
#include <fstream>

#include "accstab/version.hpp"

namespace accstab {

namespace {

double require_number(const OrderedJson& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        raise(ErrorCategory::config, std::string("config: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

double number_or(const OrderedJson& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        raise(ErrorCategory::config, std::string("config: field '") + key + "' must be numeric");
    }
    return j.at(key).get<double>();
}

int int_or(const OrderedJson& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) {
        raise(ErrorCategory::config, std::string("config: field '") + key + "' must be an integer");
    }
    return j.at(key).get<int>();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        raise(ErrorCategory::io, "cannot open for writing: " + path.string());
    }
    return out;
}

}  // namespace

RunConfig parse_config(const OrderedJson& j) {
    if (!j.contains("converter") || !j.at("converter").is_object()) {
        raise(ErrorCategory::config, "config: missing 'converter' object");
    }
    const OrderedJson& c = j.at("converter");

    RunConfig cfg;
    ConverterParams& p = cfg.converter;
    p.v_s = require_number(c, "v_s_v");
    p.v_r = require_number(c, "v_r_v");
    p.f_s = require_number(c, "f_s_hz");
    p.L = require_number(c, "L_h");
    p.C = require_number(c, "C_f");
    p.R_c = require_number(c, "R_c_ohm");
    p.R = require_number(c, "R_ohm");
    p.R_s = require_number(c, "R_s_ohm");
    p.V_l = require_number(c, "V_l_v");
    p.V_h = require_number(c, "V_h_v");
    p.K_c = require_number(c, "K_c");
    p.omega_z = require_number(c, "omega_z_rad_s");

    const bool has_abs = c.contains("omega_p_rad_s");
    const bool has_rel = c.contains("omega_p_over_omega_s");
    if (has_abs == has_rel) {
        raise(ErrorCategory::config,
              "config: exactly one of 'omega_p_rad_s' or 'omega_p_over_omega_s' is required");
    }
    if (has_abs) {
        p.omega_p = require_number(c, "omega_p_rad_s");
        cfg.omega_p_relative = false;
    } else {
        p.omega_p = require_number(c, "omega_p_over_omega_s") * p.omega_s();
        cfg.omega_p_relative = true;
    }
    if (c.contains("v_set_v")) cfg.v_set = require_number(c, "v_set_v");
    p.validate();

    if (j.contains("simulate")) {
        const OrderedJson& s = j.at("simulate");
        cfg.simulate.n_cycles = int_or(s, "n_cycles", cfg.simulate.n_cycles);
        cfg.simulate.samples_per_cycle =
            int_or(s, "samples_per_cycle", cfg.simulate.samples_per_cycle);
        cfg.simulate.perturb_rel = number_or(s, "perturb_rel", cfg.simulate.perturb_rel);
        cfg.simulate.seed = static_cast<unsigned>(
            int_or(s, "seed", static_cast<int>(cfg.simulate.seed)));
        cfg.simulate.detect_tol_rel = number_or(s, "detect_tol_rel", cfg.simulate.detect_tol_rel);
        if (cfg.simulate.n_cycles < 1 || cfg.simulate.samples_per_cycle < 0 ||
            !(cfg.simulate.detect_tol_rel > 0.0)) {
            raise(ErrorCategory::config, "config: invalid simulate options");
        }
    }
    if (j.contains("orbit")) {
        cfg.orbit.period_multiple = int_or(j.at("orbit"), "period_multiple", 1);
        if (cfg.orbit.period_multiple != 1 && cfg.orbit.period_multiple != 2) {
            raise(ErrorCategory::config, "config: orbit.period_multiple must be 1 or 2");
        }
    }
    if (j.contains("sweep")) {
        const OrderedJson& s = j.at("sweep");
        cfg.sweep.k_min = number_or(s, "k_min", cfg.sweep.k_min);
        cfg.sweep.k_max = number_or(s, "k_max", cfg.sweep.k_max);
        cfg.sweep.grid_count = int_or(s, "grid_count", cfg.sweep.grid_count);
        cfg.sweep.boundary_tol_frac =
            number_or(s, "boundary_tol_frac", cfg.sweep.boundary_tol_frac);
        if (s.contains("parallel")) {
            if (!s.at("parallel").is_boolean()) {
                raise(ErrorCategory::config, "config: field 'parallel' must be a boolean");
            }
            cfg.sweep.parallel = s.at("parallel").get<bool>();
        }
        cfg.sweep.validate();
    }
    if (j.contains("tf")) {
        const OrderedJson& s = j.at("tf");
        cfg.tf.points = int_or(s, "points", cfg.tf.points);
        cfg.tf.omega_min_over_omega_s =
            number_or(s, "omega_min_over_omega_s", cfg.tf.omega_min_over_omega_s);
        cfg.tf.omega_max_over_omega_s =
            number_or(s, "omega_max_over_omega_s", cfg.tf.omega_max_over_omega_s);
        if (cfg.tf.points < 2 || !(cfg.tf.omega_min_over_omega_s > 0.0) ||
            !(cfg.tf.omega_max_over_omega_s > cfg.tf.omega_min_over_omega_s) ||
            cfg.tf.omega_max_over_omega_s >= 0.5) {
            raise(ErrorCategory::config, "config: invalid tf options");
        }
    }
    cfg.stability_tol = number_or(j, "stability_tol", cfg.stability_tol);
    cfg.sweep.stability_tol = cfg.stability_tol;
    cfg.sweep.duty_guess = cfg.duty_guess();
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCategory::io, "cannot open config file: " + path.string());
    }
    OrderedJson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCategory::config, "config: JSON parse failure in " + path.string() + ": " +
                                         e.what());
    }
    return parse_config(j);
}

OrderedJson config_to_json(const RunConfig& cfg) {
    const ConverterParams& p = cfg.converter;
    OrderedJson c;
    c["v_s_v"] = p.v_s;
    c["v_r_v"] = p.v_r;
    c["f_s_hz"] = p.f_s;
    c["L_h"] = p.L;
    c["C_f"] = p.C;
    c["R_c_ohm"] = p.R_c;
    c["R_ohm"] = p.R;
    c["R_s_ohm"] = p.R_s;
    c["V_l_v"] = p.V_l;
    c["V_h_v"] = p.V_h;
    c["K_c"] = p.K_c;
    c["omega_z_rad_s"] = p.omega_z;
    if (cfg.omega_p_relative) {
        c["omega_p_over_omega_s"] = p.omega_p / p.omega_s();
    } else {
        c["omega_p_rad_s"] = p.omega_p;
    }
    if (cfg.v_set) c["v_set_v"] = *cfg.v_set;

    OrderedJson j;
    j["converter"] = std::move(c);
    j["simulate"] = {{"n_cycles", cfg.simulate.n_cycles},
                     {"samples_per_cycle", cfg.simulate.samples_per_cycle},
                     {"perturb_rel", cfg.simulate.perturb_rel},
                     {"seed", cfg.simulate.seed},
                     {"detect_tol_rel", cfg.simulate.detect_tol_rel}};
    j["orbit"] = {{"period_multiple", cfg.orbit.period_multiple}};
    j["sweep"] = {{"k_min", cfg.sweep.k_min},
                  {"k_max", cfg.sweep.k_max},
                  {"grid_count", cfg.sweep.grid_count},
                  {"boundary_tol_frac", cfg.sweep.boundary_tol_frac},
                  {"parallel", cfg.sweep.parallel}};
    j["tf"] = {{"points", cfg.tf.points},
               {"omega_min_over_omega_s", cfg.tf.omega_min_over_omega_s},
               {"omega_max_over_omega_s", cfg.tf.omega_max_over_omega_s}};
    j["stability_tol"] = cfg.stability_tol;
    return j;
}

bool operator==(const ConverterParams& a, const ConverterParams& b) {
    return a.v_s == b.v_s && a.v_r == b.v_r && a.f_s == b.f_s && a.L == b.L && a.C == b.C &&
           a.R_c == b.R_c && a.R == b.R && a.R_s == b.R_s && a.V_l == b.V_l && a.V_h == b.V_h &&
           a.K_c == b.K_c && a.omega_z == b.omega_z && a.omega_p == b.omega_p;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.converter == b.converter && a.omega_p_relative == b.omega_p_relative &&
           a.v_set == b.v_set && a.simulate.n_cycles == b.simulate.n_cycles &&
           a.simulate.samples_per_cycle == b.simulate.samples_per_cycle &&
           a.simulate.perturb_rel == b.simulate.perturb_rel &&
           a.simulate.seed == b.simulate.seed &&
           a.simulate.detect_tol_rel == b.simulate.detect_tol_rel &&
           a.orbit.period_multiple == b.orbit.period_multiple &&
           a.sweep.k_min == b.sweep.k_min && a.sweep.k_max == b.sweep.k_max &&
           a.sweep.grid_count == b.sweep.grid_count &&
           a.sweep.boundary_tol_frac == b.sweep.boundary_tol_frac &&
           a.sweep.parallel == b.sweep.parallel && a.tf.points == b.tf.points &&
           a.tf.omega_min_over_omega_s == b.tf.omega_min_over_omega_s &&
           a.tf.omega_max_over_omega_s == b.tf.omega_max_over_omega_s &&
           a.stability_tol == b.stability_tol;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void write_trajectory_csv(const std::filesystem::path& path, const SwitchedModel& model,
                          const Trajectory& tr) {
    std::ofstream out = open_for_write(path);
    out << "t_s";
    for (const std::string& label : model.state_labels) out << "," << label;
    out << ",y_V,h_V\n";
    for (const Sample& s : tr.samples) {
        out << format_number(s.t);
        for (Eigen::Index i = 0; i < s.x.size(); ++i) out << "," << format_number(s.x(i));
        out << "," << format_number(s.y) << "," << format_number(s.h) << "\n";
    }
    if (!out) {
        raise(ErrorCategory::io, "write failure: " + path.string());
    }
}

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report) {
    std::size_t n_eigs = 0;
    for (const SweepPoint& pt : report.points) n_eigs = std::max(n_eigs, pt.eigs.size());

    std::ofstream out = open_for_write(path);
    out << "omega_p_rad_s,duty";
    for (std::size_t i = 0; i < n_eigs; ++i) out << ",eig_re_" << i << ",eig_im_" << i;
    out << ",max_mag,verdict,avg_max_re\n";
    for (const SweepPoint& pt : report.points) {
        out << format_number(pt.omega_p);
        if (pt.solved) {
            out << "," << format_number(pt.duty_fraction);
            for (std::size_t i = 0; i < n_eigs; ++i) {
                if (i < pt.eigs.size()) {
                    out << "," << format_number(pt.eigs[i].real()) << ","
                        << format_number(pt.eigs[i].imag());
                } else {
                    out << ",nan,nan";
                }
            }
            out << "," << format_number(pt.max_magnitude) << "," << to_string(pt.verdict) << ","
                << format_number(pt.averaged_max_re);
        } else {
            out << ",nan";
            for (std::size_t i = 0; i < n_eigs; ++i) out << ",nan,nan";
            out << ",nan,gap,nan";
        }
        out << "\n";
    }
    if (!out) {
        raise(ErrorCategory::io, "write failure: " + path.string());
    }
}

OrderedJson complex_to_json(const Complex& z) {
    return OrderedJson{{"re", z.real()}, {"im", z.imag()}};
}

namespace {

OrderedJson vector_to_json(const Vector& v) {
    OrderedJson arr = OrderedJson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

OrderedJson matrix_to_json(const Matrix& m) {
    OrderedJson rows = OrderedJson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

OrderedJson eigs_to_json(const ComplexList& eigs) {
    OrderedJson arr = OrderedJson::array();
    for (const Complex& l : eigs) arr.push_back(complex_to_json(l));
    return arr;
}

}  // namespace

OrderedJson orbit_to_json(const SwitchedModel& model, const PeriodicOrbit& orbit) {
    const double T = model.ramp.T;
    OrderedJson j;
    j["period_multiple"] = orbit.period_multiple;
    j["state_labels"] = model.state_labels;
    j["x_start"] = vector_to_json(orbit.x_start);
    OrderedJson duties = OrderedJson::array();
    OrderedJson fractions = OrderedJson::array();
    for (double d : orbit.duties) {
        duties.push_back(d);
        fractions.push_back(d / T);
    }
    j["duty_s"] = std::move(duties);
    j["duty_fraction"] = std::move(fractions);
    j["mean_duty_fraction"] = orbit.mean_duty_fraction(T);
    j["residual"] = orbit.residual;
    OrderedJson dminus = OrderedJson::array(), dplus = OrderedJson::array();
    for (const Vector& v : orbit.deriv_minus) dminus.push_back(vector_to_json(v));
    for (const Vector& v : orbit.deriv_plus) dplus.push_back(vector_to_json(v));
    j["deriv_minus"] = std::move(dminus);
    j["deriv_plus"] = std::move(dplus);
    return j;
}

OrderedJson verdict_to_json(const StabilityVerdict& verdict) {
    OrderedJson j;
    j["class"] = to_string(verdict.cls);
    j["max_magnitude"] = verdict.max_magnitude;
    j["critical_eigs"] = eigs_to_json(verdict.critical_eigs);
    j["tolerance"] = verdict.tolerance;
    j["marginal"] = verdict.marginal;
    return j;
}

OrderedJson linearization_to_json(const Linearization& lin) {
    OrderedJson j;
    j["phi"] = matrix_to_json(lin.phi);
    j["gamma1"] = vector_to_json(lin.gamma1);
    j["gamma2"] = vector_to_json(lin.gamma2);
    j["eigenvalues"] = eigs_to_json(lin.eigs);
    return j;
}

OrderedJson sweep_to_json(const SweepReport& report) {
    OrderedJson j;
    j["options"] = {{"k_min", report.options.k_min},
                    {"k_max", report.options.k_max},
                    {"grid_count", report.options.grid_count},
                    {"boundary_tol_frac", report.options.boundary_tol_frac},
                    {"parallel", report.options.parallel}};
    OrderedJson pts = OrderedJson::array();
    for (const SweepPoint& pt : report.points) {
        OrderedJson pj;
        pj["omega_p_rad_s"] = pt.omega_p;
        pj["k"] = pt.k;
        pj["solved"] = pt.solved;
        if (pt.solved) {
            pj["duty_fraction"] = pt.duty_fraction;
            pj["eigenvalues"] = eigs_to_json(pt.eigs);
            pj["max_magnitude"] = pt.max_magnitude;
            pj["verdict"] = to_string(pt.verdict);
            pj["marginal"] = pt.marginal;
            pj["averaged_max_re"] = pt.averaged_max_re;
        } else {
            pj["error"] = pt.error;
        }
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    OrderedJson bounds = OrderedJson::array();
    for (const BifurcationBoundary& b : report.boundaries) {
        OrderedJson bj;
        bj["omega_lo_rad_s"] = b.omega_lo;
        bj["omega_hi_rad_s"] = b.omega_hi;
        bj["bracket_width_rad_s"] = b.omega_hi - b.omega_lo;
        bj["omega_p_rad_s"] = b.omega_p;
        bj["dominant_eig"] = complex_to_json(b.dominant);
        bj["verdict_lo"] = to_string(b.verdict_lo);
        bj["verdict_hi"] = to_string(b.verdict_hi);
        bounds.push_back(std::move(bj));
    }
    j["boundaries"] = std::move(bounds);
    return j;
}

OrderedJson hb_to_json(const HbPrediction& pred) {
    OrderedJson j;
    j["k"] = pred.k;
    j["phi"] = pred.phi_value;
    if (pred.vs_star_exact) {
        j["vs_star_exact_v"] = *pred.vs_star_exact;
    } else {
        j["vs_star_exact_v"] = nullptr;
    }
    j["vs_star_simplified_v"] = pred.vs_star_simplified;
    j["vs_min_v"] = pred.vs_min;
    j["verdict"] = to_string(pred.verdict);
    if (pred.unstable_k_range) {
        j["unstable_k_range"] = {{"k_lo", pred.unstable_k_range->first},
                                 {"k_hi", pred.unstable_k_range->second}};
    }
    return j;
}

void write_report(const std::filesystem::path& path, const RunConfig& cfg,
                  const std::string& command, const OrderedJson& results) {
    OrderedJson j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = command;
    j["config"] = config_to_json(cfg);
    j["results"] = results;
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << "\n";
    if (!out) {
        raise(ErrorCategory::io, "write failure: " + path.string());
    }
}

}  // namespace accstab
