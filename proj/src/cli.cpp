#include "spinsq/cli.hpp"

#include "spinsq/efftwo.hpp"
#include "spinsq/lambda3.hpp"
#include "spinsq/noise.hpp"
#include "spinsq/spinframe.hpp"

#include "CLI11.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace spinsq {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kModels{"three-level", "effective", "corrected", "adiabatic"};
const std::vector<std::string> kStudies{"steady",    "bistability", "variance", "spectrum",
                                        "decompose", "optimize",    "transfer", "validate"};
const std::vector<std::string> kTargets{"table1", "table2", "fig2", "fig3", "fig4",
                                        "fig5",   "fig6",   "fig7", "fig8"};

bool one_of(const std::string& s, const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "|") + x;
    return s;
}

json to_json(const EffectiveParams& p) {
    return {{"Ctilde", p.Ctilde}, {"delta_bar", p.delta_bar}, {"delta_c", p.delta_c},
            {"rho", p.rho},       {"lambda1", p.lambda1},     {"lambda2", p.lambda2},
            {"N", p.N},           {"tau", p.tau},             {"Gamma_p_ratio", p.Gamma_p_ratio},
            {"r", p.squeeze.r},   {"theta", p.squeeze.theta}};
}

json to_json(const ThreeLevelParams& p) {
    return {{"gamma", p.gamma},   {"gamma0", p.gamma0},     {"Lambda1", p.Lambda1},
            {"Lambda2", p.Lambda2}, {"N", p.N},             {"g", p.g},
            {"Omega1", {p.Omega1.real(), p.Omega1.imag()}}, {"Delta1", p.Delta1},
            {"Delta2", p.Delta2}, {"Delta_c", p.Delta_c},   {"kappa", p.kappa},
            {"tau", p.tau},       {"A_in", {p.A_in.real(), p.A_in.imag()}},
            {"r", p.squeeze.r},   {"theta", p.squeeze.theta}};
}

json tolerances(double residual_tol) {
    const LyapunovOptions lo;
    const QuadratureOptions qo;
    return {{"lyapunov_residual", residual_tol},
            {"singular", lo.singular_tol},
            {"quadrature_rel", qo.rel_tol},
            {"steady_state", 1e-12}};
}

double default_I2(const EffectiveParams& p) {
    const double s = assign_scale(p);
    return 0.25 * (s * s + p.delta_bar * p.delta_bar);
}

double resolved_I2(const RunConfig& c) { return c.I2 ? *c.I2 : default_I2(c.effective); }

Table make_table(std::string name, std::vector<std::string> cols) {
    Table t;
    t.name = std::move(name);
    t.columns = std::move(cols);
    return t;
}

struct TwoLevelRun {
    SteadyState2L ss;
    FluctuationSystem sys;
};

TwoLevelRun two_level_system(const RunConfig& c, Artifacts& a) {
    const EffectiveParams& p = c.effective;
    const double I2 = resolved_I2(c);
    TwoLevelRun r;
    if (c.model == "corrected") {
        if (p.Gamma_p_ratio <= 0.0) throw ConfigError("the corrected model needs Gamma_p_ratio > 0");
        r.ss = corrected_steady_state(p, I2, c.omega_ratio);
        r.sys = fluctuation_system_5(p, r.ss);
        return r;
    }
    if (p.Gamma_p_ratio > 0.0) throw ConfigError("Gamma_p_ratio > 0 requires --model corrected");
    r.ss = steady_state(p, I2);
    if (c.model == "adiabatic") {
        const AdiabaticDrift ad = adiabatic_drift(p, r.ss);
        if (!ad.regime_ok) {
            if (c.strict) throw RegimeViolation(ad.warning);
            a.warnings.push_back(ad.warning);
        }
        r.sys = adiabatic_system(p, r.ss);
    } else {
        r.sys = fluctuation_system_5(p, r.ss);
    }
    return r;
}

std::vector<std::pair<SteadyState3L, FluctuationSystem>> three_level_systems(const RunConfig& c) {
    std::vector<std::pair<SteadyState3L, FluctuationSystem>> out;
    for (const SteadyState3L& s : steady_state_3l(*c.three_level)) out.emplace_back(s, fluctuation_system_10(*c.three_level, s));
    return out;
}

std::vector<std::string> variance_cells(const FluctuationSystem& sys, double residual_tol, std::string& status) {
    LyapunovOptions lo;
    lo.residual_tol = residual_tol;
    const double margin = stability_margin(sys.B);
    try {
        const CovarianceMatrix cov = solve_lyapunov(sys, lo);
        const SqueezingReport r = squeezing_report(sys, cov.G);
        status = "ok";
        return {format_number(r.dS_min), format_number(r.dS_max), format_number(r.theta),
                format_number(r.phi),    format_number(r.alpha0), format_number(cov.residual),
                format_number(margin)};
    } catch (const InstabilityError&) {
        status = "unstable";
    } catch (const SingularityError&) {
        status = "singular";
    }
    const std::string n = format_number(kNaN);
    return {n, n, n, n, n, n, format_number(margin)};
}

void study_steady(const RunConfig& c, Artifacts& a) {
    if (c.model == "three-level") {
        Table t = make_table("steady", {"branch", "a_abs", "A_in_abs", "Pr_re", "Pr_im", "Pi1", "Pi2", "Pi3",
                                        "residual", "stability_margin"});
        for (const auto& [s, sys] : three_level_systems(c))
            t.add_cells({s.branch, format_number(std::abs(s.a)), format_number(std::abs(s.A_in)),
                         format_number(s.Pr.real()), format_number(s.Pr.imag()), format_number(s.Pi1),
                         format_number(s.Pi2), format_number(s.Pi3), format_number(s.residual),
                         format_number(stability_margin(sys.B))});
        a.tables.push_back(t);
        return;
    }
    const TwoLevelRun r = two_level_system(c, a);
    Table t = make_table("steady", {"I2", "I2_in", "s_plus_re", "s_plus_im", "s_z", "beta2", "stability_margin"});
    const double I2_in = c.model == "corrected" ? kNaN : input_intensity(c.effective, r.ss.I2);
    t.add({r.ss.I2, I2_in, r.ss.s_plus.real(), r.ss.s_plus.imag(), r.ss.s_z, r.ss.beta2, stability_margin(r.sys.B)});
    a.tables.push_back(t);
}

const std::vector<std::string> kVarianceCols{"dS_min", "dS_max", "theta", "phi", "alpha0", "residual",
                                             "stability_margin"};

void study_variance(const RunConfig& c, Artifacts& a) {
    // I2 for the effective models, |a|^2 for the three-level model
    std::vector<std::string> cols{"branch", "intensity"};
    cols.insert(cols.end(), kVarianceCols.begin(), kVarianceCols.end());
    cols.push_back("status");
    Table t = make_table("variance", cols);
    auto row = [&](const std::string& branch, double I2, const FluctuationSystem& sys) {
        std::string status;
        std::vector<std::string> cells{branch, format_number(I2)};
        for (auto& x : variance_cells(sys, c.residual_tol, status)) cells.push_back(x);
        cells.push_back(status);
        t.add_cells(cells);
    };
    if (c.model == "three-level") {
        for (const auto& [s, sys] : three_level_systems(c)) row(s.branch, std::norm(s.a), sys);
    } else {
        const TwoLevelRun r = two_level_system(c, a);
        row(r.ss.branch, r.ss.I2, r.sys);
    }
    a.tables.push_back(t);
}

FluctuationSystem first_stable(const RunConfig& c, Artifacts& a) {
    if (c.model != "three-level") return two_level_system(c, a).sys;
    for (const auto& [s, sys] : three_level_systems(c))
        if (stability_margin(sys.B) > 0.0) return sys;
    throw InstabilityError("no stable three-level branch at these parameters", {});
}

void study_spectrum(const RunConfig& c, Artifacts& a) {
    if (c.model == "adiabatic") throw ConfigError("the adiabatic model has no field mode; use effective");
    const FluctuationSystem sys = first_stable(c, a);
    check_stability(sys.B);
    const OutgoingSpectrum o = outgoing_spectrum(sys, linspace(0.0, c.omega_max, c.n_omega));
    Table t = make_table("spectrum", {"omega", "s_min", "s_max"});
    for (std::size_t i = 0; i < o.omega.size(); ++i) t.add({o.omega[i], o.s_min[i], o.s_max[i]});
    a.tables.push_back(t);
    a.plots.push_back({"spectrum", "omega", "s_min"});
    a.plots.push_back({"spectrum", "omega", "s_max"});
    if (c.model == "effective") {
        const SpectrumStudy s = outgoing_study(c.effective, resolved_I2(c), c.omega_max, c.n_omega);
        Table m = make_table("spectrum_summary", {"min", "omega_at_min", "half_depth_lo", "half_depth_hi",
                                                  "band_width", "below_one_lo", "below_one_hi", "gamma_prime"});
        m.add({s.min_value, s.omega_at_min, s.half_depth_lo, s.half_depth_hi, s.band_width, s.below_one_lo,
               s.below_one_hi, s.gamma_prime});
        a.tables.push_back(m);
    }
}

void decomposition_tables(const FluctuationSystem& sys, double omega_max, int n, Artifacts& a,
                          const std::string& prefix = "") {
    const Decomposition d = decompose(sys);
    Table t = make_table(prefix + "decompose", {"dS_min", "dS_f", "dS_atomic", "ratio_percent"});
    t.add({d.dS_min, d.dS_f, d.dS_atomic, 100.0 * d.ratio});
    a.tables.push_back(t);
    const auto w = linspace(0.0, omega_max, n);
    const auto tot = spin_quadrature_spectrum(sys, sys.D, w, d.report.alpha0);
    const auto fld = spin_quadrature_spectrum(sys, sys.diffusion_of(Source::field), w, d.report.alpha0);
    const auto atm = spin_quadrature_spectrum(sys, sys.diffusion_of(Source::atomic), w, d.report.alpha0);
    Table s = make_table(prefix + "spin_spectrum", {"omega", "total", "field", "atomic"});
    for (std::size_t i = 0; i < w.size(); ++i) s.add({w[i], tot[i], fld[i], atm[i]});
    a.tables.push_back(s);
    for (const char* y : {"total", "field", "atomic"}) a.plots.push_back({s.name, "omega", y});
}

void study_decompose(const RunConfig& c, Artifacts& a) {
    const FluctuationSystem sys = first_stable(c, a);
    if (!sys.has_field()) throw ConfigError("decomposition needs a model with an explicit field mode");
    decomposition_tables(sys, c.omega_max, c.n_omega, a);
}

void study_optimize(const RunConfig& c, Artifacts& a) {
    if (c.model != "effective") throw ConfigError("optimize works on the effective model");
    const EffectiveParams& p = c.effective;
    const OptimizerResult r = optimize_squeezing(p.Ctilde, p.delta_bar, p.rho);
    Table t = make_table("optimize", {"Ctilde", "delta_tilde", "delta_c", "I2", "dS_min", "stability_margin"});
    t.add({p.Ctilde, p.delta_bar, r.delta_c, r.I2, r.dS_min, r.stability_margin});
    a.tables.push_back(t);
    Table tr = make_table("optimize_trace", {"delta_c", "I2", "dS_min"});
    for (const auto& e : r.trace) tr.add({e[0], e[1], e[2]});
    a.tables.push_back(tr);
}

void study_transfer(const RunConfig& c, Artifacts& a) {
    if (c.model != "effective") throw ConfigError("transfer works on the effective model");
    const EffectiveParams& p = c.effective;
    Table t = make_table("transfer", {"Ctilde", "rho", "r", "dS_closed_form", "dS_lyapunov", "eta"});
    t.add({p.Ctilde, p.rho, p.squeeze.r, transfer_variance(p.Ctilde, p.rho, p.squeeze.r),
           transfer_variance_lyapunov(p.Ctilde, p.rho, p.squeeze.r, p.squeeze.theta),
           transfer_efficiency(p.Ctilde, p.rho)});
    a.tables.push_back(t);
}

void study_bistability(const RunConfig& c, Artifacts& a) {
    if (c.model != "effective") throw ConfigError("bistability works on the effective model");
    const EffectiveParams& p = c.effective;
    const auto tp = turning_points(p);
    const double top = c.I2_max ? *c.I2_max : 2.0 * std::max(tp.empty() ? 0.0 : tp.back(), 1.0 + p.delta_bar * p.delta_bar);
    const BistabilityCurve b = bistability_curve(p, linspace(0.0, top, c.n_points));
    Table t = make_table("bistability", {"I2_in", "I2"});
    for (std::size_t i = 0; i < b.I2.size(); ++i) t.add({b.I2_in[i], b.I2[i]});
    a.tables.push_back(t);
    a.plots.push_back({"bistability", "I2_in", "I2"});
    Table u = make_table("turning_points", {"I2", "I2_in"});
    for (double x : b.turning_points) u.add({x, input_intensity(p, x)});
    a.tables.push_back(u);
}

void validation_tables(const ValidationResult& v, Artifacts& a, const std::string& name) {
    Table t = make_table(name, {"delta_tilde", "delta_bar_two_level", "I2", "dS_two_level", "dS_three_level",
                                "omega2_over_omega1", "s_plus_two_level", "s_plus_three_level"});
    for (const auto& p : v.points)
        t.add({p.delta_tilde, p.delta_bar2, p.I2, p.dS_two, p.dS_three, p.omega_ratio, p.s_plus_two, p.s_plus_three});
    a.tables.push_back(t);
    a.plots.push_back({name, "delta_tilde", "dS_two_level"});
    a.plots.push_back({name, "delta_tilde", "dS_three_level"});
    Table s = make_table(name + "_summary", {"Gamma_p_over_gamma0", "Ctilde_two_level", "max_discrepancy",
                                             "min_two_level", "min_three_level", "n_unstable"});
    s.add({v.options.Gamma_p_over_gamma0, v.Ctilde_two_level, v.max_discrepancy, v.min_two, v.min_three,
           static_cast<double>(v.n_unstable)});
    a.tables.push_back(s);
}

json validation_json(const ValidationOptions& o) {
    return {{"regime", o.regime == Regime::open ? "open" : "closed"},
            {"gamma", o.gamma},
            {"Delta", o.Delta},
            {"Omega1", o.Omega1},
            {"C", o.C},
            {"kappa", o.kappa},
            {"N", o.N},
            {"Gamma_p_over_gamma0", o.Gamma_p_over_gamma0},
            {"delta_c", o.delta_c},
            {"delta_tilde_max", o.delta_tilde_max},
            {"n_points", o.n_points},
            {"operating_line", "4 I2 = (1 + Gamma_p/gamma0)^2 + delta_tilde^2"}};
}

void study_validate(const RunConfig& c, Artifacts& a) {
    ValidationOptions o = default_validation(c.regime == "closed" ? Regime::closed : Regime::open);
    if (c.regime == "closed" && c.effective.Gamma_p_ratio > 0.0) {
        o.Gamma_p_over_gamma0 = c.effective.Gamma_p_ratio;
        o.delta_tilde_max = 20.0 * (1.0 + o.Gamma_p_over_gamma0);
    }
    a.manifest["validation"] = validation_json(o);
    validation_tables(validate_models(o), a, "validate");
}

}  // namespace

void RunConfig::validate() const {
    if (!one_of(model, kModels)) throw ConfigError("unknown model '" + model + "' (" + joined(kModels) + ")");
    if (!one_of(study, kStudies)) throw ConfigError("unknown study '" + study + "' (" + joined(kStudies) + ")");
    if (model == "three-level") {
        if (!three_level) throw ConfigError("the three-level model needs a [three_level] config section");
        if (study != "steady" && study != "variance" && study != "spectrum" && study != "decompose")
            throw ConfigError("study '" + study + "' is not available for the three-level model");
        three_level->validate();
    } else if (study != "validate") {
        effective.validate();
    }
    if (regime != "open" && regime != "closed") throw ConfigError("regime must be open or closed");
    if (n_omega < 2 || n_points < 2) throw ConfigError("grids need at least two points");
    if (!(omega_max > 0.0)) throw ConfigError("omega_max must be positive");
    if (I2 && !(*I2 >= 0.0)) throw ConfigError("I2 must be non-negative");
}

RunConfig config_from_file(const std::filesystem::path& ini) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(ini.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    RunConfig c;
    pt::ptree params;
    for (const auto& [key, sub] : tree) {
        if (key == "effective" || key == "three_level") {
            params.add_child(key, sub);
        } else if (key != "run") {
            throw ConfigError("unknown config section [" + key + "]");
        }
    }
    if (auto run = tree.get_child_optional("run")) {
        try {
            for (const auto& [key, v] : *run) {
                if (key == "model") c.model = v.get_value<std::string>();
                else if (key == "study") c.study = v.get_value<std::string>();
                else if (key == "I2") c.I2 = v.get_value<double>();
                else if (key == "omega_ratio") c.omega_ratio = v.get_value<double>();
                else if (key == "omega_max") c.omega_max = v.get_value<double>();
                else if (key == "n_omega") c.n_omega = v.get_value<int>();
                else if (key == "I2_max") c.I2_max = v.get_value<double>();
                else if (key == "n_points") c.n_points = v.get_value<int>();
                else if (key == "regime") c.regime = v.get_value<std::string>();
                else if (key == "residual_tol") c.residual_tol = v.get_value<double>();
                else if (key == "strict") c.strict = v.get_value<bool>();
                else if (key == "out") c.out = v.get_value<std::string>();
                else throw ConfigError("unknown key '" + key + "' in [run]");
            }
        } catch (const pt::ptree_bad_data& e) {
            throw ConfigError(std::string("bad value in [run]: ") + e.what());
        }
    }
    if (!params.empty()) {
        const ParamSet ps = params_from_tree(params);
        if (const auto* e = std::get_if<EffectiveParams>(&ps)) {
            c.effective = *e;
        } else {
            c.three_level = std::get<ThreeLevelParams>(ps);
            if (!tree.get_optional<std::string>("run.model")) c.model = "three-level";
        }
    }
    return c;
}

Artifacts execute(const RunConfig& c) {
    c.validate();
    Artifacts a;
    a.manifest = {{"tool", "spinsq"},
                  {"version", kVersion},
                  {"model", c.model},
                  {"study", c.study},
                  {"omega_max", c.omega_max},
                  {"n_omega", c.n_omega},
                  {"n_points", c.n_points},
                  {"regime", c.regime},
                  {"strict", c.strict},
                  {"omega_ratio", c.omega_ratio},
                  {"tolerances", tolerances(c.residual_tol)}};
    if (c.model == "three-level") {
        a.manifest["three_level"] = to_json(*c.three_level);
    } else {
        a.manifest["effective"] = to_json(c.effective);
        a.manifest["I2"] = resolved_I2(c);
        if (!c.I2) a.manifest["I2_rule"] = "4 I2 = (1 + Gamma_p_ratio)^2 + delta_bar^2";
        if (c.I2_max) a.manifest["I2_max"] = *c.I2_max;
    }
    if (c.study == "steady") study_steady(c, a);
    else if (c.study == "variance") study_variance(c, a);
    else if (c.study == "spectrum") study_spectrum(c, a);
    else if (c.study == "decompose") study_decompose(c, a);
    else if (c.study == "optimize") study_optimize(c, a);
    else if (c.study == "transfer") study_transfer(c, a);
    else if (c.study == "bistability") study_bistability(c, a);
    else study_validate(c, a);
    a.manifest["warnings"] = a.warnings;
    return a;
}

namespace {

Artifacts reproduce_table1() {
    Artifacts a;
    Table t = make_table("table1", {"delta_tilde", "delta_c", "I2", "dS_min", "reference_delta_c", "reference_I2",
                                    "reference_dS_min", "dS_at_reference_point"});
    const double dt[] = {0, 5, 10, 15, 20};
    const double pdc[] = {0, -0.2, 0, -0.4, -0.2};
    const double pI2[] = {0.25, 6.5, 25.2, 56.5, 100};
    const double pdS[] = {0.713, 0.716, 0.72, 0.72, 0.728};
    for (int i = 0; i < 5; ++i) {
        const OptimizerResult r = optimize_squeezing(100.0, dt[i]);
        double at = kNaN;
        try {
            at = evaluate_point(effective(100.0, dt[i], pdc[i]), pI2[i]).dS_min;
        } catch (const NumericalError&) {
        }
        t.add({dt[i], r.delta_c, r.I2, r.dS_min, pdc[i], pI2[i], pdS[i], at});
    }
    a.tables.push_back(t);
    a.manifest = {{"Ctilde", 100}, {"rho", 1.0 / 2000.0}, {"optimizer", {{"dc_step", 0.05}, {"n_I2", 61}}}};
    return a;
}

Artifacts reproduce_table2(bool spectra) {
    Artifacts a;
    Table t = make_table("table2", {"delta_bar", "delta_c", "I2", "dS_min", "dS_f", "dS_atomic", "ratio_percent",
                                    "status"});
    for (double dc : {-0.2, 0.2}) {
        const EffectiveParams p = effective(100.0, 12.0, dc);
        const SteadyState2L ss = steady_state(p, 40.0);
        const FluctuationSystem sys = fluctuation_system_5(p, ss);
        std::vector<std::string> cells{format_number(12.0), format_number(dc), format_number(40.0)};
        try {
            const Decomposition d = decompose(sys);
            for (double v : {d.dS_min, d.dS_f, d.dS_atomic, 100.0 * d.ratio}) cells.push_back(format_number(v));
            cells.push_back(dc < 0 ? "reference" : "mirror");
            if (spectra) decomposition_tables(sys, 400.0, 801, a, "fig4_");
        } catch (const InstabilityError&) {
            for (int k = 0; k < 4; ++k) cells.push_back(format_number(kNaN));
            cells.push_back("unstable");
        }
        t.add_cells(cells);
    }
    if (!spectra) a.tables.push_back(t);
    a.manifest = {{"Ctilde", 100}, {"rho", 1.0 / 2000.0}, {"delta_bar", 12}, {"I2", 40},
                  {"note", "reference delta_c = -0.2 is unstable; delta_c = +0.2 evaluated alongside"}};
    return a;
}

Artifacts reproduce_fig2() {
    Artifacts a;
    std::vector<double> Cs;
    for (int k = 0; k <= 50; ++k) Cs.push_back(std::pow(10.0, 5.0 * k / 50.0));
    const auto full = squeezing_vs_cooperativity(10.0, 0.0, 25.2, Cs, ModelKind::full);
    const auto ad = squeezing_vs_cooperativity(10.0, 0.0, 25.25, Cs, ModelKind::adiabatic);
    Table t = make_table("fig2", {"Ctilde", "dS_min", "dS_min_adiabatic_max_coherence"});
    for (std::size_t i = 0; i < Cs.size(); ++i) t.add({Cs[i], full[i].y, ad[i].y});
    a.tables.push_back(t);
    a.plots.push_back({"fig2", "Ctilde", "dS_min"});
    a.manifest = {{"delta_tilde", 10}, {"delta_c", 0}, {"I2", 25.2}, {"I2_adiabatic", 25.25}, {"rho", 1.0 / 2000.0}};
    return a;
}

Artifacts reproduce_fig3() {
    Artifacts a;
    const SpectrumStudy s = outgoing_study(effective(100.0, 10.0, 0.0), 25.2, 400.0, 2001);
    Table t = make_table("fig3", {"omega", "s_min", "s_max"});
    for (std::size_t i = 0; i < s.omega.size(); ++i) t.add({s.omega[i], s.s_min[i], s.s_max[i]});
    a.tables.push_back(t);
    a.plots.push_back({"fig3", "omega", "s_min"});
    a.plots.push_back({"fig3", "omega", "s_max"});
    Table m = make_table("fig3_summary", {"min", "omega_at_min", "half_depth_lo", "half_depth_hi", "band_width",
                                          "below_one_lo", "below_one_hi", "gamma_prime"});
    m.add({s.min_value, s.omega_at_min, s.half_depth_lo, s.half_depth_hi, s.band_width, s.below_one_lo,
           s.below_one_hi, s.gamma_prime});
    a.tables.push_back(m);
    a.manifest = {{"Ctilde", 100}, {"delta_tilde", 10}, {"delta_c", 0}, {"I2", 25.2}, {"rho", 1.0 / 2000.0}};
    return a;
}

Artifacts reproduce_fig5() {
    Artifacts a;
    Table t = make_table("fig5", {"R_in", "dS_min_rho_1_2000", "dS_min_rho_1_2"});
    for (double R : linspace(0.0, 0.99, 100)) {
        const double r = -0.5 * std::log(1.0 - R);
        t.add({R, transfer_variance(100.0, 1.0 / 2000.0, r), transfer_variance(100.0, 0.5, r)});
    }
    a.tables.push_back(t);
    a.plots.push_back({"fig5", "R_in", "dS_min_rho_1_2000"});
    a.plots.push_back({"fig5", "R_in", "dS_min_rho_1_2"});
    a.manifest = {{"Ctilde", 100}, {"rho", {1.0 / 2000.0, 0.5}}};
    return a;
}

Artifacts reproduce_fig6() {
    Artifacts a;
    Table t = make_table("fig6", {"Ctilde", "eta_rho_1_2000", "eta_rho_1_2"});
    for (int k = 0; k <= 60; ++k) {
        const double C = std::pow(10.0, -1.0 + 4.0 * k / 60.0);
        t.add({C, transfer_efficiency(C, 1.0 / 2000.0), transfer_efficiency(C, 0.5)});
    }
    a.tables.push_back(t);
    a.plots.push_back({"fig6", "Ctilde", "eta_rho_1_2000"});
    a.plots.push_back({"fig6", "Ctilde", "eta_rho_1_2"});
    a.manifest = {{"rho", {1.0 / 2000.0, 0.5}}};
    return a;
}

Artifacts reproduce_validation(Regime r, const std::string& name) {
    Artifacts a;
    const ValidationOptions o = default_validation(r);
    validation_tables(validate_models(o), a, name);
    a.manifest = {{"validation", validation_json(o)}};
    return a;
}

}  // namespace

Artifacts reproduce(const std::string& target) {
    if (!one_of(target, kTargets)) throw ConfigError("unknown target '" + target + "' (" + joined(kTargets) + ")");
    Artifacts a;
    if (target == "table1") a = reproduce_table1();
    else if (target == "table2") a = reproduce_table2(false);
    else if (target == "fig2") a = reproduce_fig2();
    else if (target == "fig3") a = reproduce_fig3();
    else if (target == "fig4") a = reproduce_table2(true);
    else if (target == "fig5") a = reproduce_fig5();
    else if (target == "fig6") a = reproduce_fig6();
    else if (target == "fig7") a = reproduce_validation(Regime::open, "fig7");
    else a = reproduce_validation(Regime::closed, "fig8");
    a.manifest["tool"] = "spinsq";
    a.manifest["version"] = kVersion;
    a.manifest["reproduce"] = target;
    a.manifest["tolerances"] = tolerances(1e-10);
    return a;
}

std::filesystem::path default_output_root() {
    if (const char* e = std::getenv("SPINSQ_OUT_ROOT"); e && *e) return e;
    return "spinsq-out";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spin squeezing of Lambda atoms in a cavity: steady states, covariances, spectra"};
    app.name("spinsq");
    std::string command, target, config, model, study, regime, out_dir;
    std::optional<double> Ctilde, delta_tilde, delta_c, I2, rho, r, theta, omega_max, Gamma_p_ratio, omega_ratio,
        lambda1, N, tau, I2_max;
    std::optional<int> n_omega;
    bool strict = false;
    app.add_option("command", command, "study (" + joined(kStudies) + ") or 'reproduce'");
    app.add_option("target", target, "reproduce target (" + joined(kTargets) + ")");
    app.add_option("--config", config, "INI file with [run] and [effective] or [three_level]");
    app.add_option("--model", model, joined(kModels));
    app.add_option("--study", study, joined(kStudies));
    app.add_option("--Ctilde", Ctilde);
    app.add_option("--delta-tilde", delta_tilde, "effective detuning in units of gamma0");
    app.add_option("--delta-c", delta_c, "cavity detuning in units of kappa");
    app.add_option("--I2", I2, "intracavity intensity (default: maximal coherence)");
    app.add_option("--rho", rho, "gamma0 / kappa");
    app.add_option("--r", r, "input squeezing parameter");
    app.add_option("--theta", theta, "input squeezing phase");
    app.add_option("--lambda1", lambda1);
    app.add_option("--N", N);
    app.add_option("--tau", tau);
    app.add_option("--Gamma-p-ratio", Gamma_p_ratio, "Gamma_p / gamma0 (corrected model)");
    app.add_option("--omega-ratio", omega_ratio, "Omega2 / Omega1 (corrected model)");
    app.add_option("--omega-max", omega_max);
    app.add_option("--n-omega", n_omega);
    app.add_option("--I2-max", I2_max);
    app.add_option("--regime", regime, "open|closed (validate)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--strict", strict, "treat regime warnings as errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return ExitCode::usage_or_config;
    }

    if (command.empty() && study.empty() && config.empty()) {
        err << app.help();
        return ExitCode::usage_or_config;
    }

    try {
        Artifacts a;
        std::string label;
        std::filesystem::path dir = out_dir;
        if (command == "reproduce") {
            if (target.empty()) throw ConfigError("reproduce needs a target (" + joined(kTargets) + ")");
            a = reproduce(target);
            label = target;
        } else {
            if (!target.empty()) throw ConfigError("unexpected argument '" + target + "'");
            RunConfig c = config.empty() ? RunConfig{} : config_from_file(config);
            if (!command.empty()) c.study = command;
            if (!study.empty()) {
                if (!command.empty() && study != command) throw ConfigError("study given twice with different values");
                c.study = study;
            }
            if (!model.empty()) c.model = model;
            if (!regime.empty()) c.regime = regime;
            EffectiveParams& p = c.effective;
            if (Ctilde) p.Ctilde = *Ctilde;
            if (delta_tilde) p.delta_bar = *delta_tilde;
            if (delta_c) p.delta_c = *delta_c;
            if (rho) p.rho = *rho;
            if (r) p.squeeze.r = *r;
            if (theta) p.squeeze.theta = *theta;
            if (lambda1) {
                p.lambda1 = *lambda1;
                p.lambda2 = 1.0 - *lambda1;
            }
            if (N) p.N = *N;
            if (tau) p.tau = *tau;
            if (Gamma_p_ratio) p.Gamma_p_ratio = *Gamma_p_ratio;
            if (omega_ratio) c.omega_ratio = *omega_ratio;
            if (I2) c.I2 = *I2;
            if (I2_max) c.I2_max = *I2_max;
            if (omega_max) c.omega_max = *omega_max;
            if (n_omega) c.n_omega = *n_omega;
            if (strict) c.strict = true;
            if (c.study.empty()) throw ConfigError("no study given (" + joined(kStudies) + ")");
            if (dir.empty()) dir = c.out;
            a = execute(c);
            label = c.study;
        }
        if (dir.empty()) dir = default_output_root() / label;
        const auto files = write_artifacts(dir, a);
        for (const auto& w : a.warnings) err << "warning: " << w << '\n';
        if (!a.tables.empty()) write_csv(out, a.tables.front(), manifest_hash(a.manifest));
        for (const auto& f : files) err << "wrote " << f.string() << '\n';
        return ExitCode::ok;
    } catch (const RegimeViolation& e) {
        err << "error[regime]: " << e.what() << '\n';
        return ExitCode::regime;
    } catch (const ConfigError& e) {
        err << "error[config]: " << e.what() << '\n';
        return ExitCode::usage_or_config;
    } catch (const NumericalError& e) {
        err << "error[numerical]: " << e.what() << '\n';
        return ExitCode::numerical;
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace spinsq
