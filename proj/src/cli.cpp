#include "lcoguard/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lcoguard/continuation.hpp"
#include "lcoguard/hopf_normal_form.hpp"
#include "lcoguard/io.hpp"
#include "lcoguard/lco_estimate.hpp"
#include "lcoguard/linear_stability.hpp"
#include "lcoguard/nes_benchmark.hpp"
#include "lcoguard/parallel.hpp"

namespace lcoguard {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kSystemKeys{"eps", "mu1", "mu2", "gamma", "alpha3", "beta2", "beta3", "beta5", "lambda"};

json continuation_defaults() {
    return {{"mu1_min", -0.02}, {"mu1_max", 0.25},   {"amplitude_max", 10.0},
            {"ds_max", 0.08},   {"max_points", 2000}, {"seed_amplitude", 0.01}};
}

std::string dashed(std::string key) {
    for (auto& c : key)
        if (c == '_') c = '-';
    return key;
}

void check_type(const std::string& key, const json& def, const json& value) {
    if (def.is_number_integer()) {
        if (!value.is_number_integer()) throw DomainError(key, "expected an integer");
    } else if (def.is_number()) {
        if (!value.is_number()) throw DomainError(key, "expected a number");
    } else if (def.is_string()) {
        if (!value.is_string()) throw DomainError(key, "expected a string");
    } else if (def.is_array()) {
        if (!value.is_array()) throw DomainError(key, "expected an array of numbers");
        for (const auto& e : value)
            if (!e.is_number()) throw DomainError(key, "expected an array of numbers");
    }
}

double num(const json& p, const char* key) { return p.at(key).get<double>(); }
long long integer(const json& p, const char* key) { return p.at(key).get<long long>(); }

void require_count(const json& p, const char* key, long long min) {
    if (integer(p, key) < min) throw DomainError(key, "must be at least " + std::to_string(min));
}

Axis axis(const json& p, const std::string& prefix) {
    const Axis a{num(p, (prefix + "_min").c_str()), num(p, (prefix + "_max").c_str()),
                 static_cast<int>(integer(p, (prefix + "_count").c_str()))};
    if (a.count < 1) throw DomainError(prefix + "_count", "must be at least 1");
    if (a.max < a.min) throw DomainError(prefix + "_max", "must not be below " + prefix + "_min");
    return a;
}

void validate_params(const std::string& command, const json& p) {
    if (command == "stability-chart") {
        axis(p, "mu1");
        axis(p, "mu2");
        axis(p, "gamma");
    } else if (command == "iso-amplitude") {
        axis(p, "mu2");
        axis(p, "gamma");
        if (!(num(p, "delta_mu1") > 0.0)) throw DomainError("delta_mu1", "must be positive");
    } else if (command == "probability") {
        require_count(p, "samples", 1);
        if (integer(p, "seed") < 0) throw DomainError("seed", "must be non-negative");
        static const std::set<std::string> rules{"ltva", "nltva", "both"};
        if (!rules.count(p.at("rule").get<std::string>())) throw DomainError("rule", "must be ltva, nltva or both");
    } else if (command == "bifurcate" || command == "similarity") {
        if (!(num(p, "mu1_max") > num(p, "mu1_min"))) throw DomainError("mu1_max", "must exceed mu1_min");
        if (!(num(p, "amplitude_max") > 0.0)) throw DomainError("amplitude_max", "must be positive");
        if (!(num(p, "ds_max") >= 1e-6)) throw DomainError("ds_max", "must be at least 1e-6");
        if (!(num(p, "seed_amplitude") > 0.0)) throw DomainError("seed_amplitude", "must be positive");
        require_count(p, "max_points", 2);
    } else if (command == "simulate") {
        if (p.at("x0").size() != 4) throw DomainError("x0", "expected 4 numbers");
        if (!(num(p, "t_end") > 0.0)) throw DomainError("t_end", "must be positive");
        if (!(num(p, "sample_dt") > 0.0)) throw DomainError("sample_dt", "must be positive");
        const double tol = num(p, "tol");
        if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) throw DomainError("tol", "must lie in [1e-12, 1e-3]");
        const auto absorber = p.at("absorber").get<std::string>();
        if (absorber != "attached" && absorber != "none") throw DomainError("absorber", "must be attached or none");
    } else if (command == "nes-compare") {
        if (!(num(p, "nes_lambda") >= 0.0)) throw DomainError("nes_lambda", "must be non-negative");
        if (!(num(p, "window") > 0.0)) throw DomainError("window", "must be positive");
        if (!(num(p, "max_horizon") >= num(p, "window"))) throw DomainError("max_horizon", "must be >= window");
    }
}

ContinuationOptions continuation_options(const json& p) {
    ContinuationOptions o;
    o.mu1_min = num(p, "mu1_min");
    o.mu1_max = num(p, "mu1_max");
    o.amplitude_max = num(p, "amplitude_max");
    o.ds_max = num(p, "ds_max");
    o.ds_initial = std::min(o.ds_initial, o.ds_max);
    o.max_points = static_cast<int>(integer(p, "max_points"));
    o.seed_amplitude = num(p, "seed_amplitude");
    return o;
}

void require_path(const fs::path& p, const char* flag, const std::string& command) {
    if (p.empty()) throw DomainError(flag, std::string("required for ") + command);
}

void require_linear_absorber(const DimensionlessSystem& sys, const std::string& command) {
    if (sys.is_nes()) throw DomainError("lambda", command + " needs an absorber with linear stiffness");
}

json hopf_json(const HopfPoint& h) {
    return {{"mu1_cr", h.mu1_cr},
            {"omega1", h.omega1},
            {"sigma_slope", h.sigma_slope},
            {"condition_number", h.condition_number},
            {"codimension", to_string(h.codim)}};
}

json critical_alpha3_json(const CriticalAlpha3& c) {
    return {{"alpha3_cr", c.unbounded ? json(nullptr) : json(c.alpha3_cr)},
            {"unbounded", c.unbounded},
            {"positive_limit", c.positive_limit},
            {"negative_limit", c.negative_limit}};
}

std::string branch_summary(const HopfBranch& hb) {
    std::ostringstream os;
    os << "mu1_cr=" << format_number(hb.hopf.mu1_cr) << " points=" << hb.branch.points.size()
       << " folds=" << hb.branch.count(EventKind::fold)
       << " neimark_sacker=" << hb.branch.count(EventKind::neimark_sacker)
       << " termination=" << to_string(hb.branch.termination);
    return os.str();
}

fs::path events_path_for(const fs::path& branch_path) {
    auto p = branch_path;
    p.replace_filename(branch_path.stem().string() + "_events" + branch_path.extension().string());
    return p;
}

// Command bodies, shared by dispatch and the figure jobs.

json run_tune(const RunConfig& cfg) {
    const double eps = cfg.system.eps;
    const auto t = optimal_tuning(eps);
    const auto ab = points_ab(eps, t.mu2_opt);
    return {{"eps", eps},
            {"gamma_opt", t.gamma_opt},
            {"mu2_opt", t.mu2_opt},
            {"mu1_max", t.mu1_max},
            {"point_a", {{"mu1", ab.a.mu1}, {"gamma", ab.a.gamma}}},
            {"point_b", {{"mu1", ab.b.mu1}, {"gamma", ab.b.gamma}}}};
}

json run_normal_form(const RunConfig& cfg) {
    const auto& sys = cfg.system;
    require_linear_absorber(sys, cfg.command);
    const auto dec = delta_decomposition(sys.eps, sys.mu2, sys.gamma);
    const auto nf = normal_form(sys.with_mu1(dec.hopf.mu1_cr), dec.hopf);
    json d{{"d130", nf.d.d130}, {"d121", nf.d.d121}, {"d112", nf.d.d112}, {"d103", nf.d.d103},
           {"d230", nf.d.d230}, {"d221", nf.d.d221}, {"d212", nf.d.d212}, {"d203", nf.d.d203}};
    return {{"hopf", hopf_json(dec.hopf)},
            {"planar_cubic", d},
            {"delta0", dec.delta0},
            {"delta_alpha", dec.delta_alpha},
            {"delta_beta", dec.delta_beta},
            {"delta", nf.delta},
            {"criticality", to_string(nf.criticality)},
            {"beta3_tuning", beta3_tuning(sys.eps, sys.alpha3)},
            {"critical_alpha3",
             {{"ltva", critical_alpha3_json(critical_alpha3(dec, AbsorberRule::ltva))},
              {"nltva", critical_alpha3_json(critical_alpha3(dec, AbsorberRule::nltva))}}},
            {"warnings", nf.warnings}};
}

std::vector<Row> run_probability(const RunConfig& cfg, const std::string& only_rule = {}) {
    const auto& p = cfg.params;
    const auto rule = only_rule.empty() ? p.at("rule").get<std::string>() : only_rule;
    const auto alphas = p.at("alpha3_values").get<std::vector<double>>();
    const auto rows = supercritical_probabilities(cfg.system.eps, alphas, static_cast<std::size_t>(integer(p, "samples")),
                                                  p.at("seed").get<std::uint64_t>());
    std::vector<Row> out;
    for (const auto& r : rows) {
        if (rule != "both" && rule != to_string(r.rule)) continue;
        out.push_back({format_number(r.alpha3), to_string(r.rule), format_number(r.probability),
                       std::to_string(r.n_samples), std::to_string(r.seed)});
    }
    return out;
}

const std::vector<std::string> kProbabilityColumns{"alpha3", "rule", "probability", "n_samples", "seed"};

Trajectory run_simulate(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const auto x0v = p.at("x0").get<std::vector<double>>();
    const StateVector x0(x0v[0], x0v[1], x0v[2], x0v[3]);
    const VectorField field =
        p.at("absorber") == "none" ? VectorField::primary_only(cfg.system) : VectorField(cfg.system);
    return integrate(field, x0, num(p, "t_end"), num(p, "tol"), num(p, "sample_dt"));
}

ComparisonReport run_nes_compare(const RunConfig& cfg) {
    const auto& p = cfg.params;
    ComparisonOptions o;
    o.nes_Lambda = num(p, "nes_lambda");
    o.nes_beta3 = num(p, "nes_beta3");
    o.window = num(p, "window");
    o.max_horizon = num(p, "max_horizon");
    return compare_time_series(cfg.system.eps, cfg.system.mu1, cfg.system.alpha3, o);
}

SimilarityRow run_similarity_kind(const RunConfig& cfg, AbsorberNonlinearity kind) {
    const auto& p = cfg.params;
    double c = 0.0;
    if (kind == AbsorberNonlinearity::quadratic) c = num(p, "quadratic");
    if (kind == AbsorberNonlinearity::cubic) c = num(p, "cubic");
    if (kind == AbsorberNonlinearity::quintic) c = num(p, "quintic");
    return similarity_study(cfg.system, kind, c, continuation_options(p));
}


Row similarity_row(const SimilarityRow& r) {
    return {to_string(r.kind),        format_number(r.coefficient),      format_number(r.mu1_cr),
            r.supercritical ? "1" : "0", std::to_string(r.folds), std::to_string(r.neimark_sacker),
            format_number(r.max_amplitude)};
}

const std::vector<std::string> kSimilarityColumns{"kind",  "coefficient",    "mu1_cr",       "supercritical",
                                                  "folds", "neimark_sacker", "max_amplitude"};

const std::vector<AbsorberNonlinearity> kAllKinds{AbsorberNonlinearity::linear, AbsorberNonlinearity::quadratic,
                                                  AbsorberNonlinearity::cubic, AbsorberNonlinearity::quintic};

std::vector<SimilarityRow> run_similarity(const RunConfig& cfg) {
    std::vector<SimilarityRow> rows(kAllKinds.size());
    parallel_for(kAllKinds.size(), [&](std::size_t i) { rows[i] = run_similarity_kind(cfg, kAllKinds[i]); });
    return rows;
}

}  // namespace

json RunConfig::effective() const {
    json j = params;
    if (command != "reproduce-figure") j["system"] = system;
    return j;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"tune",      "stability-chart", "normal-form", "probability",
                                                "iso-amplitude", "bifurcate",   "similarity",  "simulate",
                                                "nes-compare",   "reproduce-figure"};
    return names;
}

json command_defaults(const std::string& command) {
    if (command == "tune" || command == "normal-form") return json::object();
    if (command == "stability-chart")
        return {{"mu1_min", 0.0},    {"mu1_max", 0.15},    {"mu1_count", 61},  {"mu2_min", 0.05},
                {"mu2_max", 0.2},    {"mu2_count", 31},    {"gamma_min", 0.85}, {"gamma_max", 1.1},
                {"gamma_count", 51}};
    if (command == "probability")
        return {{"alpha3_values", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
                {"rule", "both"},
                {"samples", 100000},
                {"seed", 1}};
    if (command == "iso-amplitude")
        return {{"delta_mu1", 0.01}, {"mu2_min", 0.06},  {"mu2_max", 0.2},    {"mu2_count", 50},
                {"gamma_min", 0.9},  {"gamma_max", 1.05}, {"gamma_count", 50}};
    if (command == "bifurcate") return continuation_defaults();
    if (command == "similarity") {
        auto d = continuation_defaults();
        d["quadratic"] = 0.05;
        d["cubic"] = 0.0136;
        d["quintic"] = 0.01;
        return d;
    }
    if (command == "simulate")
        return {{"x0", {0.01, 0.0, 0.0, 0.0}}, {"t_end", 1000.0}, {"tol", 1e-10}, {"sample_dt", 0.1},
                {"absorber", "attached"}};
    if (command == "nes-compare")
        return {{"nes_lambda", 1.0}, {"nes_beta3", 0.5333}, {"window", 200.0}, {"max_horizon", 20000.0}};
    if (command == "reproduce-figure") return {{"figure", 10}, {"panel", ""}};
    throw DomainError("command", "unknown command '" + command + "'");
}

RunConfig parse_config(const std::string& command, const json& doc) {
    const json defaults = command_defaults(command);
    if (!doc.is_object()) throw DomainError("config", "expected a JSON object");
    RunConfig cfg;
    cfg.command = command;
    cfg.params = defaults;
    for (const auto& [key, value] : doc.items()) {
        if (key == "system" && command != "reproduce-figure") continue;
        if (!defaults.contains(key)) throw DomainError(key, "unknown key");
        check_type(key, defaults.at(key), value);
        if (defaults.at(key).is_number_float()) cfg.params[key] = value.get<double>();
        else if (defaults.at(key).is_array()) cfg.params[key] = value.get<std::vector<double>>();
        else cfg.params[key] = value;
    }
    if (command != "reproduce-figure") {
        if (!doc.contains("system")) throw DomainError("system", "required key missing");
        cfg.system = doc.at("system").get<DimensionlessSystem>();
        cfg.system.validate();
    }
    validate_params(command, cfg.params);
    return cfg;
}

RunConfig parse_config_text(const std::string& command, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(command, doc);
}

void dispatch(const RunConfig& cfg, const OutputPaths& paths, std::ostream& log) {
    const OutputMeta meta{cfg.command, cfg.effective()};
    const auto& cmd = cfg.command;
    const auto& p = cfg.params;
    if (cmd == "tune") {
        const auto r = run_tune(cfg);
        if (!paths.out.empty()) write_json(paths.out, meta, r);
        log << r.dump(2) << "\n";
    } else if (cmd == "stability-chart") {
        require_path(paths.out, "out", cmd);
        const auto chart = stability_chart(cfg.system.eps, axis(p, "mu1"), axis(p, "mu2"), axis(p, "gamma"));
        write_stability_chart(paths.out, meta, chart);
        std::size_t stable = 0;
        for (const auto& n : chart.nodes) stable += n.stable ? 1 : 0;
        log << chart.nodes.size() << " nodes, " << stable << " stable\n";
        if (!paths.events.empty()) {
            write_double_hopf_locus(paths.events, meta, double_hopf_locus(cfg.system.eps, axis(p, "mu2")));
        }
    } else if (cmd == "normal-form") {
        const auto r = run_normal_form(cfg);
        if (!paths.out.empty()) write_json(paths.out, meta, r);
        log << r.dump(2) << "\n";
    } else if (cmd == "probability") {
        require_path(paths.out, "out", cmd);
        const auto rows = run_probability(cfg);
        write_table(paths.out, meta, kProbabilityColumns, rows);
        for (const auto& r : rows) log << r[0] << " " << r[1] << " " << r[2] << "\n";
    } else if (cmd == "iso-amplitude") {
        require_path(paths.out, "out", cmd);
        const auto cells = iso_amplitude_map(cfg.system.eps, cfg.system.alpha3, cfg.system.beta3, num(p, "delta_mu1"),
                                             axis(p, "mu2"), axis(p, "gamma"));
        write_iso_amplitude(paths.out, meta, cells);
        log << cells.size() << " cells\n";
    } else if (cmd == "bifurcate") {
        require_path(paths.out, "out", cmd);
        const auto hb = branch_from_hopf(cfg.system, continuation_options(p));
        write_branch(paths.out, meta, hb.branch);
        write_events(paths.events.empty() ? events_path_for(paths.out) : paths.events, meta, hb.branch);
        log << branch_summary(hb) << "\n";
        for (const auto& w : hb.branch.warnings) log << "warning: " << w << "\n";
    } else if (cmd == "similarity") {
        require_path(paths.out_dir, "out-dir", cmd);
        const auto rows = run_similarity(cfg);
        std::vector<Row> table;
        for (const auto& r : rows) {
            const std::string kind = to_string(r.kind);
            write_branch(paths.out_dir / (kind + "_branch.csv"), meta, r.branch);
            write_events(paths.out_dir / (kind + "_events.csv"), meta, r.branch);
            table.push_back(similarity_row(r));
            log << kind << ": supercritical=" << r.supercritical << " folds=" << r.folds
                << " neimark_sacker=" << r.neimark_sacker << "\n";
        }
        write_table(paths.out_dir / "summary.csv", meta, kSimilarityColumns, table);
    } else if (cmd == "simulate") {
        require_path(paths.out, "out", cmd);
        const auto tr = run_simulate(cfg);
        write_trajectory(paths.out, meta, tr);
        log << tr.t.size() << " samples\n";
    } else if (cmd == "nes-compare") {
        const auto rep = run_nes_compare(cfg);
        const json r = rep;
        if (!paths.out.empty()) write_json(paths.out, meta, r);
        if (!paths.out_dir.empty())
            for (const auto& c : rep.cases) write_trajectory(paths.out_dir / (c.name + ".csv"), meta, c.trajectory);
        log << r.dump(2) << "\n";
    } else if (cmd == "reproduce-figure") {
        const auto files = reproduce_figure(static_cast<int>(integer(p, "figure")), p.at("panel").get<std::string>(),
                                            paths.out_dir.empty() ? fs::path("figure_" + p.at("figure").dump())
                                                                  : paths.out_dir,
                                            log);
        for (const auto& f : files) log << f.string() << "\n";
    } else {
        throw DomainError("command", "unknown command '" + cmd + "'");
    }
}

// ---------------------------------------------------------------------------
// Canned figure configurations.

namespace {

struct FigureContext {
    int figure;
    std::string panel;
    fs::path dir;
    std::ostream& log;
    std::vector<fs::path> files;

    OutputMeta meta(const json& run) const {
        return {"reproduce-figure", {{"figure", figure}, {"panel", panel}, {"run", run}}};
    }
    fs::path file(const std::string& name) {
        files.push_back(dir / name);
        return files.back();
    }
};

RunConfig canned(const std::string& command, const json& doc) { return parse_config(command, doc); }

json base_system(double mu2, double gamma, double alpha3, double beta3) {
    return {{"eps", 0.05}, {"mu2", mu2}, {"gamma", gamma}, {"alpha3", alpha3}, {"beta3", beta3}};
}

void branch_job(FigureContext& ctx, const std::string& stem, const json& system, json params = json::object()) {
    json doc = params;
    doc["system"] = system;
    const auto cfg = canned("bifurcate", doc);
    const auto hb = branch_from_hopf(cfg.system, continuation_options(cfg.params));
    const auto meta = ctx.meta(cfg.effective());
    write_branch(ctx.file(stem + "_branch.csv"), meta, hb.branch);
    write_events(ctx.file(stem + "_events.csv"), meta, hb.branch);
    ctx.log << stem << ": " << branch_summary(hb) << "\n";
}

void analytic_job(FigureContext& ctx, const std::string& stem, const json& system) {
    auto sys = system.get<DimensionlessSystem>();
    const auto dec = delta_decomposition(sys.eps, sys.mu2, sys.gamma);
    const double d = dec.delta(sys.alpha3, sys.beta3);
    std::vector<Row> rows;
    for (int i = 0; i <= 200; ++i) {
        const double mu1 = dec.hopf.mu1_cr - 0.01 + 0.02 * i / 200.0;
        const auto est = lco_amplitude_local(dec.hopf, d, mu1);
        rows.push_back({format_number(mu1), format_number(est.q1_max), est.valid ? "1" : "0"});
    }
    write_table(ctx.file(stem + "_analytic.csv"), ctx.meta({{"system", system}, {"delta", d}}),
                {"mu1", "q1_max", "valid"}, rows);
}

void section_job(FigureContext& ctx, const std::string& panel, double mu2) {
    const auto cfg = canned("stability-chart", {{"system", {{"eps", 0.05}}},
                                                {"mu1_min", 0.0},
                                                {"mu1_max", 0.2},
                                                {"mu1_count", 201},
                                                {"mu2_min", mu2},
                                                {"mu2_max", mu2},
                                                {"mu2_count", 1},
                                                {"gamma_min", 0.85},
                                                {"gamma_max", 1.1},
                                                {"gamma_count", 126}});
    const auto& p = cfg.params;
    write_stability_chart(ctx.file("section_" + panel + ".csv"), ctx.meta(cfg.effective()),
                          stability_chart(0.05, axis(p, "mu1"), axis(p, "mu2"), axis(p, "gamma")));
    const auto ab = points_ab(0.05, mu2);
    write_json(ctx.file("points_ab_" + panel + ".json"), ctx.meta(cfg.effective()),
               {{"mu2", mu2},
                {"point_a", {{"mu1", ab.a.mu1}, {"gamma", ab.a.gamma}}},
                {"point_b", {{"mu1", ab.b.mu1}, {"gamma", ab.b.gamma}}},
                {"critical_mu1_at_gamma_opt", critical_mu1(0.05, mu2, optimal_tuning(0.05).gamma_opt)}});
}

void critical_alpha3_job(FigureContext& ctx, AbsorberRule rule, bool positive) {
    const double eps = 0.05;
    const Axis mu2{0.05, 0.2, 50}, gamma{0.9, 1.05, 50};
    std::vector<Row> rows;
    for (const auto& r : delta_sweep(eps, mu2, gamma)) {
        DeltaDecomposition dec;
        dec.delta0 = r.delta0;
        dec.delta_alpha = r.delta_alpha;
        dec.delta_beta = r.delta_beta;
        dec.hopf.system.eps = eps;
        const auto c = critical_alpha3(dec, rule);
        rows.push_back({format_number(r.mu2), format_number(r.gamma), format_number(r.mu1_cr),
                        c.unbounded ? "inf" : format_number(c.alpha3_cr), c.unbounded ? "1" : "0",
                        format_number(positive ? c.positive_limit : c.negative_limit)});
    }
    const std::string name = std::string("critical_alpha3_") + to_string(rule) + (positive ? "_positive" : "_negative");
    write_table(ctx.file(name + ".csv"),
                ctx.meta({{"eps", eps}, {"rule", to_string(rule)}, {"mu2", {mu2.min, mu2.max, mu2.count}},
                          {"gamma", {gamma.min, gamma.max, gamma.count}}}),
                {"mu2", "gamma", "mu1_cr", "alpha3_cr", "unbounded", "alpha3_limit"}, rows);
}

bool wants(const FigureContext& ctx, const std::string& panel) { return ctx.panel.empty() || ctx.panel == panel; }

void check_panel(int figure, const std::string& panel, const std::vector<std::string>& allowed) {
    if (panel.empty()) return;
    for (const auto& a : allowed)
        if (a == panel) return;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw DomainError("panel", "figure " + std::to_string(figure) + " has panels: " + (list.empty() ? "none" : list));
}

}  // namespace

const std::vector<int>& supported_figures() {
    static const std::vector<int> figs{2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    return figs;
}

std::vector<fs::path> reproduce_figure(int figure, const std::string& panel, const fs::path& out_dir,
                                       std::ostream& log) {
    FigureContext ctx{figure, panel, out_dir, log, {}};
    const auto tuning = optimal_tuning(0.05);
    switch (figure) {
        case 2: {
            check_panel(figure, panel, {});
            const auto cfg = canned("stability-chart", {{"system", {{"eps", 0.05}}},
                                                        {"mu1_min", 0.0},
                                                        {"mu1_max", 0.15},
                                                        {"mu1_count", 61},
                                                        {"mu2_min", 0.02},
                                                        {"mu2_max", 0.2},
                                                        {"mu2_count", 37},
                                                        {"gamma_min", 0.85},
                                                        {"gamma_max", 1.1},
                                                        {"gamma_count", 51}});
            const auto& p = cfg.params;
            write_stability_chart(ctx.file("chart.csv"), ctx.meta(cfg.effective()),
                                  stability_chart(0.05, axis(p, "mu1"), axis(p, "mu2"), axis(p, "gamma")));
            write_double_hopf_locus(ctx.file("double_hopf_locus.csv"), ctx.meta(cfg.effective()),
                                    double_hopf_locus(0.05, Axis{0.01, tuning.mu2_opt, 50}));
            break;
        }
        case 3:
            check_panel(figure, panel, {"a", "b", "c"});
            if (wants(ctx, "a")) section_job(ctx, "a", 0.07);
            if (wants(ctx, "b")) section_job(ctx, "b", tuning.mu2_opt);
            if (wants(ctx, "c")) section_job(ctx, "c", 0.12);
            break;
        case 5:
        case 6: {
            check_panel(figure, panel, {});
            const Axis mu2 = figure == 5 ? Axis{0.05, 0.2, 31} : Axis{0.12, 0.12, 1};
            const Axis gamma = figure == 5 ? Axis{0.85, 1.1, 51} : Axis{0.85, 1.1, 251};
            write_delta_sweep(ctx.file(figure == 5 ? "delta_sweep.csv" : "delta_mu2_0.12.csv"),
                              ctx.meta({{"eps", 0.05},
                                        {"mu2", {mu2.min, mu2.max, mu2.count}},
                                        {"gamma", {gamma.min, gamma.max, gamma.count}}}),
                              delta_sweep(0.05, mu2, gamma));
            break;
        }
        case 7:
        case 8: {
            const auto rule = figure == 7 ? AbsorberRule::ltva : AbsorberRule::nltva;
            check_panel(figure, panel, figure == 7 ? std::vector<std::string>{"a", "b"}
                                                   : std::vector<std::string>{"a", "b", "iso"});
            if (wants(ctx, "a")) critical_alpha3_job(ctx, rule, true);
            if (wants(ctx, "b")) critical_alpha3_job(ctx, rule, false);
            if (figure == 8 && wants(ctx, "iso")) {
                const auto cfg = canned("iso-amplitude", {{"system", {{"eps", 0.05}, {"alpha3", 0.08}, {"beta3", beta3_tuning(0.05, 0.08)}}},
                                                          {"delta_mu1", 0.01}});
                const auto& p = cfg.params;
                write_iso_amplitude(ctx.file("iso_amplitude.csv"), ctx.meta(cfg.effective()),
                                    iso_amplitude_map(0.05, cfg.system.alpha3, cfg.system.beta3, num(p, "delta_mu1"),
                                                      axis(p, "mu2"), axis(p, "gamma")));
            }
            break;
        }
        case 9: {
            check_panel(figure, panel, {"a", "b"});
            const auto cfg = canned("probability", {{"system", {{"eps", 0.05}}}, {"samples", 20000}, {"seed", 1}});
            if (wants(ctx, "a"))
                write_table(ctx.file("probability_ltva.csv"), ctx.meta(cfg.effective()), kProbabilityColumns,
                            run_probability(cfg, "ltva"));
            if (wants(ctx, "b"))
                write_table(ctx.file("probability_nltva.csv"), ctx.meta(cfg.effective()), kProbabilityColumns,
                            run_probability(cfg, "nltva"));
            break;
        }
        case 10:
        case 11:
        case 12:
        case 13: {
            check_panel(figure, panel, {"a", "b"});
            const double mu2 = figure == 12 ? 0.097 : 0.12;
            const double nltva_beta3 = figure == 13 ? 0.018 : 0.0136;
            for (const auto& [pn, gamma] : {std::pair{std::string("a"), 0.970}, std::pair{std::string("b"), 0.985}}) {
                if (!wants(ctx, pn)) continue;
                std::vector<std::pair<std::string, json>> systems;
                if (figure == 10 || figure == 13) systems.emplace_back("vdp_ltva", base_system(mu2, gamma, 0.0, 0.0));
                systems.emplace_back("vdpd_ltva", base_system(mu2, gamma, 0.3, 0.0));
                systems.emplace_back("vdpd_nltva", base_system(mu2, gamma, 0.3, nltva_beta3));
                for (const auto& [name, sys] : systems) {
                    const std::string stem = pn + "_" + name;
                    if (figure == 10) {
                        const double mu1_cr = critical_mu1(0.05, mu2, gamma);
                        branch_job(ctx, stem, sys,
                                   {{"mu1_min", mu1_cr - 0.02}, {"mu1_max", mu1_cr + 0.02}, {"amplitude_max", 0.8},
                                    {"ds_max", 0.02}});
                        analytic_job(ctx, stem, sys);
                    } else {
                        branch_job(ctx, stem, sys);
                    }
                }
            }
            break;
        }
        case 14: {
            check_panel(figure, panel, {"a", "b"});
            for (const auto& [pn, gamma] : {std::pair{std::string("a"), 0.970}, std::pair{std::string("b"), 0.985}}) {
                if (!wants(ctx, pn)) continue;
                const auto cfg = canned("similarity", {{"system", base_system(0.12, gamma, 0.3, 0.0)}});
                const auto meta = ctx.meta(cfg.effective());
                std::vector<Row> table;
                for (const auto& r : run_similarity(cfg)) {
                    const std::string stem = pn + "_" + to_string(r.kind);
                    write_branch(ctx.file(stem + "_branch.csv"), meta, r.branch);
                    write_events(ctx.file(stem + "_events.csv"), meta, r.branch);
                    table.push_back(similarity_row(r));
                    log << stem << ": supercritical=" << r.supercritical << " folds=" << r.folds << "\n";
                }
                write_table(ctx.file(pn + "_summary.csv"), meta, kSimilarityColumns, table);
            }
            break;
        }
        case 15: {
            check_panel(figure, panel, {"a", "b", "c"});
            const auto cfg = canned("nes-compare", {{"system", {{"eps", 0.05}, {"mu1", 0.025}, {"alpha3", 4.0 / 3.0}}}});
            const auto rep = run_nes_compare(cfg);
            const auto meta = ctx.meta(cfg.effective());
            const std::map<std::string, std::string> panel_of{{"no_absorber", "a"}, {"nes", "b"}, {"nltva", "c"}};
            for (const auto& c : rep.cases)
                if (wants(ctx, panel_of.at(c.name)))
                    write_trajectory(ctx.file(panel_of.at(c.name) + "_" + c.name + ".csv"), meta, c.trajectory);
            write_json(ctx.file("report.json"), meta, json(rep));
            const auto b = nes_boundary(0.05, 0.0, 5.0, 501);
            std::vector<Row> rows;
            for (std::size_t i = 0; i < b.Lambda.size(); ++i)
                rows.push_back({format_number(b.Lambda[i]), format_number(b.mu1_max[i])});
            write_table(ctx.file("nes_boundary.csv"), ctx.meta({{"eps", 0.05}, {"Lambda", {0.0, 5.0, 501}}}),
                        {"Lambda", "mu1_max"}, rows);
            for (const auto& c : rep.cases) log << c.name << ": " << to_string(c.outcome) << "\n";
            break;
        }
        case 16: {
            check_panel(figure, panel, {"a", "b"});
            // Physical units m1 = k1 = 1, m2 = 0.05: Lambda = c2 / 0.05, beta3 = knl2 / 0.05.
            const auto run = [&](const std::string& pn, NesSweep sweep, double fixed, const std::vector<double>& values) {
                const auto results = nes_branches(0.05, 0.3, sweep, fixed, values);
                for (const auto& r : results) {
                    json sys{{"eps", 0.05}, {"alpha3", 0.3}, {"beta3", r.config.beta3_nes}, {"lambda", r.config.Lambda}};
                    const auto cfg = canned("bifurcate", {{"system", sys}});
                    const std::string stem = pn + "_lambda_" + format_number(r.config.Lambda) + "_beta3_" +
                                             format_number(r.config.beta3_nes);
                    const auto meta = ctx.meta(cfg.effective());
                    write_branch(ctx.file(stem + "_branch.csv"), meta, r.branch.branch);
                    write_events(ctx.file(stem + "_events.csv"), meta, r.branch.branch);
                    log << stem << ": " << branch_summary(r.branch) << "\n";
                }
            };
            if (wants(ctx, "a")) run("a", NesSweep::vary_beta3, 1.0, {0.1, 0.2, 0.4, 1.0});
            if (wants(ctx, "b")) run("b", NesSweep::vary_Lambda, 0.2, {0.5, 1.0, 2.0});
            break;
        }
        default:
            throw DomainError("figure", "unsupported figure " + std::to_string(figure));
    }
    return ctx.files;
}

// ---------------------------------------------------------------------------

namespace {

json parse_flag_value(const std::string& key, const json& def, const std::string& text) {
    const auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw DomainError(key, "expected a number, got '" + s + "'");
        }
        if (used != s.size()) throw DomainError(key, "expected a number, got '" + s + "'");
        return v;
    };
    if (def.is_number_integer()) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(text, &used);
        } catch (const std::exception&) {
            throw DomainError(key, "expected an integer, got '" + text + "'");
        }
        if (used != text.size()) throw DomainError(key, "expected an integer, got '" + text + "'");
        return v;
    }
    if (def.is_number()) return to_double(text);
    if (def.is_array()) {
        json arr = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) arr.push_back(to_double(item));
        return arr;
    }
    return text;
}

json read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DomainError("config", "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw DomainError("config", std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

struct SubcommandState {
    CLI::App* app = nullptr;
    std::string config_path;
    std::string config_json;
    std::map<std::string, std::string> system;
    std::map<std::string, std::string> params;
    std::string out, events, out_dir;
    int figure = 0;
    std::string panel;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability, normal-form and continuation analysis of tuned vibration absorbers on a "
                 "Van der Pol-Duffing oscillator",
                 "lcoguard"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    std::map<std::string, SubcommandState> subs;
    for (const auto& name : command_names()) {
        auto& st = subs[name];
        if (name == "reproduce-figure") {
            st.app = app.add_subcommand(name, "Write the data files of one figure");
            st.app->add_option("figure", st.figure, "Figure number")->required();
            st.app->add_option("--panel", st.panel, "Single panel (default: all)");
            st.app->add_option("--out-dir", st.out_dir, "Output directory");
            continue;
        }
        st.app = app.add_subcommand(name);
        st.app->add_option("--config", st.config_path, "JSON config file");
        st.app->add_option("--config-json", st.config_json, "Inline JSON config");
        for (const auto& key : kSystemKeys) st.app->add_option("--" + key, st.system[key], "system." + key);
        const auto defaults = command_defaults(name);
        for (const auto& [key, def] : defaults.items())
            st.app->add_option("--" + dashed(key), st.params[key], "default " + def.dump());
        st.app->add_option("--out", st.out, "Output file");
        st.app->add_option("--events", st.events, "Secondary output file");
        st.app->add_option("--out-dir", st.out_dir, "Output directory");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    const auto* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    auto& st = subs.at(command);
    try {
        RunConfig cfg;
        OutputPaths paths{st.out, st.events, st.out_dir};
        if (command == "reproduce-figure") {
            cfg = parse_config(command, {{"figure", st.figure}, {"panel", st.panel}});
        } else {
            json doc = json::object();
            if (!st.config_path.empty()) doc = read_config_file(st.config_path);
            if (!st.config_json.empty()) {
                try {
                    doc = json::parse(st.config_json);
                } catch (const json::parse_error& e) {
                    throw DomainError("config", std::string("malformed JSON: ") + e.what());
                }
            }
            if (!doc.is_object()) throw DomainError("config", "expected a JSON object");
            const auto defaults = command_defaults(command);
            for (const auto& key : kSystemKeys)
                if (chosen->count("--" + key)) doc["system"][key] = parse_flag_value(key, 0.0, st.system.at(key));
            for (const auto& [key, def] : defaults.items())
                if (chosen->count("--" + dashed(key))) doc[key] = parse_flag_value(key, def, st.params.at(key));
            cfg = parse_config(command, doc);
        }
        dispatch(cfg, paths, out);
        return kExitOk;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace lcoguard
