#include "lcoguard/io.hpp"

#include <charconv>
#include <fstream>

namespace lcoguard {

const char* version() noexcept { return LCOGUARD_VERSION; }

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("out", "cannot open " + path.string() + " for writing");
    return os;
}

nlohmann::json seed_of(const OutputMeta& meta) {
    if (meta.config.is_object() && meta.config.contains("seed")) return meta.config.at("seed");
    return nullptr;
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void write_table(const std::filesystem::path& path, const OutputMeta& meta, const std::vector<std::string>& columns,
                 const std::vector<Row>& rows) {
    auto os = open_output(path);
    os << "# tool: lcoguard\n";
    os << "# version: " << version() << "\n";
    os << "# command: " << meta.command << "\n";
    os << "# config: " << meta.config.dump() << "\n";
    os << "# seed: " << seed_of(meta).dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    if (!os) throw NumericalError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const OutputMeta& meta, const nlohmann::json& result) {
    auto os = open_output(path);
    const nlohmann::json doc{{"metadata",
                              {{"tool", "lcoguard"},
                               {"version", version()},
                               {"command", meta.command},
                               {"config", meta.config},
                               {"seed", seed_of(meta)}}},
                             {"result", result}};
    os << doc.dump(2) << "\n";
    if (!os) throw NumericalError("write failed: " + path.string());
}

nlohmann::json read_metadata(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("path", "cannot open " + path.string());
    if (is.peek() == '{') {
        const auto doc = nlohmann::json::parse(is);
        return doc.at("metadata");
    }
    nlohmann::json meta = nlohmann::json::object();
    std::string line;
    while (std::getline(is, line) && line.rfind("# ", 0) == 0) {
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(2, colon - 2);
        const std::string value = line.substr(colon + 2);
        if (key == "config" || key == "seed") meta[key] = nlohmann::json::parse(value);
        else meta[key] = value;
    }
    return meta;
}

void write_stability_chart(const std::filesystem::path& path, const OutputMeta& meta, const StabilityChart& chart) {
    std::vector<Row> rows;
    rows.reserve(chart.nodes.size());
    for (const auto& n : chart.nodes)
        rows.push_back({format_number(n.mu1), format_number(n.mu2), format_number(n.gamma), flag(n.stable),
                        std::to_string(n.unstable_pairs)});
    write_table(path, meta, {"mu1", "mu2", "gamma", "stable", "unstable_pairs"}, rows);
}

void write_double_hopf_locus(const std::filesystem::path& path, const OutputMeta& meta,
                             const std::vector<DoubleHopfPoint>& locus) {
    std::vector<Row> rows;
    for (const auto& p : locus) rows.push_back({format_number(p.mu1), format_number(p.mu2), format_number(p.gamma)});
    write_table(path, meta, {"mu1", "mu2", "gamma"}, rows);
}

void write_delta_sweep(const std::filesystem::path& path, const OutputMeta& meta,
                       const std::vector<DeltaSweepRow>& rows_in) {
    std::vector<Row> rows;
    for (const auto& r : rows_in)
        rows.push_back({format_number(r.mu2), format_number(r.gamma), format_number(r.mu1_cr), format_number(r.delta0),
                        format_number(r.delta_alpha), format_number(r.delta_beta), flag(r.near_double)});
    write_table(path, meta, {"mu2", "gamma", "mu1_cr", "delta0", "delta_alpha", "delta_beta", "near_double"}, rows);
}

void write_iso_amplitude(const std::filesystem::path& path, const OutputMeta& meta,
                         const std::vector<IsoAmplitudeCell>& cells) {
    std::vector<Row> rows;
    for (const auto& c : cells)
        rows.push_back({format_number(c.mu2), format_number(c.gamma), format_number(c.mu1_cr), format_number(c.q1_max),
                        flag(c.valid)});
    write_table(path, meta, {"mu2", "gamma", "mu1_cr", "q1_max", "valid"}, rows);
}

void write_branch(const std::filesystem::path& path, const OutputMeta& meta, const LcoBranch& branch) {
    std::vector<std::string> cols{"mu1", "amplitude", "period", "stable"};
    for (int i = 1; i <= 4; ++i) {
        cols.push_back("mult" + std::to_string(i) + "_re");
        cols.push_back("mult" + std::to_string(i) + "_im");
    }
    std::vector<Row> rows;
    for (const auto& p : branch.points) {
        Row r{format_number(p.mu1), format_number(p.amplitude), format_number(p.period), flag(p.stable)};
        for (const auto& m : p.multipliers) {
            r.push_back(format_number(m.real()));
            r.push_back(format_number(m.imag()));
        }
        rows.push_back(std::move(r));
    }
    write_table(path, meta, cols, rows);
}

void write_events(const std::filesystem::path& path, const OutputMeta& meta, const LcoBranch& branch) {
    std::vector<Row> rows;
    for (const auto& e : branch.events)
        rows.push_back({to_string(e.kind), format_number(e.mu1), format_number(e.amplitude)});
    write_table(path, meta, {"kind", "mu1", "amplitude"}, rows);
}

void write_trajectory(const std::filesystem::path& path, const OutputMeta& meta, const Trajectory& tr) {
    std::vector<Row> rows;
    rows.reserve(tr.t.size());
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        rows.push_back({format_number(tr.t[i]), format_number(tr.x[i][0]), format_number(tr.x[i][1]),
                        format_number(tr.x[i][2]), format_number(tr.x[i][3])});
    write_table(path, meta, {"t", "x1", "x2", "x3", "x4"}, rows);
}

}  // namespace lcoguard
