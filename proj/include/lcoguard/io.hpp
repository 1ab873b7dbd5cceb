#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcoguard/continuation.hpp"
#include "lcoguard/integrator.hpp"
#include "lcoguard/linear_stability.hpp"
#include "lcoguard/lco_estimate.hpp"

namespace lcoguard {

const char* version() noexcept;

/// Provenance written at the top of every output file.
struct OutputMeta {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
};

/// Shortest text that reads back to the same double.
std::string format_number(double v);

using Row = std::vector<std::string>;

void write_table(const std::filesystem::path& path, const OutputMeta& meta, const std::vector<std::string>& columns,
                 const std::vector<Row>& rows);

/// JSON document {"metadata": {...}, "result": result}.
void write_json(const std::filesystem::path& path, const OutputMeta& meta, const nlohmann::json& result);

/// Metadata of a file written by write_table or write_json:
/// {"tool", "version", "command", "config", "seed"}.
nlohmann::json read_metadata(const std::filesystem::path& path);

void write_stability_chart(const std::filesystem::path& path, const OutputMeta& meta, const StabilityChart& chart);
void write_double_hopf_locus(const std::filesystem::path& path, const OutputMeta& meta,
                             const std::vector<DoubleHopfPoint>& locus);
void write_delta_sweep(const std::filesystem::path& path, const OutputMeta& meta,
                       const std::vector<DeltaSweepRow>& rows);
void write_iso_amplitude(const std::filesystem::path& path, const OutputMeta& meta,
                         const std::vector<IsoAmplitudeCell>& cells);
void write_branch(const std::filesystem::path& path, const OutputMeta& meta, const LcoBranch& branch);
void write_events(const std::filesystem::path& path, const OutputMeta& meta, const LcoBranch& branch);
void write_trajectory(const std::filesystem::path& path, const OutputMeta& meta, const Trajectory& tr);

}  // namespace lcoguard
