#pragma once

#include <filesystem>
#include <string>

#include "maxent/cli/report.hpp"

namespace maxent::cli {

/// One panel per category. Each cluster is a dot at horizontal position pi,
/// height equal to its expected risk and area proportional to its mass, plus a
/// line from r0 on the left axis to r1 on the right axis. The dot lies on the line.
std::string mixture_svg(const RunReport& report);

/// LP entropy per m as dots and the closed-form optimum as a horizontal line.
std::string convergence_svg(const ConvergenceSeries& series);

/// Throws IoError if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

void emit_plot(const RunReport& report, const std::filesystem::path& path);
void emit_plot(const ConvergenceSeries& series, const std::filesystem::path& path);

}  // namespace maxent::cli
