#pragma once

#include <filesystem>

namespace trackgen {

/// Materializes the bundled progressive-house reference style into `dir`:
/// procedurally synthesized one-shot loops (kick/clap/hat), fx pools (fills,
/// downlifters), sound_sheet.json, channel_sheet.json, and an 8-bar demo
/// score (score.json). Fully deterministic; no licensed audio involved.
void write_demo_style(const std::filesystem::path& dir);

}  // namespace trackgen
