#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "ptc/matrix.hpp"

namespace ptc {

/// Writes one sample per row, comma-separated, shortest round-trip floats,
/// no header. Byte-identical for identical input.
void write_samples_csv(const std::filesystem::path& path, const Matrix& samples);

/// Reads a samples CSV written by write_samples_csv (optional header row is
/// skipped when its first field is not numeric).
Matrix read_samples_csv(const std::filesystem::path& path);

struct IngestReport {
    Matrix samples;
    std::size_t total_rows = 0;    // data rows seen (header excluded)
    std::size_t dropped_rows = 0;  // rows missing or non-numeric in a selected column
    bool header_skipped = false;
};

/// Pulls the selected zero-based columns out of a CSV (empty selection
/// means every column); rows whose selected fields are missing or
/// non-numeric are dropped and counted. Raises IngestError when no usable
/// rows remain.
IngestReport ingest_csv(const std::filesystem::path& path,
                        const std::vector<std::size_t>& columns);

}  // namespace ptc
