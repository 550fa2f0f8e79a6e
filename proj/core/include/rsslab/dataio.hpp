#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vendor_json.hpp"

namespace rsslab {

/// A synchronized time series of label positions and per-AP RSS vectors.
/// Missing RSS entries are represented explicitly, never by a magic level.
struct Recording {
    struct Row {
        double t_s = 0.0;
        double x_m = 0.0;
        double y_m = 0.0;
        std::vector<std::optional<double>> rss_dbm;  // aligned with ap_ids
    };

    std::string name;
    std::string receiver_id;
    std::vector<std::string> ap_ids;
    std::vector<Row> rows;

    std::size_t num_aps() const { return ap_ids.size(); }
    void validate() const;  // throws ValidationError
};

/// Canonical CSV: header `t,x,y,rss_<apid>,...`, values at 9 significant
/// digits, missing RSS as an empty field. A JSON sidecar (same stem, .json)
/// carries name, receiver id and units.
void write_recording(const Recording& rec, const std::filesystem::path& csv_path);
Recording read_recording(const std::filesystem::path& csv_path);

/// All *.csv in a directory, sorted by filename. Files ending in
/// `_truth.csv` are skipped.
std::vector<Recording> read_recording_dir(const std::filesystem::path& dir);

/// Maps a foreign CSV onto the canonical layout. `column_map` maps canonical
/// column names (t, x, y, rss_<apid>) to the foreign header names.
Recording convert_foreign_csv(const std::filesystem::path& csv_path,
                              const std::map<std::string, std::string>& column_map,
                              const std::string& name, const std::string& receiver_id);

enum class ModelKind { knn, knn_interp, cnn };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Per-AP RSS mean/std and position min/max, estimated on the training
/// split only.
struct NormalizationStats {
    std::vector<double> rss_mean;
    std::vector<double> rss_std;
    double pos_min_x = 0.0, pos_min_y = 0.0;
    double pos_max_x = 1.0, pos_max_y = 1.0;
};

/// Single-file model container: JSON header with an embedded base64 payload
/// of raw little-endian doubles, CRC-32 checksummed.
struct ModelArtifact {
    static constexpr int kCurrentSchema = 1;

    ModelKind kind = ModelKind::knn;
    int schema_version = kCurrentSchema;
    nlohmann::json hyperparameters = nlohmann::json::object();
    NormalizationStats normalization;
    std::vector<double> payload;
};

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

/// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);  // 9 significant digits

}  // namespace rsslab
