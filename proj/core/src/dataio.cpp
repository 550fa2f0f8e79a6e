#include "rsslab/dataio.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rsslab/errors.hpp"

namespace rsslab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kBase64Chars =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned int v = static_cast<unsigned int>(data[i]) << 16;
        if (i + 1 < len) v |= static_cast<unsigned int>(data[i + 1]) << 8;
        if (i + 2 < len) v |= static_cast<unsigned int>(data[i + 2]);
        out.push_back(kBase64Chars[(v >> 18) & 63]);
        out.push_back(kBase64Chars[(v >> 12) & 63]);
        out.push_back(i + 1 < len ? kBase64Chars[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? kBase64Chars[v & 63] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(std::string_view s) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<unsigned char> out;
    out.reserve(s.size() / 4 * 3);
    int acc = 0, bits = 0;
    for (char c : s) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = val(c);
        if (v < 0) throw CorruptArtifact("invalid base64 payload");
        acc = (acc << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

std::uint32_t crc32_of(const void* data, std::size_t len) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, static_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

double parse_field(std::string_view field, std::size_t row, std::size_t col) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                         ": cannot parse '" + std::string(field) + "' as a number");
    }
    return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

fs::path sidecar_path(const fs::path& csv_path) {
    fs::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

void Recording::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (r.rss_dbm.size() != ap_ids.size()) {
            throw ValidationError(name + ": row " + std::to_string(i + 1) +
                                  " has wrong RSS vector length");
        }
        if (!std::isfinite(r.t_s) || !std::isfinite(r.x_m) || !std::isfinite(r.y_m)) {
            throw ValidationError(name + ": non-finite value at row " + std::to_string(i + 1));
        }
        for (const auto& v : r.rss_dbm) {
            if (v && !std::isfinite(*v)) {
                throw ValidationError(name + ": non-finite RSS at row " + std::to_string(i + 1));
            }
        }
        if (i > 0 && !(rows[i - 1].t_s < r.t_s)) {
            throw ValidationError(name + ": timestamps not strictly increasing at row " +
                                  std::to_string(i + 1));
        }
    }
}

void write_recording(const Recording& rec, const fs::path& csv_path) {
    rec.validate();
    std::string out;
    out.reserve(rec.rows.size() * 48 + 64);
    out += "t,x,y";
    for (const auto& id : rec.ap_ids) {
        out += ",rss_";
        out += id;
    }
    out += '\n';
    for (const auto& row : rec.rows) {
        out += format_double(row.t_s);
        out += ',';
        out += format_double(row.x_m);
        out += ',';
        out += format_double(row.y_m);
        for (const auto& v : row.rss_dbm) {
            out += ',';
            if (v) out += format_double(*v);
        }
        out += '\n';
    }
    write_file_atomic(csv_path, out);

    json meta;
    meta["name"] = rec.name;
    meta["receiver_id"] = rec.receiver_id;
    meta["ap_ids"] = rec.ap_ids;
    meta["units"] = {{"t", "s"}, {"x", "m"}, {"y", "m"}, {"rss", "dBm"}};
    write_file_atomic(sidecar_path(csv_path), meta.dump(2) + "\n");
}

Recording read_recording(const fs::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());

    Recording rec;
    rec.name = csv_path.stem().string();

    std::string line;
    if (!std::getline(in, line)) throw ParseError(csv_path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "t" || header[1] != "x" || header[2] != "y") {
        throw SchemaError(csv_path.string() + ": header must start with t,x,y,rss_...");
    }
    for (std::size_t i = 3; i < header.size(); ++i) {
        const auto h = header[i];
        if (!h.starts_with("rss_") || h.size() <= 4) {
            throw SchemaError(csv_path.string() + ": column " + std::to_string(i + 1) +
                              " is not an rss_<apid> column");
        }
        rec.ap_ids.emplace_back(h.substr(4));
    }

    std::size_t row_no = 1;  // header was row 1
    std::string raw;
    while (std::getline(in, raw)) {
        ++row_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        const auto fields = split_csv_line(raw);
        if (fields.size() != header.size()) {
            throw ParseError(csv_path.string() + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        }
        Recording::Row row;
        row.t_s = parse_field(fields[0], row_no, 0);
        row.x_m = parse_field(fields[1], row_no, 1);
        row.y_m = parse_field(fields[2], row_no, 2);
        row.rss_dbm.reserve(rec.ap_ids.size());
        for (std::size_t i = 3; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                row.rss_dbm.emplace_back(std::nullopt);
            } else {
                row.rss_dbm.emplace_back(parse_field(fields[i], row_no, i));
            }
        }
        if (!rec.rows.empty() && !(rec.rows.back().t_s < row.t_s)) {
            throw ParseError(csv_path.string() + ": row " + std::to_string(row_no) +
                             ": timestamps not strictly increasing");
        }
        rec.rows.push_back(std::move(row));
    }

    const fs::path meta_path = sidecar_path(csv_path);
    if (fs::exists(meta_path)) {
        std::ifstream metain(meta_path);
        json meta;
        try {
            metain >> meta;
        } catch (const json::exception& e) {
            throw ParseError(meta_path.string() + ": " + e.what());
        }
        if (meta.contains("name")) rec.name = meta["name"].get<std::string>();
        if (meta.contains("receiver_id")) rec.receiver_id = meta["receiver_id"].get<std::string>();
    }
    rec.validate();
    return rec;
}

std::vector<Recording> read_recording_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".csv" &&
            !e.path().stem().string().ends_with("_truth")) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Recording> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(read_recording(f));
    return out;
}

Recording convert_foreign_csv(const fs::path& csv_path,
                              const std::map<std::string, std::string>& column_map,
                              const std::string& name, const std::string& receiver_id) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(csv_path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);

    auto find_col = [&](const std::string& foreign) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == foreign) return i;
        }
        throw SchemaError(csv_path.string() + ": no column named '" + foreign + "'");
    };

    Recording rec;
    rec.name = name.empty() ? csv_path.stem().string() : name;
    rec.receiver_id = receiver_id;

    std::size_t t_col = 0, x_col = 0, y_col = 0;
    bool has_t = false, has_x = false, has_y = false;
    std::vector<std::size_t> rss_cols;
    for (const auto& [canonical, foreign] : column_map) {
        if (canonical == "t") {
            t_col = find_col(foreign);
            has_t = true;
        } else if (canonical == "x") {
            x_col = find_col(foreign);
            has_x = true;
        } else if (canonical == "y") {
            y_col = find_col(foreign);
            has_y = true;
        } else if (canonical.starts_with("rss_") && canonical.size() > 4) {
            rec.ap_ids.emplace_back(canonical.substr(4));
            rss_cols.push_back(find_col(foreign));
        } else {
            throw SchemaError("column map: unknown canonical column '" + canonical + "'");
        }
    }
    if (!has_t || !has_x || !has_y || rss_cols.empty()) {
        throw SchemaError("column map must define t, x, y and at least one rss_<apid>");
    }

    std::size_t row_no = 1;
    std::string raw;
    while (std::getline(in, raw)) {
        ++row_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        const auto fields = split_csv_line(raw);
        if (fields.size() != header.size()) {
            throw ParseError(csv_path.string() + ": row " + std::to_string(row_no) +
                             " has wrong field count");
        }
        Recording::Row row;
        row.t_s = parse_field(fields[t_col], row_no, t_col);
        row.x_m = parse_field(fields[x_col], row_no, x_col);
        row.y_m = parse_field(fields[y_col], row_no, y_col);
        for (std::size_t c : rss_cols) {
            if (fields[c].empty()) {
                row.rss_dbm.emplace_back(std::nullopt);
            } else {
                row.rss_dbm.emplace_back(parse_field(fields[c], row_no, c));
            }
        }
        rec.rows.push_back(std::move(row));
    }
    rec.validate();
    return rec;
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::knn: return "knn";
        case ModelKind::knn_interp: return "knn_interp";
        case ModelKind::cnn: return "cnn";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "knn") return ModelKind::knn;
    if (s == "knn_interp") return ModelKind::knn_interp;
    if (s == "cnn") return ModelKind::cnn;
    throw SchemaError("unknown model kind '" + s + "'");
}

void save_model(const ModelArtifact& artifact, const fs::path& path) {
    for (double v : artifact.normalization.rss_mean) {
        if (!std::isfinite(v)) throw ValidationError("save_model: non-finite normalization stats");
    }
    for (double v : artifact.normalization.rss_std) {
        if (!std::isfinite(v)) throw ValidationError("save_model: non-finite normalization stats");
    }
    json j;
    j["schema_version"] = artifact.schema_version;
    j["kind"] = to_string(artifact.kind);
    j["hyperparameters"] = artifact.hyperparameters;
    j["normalization"] = {{"rss_mean", artifact.normalization.rss_mean},
                          {"rss_std", artifact.normalization.rss_std},
                          {"pos_min", {artifact.normalization.pos_min_x, artifact.normalization.pos_min_y}},
                          {"pos_max", {artifact.normalization.pos_max_x, artifact.normalization.pos_max_y}}};
    const auto* bytes = reinterpret_cast<const unsigned char*>(artifact.payload.data());
    const std::size_t nbytes = artifact.payload.size() * sizeof(double);
    j["payload_doubles"] = artifact.payload.size();
    j["payload_crc32"] = crc32_of(bytes, nbytes);
    j["payload_b64"] = base64_encode(bytes, nbytes);
    write_file_atomic(path, j.dump() + "\n");
}

ModelArtifact load_model(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        throw CorruptArtifact(path.string() + ": not a valid model container");
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        throw CorruptArtifact(path.string() + ": missing schema_version");
    }
    ModelArtifact a;
    a.schema_version = j["schema_version"].get<int>();
    if (a.schema_version != ModelArtifact::kCurrentSchema) {
        throw SchemaError(path.string() + ": unsupported schema_version " +
                          std::to_string(a.schema_version));
    }
    try {
        a.kind = model_kind_from_string(j.at("kind").get<std::string>());
        a.hyperparameters = j.at("hyperparameters");
        const auto& n = j.at("normalization");
        a.normalization.rss_mean = n.at("rss_mean").get<std::vector<double>>();
        a.normalization.rss_std = n.at("rss_std").get<std::vector<double>>();
        a.normalization.pos_min_x = n.at("pos_min").at(0).get<double>();
        a.normalization.pos_min_y = n.at("pos_min").at(1).get<double>();
        a.normalization.pos_max_x = n.at("pos_max").at(0).get<double>();
        a.normalization.pos_max_y = n.at("pos_max").at(1).get<double>();
        const auto bytes = base64_decode(j.at("payload_b64").get<std::string>());
        const auto expected_doubles = j.at("payload_doubles").get<std::size_t>();
        if (bytes.size() != expected_doubles * sizeof(double)) {
            throw CorruptArtifact(path.string() + ": payload length mismatch");
        }
        const std::uint32_t crc = j.at("payload_crc32").get<std::uint32_t>();
        if (crc != crc32_of(bytes.data(), bytes.size())) {
            throw CorruptArtifact(path.string() + ": payload checksum mismatch");
        }
        a.payload.resize(expected_doubles);
        std::memcpy(a.payload.data(), bytes.data(), bytes.size());
    } catch (const json::exception& e) {
        throw CorruptArtifact(path.string() + ": " + e.what());
    }
    return a;
}

}  // namespace rsslab
