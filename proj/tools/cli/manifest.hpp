#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace specscreen::cli {

inline constexpr const char* kCodeVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Collects what a run read and wrote. Output paths are stored relative to
/// the output directory.
class RunRecord {
public:
    RunRecord(std::string command, std::vector<std::string> argv, std::filesystem::path out_dir);

    /// Resolved configuration; fixes the run id. Call before writing outputs.
    void set_config(nlohmann::json config);
    void add_input(const std::filesystem::path& path);

    const std::string& run_id() const { return run_id_; }
    const std::filesystem::path& out_dir() const { return out_dir_; }

    /// Writes `contents` to out_dir/name and records its digest.
    void write_output(const std::string& name, const std::string& contents);

    /// Writes manifest.json.
    void finish() const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    std::filesystem::path out_dir_;
    nlohmann::json config_;
    nlohmann::json inputs_ = nlohmann::json::array();
    nlohmann::json outputs_ = nlohmann::json::array();
    std::string run_id_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Checks that every listed output exists with the recorded digest, that
/// JSON outputs carry the manifest's run id, and that the directory holds no
/// files the manifest does not list.
VerifyResult verify_directory(const std::filesystem::path& dir);

nlohmann::json read_manifest(const std::filesystem::path& dir);

}  // namespace specscreen::cli
