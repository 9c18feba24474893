#include "manifest.hpp"

#include "specscreen/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace specscreen::cli {
namespace fs = std::filesystem;

namespace {

std::string to_hex(const unsigned char* data, unsigned len) {
    std::ostringstream out;
    for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(data[i]);
    return out.str();
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        fail_data("SHA-256 computation failed");
    return to_hex(md.data(), len);
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_bytes(path)); }

RunRecord::RunRecord(std::string command, std::vector<std::string> argv, fs::path out_dir)
    : command_(std::move(command)), argv_(std::move(argv)), out_dir_(std::move(out_dir)) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) fail_data("cannot create output directory " + out_dir_.string() + ": " + ec.message());
}

void RunRecord::set_config(nlohmann::json config) {
    config_ = std::move(config);
    const nlohmann::json identity = {
        {"command", command_}, {"config", config_}, {"code_version", kCodeVersion}, {"inputs", inputs_}};
    run_id_ = sha256_hex(identity.dump());
}

void RunRecord::add_input(const fs::path& path) {
    inputs_.push_back({{"path", fs::absolute(path).lexically_normal().string()}, {"sha256", sha256_file(path)}});
}

void RunRecord::write_output(const std::string& name, const std::string& contents) {
    const fs::path path = out_dir_ / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) fail_data("cannot write " + path.string());
    outputs_.push_back({{"path", name}, {"sha256", sha256_hex(contents)}});
}

void RunRecord::finish() const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const nlohmann::json manifest = {{"run_id", run_id_},
                                     {"command", command_},
                                     {"cwd", fs::current_path().string()},
                                     {"argv", argv_},
                                     {"config", config_},
                                     {"seed", config_.value("seed", nlohmann::json(nullptr))},
                                     {"code_version", kCodeVersion},
                                     {"inputs", inputs_},
                                     {"outputs", outputs_},
                                     {"wall_clock_seconds", wall}};
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) fail_data("cannot write manifest");
}

nlohmann::json read_manifest(const fs::path& dir) {
    const fs::path path = dir / "manifest.json";
    try {
        return nlohmann::json::parse(read_bytes(path));
    } catch (const nlohmann::json::exception& e) {
        fail_data("malformed manifest " + path.string() + ": " + e.what());
    }
}

VerifyResult verify_directory(const fs::path& dir) {
    VerifyResult result;
    auto problem = [&](const std::string& s) {
        result.ok = false;
        result.problems.push_back(s);
    };
    const nlohmann::json manifest = read_manifest(dir);
    const std::string run_id = manifest.value("run_id", "");
    std::set<std::string> listed{"manifest.json"};
    for (const auto& o : manifest.at("outputs")) {
        const std::string name = o.at("path").get<std::string>();
        listed.insert(name);
        const fs::path path = dir / name;
        if (!fs::exists(path)) {
            problem("missing output " + name);
            continue;
        }
        const std::string bytes = read_bytes(path);
        if (sha256_hex(bytes) != o.at("sha256").get<std::string>()) problem("digest mismatch for " + name);
        if (path.extension() == ".json") {
            const auto j = nlohmann::json::parse(bytes, nullptr, false);
            if (j.is_discarded() || !j.is_object() || j.value("run_id", "") != run_id)
                problem("report " + name + " does not carry run id " + run_id);
        }
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (!listed.count(rel)) problem("orphan output " + rel + " is not listed in the manifest");
    }
    return result;
}

}  // namespace specscreen::cli
