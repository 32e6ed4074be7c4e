#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

namespace test {

inline std::filesystem::path env_path(const char* var) {
    const char* value = std::getenv(var);
    if (!value) throw std::runtime_error(std::string("environment variable not set: ") + var);
    return value;
}

inline std::filesystem::path fixture(const std::string& rel) {
    return env_path("HIP_FIXTURES") / rel;
}

inline std::filesystem::path data_file(const std::string& rel) {
    return env_path("HIP_DATA") / rel;
}

inline std::string cli_path() {
    return env_path("HIP_CLI").string();
}

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

inline CommandResult run_command(const std::string& cmd) {
    CommandResult result;
    std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.output.append(buf.data(), n);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Fresh directory under the system temp root, removed on destruction.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        path_ = base / ("hip_test_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace test
