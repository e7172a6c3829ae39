#ifndef DARAC_TESTS_SUPPORT_HPP
#define DARAC_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

namespace testsupport {

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::random_device entropy;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("darac_scratch_" + std::to_string(entropy()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create a scratch directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("could not write " + path);
}

/// Runs a shell command, capturing stdout, stderr and the exit code.
inline RunResult run_command(const std::string& command, const TempDir& dir) {
    const std::string out_path = dir.file(".cmd_out");
    const std::string err_path = dir.file(".cmd_err");
    const int status = std::system((command + " > '" + out_path + "' 2> '" + err_path + "'").c_str());
    RunResult result;
    if (status != -1 && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.out = read_text_file(out_path);
    result.err = read_text_file(err_path);
    return result;
}

}  // namespace testsupport

#endif
