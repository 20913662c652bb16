#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace testers {

// Path of the voxdfm binary under test, filled in by the test main from
// --cli. Empty when the runner did not supply one.
inline std::string& cli_path() {
    static std::string p;
    return p;
}

// Scratch directory removed on destruction. Unique per instantiation so
// parallel test runs don't collide.
struct TmpDir {
    std::filesystem::path path;

    explicit TmpDir(const std::string& tag) {
        static int counter = 0;
        const auto base = std::filesystem::temp_directory_path();
        path = base / ("voxdfm-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TmpDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TmpDir(const TmpDir&) = delete;
    TmpDir& operator=(const TmpDir&) = delete;

    std::string str(const std::string& rel = "") const {
        return rel.empty() ? path.string() : (path / rel).string();
    }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs `cli_path() + args` through the shell with stdout/stderr captured.
// Args must already be shell-quoted where needed; test paths contain no
// spaces by construction.
inline RunResult run_cli(const std::string& args) {
    const TmpDir cap("cap");
    const std::string cmd = cli_path() + " " + args + " >" + cap.str("out") + " 2>" +
                            cap.str("err");
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(cap.path / "out");
    r.err = slurp(cap.path / "err");
    return r;
}

inline bool identical_files(const std::filesystem::path& a, const std::filesystem::path& b) {
    return slurp(a) == slurp(b);
}

} // namespace testers
