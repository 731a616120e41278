#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace testsupport {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

// Runs a shell command, capturing stdout; stderr is discarded so error-path
// tests stay quiet. The command must not depend on shell state.
inline CliResult run_cli(const std::string& command) {
    CliResult r;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    int rc = pclose(pipe);
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

} // namespace testsupport
