#include "morphtest/sut.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <sstream>

namespace morphtest {

ExternalClassifier::ExternalClassifier(std::string command, double timeout_seconds)
    : command_(std::move(command)), timeout_seconds_(timeout_seconds) {
    if (command_.empty()) fail(Errc::ProcessSpawnFailure, "empty SUT command");
    spawn();
}

ExternalClassifier::~ExternalClassifier() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (child_pid_ > 0) {
        int status = 0;
        if (waitpid(child_pid_, &status, WNOHANG) == 0) {
            kill(child_pid_, SIGTERM);
            waitpid(child_pid_, &status, 0);
        }
    }
}

void ExternalClassifier::spawn() {
    int in_pipe[2];   // parent -> child
    int out_pipe[2];  // child -> parent
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        fail(Errc::ProcessSpawnFailure, "pipe() failed for '" + command_ + "'");
    }
    const pid_t pid = fork();
    if (pid < 0) fail(Errc::ProcessSpawnFailure, "fork() failed for '" + command_ + "'");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    child_pid_ = pid;
    signal(SIGPIPE, SIG_IGN);
}

std::string ExternalClassifier::read_line() {
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        struct pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, static_cast<int>(timeout_seconds_ * 1000.0));
        if (rc == 0) fail(Errc::Timeout, "SUT '" + command_ + "' gave no response within timeout");
        if (rc < 0) fail(Errc::ProtocolViolation, "poll() failed on SUT stream");
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n <= 0) {
            // EOF before the first successful answer means the command never
            // came up (e.g. not found, exited at startup).
            if (!answered_once_) fail(Errc::ProcessSpawnFailure, "SUT '" + command_ + "' produced no output");
            fail(Errc::ProtocolViolation, "SUT '" + command_ + "' closed its output stream");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

Prediction ExternalClassifier::predict(const GrayImage& img, std::string_view case_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::string id(case_id.empty() ? "case" : case_id);
    for (char& c : id) {
        if (std::isspace(static_cast<unsigned char>(c))) c = '_';
    }

    std::ostringstream req;
    req << "P " << id;
    for (std::uint8_t v : img.data) req << ' ' << static_cast<int>(v);
    req << '\n';
    const std::string line = req.str();
    std::size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = write(to_child_, line.data() + off, line.size() - off);
        if (n <= 0) fail(Errc::ProtocolViolation, "cannot write to SUT '" + command_ + "'");
        off += static_cast<std::size_t>(n);
    }

    const std::string resp = read_line();
    std::istringstream rs(resp);
    std::string tag, echoed;
    int label = -1;
    if (!(rs >> tag >> echoed >> label) || tag != "R") {
        fail(Errc::ProtocolViolation, "malformed SUT response: '" + resp + "'");
    }
    if (echoed != id) {
        fail(Errc::ProtocolViolation, "SUT echoed case id '" + echoed + "', expected '" + id + "'");
    }
    if (label < 0 || label > 9) {
        fail(Errc::ProtocolViolation, "SUT label " + std::to_string(label) + " out of range");
    }
    Prediction pred;
    pred.label = label;
    for (int i = 0; i < 10; ++i) {
        double s;
        if (!(rs >> s)) fail(Errc::ProtocolViolation, "SUT response has fewer than 10 scores: '" + resp + "'");
        if (!std::isfinite(s) || s < 0.0) {
            fail(Errc::ProtocolViolation, "SUT score " + std::to_string(s) + " invalid");
        }
        pred.scores[static_cast<std::size_t>(i)] = s;
    }
    std::string extra;
    if (rs >> extra) fail(Errc::ProtocolViolation, "trailing tokens in SUT response: '" + resp + "'");
    answered_once_ = true;
    return pred;
}

}  // namespace morphtest
