#include "decompkit/support/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dk {

namespace {

void set_limit(int resource, rlim_t value) {
    rlimit rl{value, value};
    setrlimit(resource, &rl);  // best effort; failure leaves the default
}

int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

} // namespace

RunResult run_process(const std::vector<std::string>& argv, const RunLimits& limits,
                      const std::optional<std::string>& input,
                      const std::optional<std::string>& cwd) {
    RunResult result;
    if (argv.empty()) {
        result.exec_failed = true;
        return result;
    }

    int out_pipe[2], err_pipe[2], in_pipe[2], status_pipe[2];
    if (pipe(out_pipe) || pipe(err_pipe) || pipe(in_pipe) || pipe2(status_pipe, O_CLOEXEC)) {
        result.exec_failed = true;
        return result;
    }

    int64_t start = now_ms();
    pid_t pid = fork();
    if (pid < 0) {
        result.exec_failed = true;
        return result;
    }

    if (pid == 0) {
        setpgid(0, 0);
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0],
                       err_pipe[1], status_pipe[0]})
            close(fd);

        if (cwd && chdir(cwd->c_str()) != 0) _exit(127);
        if (limits.cpu_seconds > 0) set_limit(RLIMIT_CPU, limits.cpu_seconds);
        if (limits.address_space_bytes > 0) set_limit(RLIMIT_AS, limits.address_space_bytes);
        if (limits.output_file_bytes > 0) set_limit(RLIMIT_FSIZE, limits.output_file_bytes);
        set_limit(RLIMIT_CORE, 0);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        // exec failed; report errno through the status pipe
        int e = errno;
        ssize_t n = write(status_pipe[1], &e, sizeof(e));
        (void)n;
        _exit(127);
    }

    setpgid(pid, pid);  // also from parent, avoids a race with the child
    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);
    close(status_pipe[1]);

    // Feed stdin, then close so the child sees EOF.
    if (input && !input->empty()) {
        size_t off = 0;
        while (off < input->size()) {
            ssize_t n = write(in_pipe[1], input->data() + off, input->size() - off);
            if (n <= 0) break;
            off += size_t(n);
        }
    }
    close(in_pipe[1]);

    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    int64_t deadline = (limits.wall_timeout_ms > 0) ? start + limits.wall_timeout_ms : INT64_MAX;
    bool out_open = true, err_open = true;
    char buf[4096];

    auto drain = [&](int fd, std::string& dst, bool& open_flag) {
        for (;;) {
            ssize_t n = read(fd, buf, sizeof(buf));
            if (n > 0) {
                dst.append(buf, size_t(n));
            } else if (n == 0) {
                open_flag = false;
                return;
            } else {
                return;  // EAGAIN
            }
        }
    };

    while (out_open || err_open) {
        int64_t remaining = deadline - now_ms();
        if (remaining <= 0) {
            kill(-pid, SIGKILL);
            result.timed_out = true;
            remaining = 100;
        }
        pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        int rc = poll(fds, nfds, int(std::min<int64_t>(remaining, 200)));
        if (rc < 0 && errno != EINTR) break;
        if (out_open) drain(out_pipe[0], result.out, out_open);
        if (err_open) drain(err_pipe[0], result.err, err_open);
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (result.timed_out) kill(-pid, SIGKILL);  // reap stragglers in the group

    int exec_errno = 0;
    if (read(status_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
        result.exec_failed = true;
    }
    close(status_pipe[0]);

    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = -WTERMSIG(status);
    }
    result.duration_ms = int(now_ms() - start);
    return result;
}

} // namespace dk
