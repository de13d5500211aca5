#include "subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <mutex>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>
#include <utility>

#include "voxcast/error.hpp"

extern char** environ;

namespace voxcast::detail {
namespace {

constexpr std::size_t kMaxDiagnostics = 16 * 1024;

void ignoreSigpipeOnce() {
  // A child that exits early must surface as EPIPE on write, not kill us.
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

void closeFd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

struct Pipe {
  int read = -1;
  int write = -1;
  Pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) {
      fail(ErrorCode::kIo, std::string("pipe2 failed: ") + std::strerror(errno));
    }
    read = fds[0];
    write = fds[1];
  }
  ~Pipe() {
    closeFd(read);
    closeFd(write);
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;
};

}  // namespace

Subprocess::Subprocess(const std::string& command, Options options) {
  ignoreSigpipeOnce();

  Pipe err;
  Pipe in;
  Pipe out;
  if (!options.pipeStdin) {
    closeFd(in.read);
    closeFd(in.write);
  }
  if (!options.pipeStdout) {
    closeFd(out.read);
    closeFd(out.write);
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  if (options.pipeStdin) {
    posix_spawn_file_actions_adddup2(&actions, in.read, STDIN_FILENO);
  } else {
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  }
  posix_spawn_file_actions_adddup2(&actions, options.pipeStdout ? out.write : err.write,
                                   STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err.write, STDERR_FILENO);

  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  const int rc = posix_spawn(&pid_, "/bin/sh", &actions, nullptr,
                             const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);

  closeFd(err.write);
  closeFd(in.read);
  closeFd(out.write);
  if (rc != 0) {
    pid_ = -1;
    fail(ErrorCode::kToolUnavailable, std::string("cannot spawn /bin/sh: ") + std::strerror(rc));
  }
  stdin_ = std::exchange(in.write, -1);
  stdout_ = std::exchange(out.read, -1);
  stderr_ = std::exchange(err.read, -1);

  drain_ = std::thread([this] {
    char buf[4096];
    for (;;) {
      const ssize_t n = ::read(stderr_, buf, sizeof(buf));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      diagnostics_.append(buf, static_cast<std::size_t>(n));
      if (diagnostics_.size() > kMaxDiagnostics) {
        diagnostics_.erase(0, diagnostics_.size() - kMaxDiagnostics);
      }
    }
  });
}

Subprocess::~Subprocess() {
  closeStdin();
  closeStdout();
  if (pid_ > 0 && status_ < 0) {
    ::kill(pid_, SIGKILL);
    wait();
  }
  if (drain_.joinable()) drain_.join();
  closeFd(stderr_);
}

bool Subprocess::writeAll(const void* data, std::size_t size) {
  const auto* p = static_cast<const char*>(data);
  while (size > 0) {
    const ssize_t n = ::write(stdin_, p, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

std::size_t Subprocess::readSome(void* data, std::size_t size) {
  auto* p = static_cast<char*>(data);
  std::size_t total = 0;
  while (total < size) {
    const ssize_t n = ::read(stdout_, p + total, size - total);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kIo, std::string("read from child failed: ") + std::strerror(errno));
    }
    if (n == 0) break;
    total += static_cast<std::size_t>(n);
  }
  return total;
}

void Subprocess::closeStdin() { closeFd(stdin_); }
void Subprocess::closeStdout() { closeFd(stdout_); }

int Subprocess::wait() {
  if (status_ >= 0 || pid_ <= 0) return status_;
  int raw = 0;
  while (::waitpid(pid_, &raw, 0) < 0) {
    if (errno != EINTR) {
      status_ = 255;
      break;
    }
  }
  if (status_ < 0) {
    status_ = WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + WTERMSIG(raw);
  }
  if (drain_.joinable()) drain_.join();
  return status_;
}

}  // namespace voxcast::detail
