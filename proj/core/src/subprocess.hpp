#pragma once

#include <string>
#include <sys/types.h>
#include <thread>

namespace voxcast::detail {

/// A `/bin/sh -c` child with optional pipes on stdin/stdout. Stderr (and
/// stdout when it is not piped) is drained on a background thread so that a
/// chatty child can never block on a full diagnostics pipe.
class Subprocess {
 public:
  struct Options {
    bool pipeStdin = false;
    bool pipeStdout = false;
  };

  Subprocess(const std::string& command, Options options);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  /// Writes everything or returns false once the child closed its input.
  bool writeAll(const void* data, std::size_t size);
  /// Reads up to `size` bytes, returning fewer only at end of stream.
  std::size_t readSome(void* data, std::size_t size);

  void closeStdin();
  void closeStdout();

  /// Exit status; 128 + signal number for signalled children.
  int wait();

  /// Captured stderr tail, valid after wait().
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  pid_t pid_ = -1;
  int stdin_ = -1;
  int stdout_ = -1;
  int stderr_ = -1;
  int status_ = -1;
  std::string diagnostics_;
  std::thread drain_;
};

/// Exit codes `/bin/sh` uses when the command cannot be found or run.
inline bool isShellMissingTool(int status) { return status == 126 || status == 127; }

}  // namespace voxcast::detail
