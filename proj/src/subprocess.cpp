#include "cmg/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "cmg/errors.hpp"

namespace cmg {

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_path) {
  if (argv.empty()) {
    throw Error(Err::Internal, "run_process: empty argv");
  }

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    throw Error(Err::Io, strf("pipe: %s", std::strerror(errno)));
  }
  int in_fd = open(stdin_path ? stdin_path->c_str() : "/dev/null", O_RDONLY);
  if (in_fd < 0) {
    throw Error(Err::Io, strf("cannot open stdin source: %s",
                              std::strerror(errno)));
  }

  pid_t pid = fork();
  if (pid < 0) {
    throw Error(Err::Io, strf("fork: %s", std::strerror(errno)));
  }
  if (pid == 0) {
    dup2(in_fd, STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(in_fd);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) {
      args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);
    execvp(args[0], args.data());
    // exec failed; 127 mirrors the shell's command-not-found convention
    _exit(127);
  }

  close(in_fd);
  close(out_pipe[1]);
  close(err_pipe[1]);

  ProcessResult result;
  struct Stream {
    int fd;
    std::string* sink;
    bool open;
  };
  Stream streams[2] = {{out_pipe[0], &result.out, true},
                       {err_pipe[0], &result.err, true}};
  char buf[65536];
  while (streams[0].open || streams[1].open) {
    struct pollfd fds[2];
    nfds_t n = 0;
    for (Stream& s : streams) {
      if (s.open) {
        fds[n].fd = s.fd;
        fds[n].events = POLLIN;
        ++n;
      }
    }
    if (poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t i = 0; i < n; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      for (Stream& s : streams) {
        if (s.open && s.fd == fds[i].fd) {
          ssize_t got = read(s.fd, buf, sizeof(buf));
          if (got > 0) {
            s.sink->append(buf, static_cast<size_t>(got));
          } else if (got == 0 || (got < 0 && errno != EINTR)) {
            close(s.fd);
            s.open = false;
          }
        }
      }
    }
  }
  for (Stream& s : streams) {
    if (s.open) close(s.fd);
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) {
      throw Error(Err::Io, strf("waitpid: %s", std::strerror(errno)));
    }
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = -1;
  }
  return result;
}

}  // namespace cmg
