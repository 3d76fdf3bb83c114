#pragma once

#include <chrono>
#include <string>
#include <sys/types.h>

namespace metricga::detail {

// A resident child process started through /bin/sh, talking line-oriented
// text over its standard input and output.
class LineProcess {
 public:
  explicit LineProcess(const std::string& command);
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  // Throws TransportError if the child has gone away.
  void write_line(const std::string& line);
  // Throws TransportError on EOF or when `timeout` elapses.
  std::string read_line(std::chrono::milliseconds timeout);

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace metricga::detail
