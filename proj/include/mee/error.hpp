#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mee {

enum class ErrorKind {
  Dimension,
  Domain,
  Parameter,
  EmptyNeighborhood,
  DegenerateNeighborhood,
  DegenerateTail,
  InfiniteMean,
  LogDomain,
  Quadrature,
  Optimization,
  Parse,
  Model,
  Numeric,
  Unsupported,
};

const char* to_string(ErrorKind kind);

// Every failure names the stage (or operation) that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what),
        kind_(kind),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& stage,
                              const std::string& msg) {
  throw Error(kind, stage, msg);
}

}  // namespace mee
