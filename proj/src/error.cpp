#include "mee/error.hpp"

namespace mee {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::EmptyNeighborhood: return "empty-neighborhood";
    case ErrorKind::DegenerateNeighborhood: return "degenerate-neighborhood";
    case ErrorKind::DegenerateTail: return "degenerate-tail";
    case ErrorKind::InfiniteMean: return "infinite-mean";
    case ErrorKind::LogDomain: return "log-domain";
    case ErrorKind::Quadrature: return "quadrature";
    case ErrorKind::Optimization: return "optimization";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Model: return "model";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace mee
