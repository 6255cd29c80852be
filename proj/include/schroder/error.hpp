#ifndef SCHRODER_ERROR_HPP
#define SCHRODER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace schroder {

/// Failure categories raised by the library. The CLI prints the
/// snake_case name of the kind in its machine-readable error line.
enum class ErrorKind {
  Domain,            ///< argument outside the mathematical domain
  Pole,              ///< too close to a lattice point of the Weierstrass function
  InvalidParameter,  ///< map or config parameter violates a constraint
  Singularity,       ///< map evaluated at an excluded point
  Breakpoint,        ///< derivative requested at a branch boundary
  OutOfImage,        ///< inverse branch requested outside its image
  NoConjugator,      ///< family has no catalog conjugating function
  Resonance,         ///< Koenigs recurrence divides by lambda - lambda^n = 0
  NotFixedPoint,     ///< Koenigs expansion point is not fixed
  NonConvergence,    ///< iterative solver did not reach its tolerance
  NonIntegrable,     ///< quadrature refinement drift too large
  DomainMismatch,    ///< grid densities live on different cells
  DegenerateOrbit,   ///< orbit reached a fixed point or too many skips
  OrbitEscape,       ///< iterate left the domain
  Schema,            ///< config schema violation
  Io,                ///< file system failure
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::InvalidParameter: return "invalid_parameter";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Breakpoint: return "breakpoint";
    case ErrorKind::OutOfImage: return "out_of_image";
    case ErrorKind::NoConjugator: return "no_conjugator";
    case ErrorKind::Resonance: return "resonance";
    case ErrorKind::NotFixedPoint: return "not_fixed_point";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::NonIntegrable: return "non_integrable";
    case ErrorKind::DomainMismatch: return "domain_mismatch";
    case ErrorKind::DegenerateOrbit: return "degenerate_orbit";
    case ErrorKind::OrbitEscape: return "orbit_escape";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Convergence failure that remembers how far the iteration got.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_change)
      : Error(ErrorKind::NonConvergence, what), last_change_(last_change) {}

  double last_change() const noexcept { return last_change_; }

 private:
  double last_change_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace schroder

#endif  // SCHRODER_ERROR_HPP
