#pragma once

#include <stdexcept>
#include <string>

namespace qubus {

/// Input outside the range where the link model is defined (e.g. F <= 1/2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lossless channel (l/l0 = 0) where the closed forms are singular.
class DegenerateChannel : public DomainError {
 public:
  DegenerateChannel()
      : DomainError("degenerate channel: attenuation ratio l/l0 must be > 0") {}
};

/// Fock-space cutoff too small for the requested amplitudes.
class InsufficientTruncation : public std::runtime_error {
 public:
  InsufficientTruncation(double leaked, int n_max)
      : std::runtime_error("insufficient Fock truncation: population " +
                           std::to_string(leaked) + " at n_max=" +
                           std::to_string(n_max)),
        leaked_(leaked) {}

  double leaked() const noexcept { return leaked_; }

 private:
  double leaked_;
};

/// Purification policy cannot reach the requested fidelity.
class UnreachableTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid repeater configuration. `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qubus
