#pragma once

#include <stdexcept>
#include <string>

namespace modcrack {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Length or modulus disagreement between operands.
class dimension_error : public error {
 public:
  using error::error;
};

// A value outside its admissible range (scalar out of [0,G), empty term
// list, a substitution that is not invertible at the given length, ...).
class domain_error : public error {
 public:
  using error::error;
};

// Malformed file contents (bad magic, bad header, unparsable samples).
class format_error : public error {
 public:
  using error::error;
};

// Seed material that cannot be turned into a keystream.
class seed_error : public error {
 public:
  using error::error;
};

// A finite keystream ran dry while material was still needed.
class generation_error : public error {
 public:
  using error::error;
};

// Cipher spec and round material do not fit together.
class config_error : public error {
 public:
  using error::error;
};

// An index vector that is not a bijection.
class validation_error : public error {
 public:
  using error::error;
};

// An oracle answered with unexpected dimensions mid-protocol.
class protocol_error : public error {
 public:
  using error::error;
};

// A table-backed oracle was asked for a ciphertext it does not hold.
class fixture_miss : public error {
 public:
  using error::error;
};

// An exhaustive check was requested on a space too large to enumerate.
class scale_error : public error {
 public:
  using error::error;
};

// Unknown preset name.
class lookup_error : public error {
 public:
  using error::error;
};

// A probed map turned out to depend on the base image, so no transfer
// function exists.
class not_a_dtf : public error {
 public:
  using error::error;
};

}  // namespace modcrack
