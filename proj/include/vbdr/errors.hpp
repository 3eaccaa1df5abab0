#pragma once

#include <stdexcept>

namespace vbdr {

// Invalid pool/engine parameters (b, m, k, zbits, slice length, ...).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called on a register or pool in a state it does not support,
// e.g. end_slice_update() on a DRV-direct register.
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Event timestamps went backwards, or a batch spans more than one slice.
class StreamOrderError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SnapshotError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vbdr
