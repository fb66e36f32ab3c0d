#pragma once

#include <stdexcept>
#include <string>

namespace adpi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input: addresses, CIDR prefixes, protocol names.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be used: empty corpora, single-class labels,
/// malformed records, mismatched lengths.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A model, featurizer or engine configuration that is inconsistent with
/// itself or with the data it is applied to.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public ContractError {
 public:
  using ContractError::ContractError;
};

}  // namespace adpi
