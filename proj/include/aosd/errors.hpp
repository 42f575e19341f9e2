// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aosd {

enum class Errc {
  UnknownId,
  IllegalSelfAssociation,
  DuplicatePlacement,
  InvalidKeyword,
  EmptyDesign,
  MissingKeywords,
  InvalidPuzzle,
  LockedPuzzle,
  NotAccepted,
  InvalidName,
  ParseError,
  SchemaError,
  InvariantError,
  UnknownPlayer,
  UnknownSession,
  IoError,
};

std::string_view to_string(Errc code);

// Every failure raised by the library carries a code and, where one exists,
// the id of the offending element.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::string subject = {})
      : std::runtime_error(std::move(message)), code_(code), subject_(std::move(subject)) {}

  Errc code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  Errc code_;
  std::string subject_;
};

}  // namespace aosd
