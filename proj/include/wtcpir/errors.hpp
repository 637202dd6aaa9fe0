#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wtcpir {

// Caller supplied arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request (inverse of zero, fully observed database).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FieldTooSmallError : public UsageError {
 public:
  using UsageError::UsageError;
};

class FullyObservedError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A combinatorial enumeration would exceed its configured budget.
class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The plan generator could not wire side information consistently with the
// stage counts. Carries the round/group/database where it gave up.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, int round, int group, int database)
      : std::runtime_error(what), round_(round), group_(group), database_(database) {}

  int round() const noexcept { return round_; }
  int group() const noexcept { return group_; }
  int database() const noexcept { return database_; }

 private:
  int round_;
  int group_;
  int database_;
};

// The user could not recover the desired message from a set of answers.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, int database, std::size_t position)
      : std::runtime_error(what), database_(database), position_(position) {}

  int database() const noexcept { return database_; }
  std::size_t position() const noexcept { return position_; }

 private:
  int database_;
  std::size_t position_;
};

}  // namespace wtcpir
