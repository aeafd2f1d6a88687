#pragma once

#include <stdexcept>
#include <string>

namespace gfodd {

/// Coarse error classes, also used by the command line tool to pick exit codes.
enum class ErrorCategory { Parse, Model, Form, Resource, Argument, Internal };

const char* to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define GFODD_DEFINE_ERROR(Name, Category)                                  \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorCategory::Category, what) {} \
  };

// Undeclared predicate/object, arity or sort mismatch.
GFODD_DEFINE_ERROR(VocabularyError, Model)
// Aggregation over a sort without objects.
GFODD_DEFINE_ERROR(EmptyDomainError, Model)
// Diagram violates the node-label ordering.
GFODD_DEFINE_ERROR(ConstructionError, Model)
// Negative leaf / negative scale factor / bad TVD leaf.
GFODD_DEFINE_ERROR(ValueError, Model)
GFODD_DEFINE_ERROR(ModelError, Model)
GFODD_DEFINE_ERROR(ArgumentError, Argument)
// Diagram is not of the form max* avg required by an operation.
GFODD_DEFINE_ERROR(FormError, Form)
GFODD_DEFINE_ERROR(ResourceError, Resource)
GFODD_DEFINE_ERROR(InternalError, Internal)

#undef GFODD_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCategory::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace gfodd
