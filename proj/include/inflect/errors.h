#ifndef INFLECT_ERRORS_H_
#define INFLECT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace inflect {

// Base of every error the library raises. Subclasses name the failure class
// so callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INFLECT_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

INFLECT_DEFINE_ERROR(ShapeError);
INFLECT_DEFINE_ERROR(NumericError);
INFLECT_DEFINE_ERROR(DomainError);
INFLECT_DEFINE_ERROR(StateError);
INFLECT_DEFINE_ERROR(DataError);
INFLECT_DEFINE_ERROR(LabelError);
INFLECT_DEFINE_ERROR(AlignmentError);
INFLECT_DEFINE_ERROR(VersionError);
INFLECT_DEFINE_ERROR(CorruptError);

#undef INFLECT_DEFINE_ERROR

// Errors tied to a position in a text input.
class LineError : public Error {
 public:
  LineError(const std::string& what, size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class ParseError : public LineError {
 public:
  using LineError::LineError;
};

class FormatError : public LineError {
 public:
  using LineError::LineError;
};

}  // namespace inflect

#endif  // INFLECT_ERRORS_H_
