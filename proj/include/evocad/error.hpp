#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evocad {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define EVOCAD_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

EVOCAD_DEFINE_ERROR(DegenerateMesh);
EVOCAD_DEFINE_ERROR(NotWatertight);
EVOCAD_DEFINE_ERROR(EmptyCloud);
EVOCAD_DEFINE_ERROR(EmptyUnion);
EVOCAD_DEFINE_ERROR(ConstraintError);
EVOCAD_DEFINE_ERROR(TriangulationError);
EVOCAD_DEFINE_ERROR(IoError);
EVOCAD_DEFINE_ERROR(EmptyResponse);
EVOCAD_DEFINE_ERROR(MismatchedIds);
EVOCAD_DEFINE_ERROR(BackendError);
EVOCAD_DEFINE_ERROR(ProtocolError);
EVOCAD_DEFINE_ERROR(EmptyDataset);
EVOCAD_DEFINE_ERROR(MismatchedSampleSets);
EVOCAD_DEFINE_ERROR(ConfigError);

#undef EVOCAD_DEFINE_ERROR

/// Malformed STL input; carries the byte offset where parsing stopped.
class MalformedStl : public Error {
public:
  MalformedStl(const std::string &what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// csg_mini syntax error with 1-based source position.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string &what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

} // namespace evocad
