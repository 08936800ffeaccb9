#pragma once

#include <stdexcept>
#include <string>

namespace msoga {

enum class ErrorKind {
  EmptyGraph,
  LoopEdge,
  DanglingEdge,
  UnknownNode,
  ReservedSymbol,
  NotPairGraph,
  NotStringLike,
  SizeLimit,
  UnboundVariable,
  VariableClash,
  IllKinded,
  UnknownMacro,
  UnknownSymbol,
  AlphabetMismatch,
  StateBlowup,
  BudgetExhausted,
  InvalidRun,
  StorageMismatch,
  UnknownInstruction,
  NotASuccessor,
  NotInDomain,
  EmptyOutput,
  AlphabetClash,
  DepthLimit,
  NotExclusive,
  Parse,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(ErrorKind::Parse,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

}  // namespace msoga
