#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace escot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A character outside the session alphabet.
class UnknownSymbol : public Error {
 public:
  UnknownSymbol(std::size_t position, char symbol)
      : Error("unknown symbol '" + std::string(1, symbol) + "' at position " +
              std::to_string(position)),
        position_(position),
        symbol_(symbol) {}
  std::size_t position() const { return position_; }
  char symbol() const { return symbol_; }

 private:
  std::size_t position_;
  char symbol_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error("parse error: " + what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InvalidGroupElement : public Error {
 public:
  using Error::Error;
};

// Authenticated decryption failed (tampered or mismatched ciphertext).
class AuthFailure : public Error {
 public:
  using Error::Error;
};

class ChoiceOutOfRange : public Error {
 public:
  using Error::Error;
};

class CodeOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FrameTooLarge : public Error {
 public:
  using Error::Error;
};

class UnknownFrameType : public Error {
 public:
  using Error::Error;
};

class CountOutOfRange : public Error {
 public:
  using Error::Error;
};

// Peer closed the stream mid-message.
class ConnectionClosed : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// Peer violated the session protocol (bad frame sequence, REJECT, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace escot
