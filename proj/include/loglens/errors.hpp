#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loglens {

// Base for all library errors. code() is a stable machine-readable tag the
// CLI prints alongside the message.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* code() const noexcept { return "error"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "io"; }
};

class EmptyDocumentError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "empty-document"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "config"; }
};

class MissingArtifactError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "missing-artifact"; }
};

// Optimization blew up: carries the iteration and the largest gradient
// component seen when non-finite coordinates were detected.
class TsneDivergenceError : public Error {
 public:
  TsneDivergenceError(int iteration, double max_gradient, const std::string& msg)
      : Error(msg), iteration_(iteration), max_gradient_(max_gradient) {}
  const char* code() const noexcept override { return "tsne-divergence"; }
  int iteration() const noexcept { return iteration_; }
  double max_gradient() const noexcept { return max_gradient_; }

 private:
  int iteration_;
  double max_gradient_;
};

class RemoteEmbedError : public Error {
 public:
  enum class Kind { Transport, HttpStatus, BadResponse, DimensionMismatch, NonFinite };

  RemoteEmbedError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  const char* code() const noexcept override {
    switch (kind_) {
      case Kind::Transport: return "remote-transport";
      case Kind::HttpStatus: return "remote-status";
      case Kind::BadResponse: return "remote-bad-response";
      case Kind::DimensionMismatch: return "remote-dimension";
      case Kind::NonFinite: return "remote-non-finite";
    }
    return "remote";
  }
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace loglens
