#pragma once

#include <stdexcept>
#include <string>

namespace cognoise {

/// Raised when a choice function collapses to a 0/1 step (all noise terms zero).
class deterministic_limit_error : public std::domain_error {
 public:
  explicit deterministic_limit_error(const std::string& what)
      : std::domain_error(what) {}
};

/// Bad flags, malformed config files, missing paths. CLI exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent data files. CLI exit code 3.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Sampler diagnostic failure (divergence storm, non-finite gradient). CLI exit code 4.
class sampler_error : public std::runtime_error {
 public:
  explicit sampler_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cognoise
