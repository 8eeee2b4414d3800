#pragma once

#include <stdexcept>
#include <string>

namespace hfmri {

/// Malformed or corrupt on-disk data (bad magic, truncation, domain violations).
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown (SVD failure, non-finite objective) with diagnostic text.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hfmri
