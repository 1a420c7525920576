#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dce {

/// Input could not be tokenized/typed. Carries the offending source line.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, const std::string& file, long line)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(file), line_(line) {}
  const std::string& file() const { return file_; }
  long line() const { return line_; }

private:
  std::string file_;
  long line_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (singular matrix, undefined ratio, ...).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// Shortest decimal form at `digits` significant digits, '.' radix,
/// no thousands separators. All file output goes through this.
std::string format_number(double value, int digits = 12);

/// Parse a decimal number; throws std::invalid_argument on garbage.
double parse_number(const std::string& token);

/// SplitMix64 step; used to derive independent per-worker seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

} // namespace dce
