#pragma once

#include <optional>
#include <string>

#include "descriptor/continuous.hpp"

namespace descriptor {

/// A system definition read from a JSON file.
///
/// Matrix entries are numbers or rational strings such as "-3/4". The input
/// is an object with a "kind" (zero, constant, polynomial, exponential,
/// sinusoid, samples) or a list of such objects, summed.
struct SystemSpecFile {
  std::string name;
  RationalMatrix F_exact, G_exact, B_exact;
  Matrix F, G, B;
  InputSignal input = InputSignal::zero(0);
  std::optional<Vector> Y0;
  double t0 = 0.0;
  std::optional<double> T;
  std::optional<long> steps;
  std::optional<double> order_n;
  DecompositionOptions options;
  bool exact = false;
  std::string digest;  ///< hex SHA-256 of the file bytes

  Index m() const { return F.rows(); }
  Index r() const { return B.cols(); }
};

/// Throws ParseError naming the offending field.
SystemSpecFile parse_spec(const std::string& text);
SystemSpecFile load_spec_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace descriptor
