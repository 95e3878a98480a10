#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permrd {

/// An arrangement of 1..n in vector notation. Positions and values are both
/// 1-based in the public interface; `values()[i - 1]` is sigma(i).
///
/// Instances are immutable once built, and every instance is a bijection on
/// 1..n with n >= 1.
class Permutation {
 public:
  using value_type = std::int32_t;

  /// Checked construction. Throws Error with kind empty_input,
  /// value_out_of_range or duplicate_value.
  static Permutation from_values(std::span<const std::int64_t> raw);
  static Permutation from_values(std::initializer_list<std::int64_t> raw);

  /// Adopts `values` without validation. The caller guarantees a bijection on
  /// 1..values.size(); this is checked only in debug builds.
  static Permutation adopt_unchecked(std::vector<value_type> values);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return values_.size(); }

  /// sigma(i) for 1 <= i <= n.
  value_type operator()(std::size_t i) const { return values_[i - 1]; }

  std::span<const value_type> values() const noexcept { return values_; }

  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<value_type> values)
      : values_(std::move(values)) {}

  std::vector<value_type> values_;
};

/// Inversion vector: entry i (1-based, i = 1..n-1) lies in [0:i] and counts
/// the smaller values appearing after value i+1.
class InversionVector {
 public:
  /// Throws Error(invalid_inversion_vector) if some entry leaves [0:i], and
  /// Error(degenerate_size) for an empty vector.
  static InversionVector from_entries(std::span<const std::int64_t> entries);
  static InversionVector from_entries(std::initializer_list<std::int64_t> entries);
  static InversionVector adopt_unchecked(std::vector<std::int32_t> entries);

  /// All-zero vector for S_n (the identity's code). Requires n >= 2.
  static InversionVector zeros(std::size_t n);

  /// n such that this vector codes an element of S_n.
  std::size_t permutation_size() const noexcept { return entries_.size() + 1; }

  /// Entry i for 1 <= i <= n-1.
  std::int32_t operator()(std::size_t i) const { return entries_[i - 1]; }

  std::span<const std::int32_t> entries() const noexcept { return entries_; }

  std::int64_t sum() const noexcept;

  friend bool operator==(const InversionVector&, const InversionVector&) = default;

 private:
  explicit InversionVector(std::vector<std::int32_t> entries)
      : entries_(std::move(entries)) {}

  std::vector<std::int32_t> entries_;
};

/// Insertion positions of the repeated insertion process: a_i in [1:i].
class InsertionVector {
 public:
  static InsertionVector from_entries(std::span<const std::int64_t> entries);
  static InsertionVector from_entries(std::initializer_list<std::int64_t> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  std::int32_t operator()(std::size_t i) const { return entries_[i - 1]; }
  std::span<const std::int32_t> entries() const noexcept { return entries_; }

  friend bool operator==(const InsertionVector&, const InsertionVector&) = default;

 private:
  explicit InsertionVector(std::vector<std::int32_t> entries)
      : entries_(std::move(entries)) {}

  std::vector<std::int32_t> entries_;
};

/// Checked construction from an arbitrary integer sequence.
Permutation validate(std::span<const std::int64_t> raw);

Permutation inverse(const Permutation& sigma);

/// Function composition: compose(outer, inner)(i) = outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Number of pairs i < j with sigma(i) > sigma(j), in O(n log n).
std::int64_t inversion_count(const Permutation& sigma);

/// O(n log n) conversion. Throws Error(degenerate_size) when n < 2.
InversionVector to_inversion_vector(const Permutation& sigma);

/// Direct O(n^2) evaluation of the counting definition, kept as a reference.
InversionVector to_inversion_vector_reference(const Permutation& sigma);

Permutation from_inversion_vector(const InversionVector& code);

/// Extended inversion vector e(i) = i - a_i with e(1) = 0 dropped. For n = 1
/// the result would be empty, so n >= 2 is required.
InversionVector insertion_to_extended_inversion(const InsertionVector& insertion);

/// The arrangement read back to front: result(i) = sigma(n + 1 - i). Every
/// value pair flips its relative order.
Permutation reverse(const Permutation& sigma);

// Plain-text format: one permutation per line, 1-based values separated by
// whitespace. Blank lines and lines starting with '#' are skipped by readers.

/// Parses one line. Throws Error(parse_error) naming `line_number` and the
/// 1-based column of the offending token, or the validation error kinds.
Permutation parse_permutation(std::string_view line, std::size_t line_number = 1);

std::string format_permutation(const Permutation& sigma);

struct NumberedPermutation {
  std::size_t line_number;
  Permutation permutation;
};

/// Reads every permutation from a stream, stopping at the first error.
std::vector<NumberedPermutation> read_permutations(std::istream& in);

std::ostream& operator<<(std::ostream& os, const Permutation& sigma);

}  // namespace permrd
