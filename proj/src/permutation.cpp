#include "permrd/permutation.hpp"

#include <cassert>
#include <charconv>
#include <istream>
#include <ostream>

#include "permrd/detail/counting_tree.hpp"
#include "permrd/error.hpp"

namespace permrd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::duplicate_value: return "duplicate_value";
    case ErrorKind::value_out_of_range: return "value_out_of_range";
    case ErrorKind::size_mismatch: return "size_mismatch";
    case ErrorKind::degenerate_size: return "degenerate_size";
    case ErrorKind::invalid_inversion_vector: return "invalid_inversion_vector";
    case ErrorKind::invalid_insertion_vector: return "invalid_insertion_vector";
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::unsupported_combination: return "unsupported_combination";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::limit_exceeded: return "limit_exceeded";
  }
  return "unknown";
}

namespace {

constexpr std::int64_t kMaxSize = std::int64_t{1} << 30;

[[maybe_unused]] bool is_bijection(const std::vector<Permutation::value_type>& values) {
  std::vector<bool> seen(values.size() + 1, false);
  for (auto v : values) {
    if (v < 1 || static_cast<std::size_t>(v) > values.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

Permutation Permutation::from_values(std::span<const std::int64_t> raw) {
  if (raw.empty()) throw Error(ErrorKind::empty_input, "empty permutation");
  if (static_cast<std::int64_t>(raw.size()) >= kMaxSize) {
    throw Error(ErrorKind::limit_exceeded, "permutation too long");
  }
  const auto n = static_cast<std::int64_t>(raw.size());
  std::vector<std::size_t> first_position(raw.size() + 1, 0);
  std::vector<value_type> values;
  values.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::int64_t v = raw[i];
    if (v < 1 || v > n) {
      throw Error(ErrorKind::value_out_of_range,
                  "value " + std::to_string(v) + " at position " + std::to_string(i + 1) +
                      " is outside 1.." + std::to_string(n));
    }
    if (first_position[v] != 0) {
      throw Error(ErrorKind::duplicate_value,
                  "duplicate value " + std::to_string(v) + " at positions " +
                      std::to_string(first_position[v]) + " and " + std::to_string(i + 1));
    }
    first_position[v] = i + 1;
    values.push_back(static_cast<value_type>(v));
  }
  return Permutation(std::move(values));
}

Permutation Permutation::from_values(std::initializer_list<std::int64_t> raw) {
  return from_values(std::span<const std::int64_t>(raw.begin(), raw.size()));
}

Permutation Permutation::adopt_unchecked(std::vector<value_type> values) {
  assert(!values.empty() && is_bijection(values));
  return Permutation(std::move(values));
}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::empty_input, "identity of size 0");
  std::vector<value_type> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<value_type>(i + 1);
  return Permutation(std::move(values));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != static_cast<value_type>(i + 1)) return false;
  }
  return true;
}

InversionVector InversionVector::from_entries(std::span<const std::int64_t> entries) {
  if (entries.empty()) {
    throw Error(ErrorKind::degenerate_size, "inversion vector needs n >= 2");
  }
  std::vector<std::int32_t> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto bound = static_cast<std::int64_t>(i + 1);
    if (entries[i] < 0 || entries[i] > bound) {
      throw Error(ErrorKind::invalid_inversion_vector,
                  "entry " + std::to_string(i + 1) + " = " + std::to_string(entries[i]) +
                      " is outside [0:" + std::to_string(bound) + "]");
    }
    out.push_back(static_cast<std::int32_t>(entries[i]));
  }
  return InversionVector(std::move(out));
}

InversionVector InversionVector::from_entries(std::initializer_list<std::int64_t> entries) {
  return from_entries(std::span<const std::int64_t>(entries.begin(), entries.size()));
}

InversionVector InversionVector::adopt_unchecked(std::vector<std::int32_t> entries) {
#ifndef NDEBUG
  assert(!entries.empty());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    assert(entries[i] >= 0 && entries[i] <= static_cast<std::int32_t>(i + 1));
  }
#endif
  return InversionVector(std::move(entries));
}

InversionVector InversionVector::zeros(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::degenerate_size, "inversion vector needs n >= 2");
  return InversionVector(std::vector<std::int32_t>(n - 1, 0));
}

std::int64_t InversionVector::sum() const noexcept {
  std::int64_t total = 0;
  for (auto e : entries_) total += e;
  return total;
}

InsertionVector InsertionVector::from_entries(std::span<const std::int64_t> entries) {
  if (entries.empty()) throw Error(ErrorKind::empty_input, "empty insertion vector");
  std::vector<std::int32_t> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto bound = static_cast<std::int64_t>(i + 1);
    if (entries[i] < 1 || entries[i] > bound) {
      throw Error(ErrorKind::invalid_insertion_vector,
                  "insertion position " + std::to_string(i + 1) + " = " +
                      std::to_string(entries[i]) + " is outside [1:" + std::to_string(bound) +
                      "]");
    }
    out.push_back(static_cast<std::int32_t>(entries[i]));
  }
  return InsertionVector(std::move(out));
}

InsertionVector InsertionVector::from_entries(std::initializer_list<std::int64_t> entries) {
  return from_entries(std::span<const std::int64_t>(entries.begin(), entries.size()));
}

Permutation validate(std::span<const std::int64_t> raw) { return Permutation::from_values(raw); }

Permutation inverse(const Permutation& sigma) {
  const auto values = sigma.values();
  std::vector<Permutation::value_type> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[values[i] - 1] = static_cast<Permutation::value_type>(i + 1);
  }
  return Permutation::adopt_unchecked(std::move(out));
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw Error(ErrorKind::size_mismatch, "cannot compose permutations of sizes " +
                                              std::to_string(outer.size()) + " and " +
                                              std::to_string(inner.size()));
  }
  const auto a = outer.values();
  const auto b = inner.values();
  std::vector<Permutation::value_type> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i] - 1];
  return Permutation::adopt_unchecked(std::move(out));
}

std::int64_t inversion_count(const Permutation& sigma) {
  const auto values = sigma.values();
  detail::CountingTree seen(values.size());
  std::int64_t total = 0;
  for (std::size_t i = values.size(); i-- > 0;) {
    total += seen.prefix(values[i] - 1);
    seen.add(values[i], 1);
  }
  return total;
}

InversionVector to_inversion_vector(const Permutation& sigma) {
  const auto values = sigma.values();
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorKind::degenerate_size, "inversion vector needs n >= 2");
  std::vector<std::int32_t> entries(n - 1);
  detail::CountingTree seen(n);
  for (std::size_t i = n; i-- > 0;) {
    const auto v = values[i];
    if (v >= 2) entries[v - 2] = static_cast<std::int32_t>(seen.prefix(v - 1));
    seen.add(v, 1);
  }
  return InversionVector::adopt_unchecked(std::move(entries));
}

InversionVector to_inversion_vector_reference(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  if (n < 2) throw Error(ErrorKind::degenerate_size, "inversion vector needs n >= 2");
  const Permutation position = inverse(sigma);
  std::vector<std::int32_t> entries(n - 1);
  for (std::size_t v = 2; v <= n; ++v) {
    std::int32_t count = 0;
    for (std::size_t u = 1; u < v; ++u) {
      if (position(u) > position(v)) ++count;
    }
    entries[v - 2] = count;
  }
  return InversionVector::adopt_unchecked(std::move(entries));
}

Permutation from_inversion_vector(const InversionVector& code) {
  const std::size_t n = code.permutation_size();
  detail::CountingTree free_slots(n);
  free_slots.fill_ones();
  std::vector<Permutation::value_type> values(n);
  for (std::size_t v = n; v >= 1; --v) {
    // v must be followed by exactly x_v of the v - 1 smaller values, all of
    // which still have to go into the remaining free slots.
    const std::int64_t after = v >= 2 ? code(v - 1) : 0;
    const std::size_t slot = free_slots.kth(static_cast<std::int64_t>(v) - after);
    values[slot - 1] = static_cast<Permutation::value_type>(v);
    free_slots.add(slot, -1);
  }
  return Permutation::adopt_unchecked(std::move(values));
}

InversionVector insertion_to_extended_inversion(const InsertionVector& insertion) {
  const std::size_t n = insertion.size();
  if (n < 2) throw Error(ErrorKind::degenerate_size, "insertion vector needs n >= 2");
  std::vector<std::int32_t> entries(n - 1);
  for (std::size_t i = 2; i <= n; ++i) {
    entries[i - 2] = static_cast<std::int32_t>(i) - insertion(i);
  }
  return InversionVector::adopt_unchecked(std::move(entries));
}

Permutation reverse(const Permutation& sigma) {
  const auto values = sigma.values();
  return Permutation::adopt_unchecked({values.rbegin(), values.rend()});
}

Permutation parse_permutation(std::string_view line, std::size_t line_number) {
  std::vector<std::int64_t> raw;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == ',') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != ',') {
      ++i;
    }
    const std::string_view token = line.substr(start, i - start);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_number) + ", column " +
                                              std::to_string(start + 1) + ": not an integer '" +
                                              std::string(token) + "'");
    }
    raw.push_back(value);
  }
  try {
    return Permutation::from_values(raw);
  } catch (const Error& e) {
    throw Error(e.kind(), "line " + std::to_string(line_number) + ": " + e.what());
  }
}

std::string format_permutation(const Permutation& sigma) {
  std::string out;
  out.reserve(sigma.size() * 4);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(sigma.values()[i]);
  }
  return out;
}

std::vector<NumberedPermutation> read_permutations(std::istream& in) {
  std::vector<NumberedPermutation> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back({line_number, parse_permutation(line, line_number)});
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Permutation& sigma) {
  return os << '[' << format_permutation(sigma) << ']';
}

}  // namespace permrd
