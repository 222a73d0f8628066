#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace curvegrid {

/** A parameter violates a documented precondition (ranges, counts, flags). */
struct invalid_parameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** Two geometric objects with different coordinate dimensions were combined. */
struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** An operation that requires data was given none. */
struct empty_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** A lattice coordinate lies outside the bounded grid. */
struct out_of_bounds : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/** A query curve does not have the vertex count the index was built for. */
struct query_size_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** A time-window query with inverted or non-finite endpoints. */
struct invalid_query : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** A file could not be read or written, or its contents do not parse as the
 *  expected format. */
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** The enumeration an index build would require exceeds the caller's budget.
 *  `required` is a lower bound on the number of sequences the build needs;
 *  it saturates at UINT64_MAX. Raised before any enumeration work is done. */
struct budget_exceeded : std::runtime_error {
  std::uint64_t required;
  std::uint64_t budget;

  budget_exceeded(const std::string& what, std::uint64_t required_, std::uint64_t budget_)
      : std::runtime_error(what), required(required_), budget(budget_) {}
};

}  // namespace curvegrid
