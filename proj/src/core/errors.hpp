#pragma once

#include <stdexcept>
#include <string>

namespace mssvdd {

enum class errc {
  invalid_argument,
  rank_deficient,
  not_symmetric,
  dimension_too_large,
  infeasible_c,
  strategy_arity,
  empty_class,
  parse_error,
  unknown_label,
  column_count,
  too_few_items,
  data_unavailable,
  no_feasible_cell,
  non_finite_gradient,
  degenerate_projection,
  degenerate_kernel,
  config_error,
  io_error,
  version_mismatch,
  corrupt_file,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace mssvdd
