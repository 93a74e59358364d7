#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crpsbin {

enum class Errc {
  missing_file,
  missing_column,
  unparseable_cell,
  dataset_too_small,
  empty_input,
  value_not_indexed,
  empty_ecdf,
  bin_too_small,
  index_out_of_range,
  capacity_exceeded,
  infeasible_k,
  k_zero,
  n_too_large_for_oracle,
  invalid_boundaries,
  empty_test,
  all_k_infeasible,
  k_out_of_range,
  invalid_epsilon,
  degenerate_x,
  unknown_study,
  corrupt_model,
  invalid_argument,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace crpsbin
