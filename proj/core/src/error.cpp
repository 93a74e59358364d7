#include "crpsbin/error.hpp"

namespace crpsbin {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::missing_file: return "missing-file";
    case Errc::missing_column: return "missing-column";
    case Errc::unparseable_cell: return "unparseable-cell";
    case Errc::dataset_too_small: return "dataset-too-small";
    case Errc::empty_input: return "empty-input";
    case Errc::value_not_indexed: return "value-not-indexed";
    case Errc::empty_ecdf: return "empty-ecdf";
    case Errc::bin_too_small: return "bin-too-small";
    case Errc::index_out_of_range: return "index-out-of-range";
    case Errc::capacity_exceeded: return "capacity-exceeded";
    case Errc::infeasible_k: return "infeasible-K";
    case Errc::k_zero: return "K-zero";
    case Errc::n_too_large_for_oracle: return "n-too-large-for-oracle";
    case Errc::invalid_boundaries: return "invalid-boundaries";
    case Errc::empty_test: return "empty-test";
    case Errc::all_k_infeasible: return "all-K-infeasible";
    case Errc::k_out_of_range: return "k-out-of-range";
    case Errc::invalid_epsilon: return "invalid-epsilon";
    case Errc::degenerate_x: return "degenerate-x";
    case Errc::unknown_study: return "unknown-study";
    case Errc::corrupt_model: return "corrupt-model";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace crpsbin
