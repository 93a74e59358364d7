#include "crpsbin/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "crpsbin/error.hpp"

namespace crpsbin {
namespace {

void validate(const std::vector<Observation>& obs) {
  if (obs.size() < 2) {
    throw Error(Errc::dataset_too_small,
                "need at least 2 observations, got " + std::to_string(obs.size()));
  }
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!std::isfinite(obs[i].x) || !std::isfinite(obs[i].y)) {
      throw Error(Errc::invalid_argument,
                  "observation " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  cells.push_back(std::move(cell));
  for (auto& c : cells) {
    auto first = c.find_first_not_of(" \t");
    auto last = c.find_last_not_of(" \t");
    c = first == std::string::npos ? std::string{} : c.substr(first, last - first + 1);
  }
  return cells;
}

bool parse_real(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

SortedDataset SortedDataset::from_unsorted(std::vector<Observation> obs) {
  validate(obs);
  std::stable_sort(obs.begin(), obs.end(),
                   [](const Observation& a, const Observation& b) { return a.x < b.x; });
  return SortedDataset(std::move(obs));
}

SortedDataset SortedDataset::from_sorted(std::vector<Observation> obs) {
  validate(obs);
  for (std::size_t i = 1; i < obs.size(); ++i) {
    if (obs[i].x < obs[i - 1].x) {
      throw Error(Errc::invalid_argument, "observations are not sorted by x");
    }
  }
  return SortedDataset(std::move(obs));
}

std::vector<double> SortedDataset::xs() const {
  std::vector<double> out(obs_.size());
  std::transform(obs_.begin(), obs_.end(), out.begin(), [](const auto& o) { return o.x; });
  return out;
}

std::vector<double> SortedDataset::ys() const {
  std::vector<double> out(obs_.size());
  std::transform(obs_.begin(), obs_.end(), out.begin(), [](const auto& o) { return o.y; });
  return out;
}

std::vector<std::uint8_t> SortedDataset::allowed_cuts() const {
  const std::size_t n = obs_.size();
  std::vector<std::uint8_t> allowed(n + 1, 1);
  for (std::size_t b = 1; b < n; ++b) {
    allowed[b] = obs_[b - 1].x < obs_[b].x ? 1 : 0;
  }
  return allowed;
}

SortedDataset load_csv(const std::filesystem::path& path, std::string_view x_col,
                       std::string_view y_col) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::missing_file, "cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::dataset_too_small, "'" + path.string() + "' is empty");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_row(line);
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(Errc::missing_column,
                  "column '" + std::string(name) + "' not found in '" + path.string() + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t xi = column(x_col);
  const std::size_t yi = column(y_col);

  std::vector<Observation> obs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    Observation o;
    for (auto [idx, target] : {std::pair{xi, &o.x}, std::pair{yi, &o.y}}) {
      if (idx >= cells.size() || !parse_real(cells[idx], *target)) {
        throw Error(Errc::unparseable_cell,
                    "row " + std::to_string(row) + ", column '" + header[idx] +
                        "': cannot parse '" + (idx < cells.size() ? cells[idx] : "") +
                        "' as a finite real");
      }
    }
    obs.push_back(o);
  }
  if (obs.size() < 2) {
    throw Error(Errc::dataset_too_small, "'" + path.string() + "' has fewer than 2 data rows");
  }
  return SortedDataset::from_unsorted(std::move(obs));
}

SplitPair alternating_split(const SortedDataset& ds) {
  if (ds.size() < 4) {
    throw Error(Errc::dataset_too_small, "alternating split needs n >= 4");
  }
  std::vector<Observation> train, test;
  train.reserve((ds.size() + 1) / 2);
  test.reserve(ds.size() / 2);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (i % 2 == 0 ? train : test).push_back(ds[i]);
  }
  return {SortedDataset::from_sorted(std::move(train)),
          SortedDataset::from_sorted(std::move(test))};
}

SplitPair random_half_split(const SortedDataset& ds, RngSeed seed) {
  if (ds.size() < 4) {
    throw Error(Errc::dataset_too_small, "random half split needs n >= 4");
  }
  const std::size_t n = ds.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.index(i + 1)]);
  }
  const std::size_t n_train = n / 2;
  std::sort(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::vector<Observation> train, test;
  for (std::size_t r = 0; r < n; ++r) {
    (r < n_train ? train : test).push_back(ds[perm[r]]);
  }
  return {SortedDataset::from_sorted(std::move(train)),
          SortedDataset::from_sorted(std::move(test))};
}

SortedDataset gen_heteroscedastic(std::size_t n, RngSeed seed) {
  if (n < 2) throw Error(Errc::dataset_too_small, "gen_heteroscedastic needs n >= 2");
  Rng rng(seed);
  std::vector<Observation> obs(n);
  for (auto& o : obs) {
    o.x = rng.uniform(0.0, 3.0);
    o.y = rng.normal(3.0 * o.x, 1.0 + o.x);
  }
  return SortedDataset::from_unsorted(std::move(obs));
}

std::vector<double> gen_bimodal(std::size_t m, RngSeed seed) {
  if (m < 1) throw Error(Errc::invalid_argument, "gen_bimodal needs m >= 1");
  Rng rng(seed);
  std::vector<double> out(m);
  for (auto& v : out) {
    const double mode = rng.bernoulli(0.5) ? 3.0 : -3.0;
    v = rng.normal(mode, 0.5);
  }
  return out;
}

}  // namespace crpsbin
