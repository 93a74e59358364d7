#include "crpsbin/cost_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "crpsbin/error.hpp"
#include "crpsbin/fenwick.hpp"
#include "crpsbin/parallel.hpp"

namespace crpsbin {

__extension__ using Int128 = __int128;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr char kMagic[8] = {'C', 'R', 'P', 'S', 'C', 'M', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[k];
  return v;
}

double cost_from_w(std::size_t m, double w) {
  if (m < 2) return kInf;
  const double md = static_cast<double>(m);
  return md * w / ((md - 1.0) * (md - 1.0));
}

// One left endpoint: sweep j = i..n-1 growing the window by one response.
template <typename Sum, typename ValueOf, typename ToReal>
void sweep_row(std::size_t i, std::span<const std::size_t> ranks, std::size_t universe,
               ValueOf value_of, ToReal to_real, double* cost_row, double* w_row) {
  DualFenwick<Sum> tree(universe);
  Sum w{};
  const std::size_t n = ranks.size();
  for (std::size_t j = i; j < n; ++j) {
    const Sum v = value_of(j);
    const std::size_t inserted = j - i;
    if (inserted > 0) {
      const auto q = tree.query_rank(ranks[j]);
      const Sum r = static_cast<Sum>(q.rank);
      const Sum above = static_cast<Sum>(inserted - q.rank);
      w += v * r - q.sum_le + q.sum_gt - v * above;
    }
    tree.insert_rank(ranks[j], v);
    const double wd = to_real(w);
    cost_row[j - i] = cost_from_w(inserted + 1, wd);
    if (w_row != nullptr) w_row[j - i] = wd;
  }
}

}  // namespace

CostMatrix::CostMatrix(std::size_t n) : n_(n), cost_(entries(n), kInf) {}

CostMatrix CostMatrix::from_function(std::size_t n,
                                     const std::function<double(std::size_t, std::size_t)>& cost) {
  CostMatrix cm(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) cm.cost_[cm.offset(i, j)] = cost(i, j);
  }
  return cm;
}

std::size_t CostMatrix::bytes_required(std::size_t n, bool keep_dispersion) noexcept {
  return entries(n) * sizeof(double) * (keep_dispersion ? 2 : 1);
}

std::size_t CostMatrix::max_n_for(std::size_t cap_bytes, bool keep_dispersion) noexcept {
  const double per = static_cast<double>(sizeof(double) * (keep_dispersion ? 2 : 1));
  const double budget = static_cast<double>(cap_bytes) / per;
  auto n = static_cast<std::size_t>((std::sqrt(8.0 * budget + 1.0) - 1.0) / 2.0);
  while (n > 0 && bytes_required(n, keep_dispersion) > cap_bytes) --n;
  while (bytes_required(n + 1, keep_dispersion) <= cap_bytes) ++n;
  return n;
}

void CostMatrix::write_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out.write(kMagic, 8);
  put_u64(out, n_);
  for (double v : cost_) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error(Errc::io_error, "short write to '" + path.string() + "'");
}

CostMatrix CostMatrix::read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::missing_file, "cannot open '" + path.string() + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw Error(Errc::corrupt_model, "'" + path.string() + "' is not a CRPSCM01 cost matrix");
  }
  const std::uint64_t n = get_u64(in);
  CostMatrix cm(static_cast<std::size_t>(n));
  for (double& v : cm.cost_) v = std::bit_cast<double>(get_u64(in));
  if (!in) throw Error(Errc::corrupt_model, "'" + path.string() + "' is truncated");
  return cm;
}

CostMatrix precompute(std::span<const double> ys, const PrecomputeOptions& options) {
  const std::size_t n = ys.size();
  if (n < 2) throw Error(Errc::dataset_too_small, "cost matrix needs n >= 2");
  const std::size_t need = CostMatrix::bytes_required(n, options.keep_dispersion);
  if (need > options.memory_cap_bytes) {
    throw Error(Errc::capacity_exceeded,
                "n = " + std::to_string(n) + " needs " + std::to_string(need) +
                    " bytes for the cost table, above the memory cap of " +
                    std::to_string(options.memory_cap_bytes) + " bytes (max n = " +
                    std::to_string(CostMatrix::max_n_for(options.memory_cap_bytes,
                                                         options.keep_dispersion)) +
                    ")");
  }

  const RankIndex index(ys);
  std::vector<std::size_t> ranks(n);
  for (std::size_t j = 0; j < n; ++j) ranks[j] = index.rank_of(ys[j]);

  CostMatrix cm(n);
  if (options.keep_dispersion) cm.w_.assign(CostMatrix::entries(n), 0.0);

  auto w_row = [&](std::size_t i) {
    return options.keep_dispersion ? cm.w_.data() + cm.offset(i, i) : nullptr;
  };

  if (!options.exact_mode) {
    parallel_for(0, n, options.threads, [&](std::size_t i) {
      sweep_row<double>(
          i, ranks, index.size(), [&](std::size_t j) { return ys[j]; },
          [](double w) { return w; }, cm.cost_.data() + cm.offset(i, i), w_row(i));
    });
    return cm;
  }

  // Fixed point: y * 2^shift rounded to an integer with |value| < 2^52.
  double max_abs = 0.0;
  for (double v : ys) max_abs = std::max(max_abs, std::abs(v));
  const int shift = max_abs > 0.0 ? 52 - std::ilogb(max_abs) - 1 : 0;
  std::vector<std::int64_t> scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    scaled[j] = static_cast<std::int64_t>(std::llround(std::ldexp(ys[j], shift)));
  }
  parallel_for(0, n, options.threads, [&](std::size_t i) {
    sweep_row<Int128>(
        i, ranks, index.size(), [&](std::size_t j) { return static_cast<Int128>(scaled[j]); },
        [&](Int128 w) { return static_cast<double>(std::ldexp(static_cast<long double>(w), -shift)); },
        cm.cost_.data() + cm.offset(i, i), w_row(i));
  });
  return cm;
}

CostMatrix precompute(const SortedDataset& ds, const PrecomputeOptions& options) {
  const auto ys = ds.ys();
  return precompute(std::span<const double>(ys), options);
}

double naive_W(std::span<const double> ys, std::size_t i, std::size_t j) {
  if (i > j || j >= ys.size()) {
    throw Error(Errc::index_out_of_range, "window (" + std::to_string(i) + ", " +
                                              std::to_string(j) + ") outside 0.." +
                                              std::to_string(ys.size()));
  }
  double w = 0.0;
  for (std::size_t l = i; l <= j; ++l) {
    for (std::size_t r = l + 1; r <= j; ++r) w += std::abs(ys[l] - ys[r]);
  }
  return w;
}

QuadrangleReport check_quadrangle(const CostMatrix& cm, std::size_t max_reports,
                                  const QuadrangleOptions& options) {
  const std::size_t n = cm.n();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : cm.row(i)) {
      if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    }
  }
  QuadrangleReport report;
  report.tolerance = 1e-9 * (scale > 0.0 ? scale : 1.0);

  auto probe = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    const double ac = cm.cost(a, c), bd = cm.cost(b, d), ad = cm.cost(a, d), bc = cm.cost(b, c);
    if (!std::isfinite(ac) || !std::isfinite(bd) || !std::isfinite(ad) || !std::isfinite(bc)) {
      return;
    }
    ++report.quadruples_checked;
    const double gap = (ac + bd) - (ad + bc);
    if (gap > report.tolerance) {
      ++report.violations;
      if (report.reported.size() < max_reports) report.reported.push_back({a, b, c, d, gap});
    }
  };

  if (n <= options.exhaustive_limit) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        for (std::size_t c = b; c < n; ++c)
          for (std::size_t d = c; d < n; ++d) probe(a, b, c, d);
    return report;
  }

  report.exhaustive = false;
  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::size_t q[4] = {rng.index(n), rng.index(n), rng.index(n), rng.index(n)};
    std::sort(q, q + 4);
    probe(q[0], q[1], q[2], q[3]);
  }
  return report;
}

}  // namespace crpsbin
