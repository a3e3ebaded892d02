#include "rankindep/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankindep {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("Matrix: data size " + std::to_string(data_.size()) + " != " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix Matrix::select_rows(std::span<const std::size_t> index) const {
  Matrix out(index.size(), cols_);
  for (std::size_t k = 0; k < index.size(); ++k) {
    auto src = row(index[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

PairedDataset::PairedDataset(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.rows()) {
    throw InvalidArgument("PairedDataset: X has " + std::to_string(x_.rows()) + " rows but Y has " +
                          std::to_string(y_.rows()));
  }
  if (x_.rows() < 2) throw InvalidArgument("PairedDataset: need at least 2 observations");
  if (x_.cols() < 1 || y_.cols() < 1) throw InvalidArgument("PairedDataset: empty feature block");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x_.data().begin(), x_.data().end(), finite) ||
      !std::all_of(y_.data().begin(), y_.data().end(), finite)) {
    throw InvalidArgument("PairedDataset: non-finite entry");
  }
}

Matrix PairedDataset::joint_rows(std::span<const std::size_t> x_index,
                                 std::span<const std::size_t> y_index) const {
  if (x_index.size() != y_index.size()) throw InvalidArgument("joint_rows: index length mismatch");
  const std::size_t q = dim_x();
  Matrix out(x_index.size(), dim());
  for (std::size_t k = 0; k < x_index.size(); ++k) {
    auto dst = out.row(k);
    auto xs = x_.row(x_index[k]);
    auto ys = y_.row(y_index[k]);
    std::copy(xs.begin(), xs.end(), dst.begin());
    std::copy(ys.begin(), ys.end(), dst.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return out;
}

Matrix PairedDataset::joint() const {
  std::vector<std::size_t> idx(n());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return joint_rows(idx, idx);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(seeded_engine(master_seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t child) const {
  return RngStream(master_seed_, mix64(stream_id_ ^ mix64(child + 0x632be59bd9b4e019ULL)));
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t RngStream::uniform_index(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

double RngStream::normal() { return normal_(engine_); }

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<char> seen(mapping_.size(), 0);
  for (std::size_t v : mapping_) {
    if (v >= mapping_.size() || seen[v]) throw InvalidArgument("Permutation: mapping is not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<std::size_t> map(m);
  std::iota(map.begin(), map.end(), std::size_t{0});
  return Permutation(std::move(map));
}

std::size_t Permutation::fixed_points() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < mapping_.size(); ++i) count += mapping_[i] == i;
  return count;
}

Permutation draw_uniform_permutation(std::size_t m, RngStream& rng) {
  if (m == 0) throw InvalidArgument("draw_uniform_permutation: m must be >= 1");
  std::vector<std::size_t> map(m);
  std::iota(map.begin(), map.end(), std::size_t{0});
  for (std::size_t i = m - 1; i > 0; --i) std::swap(map[i], map[rng.uniform_index(i + 1)]);
  return Permutation(std::move(map));
}

Permutation draw_uniform_derangement(std::size_t m, RngStream& rng) {
  if (m < 2) throw InvalidArgument("draw_uniform_derangement: m must be >= 2");
  // Acceptance probability tends to 1/e, so the expected number of draws is < 3.
  for (;;) {
    Permutation p = draw_uniform_permutation(m, rng);
    if (p.fixed_points() == 0) return p;
  }
}

}  // namespace rankindep
