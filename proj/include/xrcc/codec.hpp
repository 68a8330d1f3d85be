#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xrcc {

using Bytes = std::vector<std::uint8_t>;

/// Sorted list of entity ids (users or cache profiles).
using Subset = std::vector<int>;

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<Subset> enumerate_subsets(int ground_size, int subset_size);

/// Lexicographic rank of a sorted subset among all subsets of the same size.
std::uint64_t subset_to_flat(int ground_size, const Subset& subset);
Subset flat_to_subset(int ground_size, int subset_size, std::uint64_t index);

/// Rank of `subset` among the |subset|-subsets of `ground` (both sorted),
/// where elements are renumbered by their position in `ground`.
std::uint64_t subset_rank_within(const Subset& ground, const Subset& subset);

/// Bytewise XOR of equal-length payloads.
Bytes xor_combine(std::span<const Bytes> payloads);
void xor_into(Bytes& acc, std::span<const std::uint8_t> other);

/// N equal-length files. Payloads are immutable once built.
class FileLibrary {
 public:
  FileLibrary(std::vector<Bytes> payloads);

  /// Pseudorandom payloads from a seeded mt19937_64 stream.
  static FileLibrary synthetic(int file_count, std::size_t file_size,
                               std::uint64_t seed);

  int file_count() const { return static_cast<int>(payloads_.size()); }
  std::size_t file_size() const { return file_size_; }
  const Bytes& file(int file_id) const;

 private:
  std::vector<Bytes> payloads_;
  std::size_t file_size_ = 0;
};

/// Splits a file into `parts` subpackets of ceil(F/parts) bytes each; the
/// tail is zero padded.
std::vector<Bytes> split_file(const FileLibrary& library, int file_id,
                              std::size_t parts);

/// Inverse of split_file: concatenates and truncates to `file_size`.
Bytes join_parts(std::span<const Bytes> parts, std::size_t file_size);

}  // namespace xrcc
