#include "xrcc/codec.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "xrcc/errors.hpp"

namespace xrcc {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // exact: result * (n - k + i) is divisible by i at every step
    result = result * static_cast<std::uint64_t>(n - k + i) / i;
  }
  return result;
}

std::vector<Subset> enumerate_subsets(int ground_size, int subset_size) {
  if (ground_size < 0 || subset_size < 0 || subset_size > ground_size) {
    throw ArgumentError("enumerate_subsets: need 0 <= k <= n, got n=" +
                        std::to_string(ground_size) +
                        " k=" + std::to_string(subset_size));
  }
  std::vector<Subset> out;
  out.reserve(binomial(ground_size, subset_size));
  Subset current(subset_size);
  for (int i = 0; i < subset_size; ++i) current[i] = i;
  while (true) {
    out.push_back(current);
    int i = subset_size - 1;
    while (i >= 0 && current[i] == ground_size - subset_size + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < subset_size; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::uint64_t subset_to_flat(int ground_size, const Subset& subset) {
  const int k = static_cast<int>(subset.size());
  std::uint64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    if (subset[i] <= prev || subset[i] >= ground_size) {
      throw ArgumentError("subset_to_flat: subset not sorted or out of range");
    }
    // count subsets that agree on the first i elements but pick a smaller one
    for (int v = prev + 1; v < subset[i]; ++v) {
      rank += binomial(ground_size - v - 1, k - i - 1);
    }
    prev = subset[i];
  }
  return rank;
}

Subset flat_to_subset(int ground_size, int subset_size, std::uint64_t index) {
  if (subset_size < 0 || subset_size > ground_size ||
      index >= binomial(ground_size, subset_size)) {
    throw ArgumentError("flat_to_subset: index out of range");
  }
  Subset out;
  out.reserve(subset_size);
  int v = 0;
  for (int i = 0; i < subset_size; ++i) {
    while (true) {
      const auto block = binomial(ground_size - v - 1, subset_size - i - 1);
      if (index < block) break;
      index -= block;
      ++v;
    }
    out.push_back(v++);
  }
  return out;
}

std::uint64_t subset_rank_within(const Subset& ground, const Subset& subset) {
  Subset local;
  local.reserve(subset.size());
  for (int element : subset) {
    auto it = std::lower_bound(ground.begin(), ground.end(), element);
    if (it == ground.end() || *it != element) {
      throw ArgumentError("subset_rank_within: element outside ground set");
    }
    local.push_back(static_cast<int>(it - ground.begin()));
  }
  return subset_to_flat(static_cast<int>(ground.size()), local);
}

void xor_into(Bytes& acc, std::span<const std::uint8_t> other) {
  if (acc.size() != other.size()) {
    throw CodecError("xor: payload length mismatch (" +
                     std::to_string(acc.size()) + " vs " +
                     std::to_string(other.size()) + ")");
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= other[i];
}

Bytes xor_combine(std::span<const Bytes> payloads) {
  if (payloads.empty()) throw CodecError("xor_combine: empty operand list");
  Bytes acc = payloads.front();
  for (std::size_t i = 1; i < payloads.size(); ++i) xor_into(acc, payloads[i]);
  return acc;
}

FileLibrary::FileLibrary(std::vector<Bytes> payloads)
    : payloads_(std::move(payloads)) {
  if (payloads_.empty()) throw ArgumentError("FileLibrary: need N >= 1");
  file_size_ = payloads_.front().size();
  if (file_size_ == 0) throw ArgumentError("FileLibrary: need F >= 1");
  for (const auto& p : payloads_) {
    if (p.size() != file_size_) {
      throw CodecError("FileLibrary: payloads differ in length");
    }
  }
}

FileLibrary FileLibrary::synthetic(int file_count, std::size_t file_size,
                                   std::uint64_t seed) {
  if (file_count < 1 || file_size < 1) {
    throw ArgumentError("FileLibrary::synthetic: need N >= 1 and F >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<Bytes> payloads(file_count, Bytes(file_size));
  for (auto& p : payloads) {
    for (auto& b : p) b = static_cast<std::uint8_t>(rng() & 0xFFu);
  }
  return FileLibrary(std::move(payloads));
}

const Bytes& FileLibrary::file(int file_id) const {
  if (file_id < 0 || file_id >= file_count()) {
    throw CodecError("unknown file id " + std::to_string(file_id));
  }
  return payloads_[file_id];
}

std::vector<Bytes> split_file(const FileLibrary& library, int file_id,
                              std::size_t parts) {
  if (parts < 1) throw ArgumentError("split_file: need S >= 1");
  const Bytes& data = library.file(file_id);
  const std::size_t part_len = (data.size() + parts - 1) / parts;
  std::vector<Bytes> out(parts, Bytes(part_len, 0));
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t begin = std::min(i * part_len, data.size());
    const std::size_t end = std::min(begin + part_len, data.size());
    std::copy(data.begin() + begin, data.begin() + end, out[i].begin());
  }
  return out;
}

Bytes join_parts(std::span<const Bytes> parts, std::size_t file_size) {
  Bytes out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  if (out.size() < file_size) throw CodecError("join_parts: too few bytes");
  out.resize(file_size);
  return out;
}

}  // namespace xrcc
