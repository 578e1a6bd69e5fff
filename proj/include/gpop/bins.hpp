#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <vector>

#include "gpop/mode.hpp"
#include "gpop/partition.hpp"
#include "gpop/types.hpp"

namespace gpop {

// Message buffer for one (source partition, destination partition) pair.
//
// Publication contract: the owning scatter thread appends whole records and
// then release-stores `published`; any reader that acquire-loads
// `published == n` sees all bytes of the first n records. `mode` is written
// only before the first publish of an iteration, so it is covered by the same
// ordering. Reader-side cursors (`consumed*`) are touched by exactly one
// thread per phase; phase barriers order the handoffs.
template <typename V>
struct BinCell {
  std::vector<V> data;
  std::vector<std::uint32_t> ids;  // SC framing: [count][local ids...], weights interleaved

  std::atomic<std::uint32_t> published{0};  // complete records visible to readers
  std::uint32_t data_pos = 0;               // writer cursor, == published after each append
  std::uint32_t ids_pos = 0;
  Mode mode = Mode::sc;

  std::uint32_t consumed = 0;      // records already gathered
  std::uint32_t consumed_ids = 0;  // SC id-stream read cursor
  std::uint64_t consumed_dst = 0;  // PC cursor into the static PNG destination list

  void reset() {
    published.store(0, std::memory_order_relaxed);
    data_pos = ids_pos = 0;
    consumed = consumed_ids = 0;
    consumed_dst = 0;
  }
};

// k x k grid of bins, preallocated from the PNG so scatter never reallocates.
template <typename V>
class BinMatrix {
 public:
  BinMatrix(const Png& png, const BinCapacities& caps)
      : k_(png.k), cells_(std::size_t{png.k} * png.k) {
    for (std::size_t i = 0; i < png.cells.size(); ++i) {
      const PngCell& c = png.cells[i];
      const part_t p = static_cast<part_t>(
          std::upper_bound(png.part_cells.begin(), png.part_cells.end(), i) -
          png.part_cells.begin() - 1);
      BinCell<V>& cell = at(p, c.dst_part);
      cell.data.resize(caps.value_cap[i]);
      cell.ids.resize(caps.id_cap[i]);
    }
  }

  BinCell<V>& at(part_t p, part_t q) { return cells_[std::size_t{p} * k_ + q]; }
  const BinCell<V>& at(part_t p, part_t q) const { return cells_[std::size_t{p} * k_ + q]; }

  part_t k() const { return k_; }

  // Test hook: when set, partition-centric scatter logs (p, q, "begin"/"end")
  // events so the bin-at-a-time write order can be asserted.
  struct AppendEvent {
    part_t src, dst;
    bool begin;
  };
  std::vector<AppendEvent>* append_log = nullptr;

 private:
  part_t k_;
  std::vector<BinCell<V>> cells_;
};

}  // namespace gpop
