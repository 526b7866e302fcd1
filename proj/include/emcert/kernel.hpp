#ifndef EMCERT_KERNEL_HPP
#define EMCERT_KERNEL_HPP

// Simulated external-memory substrate.
//
// All data lives in plain files of fixed-width records under a working
// directory. Block transfers of B records between a file and main memory
// are the unit of I/O accounting; at most M records of kernel-managed
// buffer space may be resident at any time. B and M are counted in
// records, not bytes.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace emcert {

namespace fs = std::filesystem;

class em_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Kernel-resident buffers would exceed the memory budget M.
class budget_error : public em_error {
public:
  using em_error::em_error;
};

/// Backing storage could not be written or read.
class capacity_error : public em_error {
public:
  using em_error::em_error;
};

/// Time-forward-processing contract violated (out-of-order delivery).
class protocol_error : public em_error {
public:
  using em_error::em_error;
};

struct IOConfig {
  std::size_t block_records = 1024;       // B
  std::size_t memory_records = 1u << 16;  // M, must be >= 4*B
};

struct IOStats {
  std::uint64_t blocks_read = 0;
  std::uint64_t blocks_written = 0;
  std::uint64_t elements_streamed = 0;
};

/// Reported in kernel.meta and asserted by the sort calibration test:
/// em_sort performs at most kSortConstant*(n/B)*(1 + ceil(log_{M/B}(n/B)))
/// block transfers.
inline constexpr unsigned kSortConstant = 4;

class Kernel {
public:
  Kernel(IOConfig cfg, fs::path workdir, bool cleanup_on_destroy = true)
      : cfg_(cfg), dir_(std::move(workdir)), cleanup_(cleanup_on_destroy) {
    if (cfg_.block_records < 2)
      throw em_error("kernel: block size must be at least 2 records");
    if (cfg_.memory_records < 4 * cfg_.block_records)
      throw em_error("kernel: memory budget must be at least 4 blocks");
    fs::create_directories(dir_);
    write_meta();
  }

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  ~Kernel() {
    if (cleanup_) {
      std::error_code ec;
      fs::remove_all(dir_, ec);
    }
  }

  const IOConfig& config() const { return cfg_; }
  std::size_t block_records() const { return cfg_.block_records; }
  std::size_t memory_records() const { return cfg_.memory_records; }
  const fs::path& dir() const { return dir_; }

  IOStats io_report() const { return stats_; }
  void reset_stats() { stats_ = IOStats{}; }

  std::size_t memory_in_use() const { return mem_in_use_; }
  std::size_t memory_high_water() const { return mem_high_water_; }
  void reset_high_water() { mem_high_water_ = mem_in_use_; }
  std::size_t memory_available() const {
    return cfg_.memory_records - mem_in_use_;
  }

  void mem_acquire(std::size_t records) {
    if (mem_in_use_ + records > cfg_.memory_records)
      throw budget_error("kernel: buffer space " +
                         std::to_string(mem_in_use_ + records) +
                         " records would exceed budget M=" +
                         std::to_string(cfg_.memory_records));
    mem_in_use_ += records;
    mem_high_water_ = std::max(mem_high_water_, mem_in_use_);
  }

  void mem_release(std::size_t records) {
    mem_in_use_ = records > mem_in_use_ ? 0 : mem_in_use_ - records;
  }

  void count_block_read() { ++stats_.blocks_read; }
  void count_block_write() { ++stats_.blocks_written; }
  void count_elements(std::uint64_t k) { stats_.elements_streamed += k; }

  fs::path make_temp_path(std::string_view tag) {
    return dir_ / ("tmp_" + std::to_string(next_id_++) + "_" +
                   std::string(tag) + ".bin");
  }

private:
  void write_meta() const {
    std::FILE* f = std::fopen((dir_ / "kernel.meta").string().c_str(), "w");
    if (!f) throw capacity_error("kernel: cannot write kernel.meta");
    std::fprintf(f, "B %zu\nM %zu\nc %u\n", cfg_.block_records,
                 cfg_.memory_records, kSortConstant);
    std::fclose(f);
  }

  IOConfig cfg_;
  fs::path dir_;
  bool cleanup_;
  IOStats stats_;
  std::size_t mem_in_use_ = 0;
  std::size_t mem_high_water_ = 0;
  std::uint64_t next_id_ = 0;
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

inline FileHandle open_file(const fs::path& p, const char* mode) {
  std::FILE* f = std::fopen(p.string().c_str(), mode);
  if (!f)
    throw capacity_error("cannot open " + p.string() + " (mode " + mode + ")");
  return FileHandle(f);
}

}  // namespace detail

inline std::uint64_t file_size_bytes(const fs::path& p) {
  std::error_code ec;
  auto s = fs::file_size(p, ec);
  if (ec) throw capacity_error("cannot stat " + p.string());
  return static_cast<std::uint64_t>(s);
}

template <typename R>
std::uint64_t record_count(const fs::path& p) {
  static_assert(std::is_trivially_copyable_v<R>);
  return file_size_bytes(p) / sizeof(R);
}

/// Sequential reader over a window of fixed-width records. Holds one block
/// (B records) of kernel buffer space while open.
template <typename R>
class StreamReader {
  static_assert(std::is_trivially_copyable_v<R>);

public:
  StreamReader() = default;

  StreamReader(Kernel& k, const fs::path& p) : StreamReader(k, p, 0, ~0ull) {}

  /// Window starts at `byte_offset` and spans `max_records` records (or to
  /// end of file, whichever comes first).
  StreamReader(Kernel& k, const fs::path& p, std::uint64_t byte_offset,
               std::uint64_t max_records) {
    open(k, p, byte_offset, max_records);
  }

  StreamReader(StreamReader&& o) noexcept { *this = std::move(o); }
  StreamReader& operator=(StreamReader&& o) noexcept {
    close();
    kernel_ = o.kernel_;
    file_ = std::move(o.file_);
    buf_ = std::move(o.buf_);
    pos_ = o.pos_;
    fill_ = o.fill_;
    remaining_ = o.remaining_;
    o.kernel_ = nullptr;
    o.pos_ = o.fill_ = 0;
    o.remaining_ = 0;
    return *this;
  }

  ~StreamReader() { close(); }

  void open(Kernel& k, const fs::path& p, std::uint64_t byte_offset = 0,
            std::uint64_t max_records = ~0ull) {
    close();
    kernel_ = &k;
    file_ = detail::open_file(p, "rb");
    std::uint64_t total_bytes = file_size_bytes(p);
    if (byte_offset > total_bytes)
      throw capacity_error("reader window past end of " + p.string());
    std::uint64_t avail = (total_bytes - byte_offset) / sizeof(R);
    remaining_ = std::min<std::uint64_t>(avail, max_records);
    if (std::fseek(file_.get(), static_cast<long>(byte_offset), SEEK_SET) != 0)
      throw capacity_error("seek failed in " + p.string());
    kernel_->mem_acquire(k.block_records());
    buf_.resize(k.block_records());
    pos_ = fill_ = 0;
  }

  void close() {
    if (kernel_) {
      kernel_->mem_release(buf_.size());
      kernel_ = nullptr;
    }
    file_.reset();
    buf_.clear();
    pos_ = fill_ = 0;
    remaining_ = 0;
  }

  bool done() {
    if (pos_ < fill_) return false;
    if (remaining_ == 0) return true;
    refill();
    return pos_ >= fill_;
  }

  const R& peek() {
    if (done()) throw em_error("StreamReader: peek past end");
    return buf_[pos_];
  }

  R next() {
    R r = peek();
    ++pos_;
    return r;
  }

  void skip(std::uint64_t k) {
    while (k > 0) {
      if (done()) throw em_error("StreamReader: skip past end");
      std::uint64_t step = std::min<std::uint64_t>(k, fill_ - pos_);
      pos_ += step;
      k -= step;
    }
  }

private:
  void refill() {
    std::size_t want =
        static_cast<std::size_t>(std::min<std::uint64_t>(buf_.size(), remaining_));
    std::size_t got = std::fread(buf_.data(), sizeof(R), want, file_.get());
    if (got != want)
      throw capacity_error("short read from record stream");
    pos_ = 0;
    fill_ = got;
    remaining_ -= got;
    if (got > 0) {
      kernel_->count_block_read();
      kernel_->count_elements(got);
    }
  }

  Kernel* kernel_ = nullptr;
  detail::FileHandle file_;
  std::vector<R> buf_;
  std::size_t pos_ = 0;
  std::size_t fill_ = 0;
  std::uint64_t remaining_ = 0;
};

/// Buffered writer; flushes one block of at most B records at a time.
template <typename R>
class StreamWriter {
  static_assert(std::is_trivially_copyable_v<R>);

public:
  StreamWriter() = default;
  StreamWriter(Kernel& k, const fs::path& p) { open(k, p); }

  StreamWriter(const StreamWriter&) = delete;
  StreamWriter& operator=(const StreamWriter&) = delete;

  ~StreamWriter() {
    try {
      close();
    } catch (...) {
    }
  }

  void open(Kernel& k, const fs::path& p) {
    close();
    kernel_ = &k;
    file_ = detail::open_file(p, "wb");
    kernel_->mem_acquire(k.block_records());
    buf_.reserve(k.block_records());
    written_ = 0;
  }

  void push(const R& r) {
    buf_.push_back(r);
    if (buf_.size() == buf_.capacity()) flush_block();
  }

  std::uint64_t records_written() const { return written_ + buf_.size(); }

  void close() {
    if (!kernel_) return;
    flush_block();
    kernel_->mem_release(buf_.capacity());
    kernel_ = nullptr;
    file_.reset();
    buf_ = {};
  }

private:
  void flush_block() {
    if (buf_.empty()) return;
    std::size_t got =
        std::fwrite(buf_.data(), sizeof(R), buf_.size(), file_.get());
    if (got != buf_.size())
      throw capacity_error("short write to record stream (storage exhausted?)");
    kernel_->count_block_write();
    kernel_->count_elements(buf_.size());
    written_ += buf_.size();
    buf_.clear();
  }

  Kernel* kernel_ = nullptr;
  detail::FileHandle file_;
  std::vector<R> buf_;
  std::uint64_t written_ = 0;
};

/// Writes a memory-resident, already-accounted span straight to a new file,
/// counting one block write per B records. Used for sorted run formation,
/// where the run body itself occupies the budgeted space.
template <typename R>
void write_span_as_file(Kernel& k, const fs::path& p, const R* data,
                        std::uint64_t n) {
  auto f = detail::open_file(p, "wb");
  std::uint64_t off = 0;
  while (off < n) {
    std::uint64_t step = std::min<std::uint64_t>(k.block_records(), n - off);
    std::size_t got = std::fwrite(data + off, sizeof(R),
                                  static_cast<std::size_t>(step), f.get());
    if (got != step) throw capacity_error("short write while emitting run");
    k.count_block_write();
    k.count_elements(step);
    off += step;
  }
}

/// Random access to a single record; costs one block read.
template <typename R>
R read_record_at(Kernel& k, const fs::path& p, std::uint64_t byte_offset,
                 std::uint64_t index) {
  auto f = detail::open_file(p, "rb");
  if (std::fseek(f.get(),
                 static_cast<long>(byte_offset + index * sizeof(R)),
                 SEEK_SET) != 0)
    throw capacity_error("seek failed in " + p.string());
  R r{};
  if (std::fread(&r, sizeof(R), 1, f.get()) != 1)
    throw capacity_error("short read at record " + std::to_string(index));
  k.count_block_read();
  k.count_elements(1);
  return r;
}

/// Stable external mergesort: full-memory run formation followed by
/// (M/B - 1)-way merge passes.
template <typename R, typename Less = std::less<R>>
void em_sort(Kernel& k, const fs::path& in, const fs::path& out,
             Less less = Less{}) {
  std::uint64_t total = record_count<R>(in);
  if (out != in) {
    std::error_code ec;
    fs::remove(out, ec);
  }
  if (total == 0) {
    detail::open_file(out, "wb");
    return;
  }

  std::vector<fs::path> runs;

  {
    StreamReader<R> reader(k, in);
    std::size_t run_cap = k.memory_available();
    if (run_cap < k.block_records()) run_cap = k.block_records();
    k.mem_acquire(run_cap);
    std::vector<R> run;
    run.reserve(run_cap);
    while (!reader.done()) {
      run.clear();
      while (!reader.done() && run.size() < run_cap) run.push_back(reader.next());
      std::stable_sort(run.begin(), run.end(), less);
      fs::path rp = k.make_temp_path("run");
      write_span_as_file(k, rp, run.data(), run.size());
      runs.push_back(std::move(rp));
    }
    k.mem_release(run_cap);
  }

  // Merge passes. Groups are taken in run order and equal keys resolved by
  // run index, which preserves stability.
  while (runs.size() > 1) {
    std::size_t fan_in =
        std::max<std::size_t>(2, k.memory_available() / k.block_records() - 1);
    std::vector<fs::path> next;
    for (std::size_t g = 0; g < runs.size(); g += fan_in) {
      std::size_t cnt = std::min(fan_in, runs.size() - g);
      if (cnt == 1) {
        next.push_back(runs[g]);
        continue;
      }
      std::vector<StreamReader<R>> rd(cnt);
      for (std::size_t i = 0; i < cnt; ++i) rd[i].open(k, runs[g + i]);
      fs::path mp = k.make_temp_path("merge");
      {
        StreamWriter<R> w(k, mp);
        for (;;) {
          std::size_t best = cnt;
          for (std::size_t i = 0; i < cnt; ++i) {
            if (rd[i].done()) continue;
            if (best == cnt || less(rd[i].peek(), rd[best].peek())) best = i;
          }
          if (best == cnt) break;
          w.push(rd[best].next());
        }
        w.close();
      }
      for (std::size_t i = 0; i < cnt; ++i) {
        rd[i].close();
        fs::remove(runs[g + i]);
      }
      next.push_back(std::move(mp));
    }
    runs = std::move(next);
  }

  fs::rename(runs.front(), out);
}

}  // namespace emcert

#endif  // EMCERT_KERNEL_HPP
