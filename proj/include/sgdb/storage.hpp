#pragma once

// One table, one file. A table file is an append-only log:
//
//   "SGDB" 0x01
//   record*  where record = [op:1][keylen:u32 LE][key][vallen:u32 LE][value][crc32:u32 LE]
//
// vallen/value are omitted for DEL. The crc (IEEE CRC-32) covers every byte of
// the record before it. The first record is META (key "\0", value = schema
// JSON); PUT values are canonical tuple JSON. Replay is last-write-wins.
//
// Locking uses open-file-description locks on two byte ranges: the writer
// holds [kWriterLockOffset, +1) exclusively for its lifetime, and appends and
// snapshot reads take brief write/read locks on [0, kWriterLockOffset).

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <array>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgdb/codec.hpp"
#include "sgdb/model.hpp"

namespace sgdb {

enum class RecordOp : std::uint8_t { Meta = 0x00, Put = 0x01, Del = 0x02 };

inline constexpr std::string_view kFileMagic{"SGDB\x01", 5};
inline constexpr std::string_view kMetaKey{"\0", 1};
inline constexpr off_t kWriterLockOffset = off_t{1} << 40;

struct LogRecord {
  RecordOp op = RecordOp::Put;
  std::string key;
  std::string value;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

inline std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorCode::IoError, what + ": " + std::strerror(errno));
}

}  // namespace detail

inline std::string encode_record(const LogRecord& r) {
  std::string out;
  out.reserve(1 + 4 + r.key.size() + 4 + r.value.size() + 4);
  out.push_back(static_cast<char>(r.op));
  detail::put_u32(out, static_cast<std::uint32_t>(r.key.size()));
  out += r.key;
  if (r.op != RecordOp::Del) {
    detail::put_u32(out, static_cast<std::uint32_t>(r.value.size()));
    out += r.value;
  }
  detail::put_u32(out, detail::crc32_of(out));
  return out;
}

/// Outcome of decoding a whole table file image.
struct LogImage {
  std::optional<Schema> schema;
  /// Live rows: key -> offset of the PUT record that holds the latest version.
  std::map<RowKey, std::uint64_t, std::less<>> index;
  /// Bytes covered by magic plus complete, valid records.
  std::uint64_t valid_length = 0;
  bool torn_tail = false;
  std::size_t record_count = 0;
};

struct DecodedRecord {
  enum class Status { Ok, Incomplete, BadChecksum };
  Status status = Status::Incomplete;
  LogRecord record;
  /// One past the record's last byte (meaningful unless Incomplete).
  std::size_t end = 0;
};

/// Decodes the record starting at `pos`. Throws CorruptFile on an unknown op.
inline DecodedRecord decode_record(std::string_view buf, std::size_t pos) {
  using Status = DecodedRecord::Status;
  const std::size_t start = pos;
  DecodedRecord out;
  auto have = [&](std::size_t n) { return buf.size() - pos >= n; };
  if (!have(5)) return out;
  auto op_byte = static_cast<unsigned char>(buf[pos]);
  if (op_byte > 0x02) throw Error(ErrorCode::CorruptFile, "unknown record op at offset " + std::to_string(start));
  out.record.op = static_cast<RecordOp>(op_byte);
  std::uint32_t keylen = detail::get_u32(buf, pos + 1);
  pos += 5;
  if (!have(keylen)) return out;
  out.record.key.assign(buf.substr(pos, keylen));
  pos += keylen;
  if (out.record.op != RecordOp::Del) {
    if (!have(4)) return out;
    std::uint32_t vallen = detail::get_u32(buf, pos);
    pos += 4;
    if (!have(vallen)) return out;
    out.record.value.assign(buf.substr(pos, vallen));
    pos += vallen;
  }
  if (!have(4)) return out;
  bool crc_ok = detail::get_u32(buf, pos) == detail::crc32_of(buf.substr(start, pos - start));
  out.end = pos + 4;
  out.status = crc_ok ? Status::Ok : Status::BadChecksum;
  return out;
}

/// Replays a file image. An incomplete final record, or a final record whose
/// checksum fails, is a torn tail and is excluded; damage followed by further
/// data is corruption.
inline LogImage replay_log(std::string_view buf) {
  using Status = DecodedRecord::Status;
  LogImage img;
  if (buf.size() < kFileMagic.size()) {
    if (kFileMagic.substr(0, buf.size()) != buf) throw Error(ErrorCode::CorruptFile, "bad magic");
    img.torn_tail = !buf.empty();
    return img;
  }
  if (buf.substr(0, kFileMagic.size()) != kFileMagic) throw Error(ErrorCode::CorruptFile, "bad magic");

  std::size_t pos = kFileMagic.size();
  img.valid_length = pos;
  while (pos < buf.size()) {
    DecodedRecord d = decode_record(buf, pos);
    if (d.status == Status::Incomplete || (d.status == Status::BadChecksum && d.end == buf.size())) {
      img.torn_tail = true;
      break;
    }
    if (d.status == Status::BadChecksum)
      throw Error(ErrorCode::CorruptFile, "checksum mismatch at offset " + std::to_string(pos));
    const LogRecord& rec = d.record;
    if (img.record_count == 0) {
      if (rec.op != RecordOp::Meta || rec.key != kMetaKey)
        throw Error(ErrorCode::CorruptFile, "first record is not the schema record");
      img.schema = decode_schema(rec.value);
    } else if (rec.op == RecordOp::Meta) {
      throw Error(ErrorCode::CorruptFile, "unexpected schema record at offset " + std::to_string(pos));
    } else if (rec.op == RecordOp::Put) {
      img.index.insert_or_assign(rec.key, pos);
    } else {
      img.index.erase(rec.key);
    }
    ++img.record_count;
    pos = d.end;
    img.valid_length = pos;
  }
  return img;
}

namespace detail {

class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(FileDescriptor&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  FileDescriptor& operator=(FileDescriptor&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~FileDescriptor() { reset(); }

  int get() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }
  void reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

inline bool ofd_lock(int fd, short type, off_t start, off_t len, bool wait) {
  struct flock fl {};
  fl.l_type = type;
  fl.l_whence = SEEK_SET;
  fl.l_start = start;
  fl.l_len = len;
  while (::fcntl(fd, wait ? F_OFD_SETLKW : F_OFD_SETLK, &fl) != 0) {
    if (errno == EINTR) continue;
    if (!wait && (errno == EAGAIN || errno == EACCES)) return false;
    throw_io("lock");
  }
  return true;
}

/// Holds a lock on the data range for the duration of a scope.
class DataLock {
 public:
  DataLock(int fd, short type) : fd_(fd) { ofd_lock(fd_, type, 0, kWriterLockOffset, true); }
  ~DataLock() {
    struct flock fl {};
    fl.l_type = F_UNLCK;
    fl.l_whence = SEEK_SET;
    fl.l_start = 0;
    fl.l_len = kWriterLockOffset;
    ::fcntl(fd_, F_OFD_SETLK, &fl);
  }
  DataLock(const DataLock&) = delete;
  DataLock& operator=(const DataLock&) = delete;

 private:
  int fd_;
};

inline void write_all(int fd, std::string_view bytes, off_t offset) {
  while (!bytes.empty()) {
    ssize_t n = ::pwrite(fd, bytes.data(), bytes.size(), offset);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("write");
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
    offset += n;
  }
}

inline std::string read_all(int fd) {
  struct stat st {};
  if (::fstat(fd, &st) != 0) throw_io("stat");
  std::string buf(static_cast<std::size_t>(st.st_size), '\0');
  std::size_t got = 0;
  while (got < buf.size()) {
    ssize_t n = ::pread(fd, buf.data() + got, buf.size() - got, static_cast<off_t>(got));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("read");
    }
    if (n == 0) break;
    got += static_cast<std::size_t>(n);
  }
  buf.resize(got);
  return buf;
}

inline void read_exact(int fd, char* out, std::size_t len, off_t offset) {
  while (len > 0) {
    ssize_t n = ::pread(fd, out, len, offset);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("read");
    }
    if (n == 0) throw Error(ErrorCode::CorruptFile, "record extends past end of file");
    out += n;
    len -= static_cast<std::size_t>(n);
    offset += n;
  }
}

inline void sync_directory(const std::filesystem::path& dir) {
  FileDescriptor d(::open(dir.empty() ? "." : dir.c_str(), O_RDONLY | O_DIRECTORY));
  if (d) ::fsync(d.get());
}

inline Relation materialize(const Schema& schema, const std::map<RowKey, std::uint64_t, std::less<>>& index,
                            int fd) {
  Relation rel(schema);
  for (const auto& [key, offset] : index) {
    char header[5];
    read_exact(fd, header, 5, static_cast<off_t>(offset));
    std::uint32_t keylen = get_u32(std::string_view(header, 5), 1);
    char lenbuf[4];
    read_exact(fd, lenbuf, 4, static_cast<off_t>(offset + 5 + keylen));
    std::uint32_t vallen = get_u32(std::string_view(lenbuf, 4), 0);
    std::string value(vallen, '\0');
    read_exact(fd, value.data(), vallen, static_cast<off_t>(offset + 9 + keylen));
    rel.set_row(key, decode_tuple(value));
  }
  return rel;
}

}  // namespace detail

struct TableOptions {
  /// fdatasync after every put/delete. When false, call sync() or close().
  bool sync_each_write = true;
};

/// Exclusive read/write handle on one table file.
class TableFile {
 public:
  TableFile() = default;
  TableFile(TableFile&&) noexcept = default;
  TableFile& operator=(TableFile&& o) noexcept {
    if (this != &o) {
      try {
        close();
      } catch (...) {
      }
      path_ = std::move(o.path_);
      fd_ = std::move(o.fd_);
      schema_ = std::move(o.schema_);
      index_ = std::move(o.index_);
      end_ = o.end_;
      options_ = o.options_;
    }
    return *this;
  }
  ~TableFile() {
    try {
      close();
    } catch (...) {
    }
  }

  /// Opens or creates the table file at `path`. When the file exists and a
  /// schema is supplied, it must match the stored one. A torn tail left by
  /// an interrupted write is cut off.
  static TableFile open(const std::filesystem::path& path, std::optional<Schema> schema = std::nullopt,
                        TableOptions options = {}) {
    TableFile t;
    t.path_ = path;
    t.options_ = options;
    t.fd_ = detail::FileDescriptor(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644));
    if (!t.fd_) detail::throw_io("open " + path.string());
    if (!detail::ofd_lock(t.fd_.get(), F_WRLCK, kWriterLockOffset, 1, false))
      throw Error(ErrorCode::TableLocked, path.string() + " is open for writing elsewhere");

    detail::DataLock guard(t.fd_.get(), F_WRLCK);
    LogImage img = replay_log(detail::read_all(t.fd_.get()));
    if (!img.schema) {
      // Fresh file, or one torn before its schema record was complete.
      if (!schema) throw Error(ErrorCode::CorruptFile, path.string() + " has no schema record");
      if (::ftruncate(t.fd_.get(), 0) != 0) detail::throw_io("truncate");
      std::string head(kFileMagic);
      head += encode_record({RecordOp::Meta, std::string(kMetaKey), encode_schema(*schema)});
      detail::write_all(t.fd_.get(), head, 0);
      if (::fsync(t.fd_.get()) != 0) detail::throw_io("fsync");
      detail::sync_directory(path.parent_path());
      t.schema_ = *schema;
      t.end_ = head.size();
      return t;
    }
    if (schema && !(img.schema->primary_key() == schema->primary_key() && img.schema->fields() == schema->fields()))
      throw Error(ErrorCode::SchemaMismatch, path.string() + " was created with a different schema");
    if (img.torn_tail) {
      if (::ftruncate(t.fd_.get(), static_cast<off_t>(img.valid_length)) != 0) detail::throw_io("truncate");
      if (::fsync(t.fd_.get()) != 0) detail::throw_io("fsync");
    }
    t.schema_ = std::move(*img.schema);
    t.index_ = std::move(img.index);
    t.end_ = img.valid_length;
    return t;
  }

  bool is_open() const noexcept { return static_cast<bool>(fd_); }
  const std::filesystem::path& path() const noexcept { return path_; }
  const Schema& schema() const {
    require_open();
    return schema_;
  }
  std::size_t live_count() const {
    require_open();
    return index_.size();
  }
  std::uint64_t file_size() const {
    require_open();
    return end_;
  }

  void put(const TupleRecord& row) {
    require_open();
    const RowKey key = check_tuple(schema_, row);
    std::uint64_t at = append(encode_record({RecordOp::Put, key, encode_tuple(row)}));
    index_.insert_or_assign(key, at);
  }

  /// Logs a delete even when the key is absent. Returns whether it was live.
  bool remove(std::string_view key) {
    require_open();
    append(encode_record({RecordOp::Del, std::string(key), {}}));
    auto it = index_.find(key);
    if (it == index_.end()) return false;
    index_.erase(it);
    return true;
  }

  Relation scan() const {
    require_open();
    return detail::materialize(schema_, index_, fd_.get());
  }

  /// Rewrites the file as META plus one PUT per live key in key order. The
  /// new image is written to a temporary file and renamed into place.
  void compact() {
    require_open();
    Relation live = scan();
    std::filesystem::path tmp = path_;
    tmp += ".compact";
    detail::FileDescriptor nfd(::open(tmp.c_str(), O_RDWR | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (!nfd) detail::throw_io("open " + tmp.string());
    std::map<RowKey, std::uint64_t, std::less<>> index;
    try {
      std::string image(kFileMagic);
      image += encode_record({RecordOp::Meta, std::string(kMetaKey), encode_schema(schema_)});
      for (const auto& [key, row] : live.rows()) {
        index.emplace(key, image.size());
        image += encode_record({RecordOp::Put, key, encode_tuple(row)});
      }
      detail::write_all(nfd.get(), image, 0);
      if (::fsync(nfd.get()) != 0) detail::throw_io("fsync");
      if (!detail::ofd_lock(nfd.get(), F_WRLCK, kWriterLockOffset, 1, false))
        throw Error(ErrorCode::TableLocked, tmp.string() + " is locked");
      detail::DataLock guard(fd_.get(), F_WRLCK);
      if (::rename(tmp.c_str(), path_.c_str()) != 0) detail::throw_io("rename");
      detail::sync_directory(path_.parent_path());
      end_ = image.size();
    } catch (...) {
      ::unlink(tmp.c_str());
      throw;
    }
    fd_ = std::move(nfd);
    index_ = std::move(index);
  }

  void sync() {
    require_open();
    if (::fdatasync(fd_.get()) != 0) detail::throw_io("fdatasync");
  }

  /// Flushes and releases the file. Closing twice is a no-op.
  void close() {
    if (!fd_) return;
    if (!options_.sync_each_write && ::fdatasync(fd_.get()) != 0) {
      fd_.reset();
      detail::throw_io("fdatasync");
    }
    fd_.reset();
    index_.clear();
  }

 private:
  void require_open() const {
    if (!fd_) throw Error(ErrorCode::UseAfterClose, "table " + path_.string() + " is closed");
  }

  std::uint64_t append(const std::string& bytes) {
    detail::DataLock guard(fd_.get(), F_WRLCK);
    const std::uint64_t at = end_;
    try {
      detail::write_all(fd_.get(), bytes, static_cast<off_t>(at));
      if (options_.sync_each_write && ::fdatasync(fd_.get()) != 0) detail::throw_io("fdatasync");
    } catch (...) {
      // Best effort: a partial record left behind is dropped as a torn tail on the next open.
      if (::ftruncate(fd_.get(), static_cast<off_t>(at)) != 0) {
      }
      throw;
    }
    end_ = at + bytes.size();
    return at;
  }

  std::filesystem::path path_;
  detail::FileDescriptor fd_;
  Schema schema_;
  std::map<RowKey, std::uint64_t, std::less<>> index_;
  std::uint64_t end_ = 0;
  TableOptions options_;
};

/// Reads a consistent snapshot without taking the writer lock. A torn tail is
/// ignored, not repaired.
inline Relation read_table_snapshot(const std::filesystem::path& path) {
  detail::FileDescriptor fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (!fd) detail::throw_io("open " + path.string());
  std::string image;
  {
    detail::DataLock guard(fd.get(), F_RDLCK);
    image = detail::read_all(fd.get());
  }
  LogImage img = replay_log(image);
  if (!img.schema) throw Error(ErrorCode::CorruptFile, path.string() + " has no schema record");
  Relation rel(*img.schema);
  for (const auto& [key, offset] : img.index) {
    rel.set_row(key, decode_tuple(decode_record(image, offset).record.value));
  }
  return rel;
}

// Free-function spellings of the table operations.

inline TableFile open_table(const std::filesystem::path& path, std::optional<Schema> schema = std::nullopt,
                            TableOptions options = {}) {
  return TableFile::open(path, std::move(schema), options);
}
inline void put_record(TableFile& t, const TupleRecord& row) { t.put(row); }
inline void delete_record(TableFile& t, std::string_view key) { t.remove(key); }
inline Relation scan_all(const TableFile& t) { return t.scan(); }
inline void compact(TableFile& t) { t.compact(); }
inline void close_table(TableFile& t) { t.close(); }

}  // namespace sgdb
