#include "unshade/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "unshade/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace unshade {

namespace {

constexpr char kMagic[8] = {'U', 'S', 'H', 'D', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
constexpr char precision_tag() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? 'f' : 'd';
}

class Writer {
 public:
  explicit Writer(const std::string& path)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    check(out_.good(), "cannot create checkpoint file: " + path);
  }
  template <class V>
  void pod(V v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void bytes(const void* p, std::size_t n) {
    out_.write(reinterpret_cast<const char*>(p),
               static_cast<std::streamsize>(n));
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void finish() {
    out_.flush();
    check(out_.good(), "failed writing checkpoint file: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path)
      : in_(path, std::ios::binary), path_(path) {
    check(in_.good(), "cannot open checkpoint file: " + path);
  }
  template <class V>
  V pod() {
    V v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    check(in_.good(), "truncated checkpoint file: " + path_);
    return v;
  }
  void bytes(void* p, std::size_t n) {
    in_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
    check(in_.good(), "truncated checkpoint file: " + path_);
  }
  std::string str() {
    auto n = pod<std::uint32_t>();
    check(n <= (1u << 24), "implausible string length in checkpoint");
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

template <class T>
void write_net(Writer& w, const NetSnapshot<T>& net) {
  w.str(net.fingerprint);
  w.pod(static_cast<std::uint32_t>(net.tensors.size()));
  for (const auto& [name, t] : net.tensors) {
    w.str(name);
    w.pod(static_cast<std::uint32_t>(t.shape().size()));
    for (auto d : t.shape()) w.pod(static_cast<std::int64_t>(d));
    w.bytes(t.data(), static_cast<std::size_t>(t.size()) * sizeof(T));
  }
  w.pod(static_cast<std::int64_t>(net.adam_t));
  check(net.adam_m.size() == net.adam_v.size(),
        "adam moment lists disagree in length");
  w.pod(static_cast<std::uint32_t>(net.adam_m.size()));
  for (std::size_t k = 0; k < net.adam_m.size(); ++k) {
    check(net.adam_m[k].size() == net.adam_v[k].size(),
          "adam moment buffers disagree in length");
    w.pod(static_cast<std::uint64_t>(net.adam_m[k].size()));
    w.bytes(net.adam_m[k].data(), net.adam_m[k].size() * sizeof(T));
    w.bytes(net.adam_v[k].data(), net.adam_v[k].size() * sizeof(T));
  }
}

template <class T>
NetSnapshot<T> read_net(Reader& r) {
  NetSnapshot<T> net;
  net.fingerprint = r.str();
  auto n_tensors = r.pod<std::uint32_t>();
  net.tensors.reserve(n_tensors);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = r.str();
    auto ndim = r.pod<std::uint32_t>();
    check(ndim <= 8, "implausible tensor rank in checkpoint");
    std::vector<std::int64_t> shape(ndim);
    for (auto& d : shape) {
      d = r.pod<std::int64_t>();
      check(d > 0 && d <= (1ll << 32), "implausible tensor dim in checkpoint");
    }
    Tensor<T> t(shape);
    r.bytes(t.data(), static_cast<std::size_t>(t.size()) * sizeof(T));
    net.tensors.emplace_back(std::move(name), std::move(t));
  }
  net.adam_t = r.pod<std::int64_t>();
  auto n_lists = r.pod<std::uint32_t>();
  net.adam_m.resize(n_lists);
  net.adam_v.resize(n_lists);
  for (std::uint32_t k = 0; k < n_lists; ++k) {
    auto count = r.pod<std::uint64_t>();
    check(count <= (1ull << 32), "implausible adam buffer size");
    net.adam_m[k].resize(count);
    net.adam_v[k].resize(count);
    if (count) {
      r.bytes(net.adam_m[k].data(), count * sizeof(T));
      r.bytes(net.adam_v[k].data(), count * sizeof(T));
    }
  }
  return net;
}

void write_mask(Writer& w, const ShadowMask& m) {
  w.pod(static_cast<std::int32_t>(m.height));
  w.pod(static_cast<std::int32_t>(m.width));
  // Run-length encoding, alternating values starting with 0.
  std::vector<std::uint32_t> runs;
  std::uint8_t cur = 0;
  std::uint32_t len = 0;
  for (auto v : m.data) {
    if (v == cur) {
      ++len;
    } else {
      runs.push_back(len);
      cur = v;
      len = 1;
    }
  }
  runs.push_back(len);
  w.pod(static_cast<std::uint32_t>(runs.size()));
  for (auto x : runs) w.pod(x);
}

ShadowMask read_mask(Reader& r) {
  auto h = r.pod<std::int32_t>();
  auto ww = r.pod<std::int32_t>();
  check(h > 0 && ww > 0 && h <= (1 << 20) && ww <= (1 << 20),
        "implausible mask size in checkpoint");
  ShadowMask m(h, ww);
  auto n_runs = r.pod<std::uint32_t>();
  std::size_t pos = 0;
  std::uint8_t cur = 0;
  for (std::uint32_t i = 0; i < n_runs; ++i) {
    auto len = r.pod<std::uint32_t>();
    check(pos + len <= m.data.size(), "mask RLE overruns mask size");
    for (std::uint32_t j = 0; j < len; ++j) m.data[pos++] = cur;
    cur = cur ? 0 : 1;
  }
  check(pos == m.data.size(), "mask RLE does not cover the mask");
  return m;
}

void write_u64s(Writer& w, const std::vector<std::uint64_t>& v) {
  w.pod(static_cast<std::uint64_t>(v.size()));
  for (auto x : v) w.pod(x);
}

std::vector<std::uint64_t> read_u64s(Reader& r) {
  auto n = r.pod<std::uint64_t>();
  check(n <= (1ull << 32), "implausible list size in checkpoint");
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = r.pod<std::uint64_t>();
  return v;
}

}  // namespace

template <class T>
void save_checkpoint(const std::string& path, const TrainSnapshot<T>& snap) {
  Writer w(path);
  w.bytes(kMagic, sizeof kMagic);
  w.pod(kVersion);
  w.pod(precision_tag<T>());
  write_net(w, snap.g_f);
  write_net(w, snap.g_s);
  write_net(w, snap.d_f);
  write_net(w, snap.d_s);
  w.pod(snap.epoch);
  w.pod(snap.step);
  w.pod(snap.queue_capacity);
  w.pod(static_cast<std::uint32_t>(snap.queue.size()));
  for (const auto& m : snap.queue) write_mask(w, m);
  w.str(snap.rng_state);
  write_u64s(w, snap.shadow_order);
  w.pod(snap.shadow_pos);
  write_u64s(w, snap.free_order);
  w.pod(snap.free_pos);
  w.pod(static_cast<std::uint32_t>(snap.config.size()));
  for (const auto& [k, v] : snap.config) {
    w.str(k);
    w.str(v);
  }
  w.finish();
}

char checkpoint_precision(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  check(std::memcmp(magic, kMagic, sizeof magic) == 0,
        "not a checkpoint file: " + path);
  auto version = r.pod<std::uint32_t>();
  check(version == kVersion, "unsupported checkpoint version");
  auto tag = r.pod<char>();
  check(tag == 'f' || tag == 'd', "corrupt precision tag in checkpoint");
  return tag;
}

template <class T>
TrainSnapshot<T> load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  check(std::memcmp(magic, kMagic, sizeof magic) == 0,
        "not a checkpoint file: " + path);
  auto version = r.pod<std::uint32_t>();
  check(version == kVersion, "unsupported checkpoint version");
  auto tag = r.pod<char>();
  check(tag == precision_tag<T>(),
        std::string("checkpoint precision is '") + tag +
            "' but this run expects '" + precision_tag<T>() + "'");
  TrainSnapshot<T> snap;
  snap.g_f = read_net<T>(r);
  snap.g_s = read_net<T>(r);
  snap.d_f = read_net<T>(r);
  snap.d_s = read_net<T>(r);
  snap.epoch = r.pod<std::uint64_t>();
  snap.step = r.pod<std::uint64_t>();
  snap.queue_capacity = r.pod<std::uint64_t>();
  auto n_masks = r.pod<std::uint32_t>();
  snap.queue.reserve(n_masks);
  for (std::uint32_t i = 0; i < n_masks; ++i)
    snap.queue.push_back(read_mask(r));
  snap.rng_state = r.str();
  snap.shadow_order = read_u64s(r);
  snap.shadow_pos = r.pod<std::uint64_t>();
  snap.free_order = read_u64s(r);
  snap.free_pos = r.pod<std::uint64_t>();
  auto n_cfg = r.pod<std::uint32_t>();
  snap.config.reserve(n_cfg);
  for (std::uint32_t i = 0; i < n_cfg; ++i) {
    std::string k = r.str();
    std::string v = r.str();
    snap.config.emplace_back(std::move(k), std::move(v));
  }
  return snap;
}

template void save_checkpoint<float>(const std::string&,
                                     const TrainSnapshot<float>&);
template void save_checkpoint<double>(const std::string&,
                                      const TrainSnapshot<double>&);
template TrainSnapshot<float> load_checkpoint<float>(const std::string&);
template TrainSnapshot<double> load_checkpoint<double>(const std::string&);

}  // namespace unshade
