#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "gmc/ingest.hpp"

namespace gmc {

static_assert(std::endian::native == std::endian::little, "graph dump assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'G', 'M', 'C', '-', 'C', 'S', 'R', '\n'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void put_array(std::ostream& out, std::span<const T> v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("truncated graph dump");
  return v;
}

template <class T>
std::vector<T> get_array(std::istream& in, std::uint64_t count) {
  std::vector<T> v(count);
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(T))))
    throw std::runtime_error("truncated graph dump");
  return v;
}

}  // namespace

void write_graph(std::ostream& out, const SliceGraph& g) {
  out.write(kMagic, sizeof kMagic);
  put(out, kVersion);
  put(out, std::uint32_t{0});
  put(out, static_cast<std::uint64_t>(g.node_count()));
  put(out, static_cast<std::uint64_t>(g.edge_count()));
  put_array(out, g.offsets());
  put_array(out, g.all_targets());
  put_array(out, g.all_weights());
  for (const auto& name : g.ids().names()) {
    put(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  if (!out) throw std::runtime_error("failed writing graph dump");
}

bool is_graph_dump(std::istream& in) {
  char head[sizeof kMagic] = {};
  const auto pos = in.tellg();
  in.read(head, sizeof head);
  const bool match = in.gcount() == sizeof head && std::memcmp(head, kMagic, sizeof head) == 0;
  in.clear();
  in.seekg(pos);
  return match;
}

SliceGraph read_graph(std::istream& in) {
  char head[sizeof kMagic] = {};
  if (!in.read(head, sizeof head) || std::memcmp(head, kMagic, sizeof head) != 0)
    throw std::runtime_error("not a graph dump (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw std::runtime_error("unsupported graph dump version " + std::to_string(version));
  get<std::uint32_t>(in);
  const auto n = get<std::uint64_t>(in);
  const auto e = get<std::uint64_t>(in);
  auto offsets = get_array<std::uint64_t>(in, n + 1);
  auto targets = get_array<NodeIndex>(in, e);
  auto weights = get_array<double>(in, e);
  auto ids = std::make_shared<IdMap>();
  std::string name;
  for (std::uint64_t i = 0; i < n; ++i) {
    name.resize(get<std::uint32_t>(in));
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size())))
      throw std::runtime_error("truncated graph dump");
    if (ids->intern(name) != i) throw std::runtime_error("duplicate node id in graph dump: " + name);
  }
  return SliceGraph::from_csr(std::move(ids), std::move(offsets), std::move(targets), std::move(weights));
}

}  // namespace gmc
