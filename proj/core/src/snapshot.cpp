#include "mtlf/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mtlf/errors.hpp"

namespace mtlf {
namespace {

constexpr std::array<char, 8> kMagic{'M', 'T', 'L', 'F', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kMaxCount = 1u << 24;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 8);
  }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 4);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void matrix(const Matrix& m) {
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
  }
  void model(const ConditionalModel& m) {
    matrix(m.mean_map());
    matrix(m.covariance());
    matrix(m.state());
    f64(m.gamma());
    f64(m.lambda());
    i64(m.updates());
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("truncated snapshot");
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint32_t count() {
    const auto n = u32();
    if (n > kMaxCount) throw DataError("corrupt snapshot (implausible size)");
    return n;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    std::string s(count(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  Matrix matrix() {
    const auto rows = count();
    const auto cols = count();
    if (static_cast<std::uint64_t>(rows) * cols > kMaxCount) {
      throw DataError("corrupt snapshot (implausible size)");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f64();
    }
    return m;
  }
  ConditionalModel model() {
    Matrix mean_map = matrix();
    Matrix cov = matrix();
    Matrix state = matrix();
    const double gamma = f64();
    const double lambda = f64();
    const auto updates = i64();
    try {
      return ConditionalModel::from_state(std::move(mean_map), std::move(cov), std::move(state),
                                          gamma, lambda, updates);
    } catch (const Error& e) {
      throw DataError(std::string("corrupt snapshot: ") + e.what());
    }
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_snapshot(const Snapshot& snapshot, std::ostream& out) {
  const auto& st = snapshot.state;
  const auto& bank = st.bank;
  const int k = bank.entities();
  const int c_count = bank.calendar_types();
  if (static_cast<int>(snapshot.entity_ids.size()) != k) {
    throw DataError("snapshot entity ids do not match the model bank");
  }
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(k));
  for (const auto& id : snapshot.entity_ids) w.str(id);
  w.str(std::string(bank.scheme().id()));
  w.f64(bank.lambda_s());
  w.f64(bank.lambda_r());
  w.f64(st.ctx.thresholds().shift);
  w.f64(st.ctx.thresholds().hot);
  w.f64(st.ctx.thresholds().cold);
  w.u32(st.ctx.mode() == TempMeanMode::Cumulative ? 0u : 1u);
  w.f64(st.ctx.decay());
  for (int c = 1; c <= c_count; ++c) {
    w.model(bank.s_model(c));
    w.model(bank.r_model(c));
  }
  for (int c = 1; c <= c_count; ++c) {
    for (int e = 0; e < k; ++e) {
      w.f64(st.ctx.accumulator(c, e));
      w.i64(st.ctx.count(c, e));
    }
  }
  w.u32(static_cast<std::uint32_t>(st.recent_loads.size()));
  for (const auto& v : st.recent_loads) {
    for (Eigen::Index e = 0; e < v.size(); ++e) w.f64(v[e]);
  }
  w.u32(st.last_timestamp ? 1u : 0u);
  w.i64(st.last_timestamp ? st.last_timestamp->utc.time_since_epoch().count() : 0);
  w.i64(st.last_timestamp ? st.last_timestamp->offset.count() : 0);
  w.i64(st.hours_seen);
  if (!out) throw DataError("failed writing snapshot");
}

Snapshot read_snapshot(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw DataError("not a snapshot file (bad magic header)");
  const auto version = r.u32();
  if (version != kSnapshotVersion) {
    throw DataError("unsupported snapshot version " + std::to_string(version));
  }
  Snapshot snap;
  const auto k = static_cast<int>(r.count());
  if (k < 1) throw DataError("corrupt snapshot (no entities)");
  for (int e = 0; e < k; ++e) snap.entity_ids.push_back(r.str());
  CalendarScheme scheme;
  try {
    scheme = CalendarScheme::from_id(r.str());
  } catch (const ConfigError& e) {
    throw DataError(std::string("corrupt snapshot: ") + e.what());
  }
  const double lambda_s = r.f64();
  const double lambda_r = r.f64();
  TempThresholds th;
  th.shift = r.f64();
  th.hot = r.f64();
  th.cold = r.f64();
  const auto mode = r.u32() == 0 ? TempMeanMode::Cumulative : TempMeanMode::Exponential;
  const double decay = r.f64();

  auto& st = snap.state;
  try {
    st.bank = ModelBank(k, scheme, lambda_s, lambda_r);
    for (int c = 1; c <= scheme.count(); ++c) {
      auto s_model = r.model();
      auto r_model = r.model();
      st.bank.set_models(c, std::move(s_model), std::move(r_model));
    }
    st.ctx = TempContext(scheme.count(), k, th, mode, decay);
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(std::string("corrupt snapshot: ") + e.what());
  }
  for (int c = 1; c <= scheme.count(); ++c) {
    for (int e = 0; e < k; ++e) {
      const double acc = r.f64();
      const auto n = r.i64();
      try {
        st.ctx.set_state(c, e, acc, n);
      } catch (const Error& err) {
        throw DataError(std::string("corrupt snapshot: ") + err.what());
      }
    }
  }
  const auto recent = r.count();
  for (std::uint32_t i = 0; i < recent; ++i) {
    Vector v(k);
    for (int e = 0; e < k; ++e) v[e] = r.f64();
    st.recent_loads.push_back(std::move(v));
  }
  const bool has_last = r.u32() != 0;
  const auto utc = r.i64();
  const auto offset = r.i64();
  if (has_last) st.last_timestamp = Timestamp{UtcTime{Seconds{utc}}, Seconds{offset}};
  st.hours_seen = r.i64();
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("corrupt snapshot (trailing bytes)");
  }
  return snap;
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_snapshot(snapshot, out);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace mtlf
