#include "model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace mssvdd {

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

uint32_t crc32(const void* data, size_t len) {
  static uint32_t table[256];
  static bool ready = false;
  if (!ready) {
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      table[i] = c;
    }
    ready = true;
  }
  uint32_t c = 0xffffffffu;
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) c = table[(c ^ p[i]) & 0xffu] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

namespace {

class Writer {
public:
  void u8(uint8_t v) { raw(&v, 1); }
  void u32(uint32_t v) { raw(&v, 4); }
  void u64(uint64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }

  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }

  void vec(const Vector& v) {
    u64(static_cast<uint64_t>(v.size()));
    raw(v.data(), static_cast<size_t>(v.size()) * sizeof(double));
  }

  void mat(const Matrix& m) {
    u64(static_cast<uint64_t>(m.rows()));
    u64(static_cast<uint64_t>(m.cols()));
    raw(m.data(), static_cast<size_t>(m.size()) * sizeof(double));
  }

  const std::string& payload() const { return buf_; }

private:
  void raw(const void* p, size_t n) { buf_.append(static_cast<const char*>(p), n); }
  std::string buf_;
};

class Reader {
public:
  explicit Reader(std::string payload) : buf_(std::move(payload)) {}

  uint8_t u8() { uint8_t v; raw(&v, 1); return v; }
  uint32_t u32() { uint32_t v; raw(&v, 4); return v; }
  uint64_t u64() { uint64_t v; raw(&v, 8); return v; }
  double f64() { double v; raw(&v, 8); return v; }

  std::string str() {
    const uint64_t n = checked_len(u64());
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }

  Vector vec() {
    const uint64_t n = checked_len(u64() * sizeof(double)) / sizeof(double);
    Vector v(static_cast<Index>(n));
    raw(v.data(), static_cast<size_t>(n) * sizeof(double));
    return v;
  }

  Matrix mat() {
    const uint64_t rows = u64();
    const uint64_t cols = u64();
    checked_len(rows * cols * sizeof(double));
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    raw(m.data(), static_cast<size_t>(rows * cols) * sizeof(double));
    return m;
  }

  bool done() const { return pos_ == buf_.size(); }

private:
  uint64_t checked_len(uint64_t n) {
    if (pos_ + n > buf_.size()) fail(errc::corrupt_file, "model container: truncated payload");
    return n;
  }

  void raw(void* p, size_t n) {
    if (pos_ + n > buf_.size()) fail(errc::corrupt_file, "model container: truncated payload");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }

  std::string buf_;
  size_t pos_ = 0;
};

constexpr char kMagic[4] = {'M', 'S', 'V', 'D'};

void write_container(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open for writing: " + path);
  out.write(kMagic, 4);
  const uint32_t version = kModelFormatVersion;
  out.write(reinterpret_cast<const char*>(&version), 4);
  const uint64_t size = payload.size();
  out.write(reinterpret_cast<const char*>(&size), 8);
  const uint32_t crc = crc32(payload.data(), payload.size());
  out.write(reinterpret_cast<const char*>(&crc), 4);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) fail(errc::io_error, "write failed: " + path);
}

std::string read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open: " + path);
  char magic[4];
  uint32_t version = 0, crc = 0;
  uint64_t size = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&size), 8);
  in.read(reinterpret_cast<char*>(&crc), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    fail(errc::corrupt_file, "not a model container: " + path);
  if (version != kModelFormatVersion)
    fail(errc::version_mismatch, "unsupported container version " + std::to_string(version));
  std::string payload(size, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(size));
  if (!in || in.gcount() != static_cast<std::streamsize>(size))
    fail(errc::corrupt_file, "truncated container: " + path);
  if (crc32(payload.data(), payload.size()) != crc)
    fail(errc::corrupt_file, "checksum mismatch: " + path);
  return payload;
}

void write_standardization(Writer& w, const Standardization& s) {
  w.u8(s.enabled ? 1 : 0);
  w.u64(s.mean.size());
  for (size_t m = 0; m < s.mean.size(); ++m) {
    w.vec(s.mean[m]);
    w.vec(s.inv_std[m]);
  }
}

Standardization read_standardization(Reader& r) {
  Standardization s;
  s.enabled = r.u8() != 0;
  const uint64_t m_count = r.u64();
  for (uint64_t m = 0; m < m_count; ++m) {
    s.mean.push_back(r.vec());
    s.inv_std.push_back(r.vec());
  }
  return s;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  Writer w;
  w.str("MSVDmodel");

  w.u32(static_cast<uint32_t>(model.params.variant));
  w.u32(static_cast<uint32_t>(model.params.omega));
  w.f64(model.params.c);
  w.f64(model.params.beta);
  w.f64(model.params.sigma);
  w.u32(static_cast<uint32_t>(model.params.d));
  w.f64(model.params.eta);
  w.u32(static_cast<uint32_t>(model.params.max_iter));
  w.u32(static_cast<uint32_t>(model.params.decision));
  w.u8(model.params.center_kernel_gram ? 1 : 0);

  w.u64(model.projections.size());
  for (const Matrix& p : model.projections) w.mat(p);

  w.vec(model.dual.alpha);
  w.f64(model.dual.c);
  w.f64(model.dual.r_squared);
  w.f64(model.dual.objective);
  w.f64(model.dual.kkt_residual);
  w.u8(model.dual.degenerate ? 1 : 0);

  w.mat(model.train_repr.y);
  w.u32(static_cast<uint32_t>(model.train_repr.m_count));
  w.u32(static_cast<uint32_t>(model.train_repr.items));

  write_standardization(w, model.preproc);

  w.u8(model.kernel_state ? 1 : 0);
  if (model.kernel_state) {
    const KernelState& ks = *model.kernel_state;
    w.f64(ks.sigma);
    w.u8(ks.centered ? 1 : 0);
    w.u64(ks.train_x.size());
    for (size_t m = 0; m < ks.train_x.size(); ++m) {
      w.mat(ks.train_x[m]);
      w.mat(ks.gram[m]);
    }
  }

  w.u8(model.npt_state ? 1 : 0);
  if (model.npt_state) {
    const NptState& ns = *model.npt_state;
    w.f64(ns.sigma);
    w.u64(ns.mods.size());
    for (const NptModalityState& ms : ns.mods) {
      w.mat(ms.train_x);
      w.mat(ms.k);
      w.vec(ms.a);
      w.mat(ms.u);
      w.mat(ms.phi);
    }
  }

  w.str(model.dataset_kind);
  w.str(model.target_label);
  w.str(model.method_view);

  write_container(path, w.payload());
}

TrainedModel load_model(const std::string& path) {
  Reader r(read_container(path));
  if (r.str() != "MSVDmodel") fail(errc::corrupt_file, "container does not hold a model: " + path);

  TrainedModel model;
  model.params.variant = static_cast<Variant>(r.u32());
  model.params.omega = static_cast<OmegaKind>(r.u32());
  model.params.c = r.f64();
  model.params.beta = r.f64();
  model.params.sigma = r.f64();
  model.params.d = static_cast<int>(r.u32());
  model.params.eta = r.f64();
  model.params.max_iter = static_cast<int>(r.u32());
  model.params.decision = static_cast<Decision>(r.u32());
  model.params.center_kernel_gram = r.u8() != 0;

  const uint64_t m_count = r.u64();
  for (uint64_t m = 0; m < m_count; ++m) model.projections.push_back(r.mat());

  model.dual.alpha = r.vec();
  model.dual.c = r.f64();
  model.dual.r_squared = r.f64();
  model.dual.objective = r.f64();
  model.dual.kkt_residual = r.f64();
  model.dual.degenerate = r.u8() != 0;
  for (Index i = 0; i < model.dual.alpha.size(); ++i) {
    const double a = model.dual.alpha(i);
    if (a >= model.dual.c - kAlphaTol)
      model.dual.outlier_idx.push_back(i);
    else if (a > kAlphaTol)
      model.dual.support_idx.push_back(i);
  }

  model.train_repr.y = r.mat();
  model.train_repr.m_count = static_cast<int>(r.u32());
  model.train_repr.items = static_cast<int>(r.u32());

  model.preproc = read_standardization(r);

  if (r.u8()) {
    KernelState ks;
    ks.sigma = r.f64();
    ks.centered = r.u8() != 0;
    const uint64_t kms = r.u64();
    for (uint64_t m = 0; m < kms; ++m) {
      ks.train_x.push_back(r.mat());
      ks.gram.push_back(r.mat());
    }
    model.kernel_state = std::move(ks);
  }

  if (r.u8()) {
    NptState ns;
    ns.sigma = r.f64();
    const uint64_t nms = r.u64();
    for (uint64_t m = 0; m < nms; ++m) {
      NptModalityState ms;
      ms.train_x = r.mat();
      ms.k = r.mat();
      ms.a = r.vec();
      ms.u = r.mat();
      ms.phi = r.mat();
      ns.mods.push_back(std::move(ms));
    }
    model.npt_state = std::move(ns);
  }

  model.dataset_kind = r.str();
  model.target_label = r.str();
  model.method_view = r.str();

  if (!r.done()) fail(errc::corrupt_file, "trailing bytes in model container: " + path);
  return model;
}

void save_dataset(const ModalDataset& data, const std::string& path) {
  Writer w;
  w.str("MSVDdataset");
  w.u64(data.x.size());
  for (size_t m = 0; m < data.x.size(); ++m) {
    w.str(data.modality_names[m]);
    w.mat(data.x[m]);
  }
  w.u64(data.labels.size());
  for (size_t i = 0; i < data.labels.size(); ++i) {
    w.u8(data.labels[i] == Label::positive ? 1 : 0);
    w.str(data.item_ids[i]);
  }
  write_container(path, w.payload());
}

ModalDataset load_dataset(const std::string& path) {
  Reader r(read_container(path));
  if (r.str() != "MSVDdataset") fail(errc::corrupt_file, "container does not hold a dataset: " + path);

  ModalDataset out;
  const uint64_t m_count = r.u64();
  for (uint64_t m = 0; m < m_count; ++m) {
    out.modality_names.push_back(r.str());
    out.x.push_back(r.mat());
  }
  const uint64_t items = r.u64();
  for (uint64_t i = 0; i < items; ++i) {
    out.labels.push_back(r.u8() ? Label::positive : Label::negative);
    out.item_ids.push_back(r.str());
  }
  if (!r.done()) fail(errc::corrupt_file, "trailing bytes in dataset container: " + path);
  return out;
}

}  // namespace mssvdd
