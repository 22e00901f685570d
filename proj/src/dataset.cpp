#include "pmelt/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "pmelt/descriptors.hpp"
#include "pmelt/errors.hpp"
#include "pmelt/melt.hpp"
#include "pmelt/persistence.hpp"
#include "pmelt/topo_metrics.hpp"

namespace pmelt {

using nlohmann::json;

std::size_t Tensor::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

DatasetFile::DatasetFile(std::string kind, int n, int height, int width)
    : kind_(std::move(kind)), n_(n), height_(height), width_(width) {}

void DatasetFile::add(std::string name, Tensor tensor) {
  if (has(name)) throw DomainError("duplicate tensor '" + name + "'");
  if (tensor.element_count() != tensor.data.size()) {
    throw DomainError("tensor '" + name + "' data does not match its shape");
  }
  tensors_.emplace_back(std::move(name), std::move(tensor));
}

bool DatasetFile::has(const std::string& name) const {
  return std::any_of(tensors_.begin(), tensors_.end(),
                     [&](const auto& t) { return t.first == name; });
}

const Tensor& DatasetFile::get(const std::string& name) const {
  for (const auto& [n, t] : tensors_)
    if (n == name) return t;
  throw DomainError("dataset has no tensor '" + name + "'");
}

std::vector<std::string> DatasetFile::names() const {
  std::vector<std::string> out;
  for (const auto& t : tensors_) out.push_back(t.first);
  return out;
}

GrayImage DatasetFile::image(const std::string& name, std::size_t i) const {
  const Tensor& t = get(name);
  if (t.shape.size() != 3) throw DomainError("tensor '" + name + "' is not an image stack");
  if (i >= t.shape[0]) throw DomainError("image index out of range for '" + name + "'");
  const std::size_t h = t.shape[1], w = t.shape[2];
  std::vector<double> data(h * w);
  for (std::size_t j = 0; j < h * w; ++j) {
    data[j] = std::clamp(static_cast<double>(t.data[i * h * w + j]), 0.0, 1.0);
  }
  return GrayImage(static_cast<int>(h), static_cast<int>(w), std::move(data));
}

std::vector<std::uint8_t> DatasetFile::encode() const {
  json header = flags_.is_object() ? flags_ : json::object();
  header["version"] = kVersion;
  header["kind"] = kind_;
  header["n"] = n_;
  header["h"] = height_;
  header["w"] = width_;
  header["tensors"] = names();
  json shapes = json::object();
  for (const auto& [name, t] : tensors_) shapes[name] = t.shape;
  header["shapes"] = shapes;

  const std::string line = header.dump() + "\n";
  std::vector<std::uint8_t> out(line.begin(), line.end());
  for (const auto& [name, t] : tensors_) {
    for (float v : t.data) {
      const auto bits = std::bit_cast<std::uint32_t>(v);
      for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>(bits >> shift));
      }
    }
  }
  return out;
}

DatasetFile DatasetFile::decode(std::span<const std::uint8_t> bytes) {
  const auto newline = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (newline == bytes.end()) throw ParseError("dataset header line not terminated", bytes.size());
  const std::string line(bytes.begin(), newline);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset header is not valid JSON: ") + e.what(), 0);
  }

  DatasetFile out;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> layout;
  try {
    if (header.at("version").get<int>() != kVersion) {
      throw ParseError("unsupported dataset version " + header.at("version").dump(), 0);
    }
    out.kind_ = header.value("kind", std::string{});
    out.n_ = header.at("n").get<int>();
    out.height_ = header.at("h").get<int>();
    out.width_ = header.at("w").get<int>();
    for (const auto& name : header.at("tensors")) {
      const auto key = name.get<std::string>();
      layout.emplace_back(key, header.at("shapes").at(key).get<std::vector<std::size_t>>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset header incomplete: ") + e.what(), 0);
  }
  for (const char* reserved : {"version", "kind", "n", "h", "w", "tensors", "shapes"}) {
    header.erase(reserved);
  }
  out.flags_ = std::move(header);

  std::size_t offset = line.size() + 1;
  std::size_t declared = 0;
  for (const auto& [name, shape] : layout) {
    declared += std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  }
  if (bytes.size() - offset != declared * 4) {
    throw ParseError("dataset payload is " + std::to_string(bytes.size() - offset) +
                         " bytes, header declares " + std::to_string(declared * 4),
                     std::min(bytes.size(), offset + declared * 4));
  }
  for (auto& [name, shape] : layout) {
    Tensor t;
    t.shape = shape;
    t.data.resize(t.element_count());
    for (float& v : t.data) {
      std::uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) bits |= std::uint32_t{bytes[offset + k]} << (8 * k);
      v = std::bit_cast<float>(bits);
      offset += 4;
    }
    out.tensors_.emplace_back(std::move(name), std::move(t));
  }
  return out;
}

Tensor stack_images(std::span<const GrayImage> images) {
  Tensor t;
  const std::size_t h = images.empty() ? 0 : static_cast<std::size_t>(images.front().height());
  const std::size_t w = images.empty() ? 0 : static_cast<std::size_t>(images.front().width());
  t.shape = {images.size(), h, w};
  t.data.reserve(images.size() * h * w);
  for (const auto& img : images) {
    if (static_cast<std::size_t>(img.height()) != h || static_cast<std::size_t>(img.width()) != w) {
      throw DomainError("stack_images: images differ in shape");
    }
    for (double v : img.data()) t.data.push_back(static_cast<float>(v));
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs fn(i) for i in [0, n) on a small pool. Results must be written by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n && !failed;) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void append(std::vector<float>& dst, const auto& values) {
  for (double v : values) dst.push_back(static_cast<float>(v));
}

}  // namespace

double sample_time(Rng& rng) { return rng.uniform01(); }

DatasetFile emit_training_set(std::span<const GrayImage> images, const TrainingSetOptions& opts) {
  if (opts.samples_per_image < 1) throw ConfigError("samples per image must be >= 1");
  if (images.empty()) throw ConfigError("no images to emit");
  const int h = images.front().height(), w = images.front().width();

  struct PerImage {
    bool ok = false;
    std::string error;
    std::vector<double> times;
    std::vector<GrayImage> melted;
    Landscape64 land;
    Summary5 summ;
  };
  std::vector<PerImage> results(images.size());
  parallel_for(images.size(), opts.threads, [&](std::size_t i) {
    PerImage& r = results[i];
    const GrayImage& x0 = images[i];
    if (x0.height() != h || x0.width() != w) {
      r.error = "shape differs from first image";
      return;
    }
    try {
      const MeltSchedule sched = build_schedule(x0, opts.region_threshold, opts.min_persistence);
      Rng rng(splitmix64(opts.seed ^ splitmix64(i)));
      for (int k = 0; k < opts.samples_per_image; ++k) {
        const double t = sample_time(rng);
        r.times.push_back(t);
        r.melted.push_back(melt(sched, t));
      }
      const Diagram d = compute_diagram(invert(x0));
      r.land = landscape(d);
      r.summ = summary5(d);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  std::vector<float> x0s, ts, xts, index, lands, summs;
  json skipped = json::array();
  std::size_t kept_images = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const PerImage& r = results[i];
    if (!r.ok) {
      skipped.push_back({{"image", i}, {"reason", r.error}});
      continue;
    }
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      append(x0s, images[i].data());
      ts.push_back(static_cast<float>(r.times[k]));
      append(xts, r.melted[k].data());
      index.push_back(static_cast<float>(kept_images));
    }
    append(lands, r.land.values);
    append(summs, r.summ.as_array());
    ++kept_images;
  }

  const std::size_t n = ts.size();
  const auto hs = static_cast<std::size_t>(h), ws = static_cast<std::size_t>(w);
  DatasetFile file("train", static_cast<int>(n), h, w);
  file.add("x0", {{n, hs, ws}, std::move(x0s)});
  file.add("t", {{n}, std::move(ts)});
  file.add("xt", {{n, hs, ws}, std::move(xts)});
  file.add("image_index", {{n}, std::move(index)});
  file.add("landscape", {{kept_images, Landscape64::kSize}, std::move(lands)});
  file.add("summary", {{kept_images, Summary5::kSize}, std::move(summs)});
  file.flags()["n_images"] = kept_images;
  file.flags()["samples_per_image"] = opts.samples_per_image;
  file.flags()["seed"] = opts.seed;
  file.flags()["region_threshold"] = opts.region_threshold;
  file.flags()["min_persistence"] = opts.min_persistence;
  file.flags()["t_distribution"] = "uniform01";
  file.flags()["skipped"] = std::move(skipped);
  return file;
}

std::vector<ClassPair> parse_pairs(const std::string& spec) {
  std::vector<ClassPair> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t sep = item.find("->");
    std::size_t skip = 2;
    if (sep == std::string::npos) {
      sep = item.find(':');
      skip = 1;
    }
    if (sep == std::string::npos) throw ConfigError("pair '" + item + "' must look like 8:1");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string a = item.substr(0, sep), b = item.substr(sep + skip);
      ClassPair p{std::stoi(a, &used_a), std::stoi(b, &used_b)};
      if (used_a != a.size() || used_b != b.size() || p.source < 0 || p.source > 9 ||
          p.target < 0 || p.target > 9) {
        throw std::invalid_argument(item);
      }
      out.push_back(p);
    } catch (const std::logic_error&) {
      throw ConfigError("pair '" + item + "' must name two digits");
    }
  }
  if (out.empty()) throw ConfigError("empty pair list");
  return out;
}

std::optional<int> canonical_beta1(int digit) {
  switch (digit) {
    case 0:
      return 1;
    case 1:
      return 0;
    case 8:
      return 2;
    default:
      return std::nullopt;
  }
}

ConditioningSet emit_conditioning_set(std::span<const LabeledImage> data,
                                      const ConditioningOptions& opts) {
  const bool ood = opts.mode == ConditioningMode::OutOfDistribution;
  const int n = opts.n > 0 ? opts.n : (ood ? 30 : 50);

  // Each group draws n sources of one class.
  struct Group {
    int source_class;
    int pair_index;
    std::string pair;
  };
  std::vector<Group> groups;
  if (ood) {
    if (opts.pairs.empty()) throw ConfigError("out-of-distribution mode needs at least one pair");
    for (std::size_t i = 0; i < opts.pairs.size(); ++i) {
      groups.push_back({opts.pairs[i].source, static_cast<int>(i), opts.pairs[i].label()});
    }
  } else {
    if (opts.classes.empty()) throw ConfigError("no classes requested");
    for (int c : opts.classes) groups.push_back({c, -1, ""});
  }

  // Candidate order per class: file order, or a seeded permutation.
  const auto candidates = [&](int cls, int group_no) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].label == cls) idx.push_back(i);
    if (opts.seed) {
      Rng rng(splitmix64(*opts.seed ^ splitmix64(static_cast<std::uint64_t>(group_no))));
      rng.shuffle(idx);
    }
    return idx;
  };

  std::vector<GrayImage> xts, x0s;
  std::vector<float> beta, cls, pair_idx, lands, summs;
  std::vector<ManifestRow> manifest;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Group& group = groups[g];
    const auto expected = canonical_beta1(group.source_class);
    int taken = 0;
    for (std::size_t pos : candidates(group.source_class, static_cast<int>(g))) {
      if (taken == n) break;
      const GrayImage& x0 = data[pos].image;
      const int b1 = measure_beta1(x0);
      if (opts.require_canonical_beta1 && expected && b1 != *expected) continue;
      const MeltSchedule sched = build_schedule(x0, opts.region_threshold, opts.min_persistence);
      const Diagram d = compute_diagram(invert(x0));
      manifest.push_back({xts.size(), pos, group.source_class, b1, group.pair});
      xts.push_back(melt(sched, 1.0));
      x0s.push_back(x0);
      beta.push_back(static_cast<float>(b1));
      cls.push_back(static_cast<float>(group.source_class));
      pair_idx.push_back(static_cast<float>(group.pair_index));
      append(lands, landscape(d).values);
      append(summs, summary5(d).as_array());
      ++taken;
    }
    if (taken < n) {
      throw ConfigError("class " + std::to_string(group.source_class) + " has only " +
                        std::to_string(taken) + " eligible images, " + std::to_string(n) +
                        " requested");
    }
  }

  const std::size_t total = xts.size();
  const int h = xts.front().height(), w = xts.front().width();
  ConditioningSet out{DatasetFile("cond", static_cast<int>(total), h, w), std::move(manifest)};
  out.file.add("xT", stack_images(xts));
  out.file.add("x0", stack_images(x0s));
  out.file.add("source_beta1", {{total}, std::move(beta)});
  out.file.add("source_class", {{total}, std::move(cls)});
  out.file.add("pair_index", {{total}, std::move(pair_idx)});
  out.file.add("landscape", {{total, Landscape64::kSize}, std::move(lands)});
  out.file.add("summary", {{total, Summary5::kSize}, std::move(summs)});
  auto& flags = out.file.flags();
  flags["mode"] = ood ? "ood" : "in_dist";
  flags["n_per_group"] = n;
  flags["seed"] = opts.seed ? json(*opts.seed) : json(nullptr);
  flags["require_canonical_beta1"] = opts.require_canonical_beta1;
  flags["region_threshold"] = opts.region_threshold;
  flags["min_persistence"] = opts.min_persistence;
  json pairs = json::array();
  if (ood)
    for (const auto& p : opts.pairs) pairs.push_back(p.label());
  flags["pairs"] = std::move(pairs);
  return out;
}

std::string manifest_csv(std::span<const ManifestRow> rows) {
  std::ostringstream os;
  os << "index,source_position,source_class,source_beta1,pair\n";
  for (const auto& r : rows) {
    os << r.index << ',' << r.source_position << ',' << r.source_class << ',' << r.source_beta1
       << ',' << r.pair << '\n';
  }
  return os.str();
}

}  // namespace pmelt
