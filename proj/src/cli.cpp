#include "pmelt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pmelt/dataset.hpp"
#include "pmelt/descriptors.hpp"
#include "pmelt/errors.hpp"
#include "pmelt/melt.hpp"
#include "pmelt/mnist.hpp"
#include "pmelt/persistence.hpp"
#include "pmelt/topo_metrics.hpp"

namespace pmelt::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw IoError("no such file: " + path);
}

std::set<int> parse_classes(const std::string& spec) {
  std::set<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int digit = -1;
    try {
      digit = std::stoi(item, &used);
    } catch (const std::logic_error&) {
    }
    if (used != item.size() || digit < 0 || digit > 9) {
      throw ConfigError("class '" + item + "' is not a digit");
    }
    out.insert(digit);
  }
  return out;
}

// Images to audit or measure, read from a PGM, a directory of PGMs, an IDX3
// images file, or a dataset file.
std::vector<NamedImage> load_corpus(const std::string& path, const std::string& tensor,
                                    const std::string& labels_path, const std::string& classes,
                                    std::size_t limit) {
  std::vector<NamedImage> out;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({f.filename().string(), load_pgm(f.string())});
  } else {
    require_file(path);
    const auto bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
      out.push_back({fs::path(path).filename().string(), read_pgm(bytes)});
    } else if (bytes.size() >= 4 && bytes[0] == 0 && bytes[1] == 0 && bytes[2] == 8 &&
               bytes[3] == 3) {
      auto images = parse_idx_images(bytes);
      std::optional<std::vector<int>> labels;
      if (!labels_path.empty()) {
        require_file(labels_path);
        labels = parse_idx_labels(read_file(labels_path));
        if (labels->size() != images.size()) {
          throw ConfigError("labels file does not match images file");
        }
      }
      const auto wanted = parse_classes(classes);
      for (std::size_t i = 0; i < images.size(); ++i) {
        if (labels && !wanted.empty() && !wanted.contains((*labels)[i])) continue;
        out.push_back({"idx:" + std::to_string(i), std::move(images[i])});
      }
    } else if (!bytes.empty() && bytes[0] == '{') {
      const DatasetFile file = DatasetFile::decode(bytes);
      std::string name = tensor;
      if (name.empty()) {
        for (const auto& candidate : file.names()) {
          if (file.get(candidate).shape.size() == 3) {
            name = candidate;
            break;
          }
        }
      }
      if (name.empty()) throw ConfigError(path + " holds no image tensor");
      const std::size_t n = file.get(name).shape.at(0);
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back({name + ":" + std::to_string(i), file.image(name, i)});
      }
    } else {
      throw ConfigError(path + ": unrecognised corpus format");
    }
  }
  if (limit > 0 && out.size() > limit) out.resize(limit);
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
}

GrayImage montage(std::span<const GrayImage> tiles, int cols, int pad) {
  const int th = tiles.front().height(), tw = tiles.front().width();
  const int n = static_cast<int>(tiles.size());
  const int rows = (n + cols - 1) / cols;
  GrayImage out(rows * th + (rows - 1) * pad, cols * tw + (cols - 1) * pad, 0.0);
  for (int i = 0; i < n; ++i) {
    const GrayImage& tile = tiles[static_cast<std::size_t>(i)];
    if (tile.height() != th || tile.width() != tw) {
      throw DomainError("montage tiles must share one shape");
    }
    const int r0 = (i / cols) * (th + pad), c0 = (i % cols) * (tw + pad);
    for (int r = 0; r < th; ++r)
      for (int c = 0; c < tw; ++c) out.set(r0 + r, c0 + c, tile.at(r, c));
  }
  return out;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        const MeltOperator& melt_op) {
  CLI::App app{"pmelt: cubical persistence, persistence melt and beta1 metrics for images"};
  app.name("pmelt");
  app.require_subcommand(1);

  // diagram
  auto* diagram_cmd = app.add_subcommand("diagram", "Persistence pairs of an image as CSV");
  std::string input;
  std::string output;
  bool raw = false;
  diagram_cmd->add_option("input", input, "Input PGM")->required();
  diagram_cmd->add_option("--out", output, "Output CSV (default: stdout)");
  diagram_cmd->add_flag("--raw", raw, "Filter the image as given instead of its inverse");

  // melt
  auto* melt_cmd = app.add_subcommand("melt", "Apply the persistence melt at time t");
  double t = 1.0;
  double threshold = kRegionThreshold;
  double min_persistence = kMinFeaturePersistence;
  bool audit_flag = false;
  melt_cmd->add_option("input", input, "Input PGM")->required();
  melt_cmd->add_option("--t", t, "Melt time")->check(CLI::Range(0.0, 1.0));
  melt_cmd->add_option("--out", output, "Output PGM");
  melt_cmd->add_option("--threshold", threshold, "Region threshold")->check(CLI::Range(0.0, 1.0));
  melt_cmd->add_option("--min-persistence", min_persistence, "Feature persistence floor")
      ->check(CLI::Range(0.0, 1.0));
  melt_cmd->add_flag("--audit", audit_flag, "Emit the beta1 progression over a 21-point grid");

  // beta1
  auto* beta1_cmd = app.add_subcommand("beta1", "Measure beta1 of an image");
  double bin_threshold = kDefaultBinThreshold;
  int min_area = kDefaultMinArea;
  bool batch = false;
  std::string tensor;
  beta1_cmd->add_option("input", input, "Input PGM, or dataset file with --batch")->required();
  beta1_cmd->add_option("--threshold", bin_threshold, "Binarization threshold")
      ->check(CLI::Range(0.0, 1.0));
  beta1_cmd->add_option("--min-area", min_area, "Smallest hole kept, in pixels")
      ->check(CLI::NonNegativeNumber);
  beta1_cmd->add_flag("--batch", batch, "Measure every image of a dataset file, CSV out");
  beta1_cmd->add_option("--tensor", tensor, "Image tensor to measure in batch mode");

  // landscape / summary
  auto* landscape_cmd = app.add_subcommand("landscape", "64-d persistence landscape as CSV");
  landscape_cmd->add_option("input", input, "Input PGM")->required();
  landscape_cmd->add_flag("--raw", raw, "Filter the image as given instead of its inverse");
  auto* summary_cmd = app.add_subcommand("summary", "5-d persistence summary as CSV");
  summary_cmd->add_option("input", input, "Input PGM")->required();
  summary_cmd->add_flag("--raw", raw, "Filter the image as given instead of its inverse");

  // dataset
  auto* dataset_cmd = app.add_subcommand("dataset", "Emit training or conditioning datasets");
  bool train = false, cond = false;
  int n = 0;
  int samples = 4;
  std::uint64_t seed = 0;
  std::string classes = "0,1,8";
  std::string pairs;
  std::string images_path, labels_path;
  auto* train_flag = dataset_cmd->add_flag("--train", train, "Emit (x0, t, xt) triples");
  auto* cond_flag = dataset_cmd->add_flag("--cond", cond, "Emit terminal states");
  train_flag->excludes(cond_flag);
  dataset_cmd->add_option("--images", images_path, "IDX3 images file")->required();
  dataset_cmd->add_option("--labels", labels_path, "IDX1 labels file")->required();
  dataset_cmd->add_option("--n", n, "Images per class (train, default 2000) or per group (cond)")
      ->check(CLI::NonNegativeNumber);
  dataset_cmd->add_option("--samples", samples, "Samples per image (train)")
      ->check(CLI::PositiveNumber);
  auto* seed_opt = dataset_cmd->add_option("--seed", seed, "Sampling seed");
  dataset_cmd->add_option("--classes", classes, "Comma-separated digits");
  dataset_cmd->add_option("--pairs", pairs, "Out-of-distribution pairs, e.g. 8:1,0:1");
  dataset_cmd->add_option("--out", output, "Output dataset file")->required();

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Check melt properties over a corpus");
  int grid = 21;
  std::size_t limit = 0;
  audit_cmd->add_option("corpus", input, "PGM, directory of PGMs, IDX3 file or dataset file")
      ->required();
  audit_cmd->add_option("--grid", grid, "Time grid points")->check(CLI::Range(2, 10001));
  audit_cmd->add_option("--out", output, "Report CSV (default: stdout)");
  audit_cmd->add_option("--labels", labels_path, "IDX1 labels for an IDX3 corpus");
  audit_cmd->add_option("--classes", classes, "Digits to keep from a labelled corpus");
  audit_cmd->add_option("--limit", limit, "Audit at most this many images");
  audit_cmd->add_option("--tensor", tensor, "Image tensor of a dataset corpus");

  // montage
  auto* montage_cmd = app.add_subcommand("montage", "Tile PGMs into one image");
  std::vector<std::string> tiles;
  int cols = 8, pad = 2;
  montage_cmd->add_option("inputs", tiles, "Input PGMs")->required();
  montage_cmd->add_option("--cols", cols, "Tiles per row")->check(CLI::PositiveNumber);
  montage_cmd->add_option("--pad", pad, "Gap between tiles")->check(CLI::NonNegativeNumber);
  montage_cmd->add_option("--out", output, "Output PGM")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (diagram_cmd->parsed()) {
      require_file(input);
      const GrayImage x = load_pgm(input);
      const Diagram d = compute_diagram(raw ? x : invert(x));
      std::ostringstream os;
      os << "birth,death,dim,death_row,death_col,persistence\n";
      for (const auto& p : d.pairs) {
        os << num(p.birth) << ',' << num(p.death) << ',' << p.dim << ',' << p.death_cell.row << ','
           << p.death_cell.col << ',' << num(p.persistence()) << '\n';
      }
      write_text(output, os.str(), out);
    } else if (melt_cmd->parsed()) {
      if (output.empty() && !audit_flag) {
        err << "melt: --out is required unless --audit is given\n";
        return kExitUsage;
      }
      require_file(input);
      const GrayImage x = load_pgm(input);
      const MeltSchedule s = build_schedule(x, threshold, min_persistence);
      for (const auto& w : s.warnings()) err << "warning: " << w << '\n';
      if (!output.empty()) save_pgm(melt_op(s, t), output);
      if (audit_flag) {
        std::ostringstream os;
        os << "t,beta1\n";
        const auto grid_points = uniform_grid(21);
        for (double tt : grid_points) os << num(tt) << ',' << measure_beta1(melt_op(s, tt)) << '\n';
        out << os.str();
      }
    } else if (beta1_cmd->parsed()) {
      if (!batch) {
        require_file(input);
        out << measure_beta1(load_pgm(input), bin_threshold, min_area) << '\n';
      } else {
        const auto corpus = load_corpus(input, tensor, "", "", 0);
        std::ostringstream os;
        os << "index,name,beta1\n";
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          os << i << ',' << corpus[i].name << ','
             << measure_beta1(corpus[i].image, bin_threshold, min_area) << '\n';
        }
        out << os.str();
      }
    } else if (landscape_cmd->parsed()) {
      require_file(input);
      const GrayImage x = load_pgm(input);
      const Landscape64 l = landscape(compute_diagram(raw ? x : invert(x)));
      std::ostringstream head, vals;
      for (int dim = 0; dim < 2; ++dim)
        for (int level = 0; level < Landscape64::kLevels; ++level)
          for (int point = 0; point < Landscape64::kGridPoints; ++point) {
            const bool first = dim == 0 && level == 0 && point == 0;
            head << (first ? "" : ",") << "h" << dim << "_l" << level + 1 << "_s" << point;
            vals << (first ? "" : ",") << num(l.at(dim, level, point));
          }
      out << head.str() << '\n' << vals.str() << '\n';
    } else if (summary_cmd->parsed()) {
      require_file(input);
      const GrayImage x = load_pgm(input);
      const Summary5 s = summary5(compute_diagram(raw ? x : invert(x)));
      out << "n_h0,n_h1,max_pi_h1,sum_pi_h1,max_pi_h0\n"
          << s.n_h0 << ',' << s.n_h1 << ',' << num(s.max_pi_h1) << ',' << num(s.sum_pi_h1) << ','
          << num(s.max_pi_h0) << '\n';
    } else if (dataset_cmd->parsed()) {
      if (train == cond) {
        err << "dataset: exactly one of --train or --cond is required\n";
        return kExitUsage;
      }
      require_file(images_path);
      require_file(labels_path);
      const auto data = load_mnist(images_path, labels_path);
      const auto wanted = parse_classes(classes);
      const std::optional<std::uint64_t> maybe_seed =
          seed_opt->count() > 0 ? std::optional(seed) : std::nullopt;
      if (train) {
        const auto subset = subsample_per_class(data, wanted, n > 0 ? n : 2000, maybe_seed);
        std::vector<GrayImage> images;
        for (const auto& li : subset) images.push_back(li.image);
        TrainingSetOptions opts;
        opts.samples_per_image = samples;
        opts.seed = seed;
        const DatasetFile file = emit_training_set(images, opts);
        for (const auto& s : file.flags().at("skipped"))
          err << "warning: skipped image " << s.at("image") << ": " << s.at("reason") << '\n';
        write_file(output, file.encode());
        err << "wrote " << file.n() << " samples from " << images.size() << " images to "
            << output << '\n';
      } else {
        ConditioningOptions opts;
        opts.mode = pairs.empty() ? ConditioningMode::InDistribution
                                  : ConditioningMode::OutOfDistribution;
        opts.classes = wanted;
        if (!pairs.empty()) opts.pairs = parse_pairs(pairs);
        opts.n = n;
        opts.seed = maybe_seed;
        const ConditioningSet set = emit_conditioning_set(data, opts);
        write_file(output, set.file.encode());
        const std::string manifest = manifest_csv(set.manifest);
        write_file(output + ".manifest.csv",
                   std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()),
                             manifest.size()));
        err << "wrote " << set.file.n() << " terminal states to " << output << '\n';
      }
    } else if (audit_cmd->parsed()) {
      const auto corpus = load_corpus(input, tensor, labels_path,
                                      labels_path.empty() ? "" : classes, limit);
      AuditOptions opts;
      opts.grid_points = grid;
      const AuditReport report = audit_corpus(corpus, opts, melt_op);
      write_text(output, report.csv(), out);
      if (report.violations() > 0) {
        err << "audit: " << report.violations() << " violation(s) over " << report.images
            << " image(s)\n";
        return kExitDomainError;
      }
    } else if (montage_cmd->parsed()) {
      std::vector<GrayImage> images;
      for (const auto& path : tiles) {
        require_file(path);
        images.push_back(load_pgm(path));
      }
      save_pgm(montage(images, std::min(cols, static_cast<int>(images.size())), pad), output);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace pmelt::cli
