#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "s2rgap/s2rgap.hpp"

namespace s2r::cli {

namespace fs = std::filesystem;

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::parameter:
    case Errc::unknown_report_format:
      return kExitUsage;
    case Errc::io:
      return kExitIo;
    case Errc::bad_magic:
    case Errc::unsupported_version:
    case Errc::unsupported_dtype:
    case Errc::truncated:
    case Errc::shape_overflow:
    case Errc::trailing_data:
    case Errc::malformed:
    case Errc::unsupported_format:
    case Errc::unsupported_maxval:
      return kExitFormat;
    case Errc::config:
      return kExitConfig;
    case Errc::shape:
      return kExitShape;
    case Errc::incomplete_input:
    case Errc::empty_set:
    case Errc::insufficient_samples:
      return kExitInput;
    case Errc::degenerate:
    case Errc::not_psd:
      return kExitDegenerate;
  }
  return kExitInternal;
}

namespace {

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

void diagnose(std::ostream& err, std::string_view kind, int code, const std::string& message) {
  err << "s2rgap: error kind=" << kind << " exit=" << code << ": " << one_line(message) << "\n";
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path, std::as_bytes(std::span<const char>(text.data(), text.size())));
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm";
}

RefEncoderConfig encoder_config(const RunConfig& config) {
  RefEncoderConfig enc;
  enc.seed = config.seed;
  return enc;
}

// Reference mode: raw images through the built-in encoder.
ImageSetProfile profile_from_images(const std::string& name,
                                    const std::vector<std::pair<std::string, fs::path>>& images,
                                    const RunConfig& config) {
  const auto enc = encoder_config(config);
  for (const auto& stage : config.profile.stages) {
    if (std::find(enc.stage_labels.begin(), enc.stage_labels.end(), stage) == enc.stage_labels.end()) {
      fail(Errc::config, "reference encoder has no stage '" + stage.label() + "'");
    }
  }
  std::vector<StageInput> inputs;
  std::map<std::string, Size> sizes;
  for (const auto& [id, path] : images) {
    const auto image = read_image(path);
    sizes[id] = {image.height(), image.width()};
    for (auto& s : encode(image, enc)) inputs.push_back({id, s.stage, std::move(s.activation)});
  }
  return build_profile(name, inputs, config.profile, sizes);
}

// Manifest mode: pre-computed SRGT activations.
ImageSetProfile profile_from_tensors(const Manifest& m, const RunConfig& config) {
  for (const auto& stage : config.profile.stages) {
    if (std::find(m.stages.begin(), m.stages.end(), stage) == m.stages.end()) {
      fail(Errc::config, "manifest '" + m.name + "' does not declare stage '" + stage.label() + "'");
    }
  }
  std::vector<StageInput> inputs;
  std::map<std::string, Size> sizes;
  for (const auto& e : m.images) {
    if (config.profile.target.is_input()) {
      if (!e.image) {
        fail(Errc::config, "image '" + e.id + "' has no raw image path; target size 'input' needs one (or pass --target-size HxW)");
      }
      sizes[e.id] = read_image_size(m.resolve(*e.image));
    }
    for (const auto& stage : config.profile.stages) {
      const auto path = m.resolve(e.tensors.at(stage));
      try {
        inputs.push_back({e.id, stage, to_tensor3(read_srgt(path))});
      } catch (const Error& err) {
        if (err.code() == Errc::io) throw;
        throw Error(err.code(), path.string() + ": " + err.what());
      }
    }
  }
  return build_profile(m.name, inputs, config.profile, sizes);
}

void check_cached(const ImageSetProfile& p, const RunConfig& config) {
  if (p.fingerprint() != config.fingerprint()) {
    fail(Errc::config, "cached profile '" + p.name() + "' has fingerprint " + p.fingerprint() +
                           " but this run uses " + config.fingerprint() +
                           " (temperature, target size or exclude-below differ)");
  }
  std::set<StageId> want(config.profile.stages.begin(), config.profile.stages.end());
  std::set<StageId> have;
  for (const auto& s : p.stages()) have.insert(s.stage);
  if (want != have) fail(Errc::config, "cached profile '" + p.name() + "' has a different stage set");
}

}  // namespace

ImageSetProfile resolve_set(const fs::path& source, const RunConfig& config) {
  if (fs::is_directory(source)) {
    if (config.encoder == EncoderMode::manifest) {
      fail(Errc::config, "'" + source.string() + "' is a directory; manifest mode needs a manifest file");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, fs::path>> images;
    for (const auto& f : files) images.emplace_back(f.filename().string(), f);
    auto name = source.filename().empty() ? source.parent_path().filename().string() : source.filename().string();
    return profile_from_images(name, images, config);
  }
  if (!fs::exists(source)) fail(Errc::io, "no such file or directory '" + source.string() + "'");

  const std::string text = read_text(source);
  if (looks_like_profile(text)) {
    auto profile = profile_from_json(text);
    check_cached(profile, config);
    return profile;
  }
  const Manifest m = load_manifest(source);
  bool reference = config.encoder == EncoderMode::reference;
  if (config.encoder == EncoderMode::automatic) reference = m.stages.empty();
  if (!reference) return profile_from_tensors(m, config);

  std::vector<std::pair<std::string, fs::path>> images;
  for (const auto& e : m.images) {
    if (!e.image) fail(Errc::incomplete_input, "image '" + e.id + "' has no raw image path for reference mode");
    images.emplace_back(e.id, m.resolve(*e.image));
  }
  return profile_from_images(m.name, images, config);
}

namespace {

struct CommonFlags {
  double temperature = 10.0;
  unsigned exclude_below = kDefaultExcludeBelow;
  std::string target_size = "input";
  std::vector<std::string> stages{"E2", "E3", "E4"};
  std::uint64_t seed = 0;
  std::string encoder = "auto";

  void attach(CLI::App& cmd) {
    cmd.add_option("--temperature", temperature, "Spatial softmax temperature")->capture_default_str();
    cmd.add_option("--exclude-below", exclude_below, "Bins 0..=N are excluded from comparison")
        ->capture_default_str();
    cmd.add_option("--target-size", target_size, "Upsample target: 'input' or HxW")->capture_default_str();
    cmd.add_option("--stages", stages, "Encoder stage labels")->delimiter(',')->capture_default_str();
    cmd.add_option("--seed", seed, "Reference encoder seed")->capture_default_str();
    cmd.add_option("--encoder", encoder, "auto, manifest or reference")
        ->check(CLI::IsMember({"auto", "manifest", "reference"}))
        ->capture_default_str();
  }

  RunConfig build() const {
    RunConfig c;
    c.profile.temperature = temperature;
    c.profile.exclude_below = exclude_below;
    c.profile.target = TargetSize::parse(target_size);
    c.profile.stages.clear();
    for (const auto& s : stages) c.profile.stages.emplace_back(s);
    c.profile.validate();
    c.seed = seed;
    c.encoder = encoder == "manifest"    ? EncoderMode::manifest
                : encoder == "reference" ? EncoderMode::reference
                                         : EncoderMode::automatic;
    return c;
  }
};

FeatureMatrix read_features(const fs::path& path) {
  SrgtTensor t;
  try {
    t = read_srgt(path);
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  if (t.shape.size() != 2) {
    fail(Errc::shape, path.string() + ": feature file must be a 2-D tensor (rows x features)");
  }
  return FeatureMatrix(t.shape[0], t.shape[1], srgt_values(t));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sim2Real image-gap metrics: attention-map histogram similarity and FID", "s2rgap"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // compare
  auto* compare = app.add_subcommand("compare", "Score set A against one or more sets B, per encoder stage");
  CommonFlags compare_flags;
  std::string set_a;
  std::vector<std::string> sets_b;
  std::string compare_format = "json";
  std::string compare_out;
  compare->add_option("--a", set_a, "Reference set: manifest, image directory or cached profile")->required();
  compare->add_option("--b", sets_b, "Set(s) to compare against A")->required();
  compare->add_option("--format", compare_format, "json or csv")->capture_default_str();
  compare->add_option("--out", compare_out, "Output file (default stdout)");
  compare_flags.attach(*compare);

  // fid
  auto* fid_cmd = app.add_subcommand("fid", "Frechet distance between two SRGT feature files");
  std::string features_a;
  std::string features_b;
  fid_cmd->add_option("features_a", features_a, "n x d float SRGT")->required();
  fid_cmd->add_option("features_b", features_b, "m x d float SRGT")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic image set and manifest");
  std::string kind;
  long long count = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  std::string synth_size = "64x64";
  std::string synth_name;
  synth->add_option("--kind", kind, "lane or noise")->required()->check(CLI::IsMember({"lane", "noise"}));
  synth->add_option("--count", count, "Number of images")->required();
  synth->add_option("--seed", synth_seed, "Set seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--size", synth_size, "Image size HxW")->capture_default_str();
  synth->add_option("--name", synth_name, "Set name (default: kind)");

  // hist
  auto* hist = app.add_subcommand("hist", "Write per-stage averaged histograms of one set");
  CommonFlags hist_flags;
  std::string hist_set;
  std::string hist_out;
  std::string hist_format = "csv";
  hist->add_option("--set", hist_set, "Manifest or image directory")->required();
  hist->add_option("--out", hist_out, "Output file (default stdout)");
  hist->add_option("--format", hist_format, "csv (table) or json (cached profile)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  hist_flags.attach(*hist);

  // validate
  auto* validate = app.add_subcommand("validate", "Check a manifest and the tensors it references");
  std::string validate_path;
  validate->add_option("manifest", validate_path, "Manifest file")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (*compare) {
      const auto config = compare_flags.build();
      const auto format = parse_report_format(compare_format);
      const auto profile_a = resolve_set(set_a, config);
      std::vector<SimilarityReport> reports;
      for (const auto& b : sets_b) reports.push_back(compare_profiles(profile_a, resolve_set(b, config)));
      emit(write_report(reports, format), compare_out, out);
    } else if (*fid_cmd) {
      const auto a = estimate_stats(read_features(features_a));
      const auto b = estimate_stats(read_features(features_b));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", fid(a, b));
      out << buf << "\n";
    } else if (*synth) {
      if (count < 0) fail(Errc::parameter, "--count must be >= 0");
      if (count == 0) fail(Errc::empty_set, "--count must be at least 1; profiles need images");
      const auto size = TargetSize::parse(synth_size);
      if (size.is_input()) fail(Errc::parameter, "--size must be HxW");
      const auto [h, w] = *size.size();
      fs::create_directories(synth_out);
      Manifest m;
      m.name = synth_name.empty() ? kind : synth_name;
      for (long long i = 0; i < count; ++i) {
        const auto seed = image_seed(synth_seed, static_cast<std::uint64_t>(i));
        const auto image = kind == "lane" ? gen_lane_scene(seed, h, w) : gen_noise(seed, h, w);
        char file[64];
        std::snprintf(file, sizeof file, "%s_%04lld.ppm", kind.c_str(), i);
        write_ppm(fs::path(synth_out) / file, image);
        m.images.push_back({std::string(file, std::strlen(file) - 4), {}, std::string(file)});
      }
      write_text(fs::path(synth_out) / "manifest.json", manifest_to_json(m));
      out << "wrote " << count << " images and manifest.json to " << synth_out << "\n";
    } else if (*hist) {
      const auto config = hist_flags.build();
      const auto profile = resolve_set(hist_set, config);
      emit(hist_format == "json" ? profile_to_json(profile) : write_histogram_table(profile), hist_out, out);
    } else if (*validate) {
      const auto m = load_manifest(validate_path);
      for (const auto& e : m.images) {
        for (const auto& [stage, rel] : e.tensors) {
          const auto path = m.resolve(rel);
          try {
            (void)to_tensor3(read_srgt(path));
          } catch (const Error& ex) {
            if (ex.code() == Errc::io) throw;
            throw Error(ex.code(), path.string() + ": " + ex.what());
          }
        }
        if (e.image) (void)read_image_size(m.resolve(*e.image));
      }
      out << "ok: " << m.name << " (" << m.images.size() << " images, " << m.stages.size() << " stages)\n";
    }
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    diagnose(err, to_string(e.code()), code, e.what());
    return code;
  } catch (const fs::filesystem_error& e) {
    diagnose(err, "io", kExitIo, e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    diagnose(err, "internal", kExitInternal, e.what());
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace s2r::cli
