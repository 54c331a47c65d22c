// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "s2rgap/s2rgap.hpp"
#include "temp_dir.hpp"

namespace {

using namespace s2r;

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

IntensityHistogram random_histogram(std::mt19937_64& rng) {
  IntensityHistogram::Bins bins{};
  std::uniform_real_distribution<double> dist(0.0, 1000.0);
  for (auto& b : bins) b = dist(rng);
  return IntensityHistogram(bins, kDefaultExcludeBelow, 1);
}

Outcome correlation_oracle() {
  Outcome o;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_histogram(rng);
    const auto b = random_histogram(rng);
    o.check(a.participating().size() == 155, "participating bin count is not 155");
    worst = std::max(worst, std::abs(correlation(a, b) - test::pearson(a.participating(), b.participating())));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "1000 pairs, max deviation %.2e", worst);
  o.check(worst <= 1e-12, buf);
  if (o.ok) o.detail = buf;
  return o;
}

Outcome softmax_normalization() {
  Outcome o;
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 100; ++i) {
    const std::size_t h = 1 + rng() % 64, w = 1 + rng() % 64;
    auto values = test::uniform_values(rng, h * w, -20.0, 20.0);
    if (h * w == 1) values[0] = 0.0;
    const Map2 m(h, w, values);
    double peak[3] = {};
    const double temps[3] = {1.0, 10.0, 100.0};
    for (int k = 0; k < 3; ++k) {
      const auto a = spatial_softmax(m, temps[k]);
      double sum = 0.0;
      for (double v : a.data()) sum += v;
      o.check(std::abs(sum - 1.0) <= 1e-9 * static_cast<double>(h * w), "sum off by " + std::to_string(sum - 1.0));
      peak[k] = *std::max_element(a.data().begin(), a.data().end());
    }
    if (m.min() != m.max()) o.check(peak[1] < peak[0], "max did not decrease from T=1 to T=10");
  }
  if (o.ok) o.detail = "100 maps x T in {1, 10, 100}";
  return o;
}

Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index d, Eigen::Index rank) {
  Eigen::MatrixXd a(d, rank);
  std::normal_distribution<double> n;
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
  return a * a.transpose();
}

Outcome fid_oracles() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::normal_distribution<double> n;
  for (Eigen::Index d : {1, 2, 8, 32, 64}) {
    GaussianStats a{Eigen::VectorXd(d), random_psd(rng, d, d + 3)};
    GaussianStats b{Eigen::VectorXd(d), random_psd(rng, d, d + 3)};
    for (Eigen::Index i = 0; i < d; ++i) {
      a.mean[i] = n(rng);
      b.mean[i] = n(rng);
    }
    o.check(std::abs(fid(a, a)) <= 1e-8, "fid(s,s) != 0 at d=" + std::to_string(d));
    const double ab = fid(a, b), ba = fid(b, a);
    o.check(std::abs(ab - ba) <= 1e-6 * std::max(std::abs(ab), 1e-300), "asymmetric at d=" + std::to_string(d));
  }
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (Eigen::Index d : {1, 2, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      GaussianStats a{Eigen::VectorXd(d), Eigen::MatrixXd::Zero(d, d)};
      GaussianStats b{Eigen::VectorXd(d), Eigen::MatrixXd::Zero(d, d)};
      double expected = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        a.mean[i] = n(rng);
        b.mean[i] = n(rng);
        const double sa = u(rng), sb = u(rng);
        a.cov(i, i) = sa * sa;
        b.cov(i, i) = sb * sb;
        expected += (a.mean[i] - b.mean[i]) * (a.mean[i] - b.mean[i]) + (sa - sb) * (sa - sb);
      }
      o.check(std::abs(fid(a, b) - expected) <= 1e-6 * expected, "diagonal closed form at d=" + std::to_string(d));
    }
  }
  for (Eigen::Index d = 1; d <= 64; d += 7) {
    for (Eigen::Index rank : {d, std::max<Eigen::Index>(1, d / 3)}) {
      const auto m = random_psd(rng, d, rank);
      const auto s = matrix_sqrt_psd(m);
      o.check((s * s - m).norm() <= 1e-8 * std::max(1.0, m.norm()), "sqrt residual at d=" + std::to_string(d));
    }
  }
  if (o.ok) o.detail = "identity, symmetry, diagonal d in {1,2,8}, sqrt residual d <= 64";
  return o;
}

std::vector<StageInput> random_inputs(std::mt19937_64& rng, std::size_t images) {
  std::vector<StageInput> inputs;
  for (std::size_t i = 0; i < images; ++i) {
    const auto id = "img" + std::to_string(i);
    inputs.push_back({id, StageId("E2"), Tensor3(4, 8, 8, test::uniform_values(rng, 256, 0.0, 2.0))});
    inputs.push_back({id, StageId("E3"), Tensor3(8, 4, 4, test::uniform_values(rng, 128, 0.0, 2.0))});
    inputs.push_back({id, StageId("E4"), Tensor3(16, 2, 2, test::uniform_values(rng, 64, 0.0, 2.0))});
  }
  return inputs;
}

Outcome self_similarity() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::size_t profiles = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ProfileConfig config;
    config.target = TargetSize::fixed(32, 32);
    config.temperature = std::uniform_real_distribution<double>(0.5, 50.0)(rng);
    config.exclude_below = static_cast<unsigned>(rng() % 200);
    const auto p = build_profile("p", random_inputs(rng, 1 + rng() % 5), config);
    for (const auto& s : compare_profiles(p, p).scores) {
      o.check(std::abs(s.score - 1.0) <= 1e-12, "self score " + std::to_string(s.score));
      o.check(s.score <= 1.0, "score above 1");
    }
    ++profiles;
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<StageHistogram> stages;
    for (const auto& s : default_stages()) stages.push_back({s, random_histogram(rng)});
    const ImageSetProfile p("r", ProfileConfig{}, 1, std::move(stages));
    for (const auto& s : compare_profiles(p, p).scores) {
      o.check(std::abs(s.score - 1.0) <= 1e-12 && s.score <= 1.0, "self score " + std::to_string(s.score));
    }
    ++profiles;
  }
  if (o.ok) o.detail = std::to_string(profiles) + " profiles";
  return o;
}

ImageSetProfile synthetic_profile(const std::string& name, bool lane, std::uint64_t set_seed) {
  const RefEncoderConfig encoder;  // seed 0
  std::vector<StageInput> inputs;
  std::map<std::string, Size> sizes;
  for (std::uint64_t i = 0; i < 32; ++i) {
    const auto seed = image_seed(set_seed, i);
    const auto image = lane ? gen_lane_scene(seed, 64, 64) : gen_noise(seed, 64, 64);
    const auto id = name + std::to_string(i);
    sizes[id] = {64, 64};
    for (auto& s : encode(image, encoder)) inputs.push_back({id, s.stage, std::move(s.activation)});
  }
  return build_profile(name, inputs, ProfileConfig{}, sizes);
}

Outcome ordering() {
  Outcome o;
  int passed = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = synthetic_profile("laneA", true, 3 * seed + 1);
    const auto b = synthetic_profile("laneB", true, 3 * seed + 2);
    const auto n = synthetic_profile("noise", false, 3 * seed + 3);
    const auto lane_lane = compare_profiles(a, b);
    const auto lane_noise = compare_profiles(a, n);
    bool all = true;
    for (std::size_t k = 0; k < lane_lane.scores.size(); ++k) {
      margin = std::min(margin, lane_lane.scores[k].score - lane_noise.scores[k].score);
      all = all && lane_lane.scores[k].score > lane_noise.scores[k].score;
    }
    passed += all ? 1 : 0;
  }
  o.check(passed == 20, std::to_string(passed) + "/20 seeds ordered");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/20 seeds, min margin %.4f", passed, margin);
  if (o.ok) o.detail = buf;
  return o;
}

Outcome exclusion_inertness() {
  Outcome o;
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_histogram(rng);
    const auto b = random_histogram(rng);
    const double base = correlation(a, b);
    auto bins = a.bins();
    for (std::size_t i = 0; i <= kDefaultExcludeBelow; ++i) bins[i] = std::uniform_real_distribution<double>(0, 1e9)(rng);
    const IntensityHistogram perturbed(bins, kDefaultExcludeBelow, 1);
    o.check(correlation(perturbed, b) == base, "perturbing excluded bins of h1 changed the score");
    o.check(correlation(b, perturbed) == correlation(b, a), "perturbing excluded bins of h2 changed the score");
  }
  // Same check through whole profiles.
  std::vector<StageHistogram> sa, sb, sc;
  for (const auto& s : default_stages()) {
    const auto ha = random_histogram(rng);
    auto bins = ha.bins();
    for (std::size_t i = 0; i <= kDefaultExcludeBelow; ++i) bins[i] = 0.0;
    sa.push_back({s, ha});
    sb.push_back({s, random_histogram(rng)});
    sc.push_back({s, IntensityHistogram(bins, kDefaultExcludeBelow, 1)});
  }
  const ImageSetProfile pa("a", {}, 1, sa), pb("b", {}, 1, sb), pc("c", {}, 1, sc);
  const auto r1 = compare_profiles(pa, pb), r2 = compare_profiles(pc, pb);
  for (std::size_t k = 0; k < r1.scores.size(); ++k) o.check(r1.scores[k].score == r2.scores[k].score, "profile score changed");
  if (o.ok) o.detail = "500 pairs, exact equality";
  return o;
}

Outcome srgt_round_trip() {
  Outcome o;
  std::mt19937_64 rng(1006);
  test::TempDir dir;
  int count = 0;
  for (int dtype = 0; dtype < 2; ++dtype) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t ndim = 1 + trial % 4;
      std::vector<std::uint32_t> shape(ndim);
      std::size_t n = 1;
      for (auto& d : shape) {
        d = 1 + static_cast<std::uint32_t>(rng() % 7);
        n *= d;
      }
      const auto type = dtype == 0 ? SrgtDtype::float32 : SrgtDtype::uint8;
      SrgtTensor t{type, shape, std::vector<std::byte>(n * element_size(type))};
      if (type == SrgtDtype::float32) {
        std::normal_distribution<float> normal(0.0f, 100.0f);
        std::vector<float> values(n);
        for (auto& v : values) v = normal(rng);
        t = make_srgt(shape, values);
      } else {
        for (auto& b : t.payload) b = static_cast<std::byte>(rng());
      }
      const auto path = dir / "t.srgt";
      write_srgt(path, t);
      const auto written = read_file_bytes(path);
      const auto back = read_srgt(path);
      o.check(back == t, "decoded tensor differs");
      write_srgt(dir / "u.srgt", back);
      o.check(read_file_bytes(dir / "u.srgt") == written, "rewritten bytes differ");
      ++count;
    }
  }
  if (o.ok) o.detail = std::to_string(count) + " tensors, both dtypes, ndim 1-4";
  return o;
}

Outcome determinism() {
  Outcome o;
  test::TempDir dir;
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "s2rgap");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    o.check(code == 0, "exit " + std::to_string(code) + ": " + err.str());
  };
  run({"synth", "--kind", "lane", "--count", "6", "--seed", "11", "--out", (dir / "lane").string()});
  run({"synth", "--kind", "noise", "--count", "6", "--seed", "12", "--out", (dir / "noise").string()});
  for (const char* format : {"json", "csv"}) {
    for (const char* name : {"r1", "r2"}) {
      run({"compare", "--a", (dir / "lane").string(), "--b", (dir / "noise").string(), "--encoder", "reference",
           "--seed", "5", "--format", format, "--out", (dir / name).string()});
    }
    o.check(read_file_bytes(dir / "r1") == read_file_bytes(dir / "r2"), std::string(format) + " reports differ");
  }
  if (o.ok) o.detail = "json and csv reports byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"correlation matches two-pass Pearson oracle (1000 pairs, 1e-12)", correlation_oracle},
      {"softmax sums to 1 and flattens with temperature", softmax_normalization},
      {"FID identity, symmetry, diagonal closed form, sqrt residual", fid_oracles},
      {"self-comparison scores 1 at every stage", self_similarity},
      {"lane-vs-lane beats lane-vs-noise at every stage, 20 seeds", ordering},
      {"bins 0..=100 do not affect scores", exclusion_inertness},
      {"SRGT write/read round trip is byte-identical", srgt_round_trip},
      {"compare in reference mode is byte-deterministic", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.2fs): %s\n", result.ok ? "PASS" : "FAIL", name.c_str(), seconds, result.detail.c_str());
    failures += result.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
