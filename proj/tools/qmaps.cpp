#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "qmap/chapuy.hpp"
#include "qmap/cms.hpp"
#include "qmap/continuum.hpp"
#include "qmap/enumerate.hpp"
#include "qmap/geometry.hpp"
#include "qmap/io.hpp"
#include "qmap/sampling.hpp"
#include "qmap/stats.hpp"
#include "qmap/verify.hpp"

using namespace qmap;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kViolation = 1, kBadInput = 2, kResource = 3 };

int exit_code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::TooLarge:
      return kResource;
    case ErrorCode::Unreachable:
    case ErrorCode::CovarianceNotPSD:
      return kViolation;
    default:
      return kBadInput;
  }
}

int default_threads() {
  if (const char* env = std::getenv("QMAP_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

// Writes to a file, or to stdout for "-".
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::BadInput, "cannot write " + path);
    }
  }
  std::ostream& out() { return path_ == "-" ? std::cout : file_; }
  const std::string& path() const { return path_; }
  void close() {
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
};

struct Manifest {
  std::string command_line;
  json config = json::object();
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json results = json::object();

  void write(const std::string& out_path) const {
    if (out_path == "-") return;
    json j;
    j["command_line"] = command_line;
    j["config"] = config;
    j["seed"] = seed;
    j["rng"] = kRngName;
    j["library_version"] = kVersion;
    j["schema_version"] = kSchemaVersion;
    j["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["outputs"] = json::array({json{{"path", out_path}, {"sha256", sha256_file(out_path)}}});
    if (!results.empty()) j["results"] = results;
    std::ofstream(out_path + ".manifest.json") << j.dump(2) << '\n';
  }
};

std::string joined(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// Runs body(i) for i in [0, count) across threads; results keep index order.
template <class F>
std::vector<std::string> parallel_lines(long count, int threads, F body) {
  std::vector<std::string> lines(count);
  auto work = [&](int w) {
    for (long i = w; i < count; i += threads) lines[i] = body(i);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return lines;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorCode::BadInput, "cannot read " + path);
  }
  std::istream& in = path == "-" ? std::cin : file;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  return lines;
}

// ---- sample ----

struct SampleOpts {
  int genus = 1, size = 0, count = 1, exact_limit = kDefaultExactLimit, threads = default_threads();
  std::string mode = "exact", out = "-", object = "pointed";
  std::uint64_t seed = 0;
};

int cmd_sample(const SampleOpts& o, const std::string& cmdline) {
  SamplerConfig c;
  c.genus = o.genus;
  c.n = o.size;
  c.seed = o.seed;
  c.mode = parse_sampler_mode(o.mode);
  c.exact_limit = o.exact_limit;
  if (auto err = validate(c)) throw *err;
  if (o.object != "tree" && o.object != "quad" && o.object != "pointed")
    throw Error(ErrorCode::BadInput, "object must be tree, quad or pointed");
  const auto lines = parallel_lines(o.count, o.threads, [&](long i) {
    Rng rng(split_seed(o.seed, static_cast<std::uint64_t>(i)));
    if (o.object == "tree") return to_json(sample_wl_gtree(c, rng));
    const SampledQuadrangulation s = sample_pointed_quadrangulation(c, rng);
    return o.object == "quad" ? to_json(s.pointed.map) : to_json(s.pointed);
  });
  Sink sink(o.out);
  for (const auto& l : lines) sink.out() << l << '\n';
  sink.close();
  Manifest m;
  m.command_line = cmdline;
  m.seed = o.seed;
  m.config = {{"genus", o.genus}, {"n", o.size}, {"mode", o.mode}, {"count", o.count}, {"object", o.object},
              {"exact_limit", o.exact_limit}};
  m.write(o.out);
  return kOk;
}

// ---- convert ----

struct ConvertOpts {
  std::string via = "cms", in = "-", out = "-";
  int epsilon = 1, sequence = 0;
};

std::string convert_one(const ConvertOpts& o, const std::string& line) {
  const std::string type = json_type(line);
  if (o.via == "cms") {
    if (type == "wl_gtree") {
      if (o.epsilon != 1 && o.epsilon != -1) throw Error(ErrorCode::BadInput, "epsilon must be -1 or +1");
      return to_json(cms_forward(wl_gtree_from_json(line), o.epsilon));
    }
    if (type == "pointed_quadrangulation") return to_json(cms_inverse(pointed_from_json(line)).tree);
  } else if (o.via == "chapuy") {
    if (type == "wl_gtree") {
      const WellLabeledGTree t = wl_gtree_from_json(line);
      const auto seqs = opening_sequences(t.tree);
      if (o.sequence < 0 || o.sequence >= static_cast<int>(seqs.size()))
        throw Error(ErrorCode::BadInput, "sequence index out of range (" + std::to_string(seqs.size()) + " available)");
      return to_json(open(t, seqs[o.sequence]));
    }
    if (type == "tree_with_triples") return to_json(glue(triples_from_json(line)).tree);
  } else if (o.via == "decomposition") {
    if (type == "wl_gtree") return to_json(decompose_labeled(wl_gtree_from_json(line)));
    if (type == "decomposition") return to_json(recompose_labeled(decomposition_from_json(line)));
  } else {
    throw Error(ErrorCode::BadInput, "via must be cms, chapuy or decomposition");
  }
  throw Error(ErrorCode::BadInput, "cannot convert an object of type '" + type + "' via " + o.via);
}

int cmd_convert(const ConvertOpts& o) {
  std::vector<std::string> out;
  for (const auto& line : read_lines(o.in)) out.push_back(convert_one(o, line));
  Sink sink(o.out);
  for (const auto& l : out) sink.out() << l << '\n';
  return kOk;
}

// ---- verify ----

struct VerifyOpts {
  std::string suite = "all";
  int genus = 1, max_n = 4;
};

int cmd_verify(const VerifyOpts& o) {
  std::vector<std::string> names = o.suite == "all" ? suite_names() : std::vector<std::string>{o.suite};
  int code = kOk;
  for (const auto& name : names) {
    const SuiteReport r = run_suite(name, o.genus, o.max_n);
    json j{{"suite", r.suite}, {"genus", o.genus}, {"max_n", o.max_n}, {"checked", r.checked},
           {"violations", r.violations}, {"ok", r.ok()}};
    if (!r.ok()) j["first_failure"] = r.first_failure;
    std::cout << j.dump() << '\n';
    if (!r.ok()) code = kViolation;
  }
  return code;
}

// ---- experiment ----

struct ExperimentOpts {
  std::string kind, out = "-";
  int genus = 1, reps = 200, centers = 20, exact_limit = kDefaultExactLimit, threads = default_threads();
  int resamples = 1000;
  std::vector<int> sizes;
  std::uint64_t seed = 0;
};

SamplerConfig config_for(const ExperimentOpts& o, int n) {
  SamplerConfig c;
  c.genus = o.genus;
  c.n = n;
  c.exact_limit = o.exact_limit;
  c.mode = n <= o.exact_limit ? SamplerMode::Exact : SamplerMode::Asymptotic;
  return c;
}

int cmd_experiment(const ExperimentOpts& o, const std::string& cmdline) {
  Manifest man;
  man.command_line = cmdline;
  man.seed = o.seed;
  man.config = {{"experiment", o.kind}, {"genus", o.genus}, {"sizes", o.sizes}, {"reps", o.reps},
                {"exact_limit", o.exact_limit}, {"threads", o.threads}};
  Rng rng(o.seed);
  std::ostringstream csv;
  csv << std::setprecision(12) << "experiment,genus,n,rep,statistic,value\n";
  auto row = [&](long n, long rep, const std::string& stat, double v) {
    csv << o.kind << ',' << o.genus << ',' << n << ',' << rep << ',' << stat << ',' << v << '\n';
  };
  if (o.reps < 1) throw Error(ErrorCode::BadInput, "reps must be positive");
  if (o.kind == "scaling") {
    const ScalingReport r = fit_distance_exponent(o.genus, o.sizes, o.reps, rng, o.exact_limit, o.threads, o.resamples);
    for (std::size_t i = 0; i < r.sizes.size(); ++i)
      for (std::size_t k = 0; k < r.samples[i].size(); ++k) row(r.sizes[i], k, "mean_distance", r.samples[i][k]);
    row(0, -1, "slope", r.slope);
    row(0, -1, "ci_low", r.ci_low);
    row(0, -1, "ci_high", r.ci_high);
    man.results = {{"slope", r.slope}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"gamma", r.gamma}};
  } else if (o.kind == "twopoint" || o.kind == "dimension") {
    if (o.sizes.empty()) throw Error(ErrorCode::BadInput, "need --sizes");
    std::vector<std::vector<double>> per_size;
    const std::uint64_t base = rng();
    for (std::size_t si = 0; si < o.sizes.size(); ++si) {
      const SamplerConfig c = config_for(o, o.sizes[si]);
      const auto vals = parallel_lines(o.reps, o.threads, [&](long r) {
        Rng local(split_seed(base, si * 1'000'000ULL + r));
        const CombinatorialMap m = sample_quadrangulation(c, local);
        std::ostringstream os;
        os << std::setprecision(17);
        if (o.kind == "twopoint")
          os << two_point_samples(m, local, 1).front();
        else
          os << ball_volume_exponent(m, o.centers, local).slope;
        return os.str();
      });
      std::vector<double> xs;
      for (long r = 0; r < o.reps; ++r) {
        xs.push_back(std::stod(vals[r]));
        row(o.sizes[si], r, o.kind == "twopoint" ? "rescaled_distance" : "ball_slope", xs.back());
      }
      per_size.push_back(xs);
    }
    json summary = json::array();
    for (std::size_t si = 0; si < per_size.size(); ++si) {
      json s{{"n", o.sizes[si]}, {"mean", mean(per_size[si])}};
      if (si > 0) {
        const TestResult ks = ks_two_sample(per_size[si - 1], per_size[si]);
        s["ks_vs_previous"] = ks.statistic;
        s["ks_p_vs_previous"] = ks.p_value;
        row(o.sizes[si], -1, "ks_vs_previous", ks.statistic);
      }
      row(o.sizes[si], -1, "mean", mean(per_size[si]));
      summary.push_back(s);
    }
    man.results = {{"per_size", summary}};
  } else if (o.kind == "upsilon") {
    const UpsilonEstimate u = estimate_upsilon(o.genus, o.reps, rng);
    row(0, -1, "upsilon", u.value);
    row(0, -1, "standard_error", u.standard_error);
    row(0, -1, "effective_sample_size", u.effective_sample_size);
    man.results = {{"upsilon", u.value}, {"standard_error", u.standard_error}, {"draws", u.draws}};
  } else {
    throw Error(ErrorCode::BadInput, "experiment must be scaling, twopoint, dimension or upsilon");
  }
  Sink sink(o.out);
  sink.out() << csv.str();
  sink.close();
  man.write(o.out);
  if (o.out != "-") std::cerr << man.results.dump() << '\n';
  return kOk;
}

// ---- enumerate ----

struct EnumerateOpts {
  std::string what = "wl", out = "-";
  int genus = 1, size = 1;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_enumerate(const EnumerateOpts& o) {
  Sink sink(o.out);
  std::ostream& out = sink.out();
  if (o.what == "gtrees") {
    for (const auto& t : enumerate_gtrees(o.genus, o.size, o.budget))
      out << json{{"type", "gtree"}, {"word", t.gluing_word_text()}}.dump() << '\n';
  } else if (o.what == "wl") {
    for (const auto& t : enumerate_wl_gtrees(o.genus, o.size, o.budget)) out << to_json(t) << '\n';
  } else if (o.what == "quads") {
    for (const auto& m : enumerate_quadrangulations(o.genus, o.size, o.budget)) out << to_json(m) << '\n';
  } else if (o.what == "pointed") {
    for (const auto& q : enumerate_pointed_quadrangulations(o.genus, o.size, o.budget)) out << to_json(q) << '\n';
  } else {
    throw Error(ErrorCode::BadInput, "what must be gtrees, wl, quads or pointed");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random quadrangulations of genus g and their tree encodings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SampleOpts so;
  auto* sample = app.add_subcommand("sample", "Sample trees or quadrangulations as JSON lines");
  sample->add_option("--genus", so.genus)->check(CLI::Range(0, 3));
  sample->add_option("--size", so.size, "number of edges of the tree (faces of the map)")->required();
  sample->add_option("--mode", so.mode)->check(CLI::IsMember({"exact", "asymptotic"}));
  sample->add_option("--seed", so.seed);
  sample->add_option("--count", so.count)->check(CLI::PositiveNumber);
  sample->add_option("--out", so.out);
  sample->add_option("--object", so.object)->check(CLI::IsMember({"tree", "quad", "pointed"}));
  sample->add_option("--exact-limit", so.exact_limit);
  sample->add_option("--threads", so.threads)->check(CLI::PositiveNumber);

  ConvertOpts co;
  auto* convert = app.add_subcommand("convert", "Convert between encodings; direction follows the input type");
  convert->add_option("--via", co.via)->check(CLI::IsMember({"cms", "chapuy", "decomposition"}));
  convert->add_option("--epsilon", co.epsilon);
  convert->add_option("--sequence", co.sequence, "opening sequence index for --via chapuy");
  convert->add_option("--in", co.in);
  convert->add_option("--out", co.out);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Run exhaustive invariant suites");
  verify->add_option("--suite", vo.suite);
  verify->add_option("--genus", vo.genus)->check(CLI::Range(0, 3));
  verify->add_option("--max-n", vo.max_n)->check(CLI::PositiveNumber);

  ExperimentOpts eo;
  auto* experiment = app.add_subcommand("experiment", "Statistical experiments, CSV output plus manifest");
  experiment->add_option("kind", eo.kind)->required()->check(CLI::IsMember({"scaling", "twopoint", "dimension", "upsilon"}));
  experiment->add_option("--genus", eo.genus)->check(CLI::Range(0, 3));
  experiment->add_option("--sizes", eo.sizes)->delimiter(',');
  experiment->add_option("--reps", eo.reps);
  experiment->add_option("--centers", eo.centers);
  experiment->add_option("--seed", eo.seed);
  experiment->add_option("--out", eo.out);
  experiment->add_option("--exact-limit", eo.exact_limit);
  experiment->add_option("--resamples", eo.resamples);
  experiment->add_option("--threads", eo.threads)->check(CLI::PositiveNumber);

  EnumerateOpts no;
  auto* enumerate = app.add_subcommand("enumerate", "List every small object as JSON lines");
  enumerate->add_option("--what", no.what)->check(CLI::IsMember({"gtrees", "wl", "quads", "pointed"}));
  enumerate->add_option("--genus", no.genus)->check(CLI::Range(0, 3));
  enumerate->add_option("--size", no.size)->required();
  enumerate->add_option("--budget", no.budget);
  enumerate->add_option("--out", no.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  const std::string cmdline = joined(argc, argv);
  try {
    if (*sample) return cmd_sample(so, cmdline);
    if (*convert) return cmd_convert(co);
    if (*verify) return cmd_verify(vo);
    if (*experiment) return cmd_experiment(eo, cmdline);
    if (*enumerate) return cmd_enumerate(no);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_of(e);
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
