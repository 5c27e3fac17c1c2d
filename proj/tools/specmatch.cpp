#include <CLI11.hpp>

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "specmatch/cluster.hpp"
#include "specmatch/corpus.hpp"
#include "specmatch/grail.hpp"
#include "specmatch/regex.hpp"
#include "specmatch/runtime.hpp"
#include "specmatch/speculation.hpp"

namespace fs = std::filesystem;
using namespace specmatch;

namespace {

constexpr int kExitError = 2;

// Read-only view of a whole file. Empty files are not mapped.
class MappedFile {
 public:
  explicit MappedFile(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "open " + path.string());
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      const int err = errno;
      ::close(fd_);
      throw std::system_error(err, std::generic_category(), "stat " + path.string());
    }
    size_ = static_cast<std::size_t>(st.st_size);
    if (size_ > 0) {
      void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd_, 0);
      if (p == MAP_FAILED) {
        const int err = errno;
        ::close(fd_);
        throw std::system_error(err, std::generic_category(), "mmap " + path.string());
      }
      data_ = static_cast<const std::uint8_t*>(p);
      ::madvise(p, size_, MADV_SEQUENTIAL);
    }
  }
  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;
  ~MappedFile() {
    if (data_) ::munmap(const_cast<std::uint8_t*>(data_), size_);
    if (fd_ >= 0) ::close(fd_);
  }
  std::span<const std::uint8_t> bytes() const { return {data_, size_}; }

 private:
  int fd_ = -1;
  const std::uint8_t* data_ = nullptr;
  std::size_t size_ = 0;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

// Where a DFA comes from: a Grail+ file or a pattern, optionally widened to
// extra alphabet bytes.
struct DfaSource {
  std::string grail;
  std::string regex;
  std::string alphabet;
  bool no_minimize = false;

  void add_to(CLI::App& cmd) {
    auto* g = cmd.add_option("--dfa", grail, "Grail+ file")->check(CLI::ExistingFile);
    auto* e = cmd.add_option("-e,--regex", regex, "regular expression instead of --dfa");
    g->excludes(e);
    cmd.add_option("--alphabet", alphabet, "bytes added to the alphabet (they lead to the sink)");
  }

  Dfa load() const {
    if (!regex.empty()) {
      RegexOptions opt;
      opt.minimize = !no_minimize;
      if (!alphabet.empty()) {
        // Pattern bytes must stay in the alphabet, so widen the default one.
        Dfa d = compile_regex(regex, opt);
        return extend_alphabet(d, as_bytes(alphabet));
      }
      return compile_regex(regex, opt);
    }
    if (grail.empty()) throw std::invalid_argument("give --dfa FILE or -e PATTERN");
    Dfa d = parse_grail(read_text(grail));
    if (!alphabet.empty()) d = extend_alphabet(d, as_bytes(alphabet));
    return no_minimize ? d : minimize(d);
  }
};

Mode parse_mode(const std::string& s) {
  if (s == "sequential") return Mode::kSequential;
  if (s == "basic") return Mode::kBasic;
  if (s == "lookahead") return Mode::kLookahead;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kSequential:
      return "sequential";
    case Mode::kBasic:
      return "basic";
    case Mode::kLookahead:
      return "lookahead";
  }
  return "?";
}

// "uniform", "profiled", or comma-separated capacities.
void apply_weights(const std::string& spec, RunConfig& config) {
  if (spec == "uniform") {
    config.weights = WeightSource::kUniform;
  } else if (spec == "profiled") {
    config.weights = WeightSource::kProfiled;
  } else {
    config.weights = WeightSource::kExplicit;
    config.capacities.clear();
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) config.capacities.push_back(std::stod(item));
  }
}

std::string state_name(StateId s) { return s == kNoState ? "none" : "s" + std::to_string(s); }

std::string sink_name(const Dfa& d) { return d.sink() ? std::to_string(*d.sink()) : "none"; }

// Lengths may be written as 1e6; the value must still be a whole number.
const CLI::Validator kLength(
    [](std::string& v) -> std::string {
      try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || d < 0 || d != std::floor(d) || d > 1e18) return "not a length: " + v;
        v = std::to_string(static_cast<std::uint64_t>(d));
        return {};
      } catch (const std::exception&) {
        return "not a length: " + v;
      }
    },
    "LENGTH");

// Signed speedup: a 2x slowdown is shown as -2.
double signed_speedup(double s) { return s >= 1.0 || s <= 0.0 ? s : -1.0 / s; }

template <class F>
double median_us(std::size_t reps, F&& body) {
  std::vector<double> t;
  for (std::size_t i = 0; i < reps; ++i) {
    const auto a = std::chrono::steady_clock::now();
    body();
    t.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - a).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
  std::string pattern;
  std::string grail;
  std::string alphabet;
  std::string out;
  bool no_minimize = false;
};

int cmd_compile(const CompileArgs& a) {
  Dfa d = [&] {
    if (!a.grail.empty()) {
      Dfa g = parse_grail(read_text(a.grail));
      if (!a.alphabet.empty()) g = extend_alphabet(g, as_bytes(a.alphabet));
      return a.no_minimize ? g : minimize(g);
    }
    if (a.pattern.empty()) throw std::invalid_argument("give a pattern or --grail FILE");
    RegexOptions opt;
    opt.minimize = !a.no_minimize;
    if (!a.alphabet.empty()) {
      return extend_alphabet(compile_regex(a.pattern, opt), as_bytes(a.alphabet));
    }
    return compile_regex(a.pattern, opt);
  }();
  if (!a.out.empty()) write_text(a.out, emit_grail(d));
  std::cout << "states=" << d.state_count() << " live=" << d.live_state_count()
            << " alphabet=" << d.alphabet_size() << " sink=" << sink_name(d)
            << " finals=" << d.finals().size() << '\n';
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  DfaSource source;
  std::size_t r = 4;
  bool histogram = false;
  std::optional<std::size_t> plan_n;
  std::size_t plan_p = 4;
  std::size_t plan_r = 1;
  std::size_t cap = kDefaultLookaheadCap;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const Dfa d = a.source.load();
  const double live = static_cast<double>(std::max<std::size_t>(d.live_state_count(), 1));
  if (a.plan_n) {
    std::size_t m = std::max<std::size_t>(d.live_state_count(), 1);
    if (a.plan_r > 0) m = initial_state_sets(d, a.plan_r, a.cap).i_max();
    write_plan_csv(std::cout, plan_chunks(*a.plan_n, m, WorkerProfile::uniform(a.plan_p), a.plan_r));
    return 0;
  }
  if (a.histogram) {
    std::cout << "r,set_size,suffixes\n";
  } else {
    std::cout << "r,states,alphabet,i_max,gamma,mean_set_size,reduction_rate,mean_reduction_rate\n";
  }
  for (std::size_t r = 1; r <= a.r; ++r) {
    std::optional<LookaheadTable> t;
    try {
      t = initial_state_sets(d, r, a.cap);
    } catch (const LookaheadCapExceeded& e) {
      std::cerr << "stopping at r=" << r << ": " << e.what() << '\n';
      break;
    }
    if (a.histogram) {
      const auto h = t->histogram();
      for (std::size_t k = 0; k < h.size(); ++k) {
        if (h[k]) std::cout << r << ',' << k << ',' << h[k] << '\n';
      }
      continue;
    }
    const Gamma g = gamma(*t, d);
    std::cout << r << ',' << d.live_state_count() << ',' << d.alphabet_size() << ',' << t->i_max()
              << ',' << g.value() << ',' << t->mean_set_size() << ',' << 1.0 - g.value() << ','
              << 1.0 - t->mean_set_size() / live << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- match

struct RunArgs {
  std::string mode = "lookahead";
  std::size_t p = std::max(1u, std::thread::hardware_concurrency());
  std::size_t r = 1;
  std::size_t lanes = 0;
  std::string weights = "uniform";
  bool strict = false;
  bool verify = false;
  bool no_short_circuit = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--mode", mode, "sequential | basic | lookahead")
        ->check(CLI::IsMember({"sequential", "basic", "lookahead"}))
        ->capture_default_str();
    cmd.add_option("--p", p, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--r", r, "reverse lookahead symbols")->capture_default_str();
    cmd.add_option("--lanes", lanes, "lockstep lane width, 0 = scalar kernel")->capture_default_str();
    cmd.add_option("--weights", weights, "uniform | profiled | c0,c1,... capacities")
        ->capture_default_str();
    cmd.add_flag("--no-short-circuit", no_short_circuit, "keep matching rows that reach the sink");
  }

  RunConfig config() const {
    RunConfig c;
    c.mode = parse_mode(mode);
    c.parallelism = p;
    c.r = r;
    c.lane_width = lanes;
    c.verify = verify;
    c.sink_short_circuit = !no_short_circuit;
    c.foreign = strict ? ForeignBytePolicy::kStrict : ForeignBytePolicy::kRejectInput;
    apply_weights(weights, c);
    c.validate();
    return c;
  }
};

struct MatchArgs {
  DfaSource source;
  RunArgs run;
  std::string input;
};

int cmd_match(const MatchArgs& a) {
  const Dfa d = a.source.load();
  const RunConfig config = a.run.config();
  std::vector<std::uint8_t> piped;
  std::optional<MappedFile> mapped;
  std::span<const std::uint8_t> bytes;
  if (a.input == "-") {
    piped.assign(std::istreambuf_iterator<char>(std::cin), {});
    bytes = piped;
  } else {
    mapped.emplace(a.input);
    bytes = mapped->bytes();
  }
  ParallelMatcher matcher(d, config);
  const auto t0 = std::chrono::steady_clock::now();
  const MatchOutcome out = matcher.match_bytes(bytes);
  const double wall =
      std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (out.accepted ? "ACCEPT " : "REJECT ") << state_name(out.last_state) << '\n';
  std::cout << "mode=" << mode_name(config.mode) << " p=" << config.parallelism << " n=" << bytes.size()
            << " wall_us=" << wall << " plan_us=" << out.phases.plan_us
            << " match_us=" << out.phases.match_us << " merge_us=" << out.phases.merge_us
            << " symbols=" << out.total_symbols() << (out.foreign_input ? " foreign_input=1" : "")
            << '\n';
  return out.accepted ? 0 : 1;
}

// ---------------------------------------------------------------- corpus

struct CorpusEntry {
  std::string id;
  Dfa dfa;
};

std::vector<std::uint8_t> manifest_alphabet(const std::string& source, std::size_t k) {
  return source == "prosite" ? protein_alphabet() : alphabet_bytes(k);
}

// Reads manifest.csv (id,source,states,alphabet,target) when present,
// otherwise every *.grail file in name order.
std::vector<CorpusEntry> load_corpus(const fs::path& dir) {
  std::vector<CorpusEntry> out;
  const fs::path manifest = dir / "manifest.csv";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string item;
      while (std::getline(ss, item, ',')) f.push_back(item);
      if (f.size() < 5) throw std::runtime_error("malformed manifest line: " + line);
      Dfa d = parse_grail(read_text(dir / (f[0] + ".grail")));
      d = extend_alphabet(d, manifest_alphabet(f[1], std::stoul(f[3])));
      out.push_back({f[0], std::move(d)});
    }
    return out;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".grail") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back({f.stem().string(), parse_grail(read_text(f))});
  return out;
}

struct GenArgs {
  std::string dir;
  std::size_t count = 10;
  std::size_t alphabet = 4;
  std::vector<std::size_t> sizes{8, 32, 128};
  std::uint64_t seed = 1;
  std::size_t n = 100'000;
  bool prosite = false;
  std::size_t elements = 5;
  bool planted = false;
};

int cmd_gen_corpus(const GenArgs& a) {
  fs::create_directories(a.dir);
  std::mt19937_64 rng(a.seed);
  std::ofstream manifest(fs::path(a.dir) / "manifest.csv");
  manifest << "id,source,states,alphabet,target\n";
  for (std::size_t i = 0; i < a.count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "dfa_%04zu", i);
    std::size_t target = 0;
    std::optional<Dfa> d;
    if (a.prosite) {
      const std::string motif = prosite_like_pattern(rng, a.elements);
      d = compile_prosite(motif);
      write_text(fs::path(a.dir) / (std::string(id) + ".motif"), motif + "\n");
    } else {
      target = a.sizes[i % a.sizes.size()];
      d = random_dfa_near(target, a.alphabet, 0.2, rng);
    }
    write_text(fs::path(a.dir) / (std::string(id) + ".grail"), emit_grail(*d));
    const auto input = a.planted ? planted_input(*d, a.n, rng) : uniform_input(*d, a.n, rng);
    write_text(fs::path(a.dir) / (std::string(id) + ".input"), std::string(input.begin(), input.end()));
    manifest << id << ',' << (a.prosite ? "prosite" : "random") << ',' << d->live_state_count() << ','
             << d->alphabet_size() << ',' << target << '\n';
  }
  std::cout << "wrote " << a.count << " automata to " << a.dir << '\n';
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string corpus;
  DfaSource source;
  std::size_t n = 1'000'000;
  std::vector<std::size_t> p{std::max(1u, std::thread::hardware_concurrency())};
  std::vector<std::size_t> r{0, 1};
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  std::string weights = "uniform";
  std::string topology;
  bool planted = false;
  bool short_circuit = false;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<CorpusEntry> entries;
  if (!a.corpus.empty()) {
    entries = load_corpus(a.corpus);
  } else {
    entries.push_back({"cli", a.source.load()});
  }
  std::optional<ClusterTopology> topo;
  if (!a.topology.empty()) topo = load_topology(a.topology);

  std::cout << "dfa,states,alphabet,r,i_max,gamma,mode,p,n,seq_us,wall_us,speedup,signed_speedup,"
               "worker_symbols,comm_fraction\n";
  std::cout << std::setprecision(6);
  std::mt19937_64 rng(a.seed);
  for (const auto& e : entries) {
    const Dfa& d = e.dfa;
    const auto bytes = a.planted ? planted_input(d, a.n, rng) : uniform_input(d, a.n, rng);

    RunConfig seq_cfg;
    seq_cfg.mode = Mode::kSequential;
    seq_cfg.verify = false;
    ParallelMatcher seq(d, seq_cfg);
    const auto symbols = encode_input(bytes, seq.table()).buffer.symbols;
    MatchOutcome want;
    const double seq_us = median_us(a.reps, [&] { want = seq.match(symbols); });

    for (std::size_t r : a.r) {
      std::optional<LookaheadTable> table;
      if (r > 0) {
        try {
          table = initial_state_sets(d, r);
        } catch (const LookaheadCapExceeded&) {
          std::cerr << e.id << ": skipping r=" << r << " (table too large)\n";
          continue;
        }
      }
      const std::size_t imax =
          table ? table->i_max() : std::max<std::size_t>(d.live_state_count(), 1);
      const double g = table ? gamma(*table, d).value() : 1.0;
      for (std::size_t p : a.p) {
        RunConfig cfg;
        cfg.mode = r > 0 ? Mode::kLookahead : Mode::kBasic;
        cfg.r = std::max<std::size_t>(r, 1);
        cfg.parallelism = p;
        cfg.verify = false;
        // Off by default: the sequential baseline never stops early either.
        cfg.sink_short_circuit = a.short_circuit;
        apply_weights(a.weights, cfg);
        cfg.validate();
        ParallelMatcher par(d, cfg);
        if (table) par.use_lookahead(*table);
        MatchOutcome got;
        const double wall = median_us(a.reps, [&] { got = par.match(symbols); });
        if (got.last_state != want.last_state) {
          throw std::logic_error(e.id + ": parallel and sequential results differ");
        }
        const double s = wall > 0 ? seq_us / wall : 0.0;
        std::string per_worker;
        for (std::size_t w = 0; w < got.workers.size(); ++w) {
          if (w) per_worker += ';';
          per_worker += std::to_string(got.workers[w].total_symbols());
        }
        std::string comm;
        if (topo) {
          const ClusterReport rep = simulate_cluster(d, bytes, *topo, cfg);
          std::ostringstream os;
          os << std::setprecision(6) << rep.comm_fraction;
          comm = os.str();
        }
        std::cout << e.id << ',' << d.live_state_count() << ',' << d.alphabet_size() << ',' << r << ','
                  << imax << ',' << g << ',' << mode_name(cfg.mode) << ',' << p << ',' << bytes.size()
                  << ',' << seq_us << ',' << wall << ',' << s << ',' << signed_speedup(s) << ','
                  << per_worker << ',' << comm << '\n';
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string topology;
  DfaSource source;
  RunArgs run;
  std::string input;
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  bool planted = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const ClusterTopology topo = load_topology(a.topology);
  const Dfa d = a.source.load();
  RunConfig cfg = a.run.config();
  std::vector<std::uint8_t> bytes;
  if (!a.input.empty()) {
    const MappedFile f(a.input);
    bytes.assign(f.bytes().begin(), f.bytes().end());
  } else {
    std::mt19937_64 rng(a.seed);
    bytes = a.planted ? planted_input(d, a.n, rng) : uniform_input(d, a.n, rng);
  }
  const ClusterReport rep = simulate_cluster(d, bytes, topo, cfg);
  if (a.out.empty()) {
    write_phase_csv(std::cout, rep.phases);
  } else {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    write_phase_csv(f, rep.phases);
  }
  std::cerr << (rep.outcome.accepted ? "ACCEPT " : "REJECT ") << state_name(rep.outcome.last_state)
            << " workers=" << topo.worker_count() << " total_us=" << rep.total_us
            << " match_end_us=" << rep.match_end_us << " merge_latency_us=" << rep.merge_latency_us
            << " binary_merge_latency_us=" << rep.binary_merge_latency_us
            << " comm_fraction=" << rep.comm_fraction << '\n';
  return 0;
}

constexpr const char* kFooter = R"(CSV columns
  analyze:            r,states,alphabet,i_max,gamma,mean_set_size,reduction_rate,mean_reduction_rate
                      (states counts live states; reduction_rate = 1 - gamma)
  analyze --histogram: r,set_size,suffixes
  analyze --plan:     worker,start,end,lookahead_start   (end inclusive; start-1 when empty)
  bench:              dfa,states,alphabet,r,i_max,gamma,mode,p,n,seq_us,wall_us,speedup,
                      signed_speedup,worker_symbols,comm_fraction
                      (speedup = seq_us / wall_us; signed_speedup shows a slowdown s<1 as -1/s;
                       worker_symbols is ';'-separated; comm_fraction only with --topology)
  simulate:           phase,worker,node,start_us,end_us
  gen-corpus:         manifest.csv with id,source,states,alphabet,target

Exit codes: 0 accept / success, 1 reject (match), 2 error.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speculative parallel DFA membership testing"};
  app.footer(kFooter);
  app.require_subcommand(1);

  CompileArgs compile;
  auto* c = app.add_subcommand("compile", "compile a pattern or ingest a Grail+ file");
  c->add_option("pattern", compile.pattern, "regular expression");
  c->add_option("--grail", compile.grail, "Grail+ input file")->check(CLI::ExistingFile);
  c->add_option("--alphabet", compile.alphabet, "bytes added to the alphabet");
  c->add_flag("--no-minimize", compile.no_minimize, "keep the automaton as built");
  c->add_option("-o,--output", compile.out, "write the DFA as Grail+");

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "initial-state set sizes per lookahead depth");
  analyze.source.add_to(*an);
  an->add_flag("--no-minimize", analyze.source.no_minimize);
  an->add_option("--r", analyze.r, "largest lookahead depth")->check(CLI::Range(1, 8))->capture_default_str();
  an->add_flag("--histogram", analyze.histogram, "print set-size counts instead");
  an->add_option("--plan", analyze.plan_n, "print the chunk plan for an input of this length")->transform(kLength);
  an->add_option("--p", analyze.plan_p, "workers for --plan")->check(CLI::PositiveNumber)->capture_default_str();
  an->add_option("--plan-r", analyze.plan_r, "lookahead depth for --plan, 0 = basic")->capture_default_str();
  an->add_option("--cap", analyze.cap, "largest |alphabet|^r to tabulate")->capture_default_str();

  MatchArgs match;
  auto* m = app.add_subcommand("match", "membership test of one input file");
  match.source.add_to(*m);
  match.run.add_to(*m);
  m->add_flag("--verify", match.run.verify, "cross-check against sequential matching");
  m->add_flag("--strict", match.run.strict, "fail on bytes outside the alphabet");
  m->add_option("input", match.input, "input file, - for stdin")->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "speedup over sequential matching, one CSV row per run");
  b->add_option("corpus", bench.corpus, "directory written by gen-corpus")->check(CLI::ExistingDirectory);
  bench.source.add_to(*b);
  b->add_option("--n", bench.n, "input length")->transform(kLength)->capture_default_str();
  b->add_option("--p", bench.p, "worker counts")->delimiter(',');
  b->add_option("--r", bench.r, "lookahead depths, 0 = basic mode")->delimiter(',');
  b->add_option("--reps", bench.reps, "timed repetitions (median)")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed, "input seed");
  b->add_option("--weights", bench.weights, "uniform | profiled | c0,c1,...");
  b->add_option("--topology", bench.topology, "also simulate on this cluster")->check(CLI::ExistingFile);
  b->add_flag("--planted", bench.planted, "accepted inputs instead of uniform ones");
  b->add_flag("--short-circuit", bench.short_circuit, "stop rows that reach the sink");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "replay a run on a simulated cluster");
  s->add_option("topology", sim.topology, "topology file")->required()->check(CLI::ExistingFile);
  sim.source.add_to(*s);
  sim.run.add_to(*s);
  s->add_option("--input", sim.input, "input file (default: generated)")->check(CLI::ExistingFile);
  s->add_option("--n", sim.n, "random input length")->transform(kLength)->capture_default_str();
  s->add_option("--seed", sim.seed, "random input seed");
  s->add_flag("--planted", sim.planted, "an accepted input instead of a uniform one");
  s->add_option("-o,--output", sim.out, "phase CSV path (default stdout)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen-corpus", "random automata and inputs");
  g->add_option("dir", gen.dir, "output directory")->required();
  g->add_option("--count", gen.count)->capture_default_str();
  g->add_option("--alphabet", gen.alphabet, "alphabet size")->check(CLI::Range(1, 94))->capture_default_str();
  g->add_option("--sizes", gen.sizes, "state-count targets, cycled")->delimiter(',');
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--n", gen.n, "input length")->transform(kLength)->capture_default_str();
  g->add_flag("--prosite", gen.prosite, "protein motifs over the 20-letter alphabet");
  g->add_option("--elements", gen.elements, "motif elements")->capture_default_str();
  g->add_flag("--planted", gen.planted, "accepted inputs instead of uniform ones");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*c) return cmd_compile(compile);
    if (*an) return cmd_analyze(analyze);
    if (*m) return cmd_match(match);
    if (*b) return cmd_bench(bench);
    if (*s) return cmd_simulate(sim);
    if (*g) return cmd_gen_corpus(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
