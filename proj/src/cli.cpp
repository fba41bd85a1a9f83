#include "typnorm/cli.hpp"

#include "typnorm/analysis.hpp"
#include "typnorm/constructions.hpp"
#include "typnorm/harness.hpp"
#include "typnorm/reductions.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace typnorm {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kClaimFailed = 1;
constexpr int kBadInput = 2;
constexpr int kResource = 3;

struct RunConfig {
  std::string number;
  unsigned a = 2;
  std::string poly;
  unsigned radix = 2;
  std::string file;
  std::string length;
  std::string format;
  std::string out;
  std::string metric = "runlength";
  std::string positions;
  unsigned m = 3;
  std::string cap;
  std::string freq_cap;
  std::string map;
  std::string seq;
  std::string base = "omega-prime";
  std::string experiment;
  std::uint64_t seed = 42;
};

std::uint64_t cap_of(const RunConfig& cfg, std::uint64_t fallback = kDefaultCap) {
  if (cfg.cap.empty()) return fallback;
  return to_u64(parse_count(cfg.cap));
}

// Writes to a sibling temp file first, so a failure never leaves a partial file.
void emit(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
  if (cfg.out.empty()) {
    out << payload;
    return;
  }
  fs::path target(cfg.out);
  if (target.is_relative()) {
    if (const char* dir = std::getenv("TYPNORM_OUT_DIR"); dir != nullptr && *dir != '\0') {
      target = fs::path(dir) / target;
    }
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw ResourceError("cannot write " + target.string());
    }
  }
  fs::rename(tmp, target);
}

BitStream stream_for(const RunConfig& cfg) {
  return make_generator(GeneratorSpec{cfg.number, cfg.a, cfg.poly, cfg.radix});
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ContractViolation("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// ascii text by default, raw bytes with --format packed
Prefix load_prefix(const RunConfig& cfg) {
  const std::string raw = read_file(cfg.file);
  if (cfg.format == "packed") {
    const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    const std::size_t n = cfg.length.empty() ? bytes.size() * 8 : to_u64(parse_count(cfg.length));
    return from_packed(bytes, n);
  }
  return from_ascii(raw);
}

// --- positions -------------------------------------------------------------

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    parts.emplace_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

std::vector<BigInt> geometric(const BigInt& start, const BigInt& ratio, std::uint64_t count) {
  if (start < 1 || ratio < 2 || count == 0) {
    throw ParseError("geometric ladder needs start >= 1, ratio >= 2, count >= 1", 0);
  }
  std::vector<BigInt> out;
  BigInt p = start;
  for (std::uint64_t i = 0; i < count; ++i, p *= ratio) out.push_back(p);
  return out;
}

// "1,2,3" | "geom:start,ratio,count" | "checkpoints:a..b"
std::vector<BigInt> parse_positions(const std::string& spec, const std::optional<BitStream>& s,
                                    const BigInt& limit) {
  if (spec.empty()) {
    // Default dyadic ladder from 64, clipped to what is available.
    std::vector<BigInt> out;
    for (BigInt p = 64; p <= limit; p *= 2) out.push_back(p);
    return out;
  }
  if (spec.rfind("geom:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    if (parts.size() < 2 || parts.size() > 3) {
      throw ParseError("positions: expected geom:start,ratio[,count]", 5);
    }
    const BigInt start = parse_count(parts[0]);
    const BigInt ratio = parse_count(parts[1]);
    if (parts.size() == 3) return geometric(start, ratio, to_u64(parse_count(parts[2])));
    std::vector<BigInt> out;
    for (BigInt p = start; p <= limit; p *= ratio) out.push_back(p);
    return out;
  }
  if (spec.rfind("checkpoints:", 0) == 0) {
    const std::string range = spec.substr(12);
    const auto dots = range.find("..");
    if (dots == std::string::npos) throw ParseError("positions: expected checkpoints:a..b", 12);
    const unsigned from = static_cast<unsigned>(to_u64(parse_count(range.substr(0, dots))));
    const unsigned to = static_cast<unsigned>(to_u64(parse_count(range.substr(dots + 2))));
    if (!s) throw ContractViolation("checkpoint positions need a --number generator");
    std::vector<BigInt> out;
    for (const Checkpoint& cp : checkpoints(*s, from, to)) out.push_back(cp.position);
    return out;
  }
  std::vector<BigInt> out;
  for (const auto& part : split(spec, ',')) out.push_back(parse_count(part));
  return out;
}

void require_ascending(const std::vector<BigInt>& ps) {
  if (ps.empty()) throw ContractViolation("no positions to analyze");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] < 1 || (i > 0 && ps[i] <= ps[i - 1])) {
      throw ContractViolation("positions must be positive and strictly ascending");
    }
  }
}

// --- commands --------------------------------------------------------------

std::string encode(const Prefix& p, const std::string& format) {
  if (format.empty() || format == "ascii") return to_ascii(p);
  if (format == "packed") {
    const auto bytes = to_packed(p);
    return {bytes.begin(), bytes.end()};
  }
  throw ContractViolation("unknown digit format '" + format + "' (ascii | packed)");
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const BitStream s = stream_for(cfg);
  const Prefix p = take(s, parse_count(cfg.length), cap_of(cfg));
  emit(cfg, encode(p, cfg.format), out);
  return kOk;
}

std::string discrepancy_output(const std::vector<std::pair<std::uint64_t, HighPrec>>& rows, unsigned m,
                               const std::string& format, const std::string& source) {
  if (format == "csv") {
    std::string csv = "n,m,discrepancy\n";
    for (const auto& [n, d] : rows) csv += std::to_string(n) + "," + std::to_string(m) + "," + format_sig12(d) + "\n";
    return csv;
  }
  ojson j;
  j["source"] = source;
  j["metric"] = "discrepancy";
  j["m"] = m;
  if (rows.size() == 1) {
    j["n"] = std::to_string(rows[0].first);
    j["discrepancy"] = format_sig12(rows[0].second);
  } else {
    j["rows"] = ojson::array();
    for (const auto& [n, d] : rows) j["rows"].push_back({{"n", std::to_string(n)}, {"discrepancy", format_sig12(d)}});
  }
  return j.dump(2) + "\n";
}

std::string typicality_output(const std::vector<TypicalityRow>& rows, const std::string& format,
                              const std::string& source) {
  if (format.empty() || format == "csv") return typicality_csv(rows);
  ojson j;
  j["source"] = source;
  j["metric"] = "runlength";
  j["rows"] = ojson::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"n", r.position.str()}, {"L", r.L.str()}, {"log2n", format_sig12(r.log2n)},
                         {"ratio", format_sig12(r.ratio)}});
  }
  return j.dump(2) + "\n";
}

std::string density_output(const std::vector<DensityRow>& rows, const std::string& format,
                           const std::string& source) {
  if (format.empty() || format == "csv") return density_csv(rows);
  ojson j;
  j["source"] = source;
  j["metric"] = "density";
  j["rows"] = ojson::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"n", std::to_string(r.n)}, {"count", std::to_string(r.count)},
                         {"density", format_sig12(r.density)}});
  }
  return j.dump(2) + "\n";
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  if (cfg.number.empty() == cfg.file.empty()) {
    throw ContractViolation("analyze needs exactly one of --number or --file");
  }
  if (cfg.m < 1 || cfg.m > 24) throw ContractViolation("--m must be in [1, 24]");
  const std::uint64_t cap = cap_of(cfg);
  const std::string out_format = cfg.file.empty() ? cfg.format : (cfg.format == "packed" ? "" : cfg.format);

  std::optional<BitStream> stream;
  std::optional<Prefix> prefix;
  std::string source;
  BigInt limit = cap;
  if (!cfg.number.empty()) {
    stream = stream_for(cfg);
    source = cfg.number;
    // Default ladder stays small enough to answer quickly.
    limit = std::min<BigInt>(cap, BigInt(1) << 20);
  } else {
    prefix = load_prefix(cfg);
    source = cfg.file;
    limit = prefix->size();
  }

  if (cfg.metric == "runlength") {
    const auto positions = parse_positions(cfg.positions, stream, limit);
    require_ascending(positions);
    const auto rows = stream ? typicality_series(*stream, positions, cap) : typicality_series(*prefix, positions);
    emit(cfg, typicality_output(rows, out_format, source), out);
    return kOk;
  }

  if (cfg.metric == "discrepancy") {
    std::vector<BigInt> positions;
    if (cfg.positions.empty() && prefix) {
      positions.push_back(prefix->size());
    } else {
      positions = parse_positions(cfg.positions, stream, limit);
    }
    require_ascending(positions);
    if (positions.back() > (prefix ? BigInt(prefix->size()) : BigInt(cap))) {
      throw ResourceError("position " + positions.back().str() + " beyond " +
                          (prefix ? "file length" : "cap " + std::to_string(cap)));
    }
    FreqTable ft(cfg.m);
    std::vector<std::pair<std::uint64_t, HighPrec>> rows;
    std::unique_ptr<StreamReader> reader;
    if (stream) reader = std::make_unique<StreamReader>(*stream);
    for (const BigInt& p : positions) {
      const std::uint64_t target = to_u64(p);
      while (ft.position() < target) {
        ft.feed(reader ? reader->next() : prefix->at(ft.position() + 1));
      }
      rows.emplace_back(target, normality_discrepancy(ft));
    }
    emit(cfg, discrepancy_output(rows, cfg.m, out_format.empty() ? "json" : out_format, source), out);
    return kOk;
  }

  if (cfg.metric == "density") {
    std::vector<std::uint64_t> positions;
    for (const BigInt& p : parse_positions(cfg.positions, stream, limit)) positions.push_back(to_u64(p));
    if (positions.empty()) throw ContractViolation("no positions to analyze");
    std::optional<IndexSet> set;
    if (!cfg.seq.empty()) {
      set.emplace(zero_density_g(parse_descriptor(cfg.seq)));
    } else if (stream) {
      const BitStream s = *stream;
      set.emplace("positions of ones in " + source, [s](const BigInt& k) { return s.digit_at(k) == Bit::one; },
                  [s](std::uint64_t k) { return s.digit_at(k) == Bit::one; });
    } else {
      const auto bits = std::make_shared<Prefix>(*prefix);
      const auto fast = [bits](std::uint64_t k) { return k <= bits->size() && bits->at(k) == Bit::one; };
      set.emplace("positions of ones in " + source, [fast](const BigInt& k) { return fast(to_u64(k)); }, fast);
    }
    const std::uint64_t density_cap = prefix ? std::min<std::uint64_t>(cap, prefix->size()) : cap;
    emit(cfg, density_output(density_series(*set, positions, density_cap), out_format, set->description()), out);
    return kOk;
  }
  throw ContractViolation("unknown metric '" + cfg.metric + "' (runlength | discrepancy | density)");
}

std::string classification_text(const Classification& c) {
  const auto b = [](bool v) { return v ? "true" : "false"; };
  return std::string("{P3:") + b(c.in_P3) + ", C:" + b(c.in_C) + ", D:" + b(c.in_D) + "}";
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
  const NatSeqDescriptor d = parse_descriptor(cfg.seq);
  const auto base = [&] { return make_generator(GeneratorSpec{cfg.base, cfg.a, cfg.poly, cfg.radix}); };
  BitStream image = [&] {
    if (cfg.map == "f") return reduction_f(d);
    if (cfg.map == "g-prime") return action_g_prime(d, base());
    if (cfg.map == "f-prime") return action_f_prime(d, base());
    if (cfg.map == "phi") return phi(d, base());
    throw ContractViolation("unknown map '" + cfg.map + "' (f | g-prime | f-prime | phi)");
  }();
  const Prefix p = take(image, parse_count(cfg.length), cap_of(cfg));
  std::string payload = encode(p, cfg.format);
  if (cfg.map == "phi") {
    const std::string cls = classification_text(classify(d)) + "\n";
    if (cfg.out.empty() && cfg.format != "packed") {
      payload += cls;
    } else {
      out << cls;
    }
  }
  emit(cfg, payload, out);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  HarnessConfig hc;
  hc.cap = cap_of(cfg);
  hc.freq_cap = cfg.freq_cap.empty() ? std::min<std::uint64_t>(hc.freq_cap, hc.cap) : to_u64(parse_count(cfg.freq_cap));
  hc.seed = cfg.seed;
  const auto reports = run_experiments(cfg.experiment, hc, cfg.a);
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.passed();

  std::string payload;
  if (cfg.format == "text") {
    for (const auto& r : reports) payload += to_text(r);
  } else if (cfg.format.empty() || cfg.format == "json") {
    if (reports.size() == 1) {
      payload = to_json(reports.front()).dump(2) + "\n";
    } else {
      ojson j;
      j["experiment"] = "all";
      j["verdict"] = pass ? "PASS" : "FAIL";
      j["cap"] = hc.cap;
      j["seed"] = hc.seed;
      j["reports"] = ojson::array();
      for (const auto& r : reports) j["reports"].push_back(to_json(r));
      payload = j.dump(2) + "\n";
    }
  } else {
    throw ContractViolation("unknown report format '" + cfg.format + "' (json | text)");
  }
  emit(cfg, payload, out);
  return pass ? kOk : kClaimFailed;
}

// --- config file -----------------------------------------------------------

// Flat key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ContractViolation("cannot read config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config " + path + ":" + std::to_string(lineno) + ": expected key=value", lineno);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

// Config entries go in front of the command line so explicit flags win.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path || rest.empty()) return rest;
  std::vector<std::string> merged{rest.front()};
  for (const auto& [key, value] : read_config(*path)) {
    if (key == "cap" && std::getenv("TYPNORM_CAP") != nullptr) continue;
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate, analyze and check binary expansions with long runs"};
  app.name("typnorm");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "flat key=value file mirroring the flags");

  RunConfig cfg;
  const auto add_generator = [&cfg](CLI::App* sub) {
    sub->add_option("--number", cfg.number, "champernowne | y | z | omega | omega-prime | nakai");
    sub->add_option("--a", cfg.a, "parameter a of z (2..4)");
    sub->add_option("--poly", cfg.poly, "nakai polynomial coefficients, highest degree first");
    sub->add_option("--r", cfg.radix, "nakai radix");
  };
  const auto add_cap = [&cfg](CLI::App* sub) {
    sub->add_option("--cap", cfg.cap, "materialization cap (accepts 1e8)")->envname("TYPNORM_CAP");
  };

  CLI::App* gen = app.add_subcommand("generate", "write the first digits of a construction");
  add_generator(gen);
  gen->add_option("--length", cfg.length, "number of digits")->required();
  gen->add_option("--format", cfg.format, "ascii | packed");
  gen->add_option("--out", cfg.out, "output path (default stdout)");
  add_cap(gen);

  CLI::App* ana = app.add_subcommand("analyze", "run-length, discrepancy or density series");
  add_generator(ana);
  ana->add_option("--file", cfg.file, "digit file (ascii, or packed with --format packed)");
  ana->add_option("--length", cfg.length, "digit count of a packed file");
  ana->add_option("--metric", cfg.metric, "runlength | discrepancy | density");
  ana->add_option("--positions", cfg.positions, "a,b,c | geom:start,ratio[,count] | checkpoints:a..b");
  ana->add_option("--m", cfg.m, "maximal block length for discrepancy");
  ana->add_option("--seq", cfg.seq, "descriptor whose zero-density set is measured (density)");
  ana->add_option("--format", cfg.format, "csv | json");
  ana->add_option("--out", cfg.out, "output path (default stdout)");
  add_cap(ana);

  CLI::App* red = app.add_subcommand("reduce", "apply a reduction map to a descriptor");
  red->add_option("--map", cfg.map, "f | g-prime | f-prime | phi")->required();
  red->add_option("--seq", cfg.seq, "natural sequence descriptor")->required();
  red->add_option("--base", cfg.base, "base stream for g-prime, f-prime and phi");
  red->add_option("--a", cfg.a, "parameter a when the base is z");
  red->add_option("--length", cfg.length, "number of digits")->required();
  red->add_option("--format", cfg.format, "ascii | packed");
  red->add_option("--out", cfg.out, "output path (default stdout)");
  add_cap(red);

  CLI::App* ver = app.add_subcommand("verify", "run harness experiments");
  ver->add_option("--experiment", cfg.experiment,
                  "champernowne | y | z | omega | omega-prime | reduction-f | phi | erdos-renyi | all")
      ->required();
  ver->add_option("--a", cfg.a, "parameter a for the z experiment");
  ver->add_option("--seed", cfg.seed, "seed for the Monte Carlo experiment");
  ver->add_option("--freq-cap", cfg.freq_cap, "cap for frequency tables");
  ver->add_option("--format", cfg.format, "json | text");
  ver->add_option("--out", cfg.out, "report path (default stdout)");
  add_cap(ver);

  try {
    std::vector<std::string> args = with_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "typnorm: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "typnorm: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (gen->parsed()) return cmd_generate(cfg, out);
    if (ana->parsed()) return cmd_analyze(cfg, out);
    if (red->parsed()) return cmd_reduce(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const ParseError& e) {
    err << "typnorm: parse error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ResourceError& e) {
    err << "typnorm: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "typnorm: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace typnorm
