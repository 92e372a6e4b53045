#include "iplab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "iplab/blockseq.hpp"
#include "iplab/hildebrand.hpp"
#include "iplab/hindman.hpp"
#include "iplab/multfunc.hpp"
#include "iplab/serialize.hpp"
#include "iplab/witness.hpp"

namespace iplab {

namespace {

struct CommonFlags {
  unsigned threads = 1;
  bool deterministic = false;
  std::uint64_t max_nodes = 0;
  double time_limit = 0.0;
  std::string out_path;
  std::string format = "json";
};

struct FunctionFlags {
  std::string spec_path;
  unsigned k = 0;
  std::string assign;
  std::string mode;  // empty: sieve-bounded when --limit is given
  std::uint32_t limit = 0;
  std::optional<unsigned> default_class;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void add_common(CLI::App* sub, CommonFlags& c) {
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_flag("--deterministic", c.deterministic,
                "Least solution in search order, identical output for any thread count");
  sub->add_option("--max-nodes", c.max_nodes, "Node budget (0 = unlimited)");
  sub->add_option("--time-limit", c.time_limit, "Wall-time budget in seconds (0 = unlimited)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", c.out_path, "Write the result document to this file");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "plain"}));
}

void add_function(CLI::App* sub, FunctionFlags& f) {
  sub->add_option("--spec", f.spec_path, "Function spec JSON file");
  sub->add_option("--k", f.k, "Modulus k (values in the k-th roots of unity)");
  sub->add_option("--assign", f.assign, "Inline prime classes, e.g. 2:1,3:1");
  sub->add_option("--mode", f.mode, "finite-support or sieve-bounded (default: by --limit)")
      ->check(CLI::IsMember({"finite-support", "sieve-bounded", "finite", "sieve"}));
  sub->add_option("--limit", f.limit, "Evaluation limit for sieve-bounded functions");
  sub->add_option("--default", f.default_class, "Class of unlisted primes (sieve-bounded)");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

MultiplicativeFunction load_function(const FunctionFlags& f) {
  if (!f.spec_path.empty()) return function_from_json(read_json_file(f.spec_path));
  if (f.k == 0) throw UsageError("field 'k': pass --spec or --k");
  json j;
  j["k"] = f.k;
  const bool finite =
      f.mode.empty() ? f.limit == 0 : f.mode == "finite" || f.mode == "finite-support";
  j["mode"] = finite ? "finite-support" : "sieve-bounded";
  if (!finite) {
    if (f.limit == 0) throw UsageError("field 'limit': sieve-bounded functions need --limit");
    j["limit"] = f.limit;
  }
  if (f.default_class) j["default"] = *f.default_class;
  json a = json::array();
  for (const auto& [p, c] : parse_inline_assignment(f.assign)) a.push_back(json::array({p, c}));
  j["assignment"] = std::move(a);
  return function_from_json(j);
}

SearchOptions search_options(const CommonFlags& c) {
  SearchOptions o;
  o.threads = c.threads;
  o.deterministic = c.deterministic;
  o.max_nodes = c.max_nodes;
  o.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(c.time_limit * 1000.0));
  return o;
}

/// Budget settings always; measured stats only when output need not be
/// reproducible byte for byte.
void attach_budget(json& doc, const CommonFlags& c, const SearchStats* stats) {
  json b;
  b["max_nodes"] = c.max_nodes;
  b["time_limit_seconds"] = c.time_limit;
  doc["budget"] = std::move(b);
  if (stats && !c.deterministic) doc["stats"] = to_json(*stats);
}

void emit(const json& doc, const CommonFlags& c, std::ostream& out,
          const std::vector<std::string>* plain_lines = nullptr) {
  std::string text;
  if (c.format == "plain") {
    std::ostringstream os;
    if (plain_lines) {
      for (const auto& line : *plain_lines) os << line << '\n';
    } else {
      for (const auto& [key, value] : doc.items()) {
        os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
    }
    text = os.str();
  } else {
    text = doc.dump(2) + "\n";
  }
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path);
    if (!f) throw UsageError("cannot write '" + c.out_path + "'");
    f << text;
  }
}

std::string avoid_status(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "SAT";
    case SearchStatus::NotFound: return "UNSAT";
    case SearchStatus::Unknown: return "unknown";
  }
  return "unknown";
}

json family_to_json(const std::vector<IndexSet>& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(s.elements());
  return out;
}

/// Accepts a bare document or a result document wrapping it under `key`.
const json& unwrap(const json& doc, const char* key) {
  if (doc.is_object() && doc.contains(key) && doc[key].is_object()) return doc[key];
  return doc;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"iplab: multiplicative functions, Hildebrand constants and IP-witnesses"};
  app.require_subcommand(1);

  CommonFlags common;
  FunctionFlags fn;

  unsigned k = 0;
  unsigned r = 2;
  std::uint64_t bmax = 1000;
  std::uint64_t bound = 0;
  bool symmetry = false;
  std::string cert_path;
  std::uint64_t n_big = 0;
  unsigned n = 0;
  unsigned m = 2;
  unsigned cap = kDefaultBlockCap;
  unsigned n_prefix = 6;
  std::string method = "proof";
  std::string coloring_name;
  std::string witness_path;
  std::string blockseq_format;

  auto* constant = app.add_subcommand("constant", "Hildebrand constant c(k) by iterative deepening");
  constant->add_option("--k", k, "Modulus k")->required()->check(CLI::PositiveNumber);
  constant->add_option("--r", r, "Run length")->check(CLI::Range(1u, 64u));
  constant->add_option("--bmax", bmax, "Largest bound to try")->check(CLI::PositiveNumber);
  constant->add_flag("--symmetry", symmetry, "Fix f(2) up to unit relabeling");
  add_common(constant, common);

  auto* avoid = app.add_subcommand("avoid", "Search for an assignment avoiding kernel runs up to B");
  avoid->add_option("--k", k, "Modulus k")->required()->check(CLI::PositiveNumber);
  avoid->add_option("--r", r, "Run length")->check(CLI::Range(1u, 64u));
  avoid->add_option("--B", bound, "Bound B")->required()->check(CLI::PositiveNumber);
  avoid->add_flag("--symmetry", symmetry, "Fix f(2) up to unit relabeling");
  add_common(avoid, common);

  auto* verify_cert = app.add_subcommand("verify-cert", "Verify an avoidance certificate");
  verify_cert->add_option("--cert,cert", cert_path, "Certificate JSON file")->required();
  add_common(verify_cert, common);

  auto* runs = app.add_subcommand("runs", "List kernel runs of length r starting at a <= N");
  add_function(runs, fn);
  runs->add_option("--r", r, "Run length")->check(CLI::Range(1u, 64u));
  runs->add_option("--N", n_big, "Bound N")->required()->check(CLI::PositiveNumber);
  add_common(runs, common);

  auto* blockseq = app.add_subcommand("blockseq", "Generate and verify the block-divisible sequence");
  blockseq->add_option("--n", n, "Last index")->required();
  blockseq->add_option("--cap", cap, "Refuse n above this");
  add_common(blockseq, common);

  auto* hindman = app.add_subcommand("hindman", "Search for blocks with monochromatic finite unions");
  add_function(hindman, fn);
  hindman->add_option("--coloring", coloring_name,
                      "function (f of s_A), size-parity, max-parity or constant")
      ->check(CLI::IsMember({"function", "size-parity", "max-parity", "constant"}));
  hindman->add_option("--n", n, "Ground set {1..n}")->required()->check(CLI::Range(1u, 30u));
  hindman->add_option("--m", m, "Number of blocks")->check(CLI::PositiveNumber);
  hindman->add_option("--cap", cap, "Block sequence cap (function coloring)");
  add_common(hindman, common);

  auto* witness = app.add_subcommand("witness", "Build a verified IP-witness inside A* and A*-1");
  add_function(witness, fn);
  witness->add_option("--method", method, "proof or direct")->check(CLI::IsMember({"proof", "direct"}));
  witness->add_option("--m", m, "Blocks (proof) or generators (direct)")->check(CLI::PositiveNumber);
  witness->add_option("--n-prefix", n_prefix, "Block sequence length for the proof pipeline");
  witness->add_option("--cap", cap, "Block sequence cap");
  witness->add_option("--N", n_big, "Search bound for direct search")->check(CLI::PositiveNumber);
  add_common(witness, common);

  auto* verify_witness_cmd = app.add_subcommand("verify-witness", "Verify an IP-witness file");
  verify_witness_cmd->add_option("--witness,witness", witness_path, "Witness JSON file")->required();
  add_common(verify_witness_cmd, common);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitDefinitive : kExitUsage;
  }

  try {
    if (constant->parsed()) {
      AvoidanceOptions o;
      static_cast<SearchOptions&>(o) = search_options(common);
      o.symmetry = symmetry;
      ConstantResult res = hildebrand_constant(k, r, bmax, o);
      json doc;
      doc["command"] = "constant";
      doc["k"] = k;
      doc["r"] = r;
      doc["bmax"] = bmax;
      doc["status"] = to_string(res.status());
      doc["c"] = res.constant ? json(*res.constant) : json(nullptr);
      if (res.extremal) {
        doc["certificate_for"] = res.extremal->bound;
        doc["certificate"] = to_json(*res.extremal);
        doc["certificate_verified"] = verify_certificate(*res.extremal);
      } else {
        doc["certificate_for"] = nullptr;
        doc["certificate"] = nullptr;
      }
      doc["last_bound"] = res.last_bound;
      doc["budget_exhausted"] = res.budget_exhausted;
      attach_budget(doc, common, &res.stats);
      emit(doc, common, out);
      return res.constant ? kExitDefinitive : kExitUndecided;
    }

    if (avoid->parsed()) {
      AvoidanceOptions o;
      static_cast<SearchOptions&>(o) = search_options(common);
      o.symmetry = symmetry;
      AvoidanceResult res = avoidance_search(k, r, bound, o);
      json doc;
      doc["command"] = "avoid";
      doc["k"] = k;
      doc["r"] = r;
      doc["B"] = bound;
      doc["status"] = avoid_status(res.status);
      if (res.certificate) {
        doc["certificate"] = to_json(*res.certificate);
        doc["certificate_verified"] = verify_certificate(*res.certificate);
      } else {
        doc["certificate"] = nullptr;
      }
      attach_budget(doc, common, &res.stats);
      emit(doc, common, out);
      return res.status == SearchStatus::Unknown ? kExitUndecided : kExitDefinitive;
    }

    if (verify_cert->parsed()) {
      AvoidanceCertificate cert = certificate_from_json(unwrap(read_json_file(cert_path), "certificate"));
      json doc;
      doc["command"] = "verify-cert";
      doc["k"] = cert.k;
      doc["r"] = cert.r;
      doc["B"] = cert.bound;
      doc["valid"] = verify_certificate(cert);
      emit(doc, common, out);
      return kExitDefinitive;
    }

    if (runs->parsed()) {
      MultiplicativeFunction f = load_function(fn);
      auto found = find_runs(f, r, n_big);
      json doc;
      doc["command"] = "runs";
      doc["function"] = to_json(f);
      doc["r"] = r;
      doc["N"] = n_big;
      json starts = json::array();
      for (const auto& run : found) starts.push_back(run.start);
      doc["count"] = found.size();
      doc["runs"] = std::move(starts);
      emit(doc, common, out);
      return kExitDefinitive;
    }

    if (blockseq->parsed()) {
      BlockSequence seq = generate_block_sequence(n, cap);
      DivisibilityReport rep = verify_block_divisibility(seq);
      json doc;
      doc["command"] = "blockseq";
      doc["n"] = n;
      json terms = json::array();
      std::vector<std::string> lines;
      for (const auto& t : seq.terms()) {
        lines.push_back(t.get_str());
        terms.push_back(lines.back());
      }
      doc["terms"] = std::move(terms);
      doc["block_divisible"] = rep.holds;
      doc["pairs_checked"] = rep.pairs_checked;
      if (rep.counterexample) {
        doc["counterexample"] = family_to_json({rep.counterexample->first, rep.counterexample->second});
      } else {
        doc["counterexample"] = nullptr;
      }
      // Plain output is the bare sequence, one decimal term per line.
      CommonFlags c = common;
      if (!blockseq->get_option("--format")->count()) c.format = "plain";
      emit(doc, c, out, &lines);
      if (!rep.holds) err << "block divisibility fails\n";
      return kExitDefinitive;
    }

    if (hindman->parsed()) {
      std::string name = coloring_name.empty() ? "function" : coloring_name;
      SubsetColoring coloring;
      coloring.n = n;
      std::optional<MultiplicativeFunction> f;
      std::optional<BlockSequence> seq;
      if (name == "function") {
        f = load_function(fn);
        if (f->mode() != FunctionMode::FiniteSupport) {
          throw UnsupportedMode("field 'mode': the function coloring needs a finite-support function");
        }
        seq = generate_block_sequence(n, cap);
        coloring.classes = f->modulus();
        coloring.color = [&](const IndexSet& a) { return f->evaluate(seq->subset_sum(a)).value + 1; };
      } else if (name == "size-parity") {
        coloring.classes = 2;
        coloring.color = [](const IndexSet& a) { return static_cast<unsigned>(a.size() % 2) + 1; };
      } else if (name == "max-parity") {
        coloring.classes = 2;
        coloring.color = [](const IndexSet& a) { return a.max() % 2 + 1; };
      } else {
        coloring.classes = 1;
        coloring.color = [](const IndexSet&) { return 1u; };
      }
      HindmanResult res = monochromatic_fu_search(coloring, m, search_options(common));
      json doc;
      doc["command"] = "hindman";
      doc["coloring"] = name;
      if (f) doc["function"] = to_json(*f);
      doc["n"] = n;
      doc["m"] = m;
      doc["status"] = to_string(res.status);
      if (res.family) {
        doc["blocks"] = family_to_json(res.family->blocks);
        doc["color"] = res.color;
        doc["fu_closure"] = family_to_json(fu_closure(*res.family));
      } else {
        doc["blocks"] = nullptr;
      }
      attach_budget(doc, common, &res.stats);
      emit(doc, common, out);
      return res.status == SearchStatus::Found ? kExitDefinitive : kExitUndecided;
    }

    if (witness->parsed()) {
      MultiplicativeFunction f = load_function(fn);
      WitnessResult res;
      if (method == "proof") {
        res = ip_witness_from_proof(f, m, n_prefix, search_options(common), cap);
      } else {
        if (n_big == 0) throw UsageError("field 'N': direct search needs --N");
        res = ip_witness_direct(f, m, n_big, search_options(common));
      }
      json doc;
      doc["command"] = "witness";
      doc["method"] = method;
      doc["m"] = m;
      if (method == "proof") {
        doc["n_prefix"] = n_prefix;
      } else {
        doc["N"] = n_big;
      }
      doc["status"] = to_string(res.status);
      if (res.witness) {
        doc["witness"] = to_json(*res.witness);
        json sums = json::array();
        for (const auto& s : fs_closure(std::span<const mpz_class>(res.witness->generators))) {
          sums.push_back(s.value.get_str());
        }
        doc["fs"] = std::move(sums);
        doc["verified"] = verify_witness(*res.witness);
      } else {
        doc["witness"] = nullptr;
      }
      attach_budget(doc, common, &res.stats);
      emit(doc, common, out);
      return res.status == SearchStatus::Found ? kExitDefinitive : kExitUndecided;
    }

    if (verify_witness_cmd->parsed()) {
      IPWitness w = witness_from_json(unwrap(read_json_file(witness_path), "witness"));
      json doc;
      doc["command"] = "verify-witness";
      doc["k"] = w.f.modulus();
      doc["provenance"] = to_string(w.provenance);
      doc["generators"] = w.generators.size();
      doc["valid"] = verify_witness(w);
      emit(doc, common, out);
      return kExitDefinitive;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace iplab
