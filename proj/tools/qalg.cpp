// qalg: validate theory files, query derived distances, run the
// verification suites.

#include "qalg/fixtures.hpp"
#include "qalg/freealg.hpp"
#include "qalg/saturation.hpp"
#include "qalg/suites.hpp"
#include "qalg/theory_file.hpp"

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace qalg;

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

void usage(std::ostream& os) {
  os << "usage:\n"
     << "  qalg validate <file>\n"
     << "  qalg dist <file> <term1> <term2> [--depth k] [--max-rounds n]\n"
     << "  qalg oracle <file> lk|kantorovich <dist1> <dist2>\n"
     << "  qalg verify --suite paper|props|monad [--seed n] [--format text|tsv]\n"
     << "  qalg dump <file> [--depth k] [--format text|tsv]\n"
     << "\n"
     << "Distances and epsilons are exact rationals 'p/q'. Distribution\n"
     << "literals look like '{a:1/2, b:1/2}'. Exit status: 0 ok, 1 check\n"
     << "failure, 2 usage or parse error.\n";
}

struct Flags {
  int depth = 1;
  std::size_t max_rounds = 64;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string suite;
  std::vector<std::string> positional;
};

Flags parse_flags(int argc, char** argv) {
  Flags f;
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) throw Error("flag " + arg + " needs a value");
      return argv[++i];
    };
    if (arg == "--depth")
      f.depth = std::stoi(value());
    else if (arg == "--max-rounds")
      f.max_rounds = static_cast<std::size_t>(std::stoul(value()));
    else if (arg == "--seed")
      f.seed = std::stoull(value());
    else if (arg == "--format")
      f.format = value();
    else if (arg == "--suite")
      f.suite = value();
    else if (arg.rfind("--", 0) == 0)
      throw Error("unknown flag " + arg);
    else
      f.positional.push_back(arg);
  }
  if (f.format != "text" && f.format != "tsv")
    throw Error("--format must be text or tsv");
  return f;
}

int cmd_validate(const Flags& f) {
  if (f.positional.size() != 1) throw Error("validate needs one file");
  LoadedTheory lt = load_theory_file(f.positional[0]);
  check_theory(lt.extended());
  std::cout << "kind: " << lt.theory.kind.str() << "\n"
            << "operations: " << lt.theory.sig.ops().size() << "\n"
            << "axioms: " << lt.theory.axioms.size() << "\n";
  if (!lt.theory.param_closure_complete)
    std::cout << "note: parameter closure incomplete at "
              << lt.param_closure_rounds << " round(s)\n";
  if (lt.space) {
    ValidationReport report = validate_space(*lt.space);
    std::cout << "space: " << lt.space->size() << " points, ";
    if (!report.ok()) {
      std::cout << "invalid\n" << report.str();
      return kCheckFailure;
    }
    std::cout << "valid\n";
  } else {
    std::cout << "space: none\n";
  }
  return kOk;
}

int cmd_dist(const Flags& f) {
  if (f.positional.size() != 3)
    throw Error("dist needs a file and two terms");
  LoadedTheory lt = load_theory_file(f.positional[0]);
  Theory th = lt.extended();
  Term s = parse_term(f.positional[1], th.sig, th.carrier_set());
  Term t = parse_term(f.positional[2], th.sig, th.carrier_set());
  SaturationConfig cfg;
  cfg.depth = f.depth;
  cfg.max_rounds = f.max_rounds;
  SaturationResult r = saturate(th, cfg);
  for (const auto& w : r.warnings()) std::cerr << "warning: " << w << "\n";
  try {
    UnitValue d = derived_distance(r, s, t);
    std::cout << d.str() << "\n"
              << "fixpoint: " << (r.fixpoint_reached() ? "yes" : "no") << "\n";
  } catch (const Error&) {
    std::cerr << "term outside the depth-" << f.depth
              << " universe; try --depth " << f.depth + 1 << "\n";
    return kUsage;
  }
  return kOk;
}

int cmd_oracle(const Flags& f) {
  if (f.positional.size() != 4)
    throw Error("oracle needs a file, a metric (lk|kantorovich) and two "
                "distribution literals");
  LoadedTheory lt = load_theory_file(f.positional[0]);
  if (!lt.space) throw Error("theory file has no space block");
  Dist mu = parse_dist_literal(f.positional[2]);
  Dist nu = parse_dist_literal(f.positional[3]);
  const std::string& metric = f.positional[1];
  UnitValue d = metric == "lk" ? lk_distance(*lt.space, mu, nu)
              : metric == "kantorovich"
                  ? kantorovich_distance(*lt.space, mu, nu)
                  : throw Error("metric must be lk or kantorovich");
  std::cout << d.str() << "\n";
  return kOk;
}

int cmd_verify(const Flags& f) {
  if (f.suite.empty()) throw Error("verify needs --suite paper|props|monad");
  std::vector<CheckResult> results = run_suite(f.suite, f.seed);
  bool all_pass = true;
  for (const auto& r : results) {
    if (f.format == "tsv")
      std::cout << (r.pass ? "PASS" : "FAIL") << "\t" << r.id << "\t"
                << r.detail << "\n";
    else
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id
                << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
    all_pass &= r.pass;
  }
  return all_pass ? kOk : kCheckFailure;
}

int cmd_dump(const Flags& f) {
  if (f.positional.size() != 1) throw Error("dump needs one file");
  LoadedTheory lt = load_theory_file(f.positional[0]);
  SaturationConfig cfg;
  cfg.depth = f.depth;
  cfg.max_rounds = f.max_rounds;
  SaturationResult r = saturate(lt.extended(), cfg);
  std::cout << r.dump(f.format == "tsv");
  std::cout << "fixpoint: " << (r.fixpoint_reached() ? "yes" : "no") << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return kUsage;
  }
  std::string command = argv[1];
  try {
    Flags flags = parse_flags(argc, argv);
    if (command == "validate") return cmd_validate(flags);
    if (command == "dist") return cmd_dist(flags);
    if (command == "oracle") return cmd_oracle(flags);
    if (command == "verify") return cmd_verify(flags);
    if (command == "dump") return cmd_dump(flags);
    if (command == "help" || command == "--help") {
      usage(std::cout);
      return kOk;
    }
    std::cerr << "unknown command '" << command << "'\n";
    usage(std::cerr);
    return kUsage;
  } catch (const qalg::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const qalg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
