// primon: command-line front end.  All logic lives in the library; this file
// parses flags, resolves the cache path, and maps exceptions to exit codes.

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "primon/cli.hpp"
#include "primon/errors.hpp"

namespace {

primon::cli::Format parse_format(const std::string& s) {
  if (s == "csv") return primon::cli::Format::csv;
  if (s == "json") return primon::cli::Format::json;
  return primon::cli::Format::automatic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime-product criterion toolkit"};
  app.set_version_flag("--version", primon::cli::kVersion);
  app.require_subcommand(1);

  primon::cli::RunConfig cfg;
  std::string format_str;
  app.add_option("--prec", cfg.precision_bits, "mantissa precision in bits (>= 53)")
      ->capture_default_str();
  app.add_option("--tol", cfg.quadrature_tolerance, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--cache", cfg.prime_cache_path, "prime table cache file")
      ->envname("PRIMON_CACHE");
  app.add_option("--format", format_str, "report format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.thread_count, "worker threads (0 = hardware)")
      ->capture_default_str();

  // primes
  auto* sc_primes = app.add_subcommand("primes", "build a prime table (and cache it)");
  sc_primes->fallthrough();
  std::size_t primes_count = 10'000;
  sc_primes->add_option("--count", primes_count, "number of primes")->capture_default_str();

  // arith
  auto* sc_arith = app.add_subcommand("arith", "exact multiplicative functions");
  sc_arith->fallthrough();
  std::string arith_op;
  std::uint64_t arith_n = 0;
  std::optional<std::uint64_t> arith_a;
  std::optional<std::string> arith_b;
  sc_arith->add_option("op", arith_op, "phi|lambda|mobius|order|psi")->required();
  sc_arith->add_option("--n", arith_n, "argument n")->required();
  sc_arith->add_option("--a", arith_a, "base for order");
  sc_arith->add_option("--b", arith_b, "exponent for psi");

  // specfun
  auto* sc_specfun = app.add_subcommand("specfun", "special functions and integrals");
  sc_specfun->fallthrough();
  std::string specfun_op;
  std::optional<std::string> specfun_b, specfun_x;
  sc_specfun->add_option("op", specfun_op, "zeta|li|bertrand|cb")->required();
  sc_specfun->add_option("--b", specfun_b, "exponent b");
  sc_specfun->add_option("--x", specfun_x, "upper limit x");

  // kms
  auto* sc_kms = app.add_subcommand("kms", "KMS state evaluations");
  sc_kms->fallthrough();
  sc_kms->require_subcommand(1);
  auto* sc_eps = sc_kms->add_subcommand("epsilon", "criterion margin at one (beta, q)");
  sc_eps->fallthrough();
  std::string kms_beta;
  std::size_t kms_q = 0;
  sc_eps->add_option("--beta", kms_beta, "inverse temperature")->required();
  sc_eps->add_option("--q", kms_q, "primorial index")->required();
  auto* sc_table1 = sc_kms->add_subcommand("table1", "criterion grid with primorial magnitudes");
  sc_table1->fallthrough();

  // scan
  auto* sc_scan = app.add_subcommand("scan", "criterion scans over primorial indices");
  sc_scan->fallthrough();
  std::string scan_mode;
  std::optional<std::string> scan_b, scan_eps;
  std::size_t scan_qmax = 10'000;
  sc_scan->add_option("mode", scan_mode, "nicolas|conjecture|asymp")->required();
  sc_scan->add_option("--b", scan_b, "exponent b");
  sc_scan->add_option("--qmax", scan_qmax, "largest primorial index")->capture_default_str();
  sc_scan->add_option("--eps", scan_eps, "lower-bound slack (asymp only)");

  // quantum
  auto* sc_quantum = app.add_subcommand("quantum", "modular-multiplication operator checks");
  sc_quantum->fallthrough();
  sc_quantum->require_subcommand(1);
  auto* sc_verify = sc_quantum->add_subcommand("verify", "unitarity / spectrum / multiplicativity");
  sc_verify->fallthrough();
  std::optional<std::uint64_t> quantum_q, quantum_a;
  std::uint64_t quantum_max_q = 50;
  sc_verify->add_option("--q", quantum_q, "single modulus");
  sc_verify->add_option("--a", quantum_a, "single multiplier (with --q)");
  sc_verify->add_option("--max-q", quantum_max_q, "sweep all moduli up to this")
      ->capture_default_str();

  // constants
  auto* sc_constants = app.add_subcommand("constants", "gamma, e^gamma, zeta(b)");
  sc_constants->fallthrough();
  std::optional<std::string> constants_b;
  sc_constants->add_option("--b", constants_b, "exponent b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.output_format = parse_format(format_str);

  try {
    primon::cli::apply(cfg);
    if (*sc_primes) return primon::cli::cmd_primes(cfg, primes_count, std::cout);
    if (*sc_arith) {
      return primon::cli::cmd_arith(cfg, arith_op, arith_n, arith_a, arith_b, std::cout);
    }
    if (*sc_specfun) {
      return primon::cli::cmd_specfun(cfg, specfun_op, specfun_b, specfun_x, std::cout);
    }
    if (*sc_kms) {
      if (*sc_eps) return primon::cli::cmd_kms_epsilon(cfg, kms_beta, kms_q, std::cout);
      return primon::cli::cmd_table1(cfg, std::cout);
    }
    if (*sc_scan) {
      return primon::cli::cmd_scan(cfg, scan_mode, scan_b, scan_qmax, scan_eps, std::cout);
    }
    if (*sc_quantum) {
      return primon::cli::cmd_quantum(cfg, quantum_q, quantum_a, quantum_max_q, std::cout);
    }
    if (*sc_constants) return primon::cli::cmd_constants(cfg, constants_b, std::cout);
    std::cerr << "error: no command selected\n";
    return 2;
  } catch (const primon::ResourceError& e) {
    std::cerr << "error (resource): " << e.what() << '\n';
    return 2;
  } catch (const primon::FormatError& e) {
    std::cerr << "error (format): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
