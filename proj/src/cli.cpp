#include "primon/cli.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "primon/arith.hpp"
#include "primon/bcq.hpp"
#include "primon/criteria.hpp"
#include "primon/errors.hpp"
#include "primon/kms.hpp"
#include "primon/util.hpp"

namespace primon::cli {

namespace {

using njson = nlohmann::ordered_json;

std::string dstr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

const char* bool_str(bool v) { return v ? "true" : "false"; }

Format pick(const RunConfig& cfg, Format natural) {
  return cfg.output_format == Format::automatic ? natural : cfg.output_format;
}

njson provenance(const RunConfig& cfg, const primes::PrimeTable* t) {
  njson p;
  p["version"] = kVersion;
  p["precision_bits"] = cfg.precision_bits;
  p["quadrature_tolerance"] = cfg.quadrature_tolerance;
  if (t) {
    p["prime_table_crc32"] = primes::table_crc32(*t);
  } else {
    p["prime_table_crc32"] = nullptr;
  }
  return p;
}

void emit_json(std::ostream& os, const njson& j) { os << j.dump(2) << '\n'; }

njson row_json(const RunConfig& cfg, const kms::CriterionRow& row, const primes::PrimeTable& t) {
  njson r;
  r["n"] = row.q;
  r["p_n"] = t.primes[row.q - 1];
  r["log_N"] = t.theta_at(row.q).str(cfg.sig_digits);
  r["ratio"] = row.ratio_R.str(cfg.sig_digits);
  r["threshold"] = row.threshold.str(cfg.sig_digits);
  r["epsilon"] = row.epsilon.str(cfg.sig_digits);
  r["holds"] = row.holds;
  return r;
}

void row_csv(std::ostream& os, const RunConfig& cfg, const kms::CriterionRow& row,
             const primes::PrimeTable& t) {
  os << row.q << ',' << t.primes[row.q - 1] << ',' << t.theta_at(row.q).str(cfg.sig_digits) << ','
     << row.ratio_R.str(cfg.sig_digits) << ',' << row.threshold.str(cfg.sig_digits) << ','
     << row.epsilon.str(cfg.sig_digits) << ',' << bool_str(row.holds) << '\n';
}

const char* trend_str(criteria::Trend t) {
  switch (t) {
    case criteria::Trend::increasing: return "increasing";
    case criteria::Trend::decreasing: return "decreasing";
    default: return "mixed";
  }
}

njson report_json(const RunConfig& cfg, const criteria::AsymptoticsReport& rep,
                  const char* index_name, const char* value_name) {
  njson r;
  r["b"] = rep.b.str(cfg.sig_digits);
  njson samples = njson::array();
  for (const auto& [idx, v] : rep.samples) {
    njson s;
    s[index_name] = idx;
    s[value_name] = v.str(cfg.sig_digits);
    samples.push_back(std::move(s));
  }
  r["samples"] = std::move(samples);
  r["drift"] = rep.drift.str(cfg.sig_digits);
  r["trend"] = trend_str(rep.trend);
  r["final_rel_change"] = rep.final_rel_change.str(cfg.sig_digits);
  return r;
}

std::uint64_t require_u64(const std::optional<std::uint64_t>& v, const char* what) {
  if (!v) throw std::domain_error(std::string("missing required argument: ") + what);
  return *v;
}

const std::string& require_str(const std::optional<std::string>& v, const char* what) {
  if (!v) throw std::domain_error(std::string("missing required argument: ") + what);
  return *v;
}

}  // namespace

void apply(const RunConfig& cfg) {
  XReal::set_default_precision(cfg.precision_bits);
  const XReal tol(cfg.quadrature_tolerance);
  if (!(tol > XReal(0))) throw std::domain_error("quadrature tolerance must be > 0");
  util::set_thread_budget(cfg.thread_count);
}

specfun::Quadrature quadrature_of(const RunConfig& cfg) {
  specfun::Quadrature q;
  q.abs_tol = XReal(cfg.quadrature_tolerance);
  return q;
}

primes::PrimeTable acquire_table(const RunConfig& cfg, std::size_t min_count) {
  if (!cfg.prime_cache_path.empty() && std::filesystem::exists(cfg.prime_cache_path)) {
    primes::PrimeTable t = primes::load_table(cfg.prime_cache_path);
    if (t.count() >= min_count) return t;
    t = primes::sieve_first(min_count);
    primes::save_table(t, cfg.prime_cache_path);
    return t;
  }
  primes::PrimeTable t = primes::sieve_first(min_count);
  if (!cfg.prime_cache_path.empty()) primes::save_table(t, cfg.prime_cache_path);
  return t;
}

int cmd_primes(const RunConfig& cfg, std::size_t count, std::ostream& os) {
  if (count == 0) throw std::domain_error("primes: --count must be >= 1");
  // Full cache lifecycle: reuse a valid cache, extend it if too small, and
  // surface corruption as a format error instead of silently rebuilding.
  primes::PrimeTable t = acquire_table(cfg, count);

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "primes";
    j["provenance"] = provenance(cfg, &t);
    j["count"] = t.count();
    j["largest_prime"] = t.primes.back();
    j["log_primorial"] = t.theta_at(t.count()).str(cfg.sig_digits);
    j["cached_to"] = cfg.prime_cache_path.empty() ? njson(nullptr) : njson(cfg.prime_cache_path);
    emit_json(os, j);
  } else {
    os << "key,value\n";
    os << "count," << t.count() << '\n';
    os << "largest_prime," << t.primes.back() << '\n';
    os << "log_primorial," << t.theta_at(t.count()).str(cfg.sig_digits) << '\n';
    os << "crc32," << primes::table_crc32(t) << '\n';
    os << "cached_to," << csv_field(cfg.prime_cache_path) << '\n';
    os << "# ok\n";
  }
  return 0;
}

int cmd_arith(const RunConfig& cfg, const std::string& op, std::uint64_t n,
              std::optional<std::uint64_t> a, const std::optional<std::string>& b,
              std::ostream& os) {
  njson input;
  input["op"] = op;
  input["n"] = n;
  std::string value;
  if (op == "phi") {
    value = std::to_string(arith::euler_phi(n));
  } else if (op == "lambda") {
    value = std::to_string(arith::carmichael_lambda(n));
  } else if (op == "mobius") {
    value = std::to_string(arith::mobius(n));
  } else if (op == "order") {
    const std::uint64_t av = require_u64(a, "--a");
    input["a"] = av;
    value = std::to_string(arith::multiplicative_order(av, n));
  } else if (op == "psi") {
    const std::string& bs = require_str(b, "--b");
    input["b"] = bs;
    value = arith::dedekind_psi_b(n, XReal(bs)).str(cfg.sig_digits);
  } else {
    throw std::domain_error("arith: unknown op '" + op + "' (phi|lambda|mobius|order|psi)");
  }

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "arith";
    j["provenance"] = provenance(cfg, nullptr);
    j["input"] = std::move(input);
    j["value"] = value;
    emit_json(os, j);
  } else {
    os << "op,n,value\n" << op << ',' << n << ',' << csv_field(value) << '\n' << "# ok\n";
  }
  return 0;
}

int cmd_specfun(const RunConfig& cfg, const std::string& op, const std::optional<std::string>& b,
                const std::optional<std::string>& x, std::ostream& os) {
  const specfun::Quadrature quad = quadrature_of(cfg);
  njson input;
  input["op"] = op;
  std::string value, error_estimate;
  std::optional<std::size_t> panels;
  std::optional<std::uint32_t> crc;
  primes::PrimeTable table;  // only populated for cb

  if (op == "zeta") {
    const XReal bv{require_str(b, "--b")};
    input["b"] = *b;
    const XReal v = specfun::zeta_real(bv);
    value = v.str(cfg.sig_digits);
    // series truncation sits below the rounding floor by construction
    error_estimate = ulp_of(v).str(3);
  } else if (op == "li") {
    const XReal xv{require_str(x, "--x")};
    input["x"] = *x;
    const specfun::QuadResult r = specfun::li_offset_result(xv, quad);
    value = r.value.str(cfg.sig_digits);
    error_estimate = r.error_estimate.str(3);
    panels = r.panels;
  } else if (op == "bertrand") {
    const XReal bv{require_str(b, "--b")};
    const XReal xv{require_str(x, "--x")};
    input["b"] = *b;
    input["x"] = *x;
    const specfun::QuadResult r = specfun::bertrand_B_result(bv, xv, quad);
    value = r.value.str(cfg.sig_digits);
    error_estimate = r.error_estimate.str(3);
    panels = r.panels;
  } else if (op == "cb") {
    const XReal bv{require_str(b, "--b")};
    input["b"] = *b;
    table = acquire_table(cfg, 78'499);  // primes through 10^6
    crc = primes::table_crc32(table);
    const specfun::CbResult r = specfun::c_b_constant(bv, table);
    value = r.value.str(cfg.sig_digits);
    error_estimate = r.tail_radius.str(3);
  } else {
    throw std::domain_error("specfun: unknown op '" + op + "' (zeta|li|bertrand|cb)");
  }

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "specfun";
    j["provenance"] = provenance(cfg, crc ? &table : nullptr);
    j["input"] = std::move(input);
    j["value"] = value;
    j["error_estimate"] = error_estimate;
    if (panels) j["panels"] = *panels;
    emit_json(os, j);
  } else {
    os << "op,value,error_estimate\n"
       << op << ',' << value << ',' << error_estimate << '\n'
       << "# ok\n";
  }
  return 0;
}

int cmd_kms_epsilon(const RunConfig& cfg, const std::string& beta, std::size_t q,
                    std::ostream& os) {
  primes::PrimeTable t = acquire_table(cfg, std::max<std::size_t>(q, 2));
  const kms::CriterionRow row = kms::epsilon_beta(q, XReal(beta), t);

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "kms epsilon";
    j["provenance"] = provenance(cfg, &t);
    njson r = row_json(cfg, row, t);
    r["beta"] = row.beta.str(cfg.sig_digits);
    r["rh_equivalent_regime"] = row.rh_equivalent_regime;
    j["row"] = std::move(r);
    emit_json(os, j);
  } else {
    os << "n,p_n,log_N,ratio,threshold,epsilon,holds\n";
    row_csv(os, cfg, row, t);
    os << "# holds=" << bool_str(row.holds) << '\n';
  }
  return row.holds ? 0 : 1;
}

int cmd_table1(const RunConfig& cfg, std::ostream& os) {
  primes::PrimeTable t = acquire_table(cfg, 10'000);
  const std::vector<std::string> betas = {"2.1", "3", "10"};
  const std::vector<std::size_t> qs = {10, 100, 1000, 10'000};

  struct Cell {
    std::string beta;
    kms::CriterionRow row;
  };
  std::vector<Cell> cells;
  bool all_hold = true;
  for (const auto& bs : betas) {
    const XReal beta{bs};
    for (std::size_t q : qs) {
      cells.push_back({bs, kms::epsilon_beta(q, beta, t)});
      all_hold = all_hold && cells.back().row.holds;
    }
  }

  struct Magnitude {
    std::size_t q;
    std::string log10_N, mantissa;
    long exponent;
    std::string exact;  // nonempty only when the primorial is materialized
  };
  const XReal ln10 = log(XReal(10));
  std::vector<Magnitude> mags;
  for (std::size_t q : qs) {
    const XReal log10_N = t.theta_at(q) / ln10;
    const XReal e = floor(log10_N);
    const XReal mant = pow(XReal(10), log10_N - e);
    Magnitude m;
    m.q = q;
    m.log10_N = log10_N.str(cfg.sig_digits);
    m.mantissa = mant.str(6);
    m.exponent = e.to_long();
    if (q == 10) m.exact = primes::primorial_exact(q).get_str();
    mags.push_back(std::move(m));
  }

  const Format f = pick(cfg, Format::csv);
  if (f == Format::json) {
    njson j;
    j["command"] = "kms table1";
    j["provenance"] = provenance(cfg, &t);
    njson grid = njson::array();
    for (const auto& c : cells) {
      njson g;
      g["beta"] = c.beta;
      g["q"] = c.row.q;
      g["epsilon"] = c.row.epsilon.str(cfg.sig_digits);
      g["holds"] = c.row.holds;
      grid.push_back(std::move(g));
    }
    j["grid"] = std::move(grid);
    njson jm = njson::array();
    for (const auto& m : mags) {
      njson e;
      e["q"] = m.q;
      e["log10_N"] = m.log10_N;
      e["mantissa"] = m.mantissa;
      e["exponent"] = m.exponent;
      e["exact"] = m.exact.empty() ? njson(nullptr) : njson(m.exact);
      jm.push_back(std::move(e));
    }
    j["magnitudes"] = std::move(jm);
    j["all_hold"] = all_hold;
    emit_json(os, j);
  } else {
    os << "beta,q,epsilon,holds,log10_N,mantissa,exponent,exact_N\n";
    for (const auto& c : cells) {
      const Magnitude* m = nullptr;
      for (const auto& cand : mags) {
        if (cand.q == c.row.q) m = &cand;
      }
      os << c.beta << ',' << c.row.q << ',' << c.row.epsilon.str(cfg.sig_digits) << ','
         << bool_str(c.row.holds) << ',' << m->log10_N << ',' << m->mantissa << ',' << m->exponent
         << ',' << m->exact << '\n';
    }
    os << "# all_hold=" << bool_str(all_hold) << '\n';
  }
  return all_hold ? 0 : 1;
}

namespace {

int scan_rows_report(const RunConfig& cfg, const char* command, const criteria::ScanResult& res,
                     const primes::PrimeTable& t, std::ostream& os, Format f) {
  if (f == Format::json) {
    njson j;
    j["command"] = command;
    j["provenance"] = provenance(cfg, &t);
    njson rows = njson::array();
    for (const auto& row : res.rows) rows.push_back(row_json(cfg, row, t));
    j["rows"] = std::move(rows);
    njson summary;
    summary["rows"] = res.rows.size();
    summary["all_hold"] = res.all_hold;
    summary["first_failure"] =
        res.first_failure ? njson(res.rows[*res.first_failure].q) : njson(nullptr);
    j["summary"] = std::move(summary);
    emit_json(os, j);
  } else {
    os << "n,p_n,log_N,ratio,threshold,epsilon,holds\n";
    for (const auto& row : res.rows) row_csv(os, cfg, row, t);
    os << "# rows=" << res.rows.size() << " all_hold=" << bool_str(res.all_hold);
    if (res.first_failure) os << " first_failure=" << res.rows[*res.first_failure].q;
    os << '\n';
  }
  return res.all_hold ? 0 : 1;
}

int cmd_scan_asymp(const RunConfig& cfg, const XReal& b, std::size_t q_max, const XReal& eps,
                   std::ostream& os, Format f) {
  const specfun::Quadrature quad = quadrature_of(cfg);
  // Cover x = 10^6 for the drift samples and q_max primorial indices.
  primes::PrimeTable t = acquire_table(cfg, std::max<std::size_t>(q_max, 78'499));

  const std::vector<std::uint64_t> xs = {1'000, 10'000, 100'000, 1'000'000};
  const criteria::AsymptoticsReport drift = criteria::sum_vs_integral_report(b, xs, t, quad);

  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = q_max / 16; n <= q_max; n *= 2) ns.push_back(n);
  if (ns.empty() || ns.back() != q_max) ns.push_back(q_max);
  const criteria::AsymptoticsReport kb = criteria::k_b_estimate(b, ns, t, quad);
  const XReal k_hat = kb.samples.back().second;

  const std::size_t n_lo = std::max<std::size_t>(2, q_max / 5);
  const criteria::ScanResult lb = criteria::lower_bound_check(b, eps, n_lo, q_max, k_hat, t, quad);

  if (f == Format::json) {
    njson j;
    j["command"] = "scan asymp";
    j["provenance"] = provenance(cfg, &t);
    j["sum_vs_integral"] = report_json(cfg, drift, "x", "D");
    njson jk = report_json(cfg, kb, "n", "rho");
    jk["k_hat"] = k_hat.str(cfg.sig_digits);
    j["k_b"] = std::move(jk);
    njson jl;
    jl["description"] = criteria::lower_bound_description();
    jl["epsilon"] = eps.str(cfg.sig_digits);
    jl["k_hat"] = k_hat.str(cfg.sig_digits);
    jl["n_lo"] = n_lo;
    jl["n_hi"] = q_max;
    jl["rows"] = lb.rows.size();
    jl["all_hold"] = lb.all_hold;
    jl["first_failure"] = lb.first_failure ? njson(lb.rows[*lb.first_failure].q) : njson(nullptr);
    njson failures = njson::array();
    for (const auto& row : lb.rows) {
      if (!row.holds) failures.push_back(row_json(cfg, row, t));
    }
    jl["failures"] = std::move(failures);
    j["lower_bound"] = std::move(jl);
    emit_json(os, j);
  } else {
    os << "kind,index,value\n";
    for (const auto& [x, v] : drift.samples) os << "D," << x << ',' << v.str(cfg.sig_digits) << '\n';
    for (const auto& [n, v] : kb.samples) os << "rho," << n << ',' << v.str(cfg.sig_digits) << '\n';
    for (const auto& row : lb.rows) {
      if (!row.holds) os << "lb_fail," << row.q << ',' << row.epsilon.str(cfg.sig_digits) << '\n';
    }
    os << "# drift=" << drift.drift.str(cfg.sig_digits) << " trend=" << trend_str(drift.trend)
       << " k_hat=" << k_hat.str(cfg.sig_digits)
       << " stabilization=" << kb.final_rel_change.str(cfg.sig_digits)
       << " lb_rows=" << lb.rows.size() << " lb_all_hold=" << bool_str(lb.all_hold) << '\n';
  }
  return lb.all_hold ? 0 : 1;
}

}  // namespace

int cmd_scan(const RunConfig& cfg, const std::string& mode, const std::optional<std::string>& b,
             std::size_t q_max, const std::optional<std::string>& eps, std::ostream& os) {
  const Format f = pick(cfg, Format::csv);
  if (mode == "nicolas") {
    primes::PrimeTable t = acquire_table(cfg, std::max<std::size_t>(q_max, 2));
    return scan_rows_report(cfg, "scan nicolas", criteria::nicolas_scan(q_max, t), t, os, f);
  }
  if (mode == "conjecture") {
    const XReal bv{require_str(b, "--b")};
    primes::PrimeTable t = acquire_table(cfg, std::max<std::size_t>(q_max, 3));
    return scan_rows_report(cfg, "scan conjecture", criteria::conjecture_scan(bv, q_max, t), t, os,
                            f);
  }
  if (mode == "asymp") {
    const XReal bv{require_str(b, "--b")};
    const XReal ev{eps ? *eps : std::string("0.05")};
    return cmd_scan_asymp(cfg, bv, q_max, ev, os, f);
  }
  throw std::domain_error("scan: unknown mode '" + mode + "' (nicolas|conjecture|asymp)");
}

int cmd_quantum(const RunConfig& cfg, std::optional<std::uint64_t> q,
                std::optional<std::uint64_t> a, std::uint64_t max_q, std::ostream& os) {
  std::vector<bcq::QuantumReport> reports;
  const auto run_all_a = [&reports](std::uint64_t qq) {
    for (std::uint64_t aa = 1; aa < qq; ++aa) {
      if (std::gcd(aa, qq) == 1) reports.push_back(bcq::verify_pair(aa, qq));
    }
  };
  if (q) {
    if (a) {
      reports.push_back(bcq::verify_pair(*a, *q));
    } else {
      run_all_a(*q);
    }
  } else {
    if (max_q < 2) throw std::domain_error("quantum verify: --max-q must be >= 2");
    for (std::uint64_t qq = 2; qq <= max_q; ++qq) run_all_a(qq);
  }

  double worst = 0;
  bool all_ok = true;
  for (const auto& r : reports) {
    worst = std::max(worst, r.max_residual);
    all_ok = all_ok && r.unitary && r.multiplicative && r.max_residual < 1e-12;
  }

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "quantum verify";
    j["provenance"] = provenance(cfg, nullptr);
    njson jr = njson::array();
    for (const auto& r : reports) {
      njson e;
      e["q"] = r.q;
      e["a"] = r.a;
      e["r"] = r.r;
      e["max_residual"] = r.max_residual;
      e["unitary"] = r.unitary;
      e["multiplicative"] = r.multiplicative;
      jr.push_back(std::move(e));
    }
    j["reports"] = std::move(jr);
    njson summary;
    summary["pairs"] = reports.size();
    summary["max_residual"] = worst;
    summary["all_ok"] = all_ok;
    j["summary"] = std::move(summary);
    emit_json(os, j);
  } else {
    os << "q,a,r,max_residual,unitary,multiplicative\n";
    for (const auto& r : reports) {
      os << r.q << ',' << r.a << ',' << r.r << ',' << dstr(r.max_residual) << ','
         << bool_str(r.unitary) << ',' << bool_str(r.multiplicative) << '\n';
    }
    os << "# pairs=" << reports.size() << " max_residual=" << dstr(worst)
       << " all_ok=" << bool_str(all_ok) << '\n';
  }
  return all_ok ? 0 : 1;
}

int cmd_constants(const RunConfig& cfg, const std::optional<std::string>& b, std::ostream& os) {
  const XReal gamma = specfun::euler_gamma();
  const XReal eg = exp(gamma);
  std::optional<XReal> zeta_b, threshold;
  if (b) {
    const XReal bv{*b};
    zeta_b = specfun::zeta_real(bv);
    threshold = kms::criterion_threshold(bv);
  }

  const Format f = pick(cfg, Format::json);
  if (f == Format::json) {
    njson j;
    j["command"] = "constants";
    j["provenance"] = provenance(cfg, nullptr);
    j["gamma"] = gamma.str(cfg.sig_digits);
    j["exp_gamma"] = eg.str(cfg.sig_digits);
    if (b) {
      j["b"] = *b;
      j["zeta_b"] = zeta_b->str(cfg.sig_digits);
      j["exp_gamma_over_zeta_b"] = threshold->str(cfg.sig_digits);
    }
    emit_json(os, j);
  } else {
    os << "name,value\n";
    os << "gamma," << gamma.str(cfg.sig_digits) << '\n';
    os << "exp_gamma," << eg.str(cfg.sig_digits) << '\n';
    if (b) {
      os << "zeta_b," << zeta_b->str(cfg.sig_digits) << '\n';
      os << "exp_gamma_over_zeta_b," << threshold->str(cfg.sig_digits) << '\n';
    }
    os << "# ok\n";
  }
  return 0;
}

}  // namespace primon::cli
