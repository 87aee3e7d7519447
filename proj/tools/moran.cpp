#include <cinttypes>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moran/charpoly.hpp"
#include "moran/generator.hpp"
#include "moran/io.hpp"
#include "moran/manifest.hpp"
#include "moran/measures.hpp"
#include "moran/mixing.hpp"
#include "moran/orthopoly.hpp"
#include "moran/simulate.hpp"
#include "moran/spectra.hpp"
#include "moran/version.hpp"

using namespace moran;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitUnsupported = 4;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(to_double(parse_rational(item)));
  }
  if (out.empty()) throw argument_error("empty list: '" + text + "'");
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_list(text)) out.push_back(static_cast<std::int64_t>(v));
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  // "a:b:step" inclusive grid, or a plain comma list
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::stringstream ss(text);
  std::string sa, sb, sstep;
  if (!std::getline(ss, sa, ':') || !std::getline(ss, sb, ':') || !std::getline(ss, sstep))
    throw argument_error("bad grid '" + text + "', expected a:b:step");
  double a = to_double(parse_rational(sa));
  double b = to_double(parse_rational(sb));
  double step = to_double(parse_rational(sstep));
  if (!(step > 0) || b < a) throw argument_error("bad grid '" + text + "'");
  std::vector<double> out;
  for (double t = a; t <= b + 1e-12 * std::max(1.0, std::fabs(b)); t += step) out.push_back(t);
  return out;
}

Composition parse_start(const std::string& text, int K, int N) {
  if (text.rfind("Nek:", 0) == 0) {
    int k = std::stoi(text.substr(4));
    if (k < 1 || k > K) throw argument_error("start type index out of range in '" + text + "'");
    Composition eta(K, 0);
    eta[k - 1] = N;
    return eta;
  }
  Composition eta;
  for (double v : parse_list(text)) eta.push_back(static_cast<int>(v));
  return eta;
}

struct ModelInput {
  std::optional<MutationMatrix<double>> Q;
  std::optional<MutationMatrix<Rational>> Qr;  // exact copy when available
  std::optional<std::vector<double>> mu;       // set when parent-independent
  std::map<std::string, std::string> input_digests;
};

ModelInput load_model(const std::string& mutation_file, const std::string& mu_list) {
  ModelInput m;
  if (!mutation_file.empty() && !mu_list.empty())
    throw argument_error("--mutation and --mu are mutually exclusive");
  if (!mutation_file.empty()) {
    auto j = read_json_file(mutation_file);
    m.Q = mutation_from_json<double>(j);
    m.Qr = mutation_from_json<Rational>(j);
    m.input_digests[mutation_file] = sha256_file(mutation_file);
    m.mu = m.Q->parent_independent_rates();
  } else if (!mu_list.empty()) {
    std::vector<Rational> mur;
    std::stringstream ss(mu_list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) mur.push_back(parse_rational(item));
    m.Qr = build_parent_independent(mur);
    std::vector<double> mud;
    for (const auto& r : mur) mud.push_back(to_double(r));
    m.Q = build_parent_independent(mud);
    m.mu = mud;
  } else {
    throw argument_error("one of --mutation or --mu is required");
  }
  return m;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_spectrum(const std::string& mutation_file, const std::string& mu_list,
                 const std::string& model, int K, int N, const std::string& p_text,
                 const std::string& verify, std::int64_t cap, const std::string& out) {
  const double p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));
  SpectrumCatalog predicted;
  ModelInput m;
  if (model == "reproduction") {
    if (K < 2) throw argument_error("--K is required for the reproduction model");
    predicted = predicted_spectrum_reproduction(K, N);
  } else {
    m = load_model(mutation_file, mu_list);
    K = m.Q->K();
    auto eigs = nonzero_mutation_eigenvalues(*m.Q);
    if (model == "mutation")
      predicted = predicted_spectrum_mutation(eigs, K, N);
    else if (model == "moran" || model == "parent-independent")
      predicted = predicted_spectrum_moran(eigs, K, N, p);
    else
      throw argument_error("unknown --model '" + model + "'");
  }

  std::string report;
  if (verify == "brute") {
    SpectrumCatalog brute;
    if (model == "reproduction") {
      if (cardinality(K, N) > BigInt(static_cast<long>(cap)))
        throw capacity_error("state space exceeds --cap");
      brute = brute_spectrum(build_reproduction_generator<double>(K, N), cap);
    } else {
      auto g = model == "mutation" ? build_mutation_generator(*m.Q, N)
                                   : build_moran_generator(*m.Q, N, p);
      brute = brute_spectrum(g, cap);
    }
    double d = spectra_distance(predicted, brute);
    report = "bottleneck_distance=" + format_value(d);
    std::printf("verify brute: bottleneck distance %.3e\n", d);
  } else if (verify == "exact") {
    if (model == "reproduction") throw unsupported_error("--verify exact needs a mutation model");
    if (!m.Qr) throw unsupported_error("--verify exact needs exact-rational input");
    auto spec = exact_rational_spectrum(m.Qr->dense());
    if (!spec) throw unsupported_error("mutation matrix has no detectable rational spectrum");
    Rational pr = p_text.empty() ? rat(0) : parse_rational(p_text);
    auto g = build_moran_generator(*m.Qr, N, pr);
    std::vector<Rational> roots{rat(0)};
    std::vector<Rational> nonzero;
    {  // drop one exact zero root
      bool dropped = false;
      for (const auto& r : *spec) {
        if (!dropped && is_zero(r)) {
          dropped = true;
          continue;
        }
        nonzero.push_back(r);
      }
    }
    for (int L = 1; L <= N; ++L) {
      StateSpace idx(K - 1, L);
      for (const auto& eta : idx.states()) {
        Rational lam = -pr / rat(N) * rat(L) * rat(L - 1);
        for (int kk = 0; kk < K - 1; ++kk) lam += rat(eta[kk]) * nonzero[kk];
        roots.push_back(lam);
      }
    }
    bool ok = verify_spectrum_exact(g.dense(), roots);
    report = ok ? "exact_verified=1;bottleneck_distance=0" : "exact_verified=0";
    std::printf("verify exact: %s\n",
                ok ? "characteristic polynomial matches, distance 0" : "MISMATCH");
    if (!ok) return kExitCheckFailed;
  } else if (!verify.empty()) {
    throw argument_error("unknown --verify mode '" + verify + "'");
  }

  write_atomic(out, catalog_to_json(predicted));
  RunManifest manifest;
  manifest.command = "spectrum";
  manifest.parameters = {{"model", model},
                         {"K", std::to_string(K)},
                         {"N", std::to_string(N)},
                         {"p", p_text.empty() ? "0" : p_text},
                         {"mu", mu_list},
                         {"verify", verify.empty() ? "none" : verify}};
  if (!report.empty()) manifest.parameters["verify_report"] = report;
  manifest.input_digests = m.input_digests;
  manifest.outputs = {out};
  manifest.version = kVersion;
  manifest.write_beside(out);
  return kExitOk;
}

int run_mix(const std::string& mutation_file, const std::string& mu_list, int N,
            const std::string& p_text, const std::string& start_text, const std::string& times,
            const std::string& metric, const std::string& method, const std::string& out) {
  const double p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));
  auto m = load_model(mutation_file, mu_list);
  const int K = m.Q->K();
  auto grid = parse_grid(times);
  Composition start = parse_start(start_text, K, N);

  const bool pi_model = m.mu.has_value();
  if ((method == "spectral" || method == "closed-form") && !pi_model)
    throw unsupported_error("method '" + method + "' needs the parent-independent model");
  int start_vertex = -1;
  const bool vertex_start = is_nek(start, N, &start_vertex);
  if (method == "closed-form") {
    if (!vertex_start)
      throw unsupported_error("closed-form curves start from a vertex state Nek:k");
    if (metric == "tv" && p != 0.0)
      throw unsupported_error("the closed-form tv curve needs p = 0");
  }
  {
    long total = 0;
    for (int v : start) total += v;
    if (static_cast<int>(start.size()) != K || total != N)
      throw argument_error("start state not in E_{K,N}");
  }

  std::ostringstream csv;
  csv << "t,value,metric,provenance\n";
  if (method == "closed-form") {
    // no state enumeration needed; evaluates at any population size
    for (double t : grid) {
      double value = metric == "chi2" ? chi2_closed_form(t, start_vertex, N, *m.mu, p)
                                      : tv_from_nek_p0(N, *m.mu, start_vertex, t);
      csv << format_value(t) << "," << format_value(value) << "," << metric << "," << method
          << "\n";
    }
  } else {
    std::optional<GeneratorMatrix<double>> g;
    std::optional<SpectralKernel> kernel;
    std::shared_ptr<const StateSpace> space;
    SimplexMeasure<double> nu;
    if (method == "spectral") {
      space = make_space(K, N);
      kernel.emplace(space, *m.mu, p);
      nu = kernel->stationary();
    } else {
      g = build_moran_generator(*m.Q, N, p);
      space = g->space;
      nu = pi_model ? stationary_nu<double>(space, *m.mu, p) : stationary_of_generator(*g);
    }
    const std::int64_t start_rank = space->rank(start);
    for (double t : grid) {
      SimplexMeasure<double> row =
          kernel ? kernel->row(start_rank, t) : transition_row(*g, t, start_rank);
      double value = metric == "chi2" ? chi2(row, nu) : tv(row, nu);
      csv << format_value(t) << "," << format_value(value) << "," << metric << "," << method
          << "\n";
    }
  }
  write_atomic(out, csv.str());

  RunManifest manifest;
  manifest.command = "mix";
  manifest.parameters = {{"N", std::to_string(N)}, {"p", p_text.empty() ? "0" : p_text},
                         {"start", start_text},    {"times", times},
                         {"metric", metric},       {"method", method},
                         {"mu", mu_list}};
  manifest.input_digests = m.input_digests;
  manifest.outputs = {out};
  manifest.version = kVersion;
  manifest.write_beside(out);
  return kExitOk;
}

int run_cutoff(const std::string& mu_list, const std::string& p_text, int k,
               const std::string& c_range, const std::string& n_list, const std::string& metric,
               const std::string& out) {
  const double p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));
  auto mu = parse_list(mu_list);
  if (k < 1 || k > static_cast<int>(mu.size())) throw argument_error("--k out of range");
  if (metric == "tv" && p != 0.0)
    throw unsupported_error("the tv cutoff profile needs p = 0");
  auto cs = parse_grid(c_range);
  auto ns = parse_int_list(n_list);

  std::ostringstream csv;
  csv << "c,N,observed,limit_profile\n";
  for (double c : cs) {
    double limit = metric == "chi2" ? cutoff_profile_chi2(c, k - 1, mu, p)
                                    : cutoff_profile_tv_p0(c, k - 1, mu);
    for (std::int64_t N : ns) {
      double t = t_cutoff(N, c, mu);
      double observed = metric == "chi2"
                            ? chi2_closed_form(t, k - 1, static_cast<int>(N), mu, p)
                            : tv_from_nek_p0(N, mu, k - 1, t);
      csv << format_value(c) << "," << N << "," << format_value(observed) << ","
          << format_value(limit) << "\n";
    }
  }
  write_atomic(out, csv.str());

  RunManifest manifest;
  manifest.command = "cutoff";
  manifest.parameters = {{"mu", mu_list},     {"p", p_text.empty() ? "0" : p_text},
                         {"k", std::to_string(k)}, {"c_range", c_range},
                         {"N_list", n_list},  {"metric", metric}};
  manifest.outputs = {out};
  manifest.version = kVersion;
  manifest.write_beside(out);
  return kExitOk;
}

int run_simulate(const std::string& mutation_file, const std::string& mu_list, int N,
                 const std::string& p_text, const std::string& start_text, double horizon,
                 std::int64_t replicas, std::uint64_t seed, const std::string& out) {
  auto m = load_model(mutation_file, mu_list);
  SimConfig cfg;
  cfg.K = m.Q->K();
  cfg.N = N;
  cfg.p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));
  cfg.rates = m.Q->dense();
  cfg.start = parse_start(start_text, cfg.K, N);
  cfg.horizon = horizon;
  cfg.replicas = replicas;
  cfg.seed = seed;
  auto hist = simulate_histogram(cfg);

  std::ostringstream csv;
  for (int k = 1; k <= cfg.K; ++k) csv << "eta" << k << ",";
  csv << "count\n";
  for (const auto& [state, count] : hist) {
    for (int v : state) csv << v << ",";
    csv << count << "\n";
  }
  write_atomic(out, csv.str());

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.parameters = {{"N", std::to_string(N)},
                         {"p", p_text.empty() ? "0" : p_text},
                         {"start", start_text},
                         {"horizon", format_value(horizon)},
                         {"replicas", std::to_string(replicas)},
                         {"mu", mu_list}};
  manifest.input_digests = m.input_digests;
  manifest.outputs = {out};
  manifest.seed = seed;
  manifest.version = kVersion;
  manifest.write_beside(out);
  return kExitOk;
}

int run_stationary(const std::string& mutation_file, const std::string& mu_list, int N,
                   const std::string& p_text, const std::string& out) {
  const double p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));
  auto m = load_model(mutation_file, mu_list);
  auto g = build_moran_generator(*m.Q, N, p);
  SimplexMeasure<double> pi = m.mu ? stationary_nu<double>(g.space, *m.mu, p)
                                   : stationary_of_generator(g);

  std::ostringstream csv;
  for (int k = 1; k <= m.Q->K(); ++k) csv << "eta" << k << ",";
  csv << "probability\n";
  for (std::int64_t r = 0; r < g.space->size(); ++r) {
    for (int v : g.space->state(r)) csv << v << ",";
    csv << format_value(pi.probs[r]) << "\n";
  }
  write_atomic(out, csv.str());

  RunManifest manifest;
  manifest.command = "stationary";
  manifest.parameters = {{"N", std::to_string(N)},
                         {"p", p_text.empty() ? "0" : p_text},
                         {"mu", mu_list}};
  manifest.input_digests = m.input_digests;
  manifest.outputs = {out};
  manifest.version = kVersion;
  manifest.write_beside(out);
  return kExitOk;
}

int run_check(const std::string& what, const std::string& mutation_file,
              const std::string& mu_list, int N, const std::string& p_text) {
  auto m = load_model(mutation_file, mu_list);
  const double p = p_text.empty() ? 0.0 : to_double(parse_rational(p_text));

  if (what == "reversibility") {
    if (!m.Qr) throw unsupported_error("reversibility check needs exact-rational input");
    Rational pr = p_text.empty() ? rat(0) : parse_rational(p_text);
    auto g = build_moran_generator(*m.Qr, N, pr);
    auto res = kolmogorov_cycle_check(g);
    if (res.reversible) {
      std::printf("PASS: all rate-product cycle checks up to length 4 hold\n");
      if (m.mu) {
        std::vector<Rational> mur;
        for (double v : *m.mu) mur.push_back(rational_from_double(v));
        if (m.Qr->parent_independent_rates()) mur = *m.Qr->parent_independent_rates();
        auto nu = stationary_nu<Rational>(g.space, mur, pr);
        bool balanced = check_detailed_balance(g, nu);
        std::printf("%s: detailed balance against the closed-form stationary law\n",
                    balanced ? "PASS" : "FAIL");
        return balanced ? kExitOk : kExitCheckFailed;
      }
      return kExitOk;
    }
    std::printf("FAIL: violating cycle found (state ranks:");
    for (auto r : res.witness) std::printf(" %" PRId64, r);
    std::printf("); states:");
    for (auto r : res.witness) {
      std::printf(" (");
      const auto& eta = g.space->state(r);
      for (std::size_t i = 0; i < eta.size(); ++i) std::printf(i ? ",%d" : "%d", eta[i]);
      std::printf(")");
    }
    std::printf("\n");
    return kExitCheckFailed;
  }

  if (what == "stationarity") {
    auto g = build_moran_generator(*m.Q, N, p);
    auto pi = stationary_of_generator(g);
    double resid = stationarity_residual(g, pi);
    std::printf("solver residual ||pi G||_inf = %.3e\n", resid);
    if (m.mu) {
      auto nu = stationary_nu<double>(g.space, *m.mu, p);
      double gap = tv(pi, nu);
      std::printf("tv(solver, closed form) = %.3e\n", gap);
      bool ok = resid <= 1e-11 && gap <= 1e-11;
      std::printf("%s\n", ok ? "PASS" : "FAIL");
      return ok ? kExitOk : kExitCheckFailed;
    }
    bool ok = resid <= 1e-11;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitOk : kExitCheckFailed;
  }

  if (what == "slem") {
    bool ok = verify_slem_equality(*m.Q, N, p);
    double gq = spectral_gap(brute_spectrum_dense(m.Q->dense()));
    double gg = spectral_gap(brute_spectrum(build_moran_generator(*m.Q, N, p)));
    std::printf("gap(Q) = %.12g, gap(full generator) = %.12g\n", gq, gg);
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitOk : kExitCheckFailed;
  }

  throw argument_error("unknown --what '" + what + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neutral multi-type Moran model: spectra, mixing curves, cutoff profiles"};
  app.require_subcommand(1);

  std::string mutation_file, mu_list, model = "moran", p_text, verify, start_text = "Nek:1";
  std::string times = "0:1:0.1", metric = "tv", method = "uniformization", out, what;
  std::string c_range = "-2:2:1", n_list = "1000";
  int K = 0, N = 0, k = 1;
  std::int64_t cap = 5000, replicas = 10000;
  std::uint64_t seed = 0;
  double horizon = 1.0;

  auto* spectrum = app.add_subcommand("spectrum", "predicted eigenvalue catalog (JSON)");
  spectrum->add_option("--mutation", mutation_file, "mutation matrix JSON file");
  spectrum->add_option("--mu", mu_list, "parent-independent rates, comma separated");
  spectrum->add_option("--model", model, "moran|mutation|reproduction|parent-independent");
  spectrum->add_option("--K", K, "number of types (reproduction model)");
  spectrum->add_option("--N", N, "number of individuals")->required();
  spectrum->add_option("--p", p_text, "reproduction strength (rational literal)");
  spectrum->add_option("--verify", verify, "brute|exact");
  spectrum->add_option("--cap", cap, "dense-oracle dimension cap");
  spectrum->add_option("--out", out, "output JSON path")->required();

  auto* mix = app.add_subcommand("mix", "distance-to-stationarity curve (CSV)");
  mix->add_option("--mutation", mutation_file, "mutation matrix JSON file");
  mix->add_option("--mu", mu_list, "parent-independent rates");
  mix->add_option("--N", N, "number of individuals")->required();
  mix->add_option("--p", p_text, "reproduction strength");
  mix->add_option("--start", start_text, "start state: Nek:k or a composition");
  mix->add_option("--times", times, "time grid a:b:step or comma list");
  mix->add_option("--metric", metric, "tv|chi2");
  mix->add_option("--method", method, "uniformization|spectral|closed-form");
  mix->add_option("--out", out, "output CSV path")->required();

  auto* cutoff = app.add_subcommand("cutoff", "cutoff profile sweep (CSV)");
  cutoff->add_option("--mu", mu_list, "parent-independent rates")->required();
  cutoff->add_option("--p", p_text, "reproduction strength");
  cutoff->add_option("--k", k, "initial vertex type (1-based)");
  cutoff->add_option("--c-range", c_range, "window offsets a:b:step");
  cutoff->add_option("--N-list", n_list, "population sizes, comma separated");
  cutoff->add_option("--metric", metric, "chi2|tv");
  cutoff->add_option("--out", out, "output CSV path")->required();

  auto* simulate = app.add_subcommand("simulate", "event-driven simulation histogram (CSV)");
  simulate->add_option("--mutation", mutation_file, "mutation matrix JSON file");
  simulate->add_option("--mu", mu_list, "parent-independent rates");
  simulate->add_option("--N", N, "number of individuals")->required();
  simulate->add_option("--p", p_text, "reproduction strength");
  simulate->add_option("--start", start_text, "start state");
  simulate->add_option("--horizon", horizon, "simulation horizon")->required();
  simulate->add_option("--replicas", replicas, "number of replicas");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--out", out, "output CSV path")->required();

  auto* stationary = app.add_subcommand("stationary", "stationary measure (CSV)");
  stationary->add_option("--mutation", mutation_file, "mutation matrix JSON file");
  stationary->add_option("--mu", mu_list, "parent-independent rates");
  stationary->add_option("--N", N, "number of individuals")->required();
  stationary->add_option("--p", p_text, "reproduction strength");
  stationary->add_option("--out", out, "output CSV path")->required();

  auto* check = app.add_subcommand("check", "model diagnostics with witnesses");
  check->add_option("--what", what, "reversibility|stationarity|slem")->required();
  check->add_option("--mutation", mutation_file, "mutation matrix JSON file");
  check->add_option("--mu", mu_list, "parent-independent rates");
  check->add_option("--N", N, "number of individuals")->required();
  check->add_option("--p", p_text, "reproduction strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the flag-level message
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (spectrum->parsed())
      return run_spectrum(mutation_file, mu_list, model, K, N, p_text, verify, cap, out);
    if (mix->parsed())
      return run_mix(mutation_file, mu_list, N, p_text, start_text, times, metric, method, out);
    if (cutoff->parsed()) return run_cutoff(mu_list, p_text, k, c_range, n_list, metric, out);
    if (simulate->parsed())
      return run_simulate(mutation_file, mu_list, N, p_text, start_text, horizon, replicas, seed,
                          out);
    if (stationary->parsed()) return run_stationary(mutation_file, mu_list, N, p_text, out);
    if (check->parsed()) return run_check(what, mutation_file, mu_list, N, p_text);
  } catch (const unsupported_error& e) {
    std::fprintf(stderr, "unsupported: %s\n", e.what());
    return kExitUnsupported;
  } catch (const capacity_error& e) {
    std::fprintf(stderr, "capacity: %s\n", e.what());
    return kExitCapacity;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
