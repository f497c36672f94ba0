// imlab: command-line front end for partition enumeration, symbolic tau
// expansions, channel computations and the verification suites.

#include "imlab/channel.hpp"
#include "imlab/errors.hpp"
#include "imlab/multigraph.hpp"
#include "imlab/partition.hpp"
#include "imlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
using namespace imlab;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitSizeLimit = 3;
constexpr int kExitDomain = 4;
constexpr int kExitUnderflow = 5;
constexpr int kExitInput = 6;
constexpr int kExitInternal = 70;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string block_text(const Block& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s + "}";
}

struct PartitionsOptions {
  int n = 1;
  int min_block_size = 1;
  std::string format = "table";
  bool graphs = false;
};

int run_partitions(const PartitionsOptions& o) {
  const auto parts = enumerate_diverse(o.n, o.min_block_size);
  if (o.format == "json") {
    json list = json::array();
    for (const auto& p : parts) {
      json j = to_json(p);
      j["k"] = p.k();
      if (o.graphs) j["dot"] = export_dot(partition_to_graph(p));
      list.push_back(std::move(j));
    }
    json out{{"schema", 1}, {"n", o.n}, {"min_block_size", o.min_block_size}, {"count", parts.size()}, {"partitions", list}};
    std::cout << out.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "index,k,s,blocks\n";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::string blocks;
      for (const auto& b : parts[i].blocks()) blocks += block_text(b);
      std::cout << i << ',' << parts[i].k() << ',' << parts[i].s() << ",\"" << blocks << "\"\n";
    }
  } else if (o.format == "dot") {
    for (std::size_t i = 0; i < parts.size(); ++i) std::cout << export_dot(partition_to_graph(parts[i]), "p" + std::to_string(i));
  } else {
    std::cout << "# n=" << o.n << " min_block_size=" << o.min_block_size << " count=" << parts.size() << '\n';
    for (const auto& p : parts) {
      std::cout << "k=" << p.k() << " s=" << p.s() << "  ";
      for (const auto& b : p.blocks()) std::cout << ' ' << block_text(b);
      std::cout << '\n';
      if (o.graphs) std::cout << export_dot(partition_to_graph(p));
    }
    std::cout << "count " << parts.size() << '\n';
  }
  return 0;
}

struct TauOptions {
  std::vector<int> multiplicities;
  bool bar = false;
  bool symbolic = false;
  std::string dist;
  std::vector<double> snr;
  int quad_order = 0;
  bool no_fd = false;
  std::string format = "table";
};

int run_tau(const TauOptions& o) {
  const SlotBinding binding = SlotBinding::from_multiplicities(o.multiplicities);
  const int min_block_size = o.bar ? 2 : 1;
  if (o.symbolic || o.dist.empty()) {
    const SymbolicExpansion e = tau_symbolic(binding, min_block_size);
    if (o.format == "json") {
      json out{{"schema", 1}, {"multiplicities", o.multiplicities}, {"bar", o.bar}, {"expansion", to_json(e)}, {"text", e.to_string()}};
      std::cout << out.dump(2) << '\n';
    } else {
      std::cout << e.to_string() << '\n';
    }
    return 0;
  }

  const DiscreteJoint dist = load_distribution(o.dist);
  if (static_cast<int>(o.multiplicities.size()) != dist.dims())
    throw DomainError("--multiplicities must have one entry per channel");
  const ChannelSpec spec(o.snr);
  const QuadratureRule quad = QuadratureRule::gauss_hermite(o.quad_order > 0 ? o.quad_order : default_quadrature_order());
  const int order = binding.slots();

  double tau = 0.0;
  if (!(o.bar && order == 1)) tau = expected_conditional_tau(dist, spec, quad, binding, o.bar);
  double derivative = tau;
  if (order == 1) derivative = 0.5 * mmse(dist, spec, quad, binding.variable(1));

  json out{{"schema", 1},
           {"multiplicities", o.multiplicities},
           {"bar", o.bar},
           {"snr", o.snr},
           {"quad_order", quad.order},
           {"expected_tau", tau},
           {"derivative_formula", derivative}};
  if (!o.no_fd) {
    const DerivativeRequest request{o.multiplicities, o.snr, DerivativeMethod::both};
    const VectorFunction info = [&](std::span<const double> s) {
      return mutual_information(dist, ChannelSpec({s.begin(), s.end()}), quad);
    };
    const VerifyConfig defaults;
    const FdResult fd = fd_partial(info, request, fit_fd_step(request, defaults.fd_step), defaults.richardson_levels);
    out["fd"] = fd.value;
    out["fd_error"] = fd.error_estimate;
    out["gap"] = std::abs(fd.value - derivative);
  }
  if (o.format == "json") {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "expected_tau " << fmt_double(tau) << '\n';
    std::cout << "derivative_formula " << fmt_double(derivative) << '\n';
    if (!o.no_fd) {
      std::cout << "fd " << fmt_double(out["fd"].get<double>()) << " (error estimate " << fmt_double(out["fd_error"].get<double>()) << ")\n";
      std::cout << "gap " << fmt_double(out["gap"].get<double>()) << '\n';
    }
  }
  return 0;
}

struct MiOptions {
  std::string dist;
  std::vector<double> snr;
  int quad_order = 0;
  std::string format = "table";
};

int run_mi(const MiOptions& o) {
  const DiscreteJoint dist = load_distribution(o.dist);
  const ChannelSpec spec(o.snr);
  const QuadratureRule quad = QuadratureRule::gauss_hermite(o.quad_order > 0 ? o.quad_order : default_quadrature_order());
  const double mi = mutual_information(dist, spec, quad);
  if (o.format == "json") {
    json out{{"schema", 1}, {"snr", o.snr}, {"quad_order", quad.order}, {"mi_nats", mi}, {"entropy_nats", entropy(dist)}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << fmt_double(mi) << '\n';
  }
  return 0;
}

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "json";
  VerifyConfig config;
};

int run_verify(const VerifyOptions& o) {
  const VerificationReport report = run_suite(o.suite, o.seed, o.config);
  const std::string text = o.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw ValidationError("out: cannot write " + o.out);
    file << text;
  }
  std::size_t failed = 0;
  for (const auto& c : report.cases) failed += c.pass ? 0 : 1;
  std::cerr << "verify " << o.suite << ": " << report.cases.size() - failed << "/" << report.cases.size() << " cases passed";
  if (report.adjudication) std::cerr << ", adjudication " << report.adjudication->verdict;
  std::cerr << '\n';
  return report.passed() ? 0 : kExitVerifyFailed;
}

int report_error(const char* code, const std::exception& e, int exit_code) {
  std::cerr << "error[" << code << "]: " << e.what() << '\n';
  return exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"imlab: mutual-information derivative laboratory for parallel Gaussian channels"};
  app.require_subcommand(1);

  const std::vector<std::string> formats{"table", "json", "csv", "dot"};

  PartitionsOptions part;
  auto* cmd_part = app.add_subcommand("partitions", "List diverse partitions of {1,1,...,n,n}");
  cmd_part->add_option("--n", part.n, "Number of slots (1..8)")->required()->check(CLI::Range(1, 8));
  cmd_part->add_option("--min-block-size", part.min_block_size, "1 for tau, 2 for tau-bar")->check(CLI::IsMember({1, 2}))->capture_default_str();
  cmd_part->add_option("--format", part.format, "table | json | csv | dot")->check(CLI::IsMember(formats))->capture_default_str();
  cmd_part->add_flag("--graphs", part.graphs, "Include the dual multigraph in DOT form");

  TauOptions tau;
  auto* cmd_tau = app.add_subcommand("tau", "Symbolic tau expansion or numeric E[tau(...) | Y]");
  cmd_tau->add_option("--multiplicities", tau.multiplicities, "Derivative orders k1,...,kn")->required()->delimiter(',');
  cmd_tau->add_flag("--bar", tau.bar, "Use tau-bar of the conditionally centered variables");
  cmd_tau->add_flag("--symbolic", tau.symbolic, "Print the exact expansion (default without --dist)");
  cmd_tau->add_option("--dist", tau.dist, "Distribution JSON file")->check(CLI::ExistingFile);
  cmd_tau->add_option("--snr", tau.snr, "SNR vector, comma separated")->delimiter(',');
  cmd_tau->add_option("--quad-order", tau.quad_order, "Gauss-Hermite nodes per dimension (default 64 or $IMLAB_QUAD_ORDER)")->check(CLI::Range(16, 1000));
  cmd_tau->add_flag("--no-fd", tau.no_fd, "Skip the finite-difference cross-check");
  cmd_tau->add_option("--format", tau.format, "table | json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();

  MiOptions mi;
  auto* cmd_mi = app.add_subcommand("mi", "Mutual information in nats");
  cmd_mi->add_option("--dist", mi.dist, "Distribution JSON file")->required()->check(CLI::ExistingFile);
  cmd_mi->add_option("--snr", mi.snr, "SNR vector, comma separated")->required()->delimiter(',');
  cmd_mi->add_option("--quad-order", mi.quad_order, "Gauss-Hermite nodes per dimension (default 64 or $IMLAB_QUAD_ORDER)")->check(CLI::Range(16, 1000));
  cmd_mi->add_option("--format", mi.format, "table | json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();

  VerifyOptions ver;
  auto* cmd_ver = app.add_subcommand("verify", "Run verification suites; exit status 1 on any failed case");
  cmd_ver->add_option("--suite", ver.suite, "theorem1 | lemma1 | lemma2 | gaussian | cumulants | all")
      ->check(CLI::IsMember({"theorem1", "lemma1", "lemma2", "gaussian", "cumulants", "all"}))
      ->capture_default_str();
  cmd_ver->add_option("--seed", ver.seed, "PRNG seed")->capture_default_str();
  cmd_ver->add_option("--out", ver.out, "Write the report here instead of stdout");
  cmd_ver->add_option("--format", ver.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd_ver->add_option("--quad-order", ver.config.quad_order, "Gauss-Hermite nodes per dimension")->check(CLI::Range(16, 1000))->capture_default_str();
  cmd_ver->add_option("--fd-step", ver.config.fd_step, "Largest finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();
  cmd_ver->add_option("--richardson-levels", ver.config.richardson_levels, "Step halvings")->check(CLI::Range(2, 8))->capture_default_str();
  cmd_ver->add_option("--tol-order1", ver.config.tol.order1)->capture_default_str();
  cmd_ver->add_option("--tol-order2", ver.config.tol.order2)->capture_default_str();
  cmd_ver->add_option("--tol-order3", ver.config.tol.order3)->capture_default_str();
  cmd_ver->add_option("--tol-order4", ver.config.tol.order4)->capture_default_str();
  cmd_ver->add_option("--tol-paths", ver.config.tol.paths)->capture_default_str();

  try {
    // Environment default for verify, unless --quad-order is given.
    ver.config.quad_order = default_quadrature_order();
  } catch (const DomainError& e) {
    return report_error("E_INPUT", e, kExitInput);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_part) return run_partitions(part);
    if (*cmd_tau) return run_tau(tau);
    if (*cmd_mi) return run_mi(mi);
    if (*cmd_ver) return run_verify(ver);
  } catch (const SizeLimitError& e) {
    return report_error("E_SIZE_LIMIT", e, kExitSizeLimit);
  } catch (const ValidationError& e) {
    return report_error("E_INPUT", e, kExitInput);
  } catch (const DomainError& e) {
    return report_error("E_DOMAIN", e, kExitDomain);
  } catch (const QuadratureUnderflow& e) {
    return report_error("E_UNDERFLOW", e, kExitUnderflow);
  } catch (const std::exception& e) {
    return report_error("E_INTERNAL", e, kExitInternal);
  }
  return 0;
}
