#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json_report.hpp"

#include "cardcsp/cardinal_dist.hpp"
#include "cardcsp/csp.hpp"
#include "cardcsp/errors.hpp"
#include "cardcsp/oracle.hpp"
#include "cardcsp/solver.hpp"
#include "cardcsp/spectra.hpp"

namespace {

using cardcsp::report::Json;
namespace report = cardcsp::report;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitUsage = 64;

struct Input {
  std::string instance;
  std::string poly;
  std::string p;
};

// Polynomial and cardinality from --instance, or from --poly with --p (a
// phi-basis file supplies its own bias).
struct Loaded {
  std::optional<cardcsp::CspInstance> instance;
  cardcsp::MultilinearPoly f{0};
  std::optional<cardcsp::GlobalCardinality> card;
};

void add_input_options(CLI::App* cmd, Input& input) {
  auto* inst = cmd->add_option("--instance", input.instance, "CSP instance file");
  auto* poly = cmd->add_option("--poly", input.poly, "polynomial file");
  inst->excludes(poly);
  cmd->add_option("--p", input.p, "bias for --poly, e.g. 1/3")->needs(poly);
}

Loaded load(const Input& input) {
  Loaded out;
  if (!input.instance.empty()) {
    auto parsed = cardcsp::read_instance_file(input.instance);
    out.f = cardcsp::to_polynomial(parsed.instance);
    out.card.emplace(parsed.cardinality);
    out.instance.emplace(std::move(parsed.instance));
    return out;
  }
  if (input.poly.empty()) throw cardcsp::InputError("give --instance or --poly");
  out.f = cardcsp::read_polynomial_file(input.poly);
  cardcsp::Rational p;
  if (!input.p.empty()) {
    p = cardcsp::rational_from_string(input.p);
  } else if (out.f.basis().kind() == cardcsp::BasisKind::phi) {
    p = out.f.basis().bias();
  } else {
    throw cardcsp::InputError("--poly in the chi basis needs --p");
  }
  out.card.emplace(out.f.n(), p);
  return out;
}

cardcsp::MultilinearPoly in_chi(const cardcsp::MultilinearPoly& f) {
  if (f.basis().kind() == cardcsp::BasisKind::chi) return f;
  return cardcsp::convert_basis(f, cardcsp::Basis::chi());
}

void emit(const char* command, const Json& body) {
  std::cout << report::document(command, body).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-CSP above average under a global cardinality constraint"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "key = value file with caps and tolerances")
      ->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for sampled estimates");

  Input solve_in;
  std::string solve_t;
  auto* solve = app.add_subcommand("solve", "decide OPT >= AVG + t");
  solve->add_option("--instance", solve_in.instance, "CSP instance file")->required();
  solve->add_option("--t", solve_t, "excess over the average, e.g. 3/2")->required();

  Input kernel_in;
  auto* kernel = app.add_subcommand("kernel", "projection, rounding and kernel report");
  add_input_options(kernel, kernel_in);

  std::uint32_t spec_n = 0;
  std::size_t spec_d = 0;
  std::string spec_p;
  std::string spec_kind = "A";
  std::string spec_mode = "exact";
  auto* spectra = app.add_subcommand("spectra", "eigen report of the moment matrices");
  spectra->add_option("--n", spec_n)->required();
  spectra->add_option("--d", spec_d)->required();
  spectra->add_option("--p", spec_p)->required();
  spectra->add_option("--kind", spec_kind, "A (second moment) or B (variance)")
      ->check(CLI::IsMember({"A", "B"}));
  spectra->add_option("--mode", spec_mode, "exact or simplified entries")
      ->check(CLI::IsMember({"exact", "simplified"}));

  std::uint32_t delta_n = 0;
  std::string delta_p;
  std::size_t delta_kmax = 0;
  auto* delta = app.add_subcommand("delta", "slice moments of degree-k characters");
  delta->add_option("--n", delta_n)->required();
  delta->add_option("--p", delta_p)->required();
  delta->add_option("--kmax", delta_kmax)->required();

  Input moments_in;
  std::uint64_t samples = 0;
  auto* moments = app.add_subcommand("moments", "exact mean, second moment and variance");
  add_input_options(moments, moments_in);
  moments->add_option("--samples", samples, "also estimate powers 1, 2, 4 by sampling");

  Input hyper_in;
  auto* hyper = app.add_subcommand("hyper", "fourth-to-second moment ratio by enumeration");
  add_input_options(hyper, hyper_in);

  Input oracle_in;
  std::string oracle_t;
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum and moments");
  add_input_options(oracle, oracle_in);
  oracle->add_option("--t", oracle_t, "also decide OPT >= AVG + t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    cardcsp::SolverConfig config;
    if (!config_path.empty()) config = cardcsp::read_config_file(config_path);
    if (app.count("--threads") > 0 || config_path.empty()) config.threads = threads;
    const cardcsp::OracleOptions oracle_options{config.enum_cap,
                                                static_cast<unsigned>(config.threads)};

    if (*solve) {
      const auto parsed = cardcsp::read_instance_file(solve_in.instance);
      const cardcsp::Rational t = cardcsp::rational_from_string(solve_t);
      const cardcsp::Verdict v = cardcsp::decide(parsed.instance, parsed.cardinality, t, config);
      emit("solve", report::verdict(v));
      return v.yes ? kExitYes : kExitNo;
    }

    if (*kernel) {
      const Loaded in = load(kernel_in);
      const cardcsp::MultilinearPoly f = in_chi(in.f);
      const cardcsp::CardinalDist dist(in.card->n(), in.card->p());
      Json body{{"n", in.card->n()},
                {"p", report::number(in.card->p())},
                {"variance", report::number(cardcsp::variance(f, dist))}};
      body.update(report::kernel_report(cardcsp::extract_kernel(f, *in.card, config)));
      emit("kernel", body);
      return kExitYes;
    }

    if (*spectra) {
      const cardcsp::Rational p = cardcsp::rational_from_string(spec_p);
      const cardcsp::SetSymmetricForm form(
          spec_n, spec_d, p,
          spec_kind == "A" ? cardcsp::FormKind::second_moment : cardcsp::FormKind::variance,
          spec_mode == "exact" ? cardcsp::EntryMode::exact : cardcsp::EntryMode::simplified);
      Json body{{"n", spec_n}, {"d", spec_d}, {"p", report::number(p)}, {"kind", spec_kind},
                {"mode", spec_mode}};
      body.update(report::eigen_summary(cardcsp::eigen_summary(form, config.dense_cap)));
      emit("spectra", body);
      return kExitYes;
    }

    if (*delta) {
      const cardcsp::Rational p = cardcsp::rational_from_string(delta_p);
      const auto values = cardcsp::delta_sequence(delta_n, p, delta_kmax);
      Json table = Json::array();
      for (std::size_t k = 0; k < values.size(); ++k) {
        Json row{{"k", k}};
        row.update(report::number(values[k]));
        table.push_back(row);
      }
      emit("delta", Json{{"n", delta_n}, {"p", report::number(p)}, {"delta", table}});
      return kExitYes;
    }

    if (*moments) {
      const Loaded in = load(moments_in);
      const cardcsp::CardinalDist dist(in.card->n(), in.card->p());
      Json body{{"n", in.card->n()},
                {"p", report::number(in.card->p())},
                {"mean", report::number(cardcsp::expectation(in.f, dist))},
                {"second_moment", report::number(cardcsp::second_moment(in.f, dist))},
                {"variance", report::number(cardcsp::variance(in.f, dist))}};
      if (samples > 0) {
        Json estimates = Json::array();
        for (int power : {1, 2, 4}) {
          const auto est = cardcsp::mc_moment(in.f, dist, power, samples, seed);
          estimates.push_back(Json{{"power", power},
                                   {"estimate", est.estimate},
                                   {"standard_error", est.standard_error}});
        }
        body["sampled"] = Json{{"samples", samples}, {"seed", seed}, {"moments", estimates}};
      }
      emit("moments", body);
      return kExitYes;
    }

    if (*hyper) {
      const Loaded in = load(hyper_in);
      const auto ratio = cardcsp::hyper_ratio(in.f, *in.card, oracle_options);
      const std::size_t d = std::max<std::size_t>(1, in.f.degree());
      const cardcsp::QuadScalar bound = cardcsp::fourth_moment_constant(d, in.card->p());
      emit("hyper", Json{{"n", in.card->n()},
                         {"p", report::number(in.card->p())},
                         {"d", d},
                         {"fourth_moment", report::number(ratio.fourth_moment)},
                         {"second_moment", report::number(ratio.second_moment)},
                         {"norm_sq", report::number(ratio.norm_sq)},
                         {"ratio", static_cast<double>(ratio.over_second_moment_sq)},
                         {"ratio_to_norm", static_cast<double>(ratio.over_norm_sq)},
                         {"bound", report::number(bound)},
                         {"within_bound",
                          static_cast<double>(ratio.over_second_moment_sq) <= bound.to_double()}});
      return kExitYes;
    }

    if (*oracle) {
      const Loaded in = load(oracle_in);
      const auto stats = cardcsp::brute_moments(in.f, *in.card, oracle_options);
      Json body{{"n", in.card->n()},
                {"p", report::number(in.card->p())},
                {"mean", report::number(stats.first)},
                {"second_moment", report::number(stats.second)},
                {"variance", report::number(stats.variance())}};
      int code = kExitYes;
      if (in.instance) {
        const auto best = cardcsp::brute_opt(*in.instance, *in.card, oracle_options);
        body["opt"] = best.opt;
        body["argmax"] = report::assignment(best.argmax);
        body["avg"] = report::number(best.average);
        if (!oracle_t.empty()) {
          const cardcsp::Rational t = cardcsp::rational_from_string(oracle_t);
          const bool yes = cardcsp::Rational(static_cast<long>(best.opt)) >= best.average + t;
          body["t"] = report::number(t);
          body["yes"] = yes;
          code = yes ? kExitYes : kExitNo;
        }
      } else if (!oracle_t.empty()) {
        throw cardcsp::InputError("--t needs --instance");
      }
      emit("oracle", body);
      return code;
    }
  } catch (const cardcsp::KernelTooLarge& e) {
    std::cerr << "error: " << e.what() << "; kernel:";
    for (auto var : e.kernel()) std::cerr << ' ' << var;
    std::cerr << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
