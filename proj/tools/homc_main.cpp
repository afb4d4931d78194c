// homc: analysis toolkit for higher-order Markov chains.
//
// Subcommands operate on chain-spec files (see README) and print a
// schema-versioned report to stdout or --output. Exit codes: 0 success,
// 1 domain errors (e.g. a non-ergodic chain has no finite passage times),
// 2 input errors (malformed files, non-stochastic tensors, bad flags).

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homc/acceptance.hpp"
#include "homc/errors.hpp"
#include "homc/fixtures.hpp"
#include "homc/io.hpp"
#include "homc/limiting.hpp"
#include "homc/mfpt.hpp"
#include "homc/passage.hpp"
#include "homc/reduction.hpp"
#include "homc/simulate.hpp"
#include "homc/structure.hpp"
#include "homc/version.hpp"

namespace {

using homc::ordered_json;

struct GlobalOptions {
  double tol = -1.0;   // < 0: use each operation's default
  int kmax = -1;       // < 0: use each operation's default
  std::string output;  // empty: stdout
  std::string format = "json";
};

// ---- rendering ------------------------------------------------------------------

bool scalar_array(const ordered_json& arr) {
  for (const auto& v : arr)
    if (v.is_structured()) return false;
  return true;
}

void render_text(const ordered_json& value, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (value.is_object()) {
    for (const auto& [key, v] : value.items()) {
      if (v.is_object() || (v.is_array() && !scalar_array(v))) {
        os << pad << key << ":\n";
        render_text(v, os, indent + 1);
      } else {
        os << pad << key << ": " << v.dump() << '\n';
      }
    }
  } else if (value.is_array()) {
    for (const auto& v : value) {
      if (v.is_object()) {
        render_text(v, os, indent);
        os << '\n';
      } else {
        os << pad << v.dump() << '\n';
      }
    }
  } else {
    os << pad << value.dump() << '\n';
  }
}

void emit(const GlobalOptions& opt, const ordered_json& report) {
  std::ostringstream body;
  if (opt.format == "text") {
    render_text(report, body, 0);
  } else {
    body << report.dump(2) << '\n';
  }
  if (opt.output.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(opt.output);
    if (!out) throw homc::InputError("cannot write report to '" + opt.output + "'");
    out << body.str();
  }
}

ordered_json envelope(const char* command) {
  ordered_json j;
  j["schema"] = homc::kReportSchema;
  j["version"] = homc::kVersion;
  j["command"] = command;
  return j;
}

void describe_chain(ordered_json& j, const homc::ChainSpecFile& spec) {
  ordered_json chain;
  chain["order"] = spec.order;
  chain["states"] = spec.states;
  j["chain"] = std::move(chain);
}

ordered_json json_vector(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json json_matrix(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json json_tuple(const homc::IndexTuple& t) {
  ordered_json arr = ordered_json::array();
  for (int c : t) arr.push_back(c);
  return arr;
}

ordered_json json_criterion(const homc::acceptance::CriterionResult& c) {
  ordered_json j;
  j["id"] = c.id;
  j["title"] = c.title;
  j["passed"] = c.passed();
  ordered_json checks = ordered_json::array();
  for (const auto& chk : c.checks) {
    ordered_json one;
    one["label"] = chk.label;
    one["passed"] = chk.passed;
    if (!chk.detail.empty()) one["detail"] = chk.detail;
    checks.push_back(std::move(one));
  }
  j["checks"] = std::move(checks);
  return j;
}

// ---- subcommand bodies -------------------------------------------------------------

void cmd_validate(const GlobalOptions& opt, const std::string& file) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  ordered_json j = envelope("validate");
  describe_chain(j, spec);
  j["valid"] = true;
  j["spelling"] = spec.sparse ? "sparse_entries" : "entries";
  double worst = 0.0;
  const int n = spec.chain.dimension();
  for (std::size_t tail = 0; tail < spec.chain.shape().tail_count(); ++tail) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      sum += spec.chain[static_cast<std::size_t>(i) +
                        static_cast<std::size_t>(n) * tail];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  j["max_column_deviation"] = worst;
  j["tolerances"] = ordered_json{{"stochastic", 1e-9}};
  emit(opt, j);
}

void cmd_reduce(const GlobalOptions& opt, const std::string& file,
                const std::string& dot_path) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const homc::ReducedChain rc = homc::reduce_chain(spec.chain);
  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    if (!out) throw homc::InputError("cannot write DOT file to '" + dot_path + "'");
    out << homc::export_dot(rc);
  }
  ordered_json j = envelope("reduce");
  describe_chain(j, spec);
  j["size"] = rc.size;
  j["labels"] = rc.labels;
  j["matrix"] = json_matrix(rc.Q);
  if (!dot_path.empty()) j["dot"] = dot_path;
  emit(opt, j);
}

void cmd_analyze(const GlobalOptions& opt, const std::string& file) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const int horizon = opt.kmax > 0 ? opt.kmax : 4096;
  const homc::ChainAnalysis a = homc::analyze_chain(spec.chain, horizon);

  ordered_json j = envelope("analyze");
  describe_chain(j, spec);
  j["irreducible"] = a.irreducible.irreducible;
  j["irreducibility_witness"] =
      a.irreducible.irreducible ? ordered_json(nullptr)
                                : ordered_json(a.irreducible.witness);
  switch (a.ergodic.verdict) {
    case homc::Verdict3::yes: j["ergodic"] = true; break;
    case homc::Verdict3::no: j["ergodic"] = false; break;
    case homc::Verdict3::undetermined: j["ergodic"] = nullptr; break;
  }
  j["ergodic_witness"] = a.ergodic.witness.empty()
                             ? ordered_json(nullptr)
                             : json_tuple(a.ergodic.witness);
  j["regularity_index"] = a.regularity.index.has_value()
                              ? ordered_json(*a.regularity.index)
                              : ordered_json(nullptr);
  ordered_json orbit;
  orbit["length"] = a.ergodic.orbit_length;
  orbit["closed"] = a.ergodic.orbit_closed;
  orbit["horizon"] = a.ergodic.horizon;
  j["orbit"] = std::move(orbit);
  emit(opt, j);
}

homc::PassageReport run_ever_reaching(const GlobalOptions& opt,
                                      const homc::StochasticTensor& p) {
  const double tol = opt.tol > 0 ? opt.tol : 1e-12;
  const int kmax = opt.kmax > 0 ? opt.kmax : 100000;
  return homc::ever_reaching(p, tol, kmax);
}

ordered_json passage_meta(const homc::PassageReport& f) {
  ordered_json j;
  j["terms_used"] = f.terms_used;
  j["converged"] = f.converged;
  j["stop_reason"] = f.stop_reason;
  j["last_increment_norm"] = f.last_increment_norm;
  double residual = 0.0;
  for (double r : f.residual) residual = std::max(residual, std::abs(r));
  j["max_residual"] = residual;
  return j;
}

void cmd_everreach(const GlobalOptions& opt, const std::string& file) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const homc::PassageReport f = run_ever_reaching(opt, spec.chain);
  ordered_json j = envelope("everreach");
  describe_chain(j, spec);
  j["passage"] = passage_meta(f);
  j["F"] = homc::tensor_json(f.F);
  j["tolerances"] = ordered_json{{"tol", opt.tol > 0 ? opt.tol : 1e-12},
                                 {"k_max", opt.kmax > 0 ? opt.kmax : 100000}};
  emit(opt, j);
}

void cmd_classify(const GlobalOptions& opt, const std::string& file) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const homc::PassageReport f = run_ever_reaching(opt, spec.chain);
  const homc::ClassificationReport report = homc::classify_states(spec.chain, f);

  ordered_json j = envelope("classify");
  describe_chain(j, spec);
  ordered_json states = ordered_json::array();
  for (const homc::StateClass& s : report.states) {
    ordered_json one;
    one["state"] = s.state;
    one["recurrent"] = s.recurrent;
    one["transient"] = s.transient;
    one["fully_transient"] = s.fully_transient;
    one["absorbing"] = s.absorbing;
    one["undecided"] = s.undecided;
    states.push_back(std::move(one));
  }
  j["states"] = std::move(states);
  j["classes"] = report.classes;
  ordered_json reach = ordered_json::array();
  for (const auto& row : report.reach) {
    ordered_json r = ordered_json::array();
    for (bool b : row) r.push_back(b);
    reach.push_back(std::move(r));
  }
  j["reachability"] = std::move(reach);
  j["consistent"] = homc::verify_class_consistency(report);
  j["return_probabilities"] = report.return_probabilities;
  j["passage"] = passage_meta(f);
  emit(opt, j);
}

void cmd_kstep(const GlobalOptions& opt, const std::string& file, int k) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const homc::Tensor t = homc::kstep(spec.chain, k);
  ordered_json j = envelope("kstep");
  describe_chain(j, spec);
  j["k"] = k;
  j["tensor"] = homc::tensor_json(t);
  emit(opt, j);
}

void cmd_mfpt(const GlobalOptions& opt, const std::string& file) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  const homc::MfptTensor mu = homc::solve_mfpt(spec.chain);
  ordered_json j = envelope("mfpt");
  describe_chain(j, spec);
  j["mu"] = homc::tensor_json(mu.mu);
  j["residual"] = mu.residual;
  emit(opt, j);
}

void cmd_limit(const GlobalOptions& opt, const std::string& file,
               const std::string& method) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  ordered_json j = envelope("limit");
  describe_chain(j, spec);
  j["method"] = method;
  if (method == "powers") {
    const double tol = opt.tol > 0 ? opt.tol : 1e-10;
    const int kmax = opt.kmax > 0 ? opt.kmax : 100000;
    const homc::PowerLimit pl = homc::limit_via_powers(spec.chain, tol, kmax);
    j["pi"] = json_vector(pl.dist.pi);
    j["k_used"] = pl.k_used;
    j["spread"] = pl.spread;
    j["tolerances"] = ordered_json{{"tol", tol}, {"k_max", kmax}};
  } else {
    const homc::ReducedChain rc = homc::reduce_chain(spec.chain);
    const homc::StationaryDistribution xi =
        homc::stationary_distribution(rc, homc::StationaryMethod::cesaro);
    j["pi"] = json_vector(homc::limiting_distribution(spec.chain, xi).pi);
    ordered_json st;
    st["method"] = homc::to_string(xi.method);
    st["residual"] = xi.residual;
    st["iterations"] = xi.iterations;
    st["xi"] = json_vector(xi.xi);
    j["stationary"] = std::move(st);
  }
  emit(opt, j);
}

struct SimulateArgs {
  std::string quantity;
  std::vector<int> tuple;
  std::vector<int> history;
  int k = 1;
  int horizon = -1;
  int tmax = 10000;
  int burn_in = -1;
  int state = 1;
  std::size_t samples = 100000;
  std::uint64_t seed = 12345;
};

void cmd_simulate(const GlobalOptions& opt, const std::string& file,
                  const SimulateArgs& args) {
  const homc::ChainSpecFile spec = homc::load_chain_spec(file);
  homc::Quantity quantity;
  if (args.quantity == "kstep") {
    quantity = homc::KStepQuantity{args.k, args.tuple};
  } else if (args.quantity == "ever_reach") {
    quantity = homc::EverReachQuantity{args.tuple,
                                       args.horizon > 0 ? args.horizon : 1000};
  } else if (args.quantity == "mfpt") {
    quantity = homc::MfptQuantity{args.tuple,
                                  args.horizon > 0 ? args.horizon : 1000000};
  } else {
    quantity = homc::OccupancyQuantity{args.state, args.tmax, args.burn_in,
                                       args.history};
  }
  const homc::Estimate est =
      homc::estimate(spec.chain, quantity, args.samples, args.seed);

  ordered_json j = envelope("simulate");
  describe_chain(j, spec);
  j["quantity"] = args.quantity;
  if (!args.tuple.empty()) j["tuple"] = args.tuple;
  if (args.quantity == "kstep") j["k"] = args.k;
  if (args.quantity == "occupancy") {
    j["state"] = args.state;
    j["t_max"] = args.tmax;
  }
  j["samples"] = args.samples;
  j["seed"] = args.seed;
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["contributing_samples"] = est.samples;
  j["censored"] = est.censored;
  j["censored_fraction"] = est.censored_fraction;
  j["unreliable"] = est.unreliable;
  emit(opt, j);
}

void print_criterion_text(const homc::acceptance::CriterionResult& c,
                          std::ostream& os) {
  os << (c.passed() ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": "
     << c.title << '\n';
  for (const auto& chk : c.checks) {
    if (chk.passed && c.passed()) continue;  // quiet when everything is fine
    os << "  " << (chk.passed ? "[ok]   " : "[FAIL] ") << chk.label;
    if (!chk.detail.empty()) os << " — " << chk.detail;
    os << '\n';
  }
}

int cmd_examples_list(const GlobalOptions& opt) {
  ordered_json j = envelope("examples");
  ordered_json list = ordered_json::array();
  for (const homc::Fixture& f : homc::all_fixtures()) {
    ordered_json one;
    one["name"] = f.name;
    one["order"] = f.chain.order() - 1;
    one["states"] = f.chain.dimension();
    one["criteria"] = homc::acceptance::criteria_for_fixture(f.name);
    one["description"] = f.description;
    list.push_back(std::move(one));
  }
  j["examples"] = std::move(list);
  emit(opt, j);
  return 0;
}

int cmd_examples_run(const GlobalOptions& opt, const std::string& name,
                     bool run_all) {
  std::vector<homc::acceptance::CriterionResult> results;
  ordered_json j = envelope("examples");
  if (run_all) {
    results = homc::acceptance::run_all();
  } else {
    const homc::Fixture& f = homc::fixture(name);  // validates the name
    for (int id : homc::acceptance::criteria_for_fixture(f.name))
      results.push_back(homc::acceptance::run_criterion(id));
    j["example"] = f.name;
    // For the classification fixtures, show the computed tensor next to the
    // stored reference so a reader can compare slices directly.
    if (name == "s5_no_recurrent" || name == "s5_two_state" ||
        name == "s5_mixed_classes") {
      const homc::PassageReport f_report = homc::ever_reaching(f.chain);
      j["computed_ever_reach"] = homc::tensor_json(f_report.F);
      j["expected_ever_reach"] =
          homc::tensor_json(homc::expected_ever_reach(name));
    }
  }

  bool all_passed = !results.empty();
  ordered_json arr = ordered_json::array();
  for (const auto& c : results) {
    all_passed = all_passed && c.passed();
    arr.push_back(json_criterion(c));
  }
  j["criteria"] = std::move(arr);
  j["passed"] = all_passed;

  if (opt.format == "text") {
    std::ostringstream os;
    for (const auto& c : results) print_criterion_text(c, os);
    os << (all_passed ? "all criteria passed" : "criteria FAILED") << '\n';
    if (opt.output.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream out(opt.output);
      if (!out)
        throw homc::InputError("cannot write report to '" + opt.output + "'");
      out << os.str();
    }
  } else {
    emit(opt, j);
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions opt;

  CLI::App app{"analysis toolkit for higher-order Markov chains"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", homc::kVersion);
  app.add_option("--tol", opt.tol,
                 "override the convergence tolerance of the invoked operation");
  app.add_option("--kmax", opt.kmax,
                 "override the iteration/series cap of the invoked operation");
  app.add_option("--output", opt.output, "write the report to this path");
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->default_str("json");

  int exit_code = 0;
  auto guard = [&](auto&& body) {
    // Returns a callback that maps library errors to the documented exit codes.
    return [&, body]() {
      try {
        body();
      } catch (const homc::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        exit_code = 2;
      } catch (const homc::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        exit_code = 1;
      }
    };
  };

  // validate
  auto v_file = std::make_shared<std::string>();
  auto* validate = app.add_subcommand("validate", "check a chain-spec file");
  validate->add_option("file", *v_file, "chain-spec file")->required();
  validate->callback(guard([&, v_file] { cmd_validate(opt, *v_file); }));

  // reduce
  auto r_file = std::make_shared<std::string>();
  auto r_dot = std::make_shared<std::string>();
  auto* reduce = app.add_subcommand("reduce", "reduce to the first-order chain");
  reduce->add_option("file", *r_file, "chain-spec file")->required();
  reduce->add_option("--dot", *r_dot, "also write a DOT digraph to this path");
  reduce->callback(guard([&, r_file, r_dot] { cmd_reduce(opt, *r_file, *r_dot); }));

  // analyze
  auto a_file = std::make_shared<std::string>();
  auto* analyze = app.add_subcommand(
      "analyze", "irreducibility, ergodicity and regularity verdicts");
  analyze->add_option("file", *a_file, "chain-spec file")->required();
  analyze->callback(guard([&, a_file] { cmd_analyze(opt, *a_file); }));

  // classify
  auto c_file = std::make_shared<std::string>();
  auto* classify = app.add_subcommand(
      "classify", "state classification and communication classes");
  classify->add_option("file", *c_file, "chain-spec file")->required();
  classify->callback(guard([&, c_file] { cmd_classify(opt, *c_file); }));

  // everreach
  auto e_file = std::make_shared<std::string>();
  auto* everreach =
      app.add_subcommand("everreach", "ever-reaching probability tensor");
  everreach->add_option("file", *e_file, "chain-spec file")->required();
  everreach->callback(guard([&, e_file] { cmd_everreach(opt, *e_file); }));

  // kstep
  auto k_file = std::make_shared<std::string>();
  auto k_k = std::make_shared<int>(1);
  auto* kstep = app.add_subcommand("kstep", "k-step transition tensor");
  kstep->add_option("file", *k_file, "chain-spec file")->required();
  kstep->add_option("--k", *k_k, "number of steps")
      ->required()
      ->check(CLI::PositiveNumber);
  kstep->callback(guard([&, k_file, k_k] { cmd_kstep(opt, *k_file, *k_k); }));

  // mfpt
  auto m_file = std::make_shared<std::string>();
  auto* mfpt = app.add_subcommand("mfpt", "mean first passage time tensor");
  mfpt->add_option("file", *m_file, "chain-spec file")->required();
  mfpt->callback(guard([&, m_file] { cmd_mfpt(opt, *m_file); }));

  // limit
  auto l_file = std::make_shared<std::string>();
  auto l_method = std::make_shared<std::string>("stationary");
  auto* limit = app.add_subcommand("limit", "limiting distribution");
  limit->add_option("file", *l_file, "chain-spec file")->required();
  limit->add_option("--method", *l_method, "computation method")
      ->check(CLI::IsMember({"powers", "stationary"}))
      ->default_str("stationary");
  limit->callback(
      guard([&, l_file, l_method] { cmd_limit(opt, *l_file, *l_method); }));

  // simulate
  auto s_file = std::make_shared<std::string>();
  auto s_args = std::make_shared<SimulateArgs>();
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo estimate of a quantity");
  simulate->add_option("file", *s_file, "chain-spec file")->required();
  simulate
      ->add_option("--quantity", s_args->quantity,
                   "kstep | ever_reach | mfpt | occupancy")
      ->required()
      ->check(CLI::IsMember({"kstep", "ever_reach", "mfpt", "occupancy"}));
  simulate
      ->add_option("--tuple", s_args->tuple,
                   "target tuple (target state, then history, 1-based)")
      ->delimiter(',');
  simulate
      ->add_option("--history", s_args->history,
                   "start history for occupancy (most recent first)")
      ->delimiter(',');
  simulate->add_option("--k", s_args->k, "steps for the kstep quantity")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", s_args->horizon,
                       "step cap for ever_reach/mfpt sampling");
  simulate->add_option("--tmax", s_args->tmax, "trajectory length for occupancy")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--burn-in", s_args->burn_in,
                       "discarded prefix for occupancy (default min(1000, tmax/10))");
  simulate->add_option("--state", s_args->state, "state for occupancy")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--samples", s_args->samples, "number of samples")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", s_args->seed, "random seed");
  simulate->callback(guard([&, s_file, s_args] {
    if (s_args->quantity != "occupancy" && s_args->tuple.empty()) {
      throw homc::InputError("--tuple is required for quantity '" +
                             s_args->quantity + "'");
    }
    cmd_simulate(opt, *s_file, *s_args);
  }));

  // examples
  auto* examples =
      app.add_subcommand("examples", "built-in worked chains and their checks");
  examples->require_subcommand(1);
  auto* ex_list = examples->add_subcommand("list", "list the built-in chains");
  ex_list->callback(guard([&] { exit_code = cmd_examples_list(opt); }));
  auto ex_name = std::make_shared<std::string>();
  auto ex_all = std::make_shared<bool>(false);
  auto* ex_run =
      examples->add_subcommand("run", "run the stored checks for an example");
  ex_run->add_option("name", *ex_name, "example name");
  ex_run->add_flag("--all", *ex_all, "run the complete acceptance suite");
  ex_run->callback(guard([&, ex_name, ex_all] {
    if (!*ex_all && ex_name->empty()) {
      throw homc::InputError(
          "examples run needs an example name or --all; run `examples list`");
    }
    exit_code = cmd_examples_run(opt, *ex_name, *ex_all);
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e);  // --help / --version
    }
    app.exit(e);
    return 2;  // bad flags are input errors
  } catch (const homc::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
