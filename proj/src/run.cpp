#include "orbitcert/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "orbitcert/congruence.hpp"
#include "orbitcert/geometry.hpp"
#include "orbitcert/rng.hpp"

namespace orbitcert {

namespace {

using nlohmann::ordered_json;

std::vector<std::vector<int>> enumerate_proper_subsets(int rank) {
  if (rank > 6)
    throw ConfigError("phi: enumerate-all is capped at rank 6; pass explicit subsets");
  std::vector<std::vector<int>> subsets;
  for (int mask = 0; mask < (1 << rank) - 1; ++mask) {
    std::vector<int> phi;
    for (int i = 0; i < rank; ++i)
      if (mask & (1 << i)) phi.push_back(i);
    subsets.push_back(std::move(phi));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return subsets;
}

std::vector<std::vector<int>> parse_phi(const std::string& spec, int rank) {
  if (spec == "all") return enumerate_proper_subsets(rank);
  std::vector<int> phi;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int idx = 0;
    try {
      idx = std::stoi(item);
    } catch (const std::exception&) {
      throw ConfigError("phi: not an index list: '" + spec + "'");
    }
    if (idx < 1 || idx > rank)
      throw ConfigError("phi: index " + std::to_string(idx) + " outside 1.." +
                        std::to_string(rank));
    phi.push_back(idx - 1);
  }
  std::sort(phi.begin(), phi.end());
  phi.erase(std::unique(phi.begin(), phi.end()), phi.end());
  if (static_cast<int>(phi.size()) >= rank)
    throw ConfigError("phi: must be a proper subset of the simple roots");
  return {phi};
}

std::vector<std::vector<RatMat>> load_v_specs(const std::string& path,
                                              const RootSpaceDecomposition& dec) {
  std::ifstream in(path);
  if (!in) throw ConfigError("v: cannot open file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("v: malformed JSON: ") + e.what());
  }
  if (!j.is_array()) throw ConfigError("v: expected an array of coordinate rows");
  std::vector<RatMat> vectors;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != dec.rank)
      throw ConfigError("v: each row must have rank-many entries (vectors must lie in a)");
    RatMat x = RatMat::Zero(dec.a_basis.front().rows(), dec.a_basis.front().cols());
    for (int i = 0; i < dec.rank; ++i)
      x += dec.a_basis[i] * rat_parse(row[static_cast<std::size_t>(i)].get<std::string>());
    vectors.push_back(std::move(x));
  }
  return {vectors};
}

std::string phi_tag(const std::vector<int>& phi) {
  if (phi.empty()) return "phi_empty";
  std::string tag = "phi";
  for (int i : phi) tag += "_" + std::to_string(i + 1);
  return tag;
}

struct TaskResult {
  std::string key;
  ordered_json report;
  bool pass = false;
  std::string summary;
};

ordered_json ideal_report_json(const MatrixModel& m, const ActionContext& ctx,
                               const std::vector<int>& phi) {
  const Subalgebra q = build_parabolic(m, *ctx.dec, *ctx.ps, phi);
  const LanglandsParts parts = langlands(m, *ctx.dec, *ctx.ps, phi);
  const Subalgebra s_phi = build_s_Phi(m, *ctx.dec, *ctx.ps, phi);

  const bool s_in_q = subspace_of(ctx.s, q);
  const IdealDecision rel = check_relation_3_2(m, s_phi, q);
  const IdealDecision ideal = is_ideal(m, s_phi, ctx.s);

  ordered_json j;
  j["model"] = m.id();
  j["mode"] = "ideal";
  nlohmann::ordered_json phi1 = nlohmann::ordered_json::array();
  for (int i : s_phi.phi) phi1.push_back(i + 1);
  j["phi"] = phi1;
  j["dims"] = {{"q_Phi", q.dim()},
               {"m_Phi", parts.m_phi.dim()},
               {"a_Phi", parts.a_phi.dim()},
               {"n_Phi", parts.n_phi.dim()},
               {"s_Phi", s_phi.dim()}};
  j["s_subset_q_Phi"] = s_in_q;
  j["relation_3_2"] = rel.ideal;
  j["s_Phi_ideal_in_s"] = ideal.ideal;
  j["verdict"] = (s_in_q && rel.ideal && ideal.ideal) ? "pass" : "fail";
  return j;
}

ordered_json ideal_v_report_json(const MatrixModel& m, const ActionContext& ctx,
                                 const std::vector<RatMat>& v) {
  const Subalgebra s_v = build_s_V(m, *ctx.dec, *ctx.ps, v);
  const IdealDecision ideal = is_ideal(m, s_v, ctx.s);
  ordered_json j;
  j["model"] = m.id();
  j["mode"] = "ideal";
  j["recipe"] = "s_V";
  j["dim_s_V"] = s_v.dim();
  j["s_V_ideal_in_s"] = ideal.ideal;
  j["verdict"] = ideal.ideal ? "pass" : "fail";
  return j;
}

ordered_json congruence_report_json(const ActionContext& ctx, const Subalgebra& s_prime,
                                    const RunConfig& cfg, std::uint64_t task_seed) {
  CongruenceConfig ccfg;
  ccfg.tol_orbit = cfg.tol_orbit;
  ccfg.samples = cfg.budget;
  Rng rng(task_seed);
  ordered_json per_pair = ordered_json::array();
  bool pass = true;
  double max_conj = 0.0, max_norm = 0.0, max_orbit = 0.0;
  for (int k = 0; k < cfg.pairs; ++k) {
    const Point p = random_point(ctx, rng);
    const Point q = random_point(ctx, rng);
    const CongruenceReport rep = verify_congruence(ctx, s_prime, p, q, ccfg);
    pass = pass && rep.pass;
    max_conj = std::max(max_conj, rep.conjugator_residual);
    max_norm = std::max(max_norm, rep.normality_residual);
    max_orbit = std::max(max_orbit, rep.max_distance_to_orbit);
    per_pair.push_back(to_json(rep));
  }
  ordered_json j;
  j["model"] = ctx.model.id();
  j["mode"] = "congruence";
  j["recipe"] = s_prime.recipe;
  nlohmann::ordered_json phi1 = nlohmann::ordered_json::array();
  for (int i : s_prime.phi) phi1.push_back(i + 1);
  j["phi"] = phi1;
  j["pairs"] = cfg.pairs;
  j["seed"] = task_seed;
  j["max_conjugator_residual"] = max_conj;
  j["max_normality_residual"] = max_norm;
  j["max_distance_to_orbit"] = max_orbit;
  j["per_pair"] = per_pair;
  j["verdict"] = pass ? "pass" : "fail";
  return j;
}

}  // namespace

int run(const RunConfig& config) {
  const MatrixModel model = make_model(config.model_name, config.n, config.tol);
  if (config.mode != "ideal" && config.mode != "congruence" && config.mode != "geometry" &&
      config.mode != "all")
    throw ConfigError("mode: expected ideal|congruence|geometry|all, got '" + config.mode + "'");
  if (config.pairs < 1) throw ConfigError("pairs: must be >= 1");
  if (config.budget < 1) throw ConfigError("budget: must be >= 1");
  if (model.name == "hopf" && (config.mode == "geometry"))
    throw ConfigError("mode: geometry is not defined for the hopf model");

  const ActionContext ctx = make_action_context(model);
  const bool compact = model.name == "hopf";

  std::vector<std::vector<int>> phis;
  std::vector<std::vector<RatMat>> v_specs;
  if (!compact) {
    phis = parse_phi(config.phi, static_cast<int>(ctx.ps->simple.size()));
    if (!config.v_file.empty()) v_specs = load_v_specs(config.v_file, *ctx.dec);
  }

  struct Task {
    std::string key;
    std::function<ordered_json()> work;
  };
  std::vector<Task> tasks;
  const std::string stem = config.model_name + std::to_string(config.n);
  const bool want_ideal = config.mode == "ideal" || config.mode == "all";
  const bool want_cong = config.mode == "congruence" || config.mode == "all";
  const bool want_geom =
      (config.mode == "geometry" || config.mode == "all") && !compact;

  if (compact) {
    if (want_ideal)
      tasks.push_back({"ideal_" + stem + "_center", [&]() {
                         const Subalgebra center = hopf_center(model);
                         const IdealDecision d = is_ideal(model, center, ctx.s);
                         ordered_json j;
                         j["model"] = model.id();
                         j["mode"] = "ideal";
                         j["recipe"] = "center";
                         j["center_ideal_in_u"] = d.ideal;
                         j["verdict"] = d.ideal ? "pass" : "fail";
                         return j;
                       }});
    if (want_cong) {
      const std::string key = "congruence_" + stem + "_center";
      tasks.push_back({key, [&, key]() {
                         return congruence_report_json(ctx, hopf_center(model), config,
                                                       config.seed ^ fnv1a64(key));
                       }});
    }
  } else {
    for (const auto& phi : phis) {
      const std::string tag = phi_tag(phi);
      if (want_ideal)
        tasks.push_back({"ideal_" + stem + "_" + tag,
                         [&, phi]() { return ideal_report_json(model, ctx, phi); }});
      if (want_cong) {
        const std::string key = "congruence_" + stem + "_" + tag;
        tasks.push_back({key, [&, phi, key]() {
                           const Subalgebra s_phi = build_s_Phi(model, *ctx.dec, *ctx.ps, phi);
                           return congruence_report_json(ctx, s_phi, config,
                                                         config.seed ^ fnv1a64(key));
                         }});
      }
      if (want_geom)
        tasks.push_back({"geometry_" + stem + "_" + tag, [&, phi]() {
                           const Subalgebra s_phi = build_s_Phi(model, *ctx.dec, *ctx.ps, phi);
                           return to_json(geometry_report(ctx, s_phi));
                         }});
    }
    for (std::size_t vi = 0; vi < v_specs.size(); ++vi) {
      const auto& v = v_specs[vi];
      const std::string tag = "v" + std::to_string(vi);
      if (want_ideal)
        tasks.push_back({"ideal_" + stem + "_" + tag,
                         [&, v]() { return ideal_v_report_json(model, ctx, v); }});
      if (want_cong) {
        const std::string key = "congruence_" + stem + "_" + tag;
        tasks.push_back({key, [&, v, key]() {
                           const Subalgebra s_v = build_s_V(model, *ctx.dec, *ctx.ps, v);
                           return congruence_report_json(ctx, s_v, config,
                                                         config.seed ^ fnv1a64(key));
                         }});
      }
    }
  }

  // fan out, merge in key order
  std::vector<std::future<ordered_json>> futures;
  futures.reserve(tasks.size());
  for (auto& t : tasks) futures.push_back(std::async(std::launch::async, t.work));

  std::filesystem::create_directories(config.out_dir);
  bool all_pass = true;
  std::vector<TaskResult> results;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TaskResult r;
    r.key = tasks[i].key;
    r.report = futures[i].get();
    r.pass = r.report.value("verdict", "fail") == "pass";
    all_pass = all_pass && r.pass;
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(),
            [](const TaskResult& a, const TaskResult& b) { return a.key < b.key; });

  std::cout << std::left << std::setw(36) << "task" << "verdict\n";
  for (const auto& r : results) {
    const std::filesystem::path file =
        std::filesystem::path(config.out_dir) / (r.key + ".json");
    std::ofstream out(file);
    out << r.report.dump(2) << "\n";
    std::cout << std::left << std::setw(36) << r.key << (r.pass ? "pass" : "FAIL") << "\n";
  }
  std::cout << (all_pass ? "all tasks passed" : "some tasks FAILED") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace orbitcert
