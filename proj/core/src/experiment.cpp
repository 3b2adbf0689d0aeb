#include <binoed/io/experiment.hpp>
#include <binoed/model/preconditioned.hpp>
#include <binoed/rng.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

namespace binoed {

namespace {

using json = nlohmann::json;

// Reads typed fields from an object, tracking the dotted path for error
// messages and rejecting keys that are not part of the schema.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return nullptr;
    return &j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown field " + where(key));
    }
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

double ExperimentConfig::prior_beta() const { return beta.value_or(std::sqrt(alpha) / 1.42); }

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  Fields top(j, "");
  std::string model = "synthetic";
  top.get("model", model);
  if (model == "synthetic") {
    c.kind = ModelKind::synthetic;
  } else if (model == "helmholtz") {
    c.kind = ModelKind::helmholtz;
  } else {
    throw ConfigError("model must be \"synthetic\" or \"helmholtz\", got \"" + model + "\"");
  }
  top.get("seed", c.seed);
  c.synthetic.seed = c.seed;

  if (const json* s = top.child("synthetic")) {
    Fields f(*s, "synthetic");
    f.get("n", c.synthetic.n);
    f.get("m", c.synthetic.m);
    f.get("m_obs", c.synthetic.m_obs);
    f.get("decay", c.synthetic.decay);
    f.get("random_prior", c.synthetic.random_prior);
    f.finish();
    require(c.synthetic.n >= 1, "synthetic.n must be >= 1");
    require(c.synthetic.m >= 1, "synthetic.m must be >= 1");
    require(c.synthetic.m_obs >= 1, "synthetic.m_obs must be >= 1");
    require(c.synthetic.decay >= 0.0, "synthetic.decay must be >= 0");
  }
  if (const json* h = top.child("helmholtz")) {
    Fields f(*h, "helmholtz");
    f.get("grid", c.helmholtz.grid);
    f.get("wavenumbers", c.helmholtz.wavenumbers);
    std::vector<double> center;
    f.get("center", center);
    if (!center.empty()) {
      require(center.size() == 2, "helmholtz.center must have two entries");
      c.helmholtz.center = {center[0], center[1]};
    }
    f.get("source_radius", c.helmholtz.source_radius);
    if (const json* rings = f.child("rings")) {
      require(rings->is_array(), "helmholtz.rings must be an array");
      c.helmholtz.rings.clear();
      for (std::size_t i = 0; i < rings->size(); ++i) {
        Fields r(rings->at(i), "helmholtz.rings[" + std::to_string(i) + "]");
        SensorRing ring;
        r.get("radius", ring.radius);
        r.get("count", ring.count);
        r.get("phase", ring.phase);
        r.finish();
        c.helmholtz.rings.push_back(ring);
      }
    }
    f.finish();
    require(c.helmholtz.grid >= 5, "helmholtz.grid must be >= 5");
    require(!c.helmholtz.wavenumbers.empty(), "helmholtz.wavenumbers must be non-empty");
    for (double k : c.helmholtz.wavenumbers) require(k > 0.0, "helmholtz.wavenumbers entries must be > 0");
    require(c.helmholtz.source_radius > 0.0, "helmholtz.source_radius must be > 0");
  }
  if (const json* p = top.child("prior")) {
    Fields f(*p, "prior");
    f.get("alpha", c.alpha);
    f.get_optional("beta", c.beta);
    f.finish();
    require(c.alpha > 0.0, "prior.alpha must be > 0");
    require(!c.beta || *c.beta >= 0.0, "prior.beta must be >= 0");
  }
  if (const json* n = top.child("noise")) {
    Fields f(*n, "noise");
    f.get_optional("sigma", c.noise.sigma);
    f.get("fraction", c.noise.fraction);
    f.get("samples", c.noise.samples);
    f.get("through_prior", c.noise.through_prior);
    f.finish();
    require(!c.noise.sigma || *c.noise.sigma > 0.0, "noise.sigma must be > 0");
    require(c.noise.fraction > 0.0, "noise.fraction must be > 0");
    require(c.noise.samples >= 1, "noise.samples must be >= 1");
  }
  if (const json* l = top.child("lowrank")) {
    Fields f(*l, "lowrank");
    std::string method = "randomized";
    f.get("method", method);
    require(method == "randomized" || method == "exact", "lowrank.method must be \"randomized\" or \"exact\"");
    c.lowrank.exact = method == "exact";
    f.get_optional("rank", c.lowrank.rank);
    f.get("subspace_iterations", c.lowrank.subspace_iterations);
    f.get("drop_tol", c.lowrank.drop_tol);
    f.finish();
    require(!c.lowrank.rank || *c.lowrank.rank >= 1, "lowrank.rank must be >= 1");
    require(c.lowrank.subspace_iterations >= 0, "lowrank.subspace_iterations must be >= 0");
    require(c.lowrank.drop_tol >= 0.0, "lowrank.drop_tol must be >= 0");
  }
  if (const json* s = top.child("solver")) {
    Fields f(*s, "solver");
    f.get("max_iters", c.solver.max_iters);
    f.get("gap_tol", c.solver.gap_tol);
    f.get("armijo", c.solver.armijo);
    f.get("backtrack", c.solver.backtrack);
    f.get("max_backtracks", c.solver.max_backtracks);
    f.get("newton_polish", c.solver.newton_polish);
    f.get("verify_tol", c.solver.verify_tol);
    f.get("binary_threshold", c.solver.binary_threshold);
    f.get("p_floor", c.solver.p_floor);
    f.get("p_step_max_iters", c.solver.p_step_max_iters);
    f.get("p_step_tol", c.solver.p_step_tol);
    f.get("greedy_completion", c.solver.greedy_completion);
    f.get("delta", c.delta);
    f.get("uncorrected_lipschitz", c.uncorrected_lipschitz);
    f.finish();
    c.solver.validate();
    require(c.delta > 0.0 && c.delta < 1.0, "solver.delta must lie in (0, 1)");
  }
  top.finish();
  return c;
}

json ExperimentConfig::to_json() const {
  json rings = json::array();
  for (const auto& r : helmholtz.rings) rings.push_back({{"radius", r.radius}, {"count", r.count}, {"phase", r.phase}});
  json j;
  j["model"] = kind == ModelKind::synthetic ? "synthetic" : "helmholtz";
  j["seed"] = seed;
  if (kind == ModelKind::synthetic) {
    j["synthetic"] = {{"n", synthetic.n},
                      {"m", synthetic.m},
                      {"m_obs", synthetic.m_obs},
                      {"decay", synthetic.decay},
                      {"random_prior", synthetic.random_prior}};
  } else {
    j["helmholtz"] = {{"grid", helmholtz.grid},
                      {"wavenumbers", helmholtz.wavenumbers},
                      {"center", {helmholtz.center[0], helmholtz.center[1]}},
                      {"source_radius", helmholtz.source_radius},
                      {"rings", rings}};
    j["prior"] = {{"alpha", alpha}, {"beta", prior_beta()}};
  }
  j["noise"] = {{"sigma", noise.sigma ? json(*noise.sigma) : json(nullptr)},
                {"fraction", noise.fraction},
                {"samples", noise.samples},
                {"through_prior", noise.through_prior}};
  j["lowrank"] = {{"method", lowrank.exact ? "exact" : "randomized"},
                  {"rank", lowrank.rank ? json(*lowrank.rank) : json(nullptr)},
                  {"subspace_iterations", lowrank.subspace_iterations},
                  {"drop_tol", lowrank.drop_tol}};
  j["solver"] = {{"max_iters", solver.max_iters},
                 {"gap_tol", solver.gap_tol},
                 {"armijo", solver.armijo},
                 {"backtrack", solver.backtrack},
                 {"max_backtracks", solver.max_backtracks},
                 {"newton_polish", solver.newton_polish},
                 {"verify_tol", solver.verify_tol},
                 {"binary_threshold", solver.binary_threshold},
                 {"p_floor", solver.p_floor},
                 {"p_step_max_iters", solver.p_step_max_iters},
                 {"p_step_tol", solver.p_step_tol},
                 {"greedy_completion", solver.greedy_completion},
                 {"delta", delta},
                 {"uncorrected_lipschitz", uncorrected_lipschitz}};
  return j;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(to_json().dump()); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return ExperimentConfig::from_json(j);
}

Bundle BuiltModel::to_bundle() const {
  Bundle b;
  b.config = config.to_json();
  b.config_hash = config.hash();
  b.qr = qr;
  b.trace_C0 = objective.trace_C0();
  b.chat = objective.chat();
  b.build_seconds = build_seconds;
  return b;
}

namespace {

struct ModelParts {
  std::optional<HelmholtzModel> helmholtz;
  LinearMap forward;
  PriorModel prior;
  Index m;
  Index m_obs;
  std::optional<Vector> sigma;
};

ModelParts make_parts(const ExperimentConfig& c) {
  if (c.kind == ModelKind::synthetic) {
    SyntheticProblem p = make_synthetic(c.synthetic);
    std::optional<Vector> sigma = p.sigma;
    return {std::nullopt, LinearMap::from_matrix(p.forward), p.prior, c.synthetic.m, c.synthetic.m_obs, sigma};
  }
  HelmholtzModel h(c.helmholtz);
  LinearMap f = h.forward_stack();
  PriorModel prior = h.make_prior(c.alpha, c.prior_beta());
  Index m = h.n_sensors();
  Index m_obs = h.m_obs();
  return {std::move(h), f, prior, m, m_obs, std::nullopt};
}

}  // namespace

BuiltModel build_model(const ExperimentConfig& config) {
  auto start = std::chrono::steady_clock::now();
  ModelParts parts = make_parts(config);
  const Index channels = parts.m * parts.m_obs;

  Vector sigma;
  if (config.noise.sigma) {
    sigma = Vector::Constant(channels, *config.noise.sigma);
  } else if (parts.sigma) {
    sigma = *parts.sigma;
  } else {
    NoiseCalibration cal{config.noise.samples, config.noise.fraction, config.seed, config.noise.through_prior};
    double s2 = config.noise.through_prior
                    ? calibrate_noise(parts.forward, cal, &parts.prior)
                    : calibrate_noise(preconditioned_operator(parts.forward, parts.prior,
                                                              DiagonalNoise::uniform(channels, 1.0)),
                                      cal);
    if (!(s2 > 0.0)) throw NumericalError("noise calibration produced a non-positive variance");
    sigma = Vector::Constant(channels, std::sqrt(s2));
  }
  DiagonalNoise noise(sigma);
  LinearMap fb = preconditioned_operator(parts.forward, parts.prior, noise);

  QRModel qr;
  if (config.lowrank.exact) {
    qr = exact_qr(fb.adjoint().materialize());
  } else {
    RandomizedQROptions opts;
    opts.rank = config.lowrank.rank.value_or(std::min(parts.prior.n(), channels));
    opts.subspace_iterations = config.lowrank.subspace_iterations;
    opts.drop_tol = config.lowrank.drop_tol;
    opts.seed = config.seed;
    qr = randomized_qr(fb.adjoint(), opts);
  }
  qr.set_layout(parts.m, parts.m_obs);
  LowRankObjective obj = LowRankObjective::assemble(qr, parts.prior);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return BuiltModel{config, std::move(parts.helmholtz), parts.forward, parts.prior, noise, fb,
                    std::move(qr), std::move(obj), parts.m, parts.m_obs, secs};
}

}  // namespace binoed
