#include "hinmhp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hinmhp/graph.hpp"
#include "hinmhp/graphlets.hpp"
#include "hinmhp/rng.hpp"

namespace hinmhp {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames = {{
    {Method::Dmf, "dmf"},
    {Method::Rescal, "rescal"},
    {Method::Dedicom, "dedicom"},
    {Method::Herec, "herec"},
    {Method::Gdv, "gdv"},
    {Method::ColoredGdv, "colored_gdv"},
    {Method::Deepwalk, "deepwalk"},
    {Method::Metapath2vecpp, "metapath2vecpp"},
    {Method::Nonnetwork, "nonnetwork"},
    {Method::Random, "random"},
}};

constexpr std::array<std::pair<WeightMode, std::string_view>, 3> kWeightModes = {{
    {WeightMode::Raw, "raw"},
    {WeightMode::Binary, "binary"},
    {WeightMode::Log1p, "log1p"},
}};

}  // namespace

std::string_view name(Method m) noexcept {
  for (auto [k, v] : kMethodNames)
    if (k == m) return v;
  return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
  for (auto [k, v] : kMethodNames)
    if (v == s) return k;
  return std::nullopt;
}

bool is_recommender(Method m) noexcept {
  return m == Method::Dmf || m == Method::Rescal || m == Method::Dedicom || m == Method::Herec;
}

void check_run_config(const RunConfig& cfg) {
  if (cfg.methods.empty()) throw Error("config: no methods requested");
  if (cfg.folds < 2) throw Error("config: folds must be >= 2");
  if (cfg.repetitions < 1) throw Error("config: repetitions must be >= 1");
  const auto& s = cfg.settings;
  check_config(s.dmf);
  check_config(s.tensor);
  for (auto side : {s.dmf_side, s.tensor_side})
    if (side.contains(EdgeKind::IM)) throw Error("config: side relation sets may not contain the target relation M");
  if (s.graphlet_size != 3 && s.graphlet_size != 4) throw Error("config: graphlets.size must be 3 or 4");
  if (s.colored_graphlet_size != 2 && s.colored_graphlet_size != 3)
    throw Error("config: graphlets.colored_size must be 2 or 3");
}

// Config JSON ------------------------------------------------------------------

namespace {

/// Reads optional keys of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error("config: " + path_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw Error("config: " + where(key) + ": " + e.what());
    }
  }

  std::optional<Section> sub(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return std::nullopt;
    seen_.insert(key);
    return Section(*it, where(key));
  }

  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw Error("config: unknown key " + (path_.empty() ? k : path_ + "." + k));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

EdgeKindSet parse_side(const std::string& label, const std::string& where) {
  const auto s = EdgeKindSet::parse_label(label);
  if (!s) throw Error("config: " + where + ": '" + label + "' is not a relation set (letters from IPSFW)");
  return *s;
}

void read_train(Section s, TrainConfig& t, EdgeKindSet& side) {
  s.get("dim", t.dim);
  s.get("learning_rate", t.learning_rate);
  s.get("l2", t.l2);
  s.get("epochs", t.epochs);
  s.get("negatives_per_positive", t.negatives_per_positive);
  std::string mode, label = side.label();
  s.get("ii_weights", mode);
  if (!mode.empty()) {
    const auto it = std::find_if(kWeightModes.begin(), kWeightModes.end(), [&](auto p) { return p.second == mode; });
    if (it == kWeightModes.end()) throw Error("config: " + s.where("ii_weights") + ": unknown weight mode '" + mode + "'");
    t.ii_weights = it->first;
  }
  s.get("side", label);
  side = parse_side(label, s.where("side"));
  s.finish();
}

json train_json(const TrainConfig& t, EdgeKindSet side) {
  std::string mode;
  for (auto [k, v] : kWeightModes)
    if (k == t.ii_weights) mode = v;
  return {{"dim", t.dim},
          {"learning_rate", t.learning_rate},
          {"l2", t.l2},
          {"epochs", t.epochs},
          {"negatives_per_positive", t.negatives_per_positive},
          {"ii_weights", mode},
          {"side", side.label()}};
}

void read_sgns(Section& s, SkipGramParams& p) {
  s.get("dim", p.dim);
  s.get("window", p.window);
  s.get("negatives", p.negatives);
  s.get("epochs", p.epochs);
  s.get("learning_rate", p.learning_rate);
}

json sgns_json(const SkipGramParams& p) {
  return {{"dim", p.dim},
          {"window", p.window},
          {"negatives", p.negatives},
          {"epochs", p.epochs},
          {"learning_rate", p.learning_rate}};
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  Section root(j, "");
  std::string condition = std::string(name(cfg.condition)), pairing = "fold";
  std::vector<std::string> methods;
  root.get("condition", condition);
  const auto c = parse_condition(condition);
  if (!c) throw Error("config: condition must be depression or anxiety");
  cfg.condition = *c;
  root.get("methods", methods);
  for (const auto& m : methods) {
    const auto parsed = parse_method(m);
    if (!parsed) throw Error("config: unknown method '" + m + "'");
    cfg.methods.push_back(*parsed);
  }
  root.get("folds", cfg.folds);
  root.get("repetitions", cfg.repetitions);
  root.get("seed", cfg.seed);
  root.get("pairing", pairing);
  if (pairing == "fold") cfg.pairing = PairingUnit::Fold;
  else if (pairing == "individual") cfg.pairing = PairingUnit::Individual;
  else throw Error("config: pairing must be fold or individual");

  auto& s = cfg.settings;
  if (auto sec = root.sub("dmf")) read_train(*sec, s.dmf, s.dmf_side);
  if (auto sec = root.sub("tensor")) read_train(*sec, s.tensor, s.tensor_side);
  if (auto sec = root.sub("herec")) {
    sec->get("dim", s.herec.dim);
    sec->get("epochs", s.herec.epochs);
    sec->get("learning_rate", s.herec.learning_rate);
    sec->get("l2", s.herec.l2);
    sec->get("walks_per_node", s.herec.walks.walks_per_node);
    sec->get("repeats", s.herec.walks.repeats);
    if (auto sg = sec->sub("sgns")) {
      read_sgns(*sg, s.herec.skipgram);
      sg->finish();
    }
    sec->finish();
  }
  if (auto sec = root.sub("graphlets")) {
    sec->get("size", s.graphlet_size);
    sec->get("colored_size", s.colored_graphlet_size);
    sec->finish();
  }
  if (auto sec = root.sub("deepwalk")) {
    sec->get("walks_per_node", s.deepwalk_walks.walks_per_node);
    sec->get("length", s.deepwalk_walks.length);
    sec->get("weighted", s.deepwalk_walks.weighted);
    if (auto sg = sec->sub("sgns")) {
      read_sgns(*sg, s.deepwalk_sgns);
      sg->finish();
    }
    sec->finish();
  }
  if (auto sec = root.sub("metapath2vecpp")) {
    sec->get("walks_per_node", s.mp_walks.walks_per_node);
    sec->get("repeats", s.mp_walks.repeats);
    sec->get("ii_walks_per_node", s.mp_ii_walks.walks_per_node);
    sec->get("ii_length", s.mp_ii_walks.length);
    if (auto sg = sec->sub("sgns")) {
      read_sgns(*sg, s.mp_sgns);
      sg->finish();
    }
    sec->finish();
  }
  if (auto sec = root.sub("logreg")) {
    sec->get("lambda", s.logreg.lambda);
    sec->get("max_iter", s.logreg.max_iter);
    sec->get("tol", s.logreg.tol);
    sec->finish();
  }
  if (auto sec = root.sub("nonnetwork")) {
    sec->get("include_label_scores", s.nonnetwork.include_label_scores);
    sec->finish();
  }
  root.finish();
  check_run_config(cfg);
  return cfg;
}

json to_json(const RunConfig& cfg) {
  const auto& s = cfg.settings;
  std::vector<std::string> methods;
  for (auto m : cfg.methods) methods.emplace_back(name(m));
  return {
      {"condition", name(cfg.condition)},
      {"methods", methods},
      {"folds", cfg.folds},
      {"repetitions", cfg.repetitions},
      {"seed", cfg.seed},
      {"pairing", cfg.pairing == PairingUnit::Fold ? "fold" : "individual"},
      {"dmf", train_json(s.dmf, s.dmf_side)},
      {"tensor", train_json(s.tensor, s.tensor_side)},
      {"herec",
       {{"dim", s.herec.dim},
        {"epochs", s.herec.epochs},
        {"learning_rate", s.herec.learning_rate},
        {"l2", s.herec.l2},
        {"walks_per_node", s.herec.walks.walks_per_node},
        {"repeats", s.herec.walks.repeats},
        {"sgns", sgns_json(s.herec.skipgram)}}},
      {"graphlets", {{"size", s.graphlet_size}, {"colored_size", s.colored_graphlet_size}}},
      {"deepwalk",
       {{"walks_per_node", s.deepwalk_walks.walks_per_node},
        {"length", s.deepwalk_walks.length},
        {"weighted", s.deepwalk_walks.weighted},
        {"sgns", sgns_json(s.deepwalk_sgns)}}},
      {"metapath2vecpp",
       {{"walks_per_node", s.mp_walks.walks_per_node},
        {"repeats", s.mp_walks.repeats},
        {"ii_walks_per_node", s.mp_ii_walks.walks_per_node},
        {"ii_length", s.mp_ii_walks.length},
        {"sgns", sgns_json(s.mp_sgns)}}},
      {"logreg", {{"lambda", s.logreg.lambda}, {"max_iter", s.logreg.max_iter}, {"tol", s.logreg.tol}}},
      {"nonnetwork", {{"include_label_scores", s.nonnetwork.include_label_scores}}},
  };
}

std::string config_hash(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(to_json(cfg).dump());
  return out.str();
}

Dataset load_dataset(const std::filesystem::path& dir) {
  return {read_cohort_csv(dir / "cohort.csv"), read_sms_csv(dir / "sms.csv")};
}

// Evaluation -----------------------------------------------------------------

namespace {

std::vector<NodeId> individuals(std::span<const std::uint32_t> rows) {
  std::vector<NodeId> out;
  for (auto r : rows) out.push_back({NodeKind::Individual, r});
  return out;
}

Eigen::MatrixXd log_counts(const auto& rows, std::size_t n) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = std::log1p(static_cast<double>(rows[i][c]));
  return x;
}

FeatureMatrix embedding_features(const Embedding& emb, std::size_t n, const char* prefix) {
  FeatureMatrix out;
  for (std::size_t c = 0; c < emb.dim(); ++c) out.names.push_back(prefix + std::to_string(c));
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(emb.dim()));
  // Individuals lead the global node order.
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto r = emb.row_of(i);
    if (r >= 0) out.values.row(i) = emb.vectors.row(r);
  }
  return out;
}

/// Network (or survey) features of every individual; never uses target edges.
FeatureMatrix node_features(Method method, const Dataset& data, const Hin& hin, const MethodSettings& s,
                            std::uint64_t seed) {
  const auto n = hin.node_count(NodeKind::Individual);
  switch (method) {
    case Method::Gdv: {
      const auto counts = gdv(homogeneous_view(hin), s.graphlet_size);
      FeatureMatrix out;
      const auto orbits = s.graphlet_size == 4 ? kOrbitCount : std::size_t{4};
      for (std::size_t o = 0; o < orbits; ++o) out.names.push_back("orbit_" + std::to_string(o));
      out.values = log_counts(counts, n).leftCols(static_cast<Eigen::Index>(orbits));
      return out;
    }
    case Method::ColoredGdv: {
      const auto counts = colored_gdv(hin, s.colored_graphlet_size);
      const ColoredLayout layout(s.colored_graphlet_size);
      return {layout.names(), log_counts(counts, n)};
    }
    case Method::Deepwalk: {
      auto walks = s.deepwalk_walks;
      walks.seed = derive_seed(seed, {1});
      auto sg = s.deepwalk_sgns;
      sg.seed = derive_seed(seed, {2});
      return embedding_features(train_skipgram(random_walks(homogeneous_view(hin), walks), sg), n, "dw_");
    }
    case Method::Metapath2vecpp: {
      auto mp = s.mp_walks;
      mp.seed = derive_seed(seed, {1});
      auto ii = s.mp_ii_walks;
      ii.seed = derive_seed(seed, {3});
      auto sg = s.mp_sgns;
      sg.seed = derive_seed(seed, {2});
      return embedding_features(train_skipgram(side_metapath_corpus(hin, mp, ii), sg), n, "mp_");
    }
    case Method::Nonnetwork:
      return nonnetwork_features(data.cohort, s.nonnetwork);
    default:
      throw Error("node_features: method has no feature representation");
  }
}

double training_rate(const std::vector<bool>& labels, std::span<const std::uint32_t> train) {
  std::size_t pos = 0;
  for (auto i : train) pos += labels[i];
  return static_cast<double>(pos) / static_cast<double>(train.size());
}

std::vector<bool> recommender_predictions(Method method, const Hin& hin, std::span<const std::uint32_t> test,
                                          double rate, const MethodSettings& s, std::uint64_t seed) {
  const auto masked = hin.mask_target_edges(individuals(test));
  Eigen::MatrixXd scores;
  switch (method) {
    case Method::Dmf: {
      auto cfg = s.dmf;
      cfg.seed = seed;
      const auto rel = relations_for(s.dmf_side, cfg.negatives_per_positive);
      scores = target_scores(train_dmf(masked, rel, cfg));
      break;
    }
    case Method::Rescal:
    case Method::Dedicom: {
      auto cfg = s.tensor;
      cfg.seed = seed;
      const auto slices = hin_slices(masked, s.tensor_side, cfg.ii_weights);
      scores = method == Method::Rescal ? target_scores(train_rescal(slices, cfg), masked)
                                        : target_scores(train_dedicom(slices, cfg), masked);
      break;
    }
    case Method::Herec: {
      auto cfg = s.herec;
      cfg.seed = seed;
      const auto mps = herec_metapaths();
      scores = herec_scores(masked, mps, cfg).scores;
      // Ranked by the positive-state margin, then cut at the training base rate.
      std::vector<double> margin;
      for (auto i : test) margin.push_back(scores(i, kPositiveState) - scores(i, kNegativeState));
      return calibrate_cutoff(margin, rate);
    }
    default:
      throw Error("recommender_predictions: not a recommender method");
  }
  std::vector<bool> out;
  for (auto i : test) out.push_back(predict_condition(scores(i, kPositiveState), scores(i, kNegativeState)));
  return out;
}

std::vector<bool> classifier_predictions(const FeatureMatrix& x, const std::vector<bool>& labels,
                                         std::span<const std::uint32_t> train, std::span<const std::uint32_t> test,
                                         const LogregParams& params) {
  const auto xtrain = select_rows(x, train);
  const auto xtest = select_rows(x, test);
  const auto scaler = Standardizer::fit(xtrain.values);
  std::vector<bool> y;
  for (auto i : train) y.push_back(labels[i]);
  const auto model = fit_logreg({x.names, scaler.apply(xtrain.values)}, y, params);
  const Eigen::VectorXd p = predict_proba(model, scaler.apply(xtest.values));
  return calibrate_cutoff(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                          training_rate(labels, train));
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep) { return derive_seed(seed, {0x5EED, rep}); }

}  // namespace

MethodResult evaluate_method(const Dataset& data, const RunConfig& cfg, Method method) {
  check_run_config(cfg);
  const auto hin = build_hin(data.cohort, data.sms, cfg.condition);
  const auto labels = mental_health_labels(data.cohort, cfg.condition);
  const auto n = labels.size();
  const auto k = cfg.folds, reps = cfg.repetitions;

  std::vector<FoldAssignment> folds;
  std::vector<std::optional<FeatureMatrix>> features(reps);
  const bool deterministic_features = method == Method::Gdv || method == Method::ColoredGdv || method == Method::Nonnetwork;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto seed = repetition_seed(cfg.seed, r);
    folds.push_back(stratified_kfold(labels, k, seed));
    if (is_recommender(method) || method == Method::Random) continue;
    if (deterministic_features && r > 0) features[r] = features[0];
    else features[r] = node_features(method, data, hin, cfg.settings, derive_seed(seed, {fnv1a(name(method))}));
  }

  MethodResult out;
  out.name = std::string(name(method));
  out.per_fold.resize(reps * k);
  out.predictions.assign(reps, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> fold_preds(reps * k);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t task = 0; task < reps * k; ++task) {
    try {
      const auto r = task / k;
      const auto f = static_cast<std::uint32_t>(task % k);
      const auto train = folds[r].complement(f), test = folds[r].members(f);
      const auto seed = derive_seed(repetition_seed(cfg.seed, r), {fnv1a(name(method)), f});
      if (is_recommender(method)) fold_preds[task] =
            recommender_predictions(method, hin, test, training_rate(labels, train), cfg.settings, seed);
      else if (method == Method::Random) fold_preds[task] = random_guess(training_rate(labels, train), test.size(), seed);
      else fold_preds[task] = classifier_predictions(*features[r], labels, train, test, cfg.settings.logreg);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t task = 0; task < reps * k; ++task) {
    const auto r = task / k;
    const auto test = folds[r].members(static_cast<std::uint32_t>(task % k));
    std::vector<bool> truth;
    for (std::size_t j = 0; j < test.size(); ++j) {
      out.predictions[r][test[j]] = fold_preds[task][j];
      truth.push_back(labels[test[j]]);
    }
    out.per_fold[task] = metrics(confusion(fold_preds[task], truth));
  }
  for (std::size_t m = 0; m < kMetrics.size(); ++m) {
    std::vector<double> v;
    for (const auto& s : out.per_fold) v.push_back(value(s, kMetrics[m]));
    out.summary[m] = mean_std(v);
  }
  return out;
}

namespace {

PairTest pair_test(const std::string& a, const std::string& b, Metric metric, std::span<const double> x,
                   std::span<const double> y) {
  PairTest t{a, b, metric};
  if (std::equal(x.begin(), x.end(), y.begin(), y.end())) return t;  // no non-zero difference: p = 1
  const auto w = wilcoxon_signed_rank(x, y, Alternative::TwoSided);
  t.statistic = w.statistic;
  t.p_raw = t.p_adj = w.p_value;
  t.n_used = w.n_used;
  t.exact = w.exact;
  return t;
}

}  // namespace

EvalReport run_experiment(const Dataset& data, const RunConfig& cfg) {
  check_run_config(cfg);
  std::set<Method> distinct(cfg.methods.begin(), cfg.methods.end());
  if (distinct.size() != cfg.methods.size()) throw Error("run: methods must be distinct");

  EvalReport rep;
  rep.config_hash = config_hash(cfg);
  rep.condition = cfg.condition;
  const auto labels = mental_health_labels(data.cohort, cfg.condition);
  rep.individuals = labels.size();
  rep.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  rep.folds = cfg.folds;
  rep.repetitions = cfg.repetitions;
  for (auto m : cfg.methods) rep.methods.push_back(evaluate_method(data, cfg, m));

  const auto& ms = rep.methods;
  if (cfg.pairing == PairingUnit::Fold) {
    for (auto metric : kMetrics) {
      const auto first = rep.tests.size();
      for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
          std::vector<double> x, y;
          for (const auto& s : ms[i].per_fold) x.push_back(value(s, metric));
          for (const auto& s : ms[j].per_fold) y.push_back(value(s, metric));
          rep.tests.push_back(pair_test(ms[i].name, ms[j].name, metric, x, y));
        }
      std::vector<double> raw;
      for (auto t = first; t < rep.tests.size(); ++t) raw.push_back(rep.tests[t].p_raw);
      const auto adj = bh_fdr(raw);
      for (auto t = first; t < rep.tests.size(); ++t) rep.tests[t].p_adj = adj[t - first];
    }
  } else {
    // Per-individual correctness: accuracy over everyone, recall over actual positives.
    for (auto metric : {Metric::Recall, Metric::Accuracy}) {
      const auto first = rep.tests.size();
      for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
          std::vector<double> x, y;
          for (std::size_t r = 0; r < cfg.repetitions; ++r)
            for (std::size_t v = 0; v < labels.size(); ++v) {
              if (metric == Metric::Recall && !labels[v]) continue;
              x.push_back(ms[i].predictions[r][v] == labels[v]);
              y.push_back(ms[j].predictions[r][v] == labels[v]);
            }
          rep.tests.push_back(pair_test(ms[i].name, ms[j].name, metric, x, y));
        }
      std::vector<double> raw;
      for (auto t = first; t < rep.tests.size(); ++t) raw.push_back(rep.tests[t].p_raw);
      const auto adj = bh_fdr(raw);
      for (auto t = first; t < rep.tests.size(); ++t) rep.tests[t].p_adj = adj[t - first];
    }
  }
  return rep;
}

AblationReport run_ablation(const Dataset& data, const RunConfig& cfg) {
  check_run_config(cfg);
  AblationReport out;
  out.config_hash = config_hash(cfg);
  for (auto combo : ablation_combos()) {
    auto c = cfg;
    c.settings.dmf_side = combo;
    auto res = evaluate_method(data, c, Method::Dmf);
    res.name = combo.label();
    out.rows.push_back({combo, std::move(res)});
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const AblationRow& a, const AblationRow& b) {
    return a.result.summary[0].mean > b.result.summary[0].mean;
  });
  return out;
}

OverlapReport run_overlap(const Dataset& data, const RunConfig& cfg) {
  check_run_config(cfg);
  if (cfg.methods.size() < 2) throw Error("overlap: at least two methods are required");
  OverlapReport out;
  out.config_hash = config_hash(cfg);
  const auto labels = mental_health_labels(data.cohort, cfg.condition);
  for (std::uint32_t i = 0; i < labels.size(); ++i)
    if (labels[i]) out.universe.push_back(i);

  std::map<Method, MethodResult> cache;
  std::map<std::string, int> seen;
  for (auto m : cfg.methods) {
    if (!cache.count(m)) cache.emplace(m, evaluate_method(data, cfg, m));
    const auto& pred = cache.at(m).predictions[0];
    NamedSet s{std::string(name(m)), {}};
    if (const int dup = seen[s.name]++) s.name += " (" + std::to_string(dup + 1) + ")";
    for (auto i : out.universe)
      if (pred[i]) s.members.push_back(i);
    out.correct.push_back(std::move(s));
  }
  out.tests = overlap_analysis(out.correct, out.universe);
  if (out.correct.size() == 3) out.venn = venn3(out.correct[0].members, out.correct[1].members, out.correct[2].members);
  return out;
}

// Output -------------------------------------------------------------------------

namespace {

json metric_json(const MetricSet& s) {
  json undefined = json::array();
  if (s.precision_undefined) undefined.push_back("precision");
  if (s.recall_undefined) undefined.push_back("recall");
  if (s.f1_undefined) undefined.push_back("f1");
  if (s.accuracy_undefined) undefined.push_back("accuracy");
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1},
          {"accuracy", s.accuracy},
          {"undefined", undefined}};
}

json method_json(const MethodResult& m) {
  json summary = json::object(), folds = json::array();
  for (std::size_t i = 0; i < kMetrics.size(); ++i)
    summary[std::string(name(kMetrics[i]))] = {{"mean", m.summary[i].mean}, {"std", m.summary[i].std}};
  for (const auto& s : m.per_fold) folds.push_back(metric_json(s));
  return {{"name", m.name}, {"summary", summary}, {"per_fold", folds}};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

}  // namespace

json to_json(const EvalReport& r) {
  json methods = json::array(), tests = json::array();
  for (const auto& m : r.methods) methods.push_back(method_json(m));
  for (const auto& t : r.tests)
    tests.push_back({{"method_a", t.method_a},
                     {"method_b", t.method_b},
                     {"metric", name(t.metric)},
                     {"statistic", t.statistic},
                     {"p_raw", t.p_raw},
                     {"p_adj", t.p_adj},
                     {"n_used", t.n_used},
                     {"exact", t.exact}});
  return {{"config_hash", r.config_hash},
          {"condition", name(r.condition)},
          {"individuals", r.individuals},
          {"positives", r.positives},
          {"folds", r.folds},
          {"repetitions", r.repetitions},
          {"methods", methods},
          {"tests", tests}};
}

json to_json(const AblationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(method_json(row.result));
  return {{"config_hash", r.config_hash}, {"rows", rows}};
}

json to_json(const OverlapReport& r) {
  json sets = json::array(), tests = json::array();
  for (const auto& s : r.correct) sets.push_back({{"method", s.name}, {"correct_positives", s.members}});
  for (const auto& t : r.tests)
    tests.push_back({{"method_a", t.method_a},
                     {"method_b", t.method_b},
                     {"universe", t.universe},
                     {"a", t.a},
                     {"b", t.b},
                     {"overlap", t.overlap},
                     {"p_value", t.p_value},
                     {"significant", t.significant}});
  json j = {{"config_hash", r.config_hash}, {"universe", r.universe.size()}, {"sets", sets}, {"tests", tests}};
  if (r.venn) j["venn"] = *r.venn;
  return j;
}

void write_report(const std::filesystem::path& dir, const EvalReport& r, bool svg) {
  std::filesystem::create_directories(dir);
  write_json(dir / "report.json", to_json(r));
  auto metrics_csv = open_out(dir / "metrics.csv");
  metrics_csv << "# config_hash=" << r.config_hash << "\nmethod,repetition,fold,metric,value\n";
  for (const auto& m : r.methods)
    for (std::size_t t = 0; t < m.per_fold.size(); ++t)
      for (auto metric : kMetrics)
        metrics_csv << m.name << ',' << t / r.folds << ',' << t % r.folds << ',' << name(metric) << ','
                    << format_real(value(m.per_fold[t], metric)) << '\n';
  auto p_csv = open_out(dir / "pvalues.csv");
  p_csv << "# config_hash=" << r.config_hash << "\nmethod_a,method_b,metric,statistic,p_raw,p_adj\n";
  for (const auto& t : r.tests)
    p_csv << t.method_a << ',' << t.method_b << ',' << name(t.metric) << ',' << format_real(t.statistic) << ','
          << format_real(t.p_raw) << ',' << format_real(t.p_adj) << '\n';
  if (svg) open_out(dir / "metrics.svg") << metrics_svg(r);
}

void write_ablation(const std::filesystem::path& dir, const AblationReport& r) {
  std::filesystem::create_directories(dir);
  write_json(dir / "ablation.json", to_json(r));
  auto csv = open_out(dir / "ablation.csv");
  csv << "# config_hash=" << r.config_hash << "\nrank,combination";
  for (auto m : kMetrics) csv << ',' << name(m) << "_mean," << name(m) << "_std";
  csv << '\n';
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    csv << i + 1 << ',' << r.rows[i].result.name;
    for (const auto& s : r.rows[i].result.summary) csv << ',' << format_real(s.mean) << ',' << format_real(s.std);
    csv << '\n';
  }
}

void write_overlap(const std::filesystem::path& dir, const OverlapReport& r) {
  std::filesystem::create_directories(dir);
  write_json(dir / "overlap.json", to_json(r));
  auto csv = open_out(dir / "overlap.csv");
  csv << "# config_hash=" << r.config_hash << "\nmethod_a,method_b,universe,a,b,overlap,p_value,significant\n";
  for (const auto& t : r.tests)
    csv << t.method_a << ',' << t.method_b << ',' << t.universe << ',' << t.a << ',' << t.b << ',' << t.overlap << ','
        << format_real(t.p_value) << ',' << (t.significant ? "true" : "false") << '\n';
  if (r.venn) {
    auto venn = open_out(dir / "venn.csv");
    static constexpr const char* kRegions[] = {"a_only", "b_only", "c_only", "ab_only", "ac_only", "bc_only", "abc"};
    venn << "# config_hash=" << r.config_hash << "\n# a=" << r.correct[0].name << " b=" << r.correct[1].name
         << " c=" << r.correct[2].name << "\nregion,count\n";
    for (std::size_t i = 0; i < 7; ++i) venn << kRegions[i] << ',' << (*r.venn)[i] << '\n';
  }
}

std::string metrics_svg(const EvalReport& r) {
  constexpr double bar = 18, gap = 30, height = 240, top = 30, left = 40;
  const auto nm = r.methods.size();
  const double group = static_cast<double>(nm) * bar + gap;
  const double width = left + 4 * group + 20;
  const auto random = std::find_if(r.methods.begin(), r.methods.end(), [](const auto& m) { return m.name == "random"; });
  static constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2",
                                             "#edc948", "#9c755f", "#bab0ac", "#ff9da7", "#e15759"};
  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + top + 60 << "\">\n";
  s << "<!-- config_hash=" << r.config_hash << " -->\n";
  auto y_of = [&](double v) { return top + height * (1.0 - std::clamp(v, 0.0, 1.0)); };
  s << "<line x1=\"" << left << "\" y1=\"" << y_of(0) << "\" x2=\"" << width - 10 << "\" y2=\"" << y_of(0)
    << "\" stroke=\"black\"/>\n";
  for (std::size_t g = 0; g < 4; ++g) {
    const double x0 = left + static_cast<double>(g) * group + gap / 2;
    for (std::size_t m = 0; m < nm; ++m) {
      const auto& sum = r.methods[m].summary[g];
      const double x = x0 + static_cast<double>(m) * bar;
      s << "<rect x=\"" << x << "\" y=\"" << y_of(sum.mean) << "\" width=\"" << bar - 2 << "\" height=\""
        << y_of(0) - y_of(sum.mean) << "\" fill=\"" << kPalette[m % 10] << "\"><title>" << r.methods[m].name
        << "</title></rect>\n";
      const double cx = x + (bar - 2) / 2;
      s << "<line x1=\"" << cx << "\" y1=\"" << y_of(sum.mean - sum.std) << "\" x2=\"" << cx << "\" y2=\""
        << y_of(sum.mean + sum.std) << "\" stroke=\"black\"/>\n";
    }
    if (random != r.methods.end()) {
      const double y = y_of(random->summary[g].mean);
      s << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0 + static_cast<double>(nm) * bar + 2
        << "\" y2=\"" << y << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
    }
    s << "<text x=\"" << x0 << "\" y=\"" << y_of(0) + 16 << "\" font-size=\"12\">" << name(kMetrics[g]) << "</text>\n";
  }
  for (std::size_t m = 0; m < nm; ++m)
    s << "<text x=\"" << left + static_cast<double>(m) * 110 << "\" y=\"" << height + top + 50
      << "\" font-size=\"11\" fill=\"" << kPalette[m % 10] << "\">" << r.methods[m].name << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace hinmhp
