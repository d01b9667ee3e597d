//
// Copyright 2026 The domlex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Acceptance runner: one PASS/FAIL line per property, exit status 1 if any
// property fails. Every check runs on synthetic or hand-built fixtures and
// compares against the brute-force references in testing.h.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "domlex/code_switch.h"
#include "domlex/context_anchor.h"
#include "domlex/interp_retrieval.h"
#include "domlex/pipeline.h"
#include "domlex/retrieval.h"
#include "domlex/spring_network.h"
#include "domlex/static_align.h"
#include "domlex/text_util.h"
#include "testing.h"

namespace domlex {
namespace {

namespace t = testing;

// Collects failed conditions for one criterion.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void Note(const std::string& s) { notes_.push_back(s); }
  bool failed() const { return failed_; }
  std::string Detail() const {
    std::string out;
    for (const auto& s : failed_ ? failures_ : notes_) out += (out.empty() ? "" : "; ") + s;
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_, notes_;
};

std::string Num(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

std::map<std::string, std::string> Top1(const EmbeddingSpace& src,
                                        const EmbeddingSpace& tgt,
                                        RetrievalMetric metric) {
  std::map<std::string, std::string> out;
  for (const auto& p : Induce(src, tgt, metric).pairs) {
    out[src.vocab.Word(p.source)] = tgt.vocab.Word(p.target);
  }
  return out;
}

void RotationRecovery(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto f = t::MakeRotationFixture(1000, 50, 2026);
  SelfLearnConfig config;
  config.rng_seed = 1;
  const auto model = SelfLearn(f.src, f.tgt, config);
  const auto ms = MapSpace(f.src, model, Side::kSource);
  const auto mt = MapSpace(f.tgt, model, Side::kTarget);
  const auto report = EvaluatePAt1(Top1(ms, mt, RetrievalMetric::kCsls), f.gold);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.Expect(report.p_at_1 >= 0.99, "P@1 " + Num(report.p_at_1) + " < 0.99");
  c.Expect(report.evaluated_count == 1000, "not every word evaluated");
  c.Expect(seconds < 60.0, "took " + Num(seconds) + " s");
  c.Note("P@1 " + Num(report.p_at_1) + " in " + Num(seconds) + " s");
}

void CslsOracle(Checker& c) {
  SplitMix64 shape(77);
  double worst = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const auto n = static_cast<Eigen::Index>(5 + shape.Below(96));
    const auto m = static_cast<Eigen::Index>(5 + shape.Below(96));
    const auto d = static_cast<Eigen::Index>(2 + shape.Below(20));
    const size_t k = 1 + shape.Below(5);
    const Matrix x = t::RandomGaussian(n, d, 10 + instance);
    const Matrix y = t::RandomGaussian(m, d, 9000 + instance);
    const double err = (Csls(UnitRows(x), UnitRows(y), k) - t::BruteForceCsls(x, y, k))
                           .cwiseAbs()
                           .maxCoeff();
    worst = std::max(worst, err);
    c.Expect(err <= 1e-9, "instance " + std::to_string(instance) + " error " + Num(err));
  }
  c.Note("100 instances, max error " + Num(worst));
}

void AnchorMeans(Checker& c) {
  const size_t cap = kDefaultMaxContexts;
  const auto words = t::Words("w", 40);
  std::vector<size_t> counts;
  for (size_t i = 0; i < words.size(); ++i) counts.push_back(1 + i % 25);
  const Matrix centers = t::RandomGaussian(40, 16, 5);
  const auto dump = t::MakeDump(words, centers, counts, 0.5, 6);
  double worst = 0;
  size_t exact_checked = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    const auto pos = dump.OccurrencesOf(words[i]);
    const Vector got = AverageAnchor(words[i], dump, cap, 3);
    if (pos.size() <= cap) {
      std::vector<double> mean(16, 0.0);
      for (size_t p : pos) {
        for (Eigen::Index k = 0; k < 16; ++k) mean[k] += dump.vectors(static_cast<Eigen::Index>(p), k);
      }
      for (Eigen::Index k = 0; k < 16; ++k) {
        worst = std::max(worst, std::abs(got(k) - mean[k] / static_cast<double>(pos.size())));
      }
      ++exact_checked;
    }
    // Sampling is keyed by seed and word only.
    c.Expect(got == AverageAnchor(words[i], dump, cap, 3), "anchor of " + words[i] + " changed");
  }
  c.Expect(worst <= 1e-6, "mean error " + Num(worst));
  const auto a = BuildAnchorTable(dump, Vocabulary(words), cap, 11);
  const auto b = BuildAnchorTable(dump, Vocabulary(words), cap, 11);
  c.Expect(a.space.matrix == b.space.matrix, "anchor table not reproducible");
  const auto other = BuildAnchorTable(dump, Vocabulary(words), cap, 12);
  c.Expect(!(other.space.matrix == a.space.matrix), "seed has no effect over the cap");
  c.Note(std::to_string(exact_checked) + " exact means, max error " + Num(worst));
}

// Every trainable scalar of a network, in a fixed order.
std::vector<double*> Parameters(SpringNetwork& net) {
  std::vector<double*> out;
  auto add = [&out](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  };
  for (FeedForward* f : {&net.src, &net.tgt}) {
    if (f == &net.tgt && net.shared) break;
    add(f->w1);
    add(f->b1);
    add(f->w2);
    add(f->b2);
  }
  return out;
}

void SpringObjective(Checker& c) {
  double worst = 0;
  for (size_t d : {2, 4, 8}) {
    for (size_t j : {1, 2, 3}) {
      SpringNetwork net = SpringNetwork::Initialize(d, 2 * d, d * 10 + j);
      SplitMix64 rng(d + j);
      for (double* p : Parameters(net)) *p = 0.5 * rng.Normal();
      SpringBatch batch;
      batch.negatives_per_pair = j;
      const auto dd = static_cast<Eigen::Index>(d);
      batch.src_inputs = t::RandomGaussian(4, dd, d * 3 + j);
      batch.tgt_inputs = t::RandomGaussian(4, dd, d * 5 + j);
      batch.negative_inputs = t::RandomGaussian(4 * static_cast<Eigen::Index>(j), dd, d * 7 + j);
      auto lg = ComputeLossAndGradient(net, batch);
      auto analytic = Parameters(lg.gradient);
      auto params = Parameters(net);
      for (size_t p = 0; p < params.size(); ++p) {
        const double saved = *params[p];
        *params[p] = saved + 1e-6;
        const double up = ComputeLossAndGradient(net, batch).loss;
        *params[p] = saved - 1e-6;
        const double down = ComputeLossAndGradient(net, batch).loss;
        *params[p] = saved;
        const double numeric = (up - down) / 2e-6;
        const double scale = std::max({std::abs(numeric), std::abs(*analytic[p]), 1e-6});
        worst = std::max(worst, std::abs(numeric - *analytic[p]) / scale);
      }
    }
  }
  c.Expect(worst <= 1e-4, "gradient relative error " + Num(worst));

  const auto task = t::MakeSpringTask(200, 8, 21);
  SpringTrainConfig config;
  config.epochs = 40;
  config.learning_rate = 1e-2;
  config.batch_size = 32;
  config.negatives_per_pair = 5;
  config.rng_seed = 3;
  const auto result = TrainSpring(task.src, task.tgt, task.induced, config);
  InducedDictionary train = task.induced;
  train.pairs = result.training_pairs;
  std::vector<std::vector<size_t>> negatives;
  for (size_t i = 0; i < train.pairs.size(); ++i) {
    negatives.push_back(SampleNegatives(i, train, 5, DeriveSeed(3, {0})));
  }
  const auto before = t::MeanPairCosines(task.src.matrix, task.tgt.matrix, train, negatives);
  const auto after = t::MeanPairCosines(Unify(task.src, result.network, Side::kSource).matrix,
                                        Unify(task.tgt, result.network, Side::kTarget).matrix,
                                        train, negatives);
  const double rise = after.positive - before.positive;
  c.Expect(rise >= 0.1, "positive cosine rose by " + Num(rise));
  c.Expect(after.negative <= before.negative, "negative cosine rose from " +
                                                  Num(before.negative) + " to " +
                                                  Num(after.negative));

  const auto small = t::MakeSpringTask(60, 6, 5);
  SpringTrainConfig slow;
  slow.epochs = 30;
  slow.learning_rate = 1e-3;
  slow.batch_size = 60;
  slow.negatives_per_pair = 3;
  slow.optimizer = SpringOptimizer::kSgd;
  slow.resample_negatives = false;
  const auto curve = TrainSpring(small.src, small.tgt, small.induced, slow).epoch_losses;
  for (size_t e = 1; e < curve.size(); ++e) {
    c.Expect(curve[e] <= curve[e - 1] + 1e-6, "loss rose at epoch " + std::to_string(e));
  }
  c.Note("gradient error " + Num(worst) + ", positive +" + Num(rise) + ", negative " +
         Num(before.negative) + " -> " + Num(after.negative));
}

void Interpolation(Checker& c) {
  // lambda = 0 against a retriever that has no anchors at all.
  for (auto metric : {RetrievalMetric::kCosine, RetrievalMetric::kCsls}) {
    const auto us = MakeSpace(t::Words("s", 30), t::RandomGaussian(30, 6, 1));
    const auto ut = MakeSpace(t::Words("t", 35), t::RandomGaussian(35, 6, 2));
    const auto as = MakeSpace(t::Words("s", 30), t::RandomGaussian(30, 6, 3));
    const auto at = MakeSpace(t::Words("t", 35), t::RandomGaussian(35, 6, 4));
    InterpolatedRetriever with(us, ut, &as, &at, metric, 3);
    InterpolatedRetriever without(us, ut, nullptr, nullptr, metric, 3);
    for (const auto& w : us.vocab.words()) {
      const auto a = with.Translate(w, 0.0, 35), b = without.Translate(w, 0.0, 35);
      bool same = a.candidates.size() == b.candidates.size();
      for (size_t i = 0; same && i < a.candidates.size(); ++i) {
        same = a.candidates[i].word == b.candidates[i].word;
      }
      c.Expect(same, "ranking of " + w + " differs at lambda 0");
    }
  }

  size_t changes = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto us = MakeSpace(t::Words("s", 3), t::RandomGaussian(3, 3, 100 + seed));
    const auto ut = MakeSpace(t::Words("t", 6), t::RandomGaussian(6, 3, 200 + seed));
    const auto as = MakeSpace(t::Words("s", 3), t::RandomGaussian(3, 3, 300 + seed));
    const auto at = MakeSpace(t::Words("t", 6), t::RandomGaussian(6, 3, 400 + seed));
    InterpolatedRetriever r(us, ut, &as, &at);
    for (size_t row = 0; row < 3; ++row) {
      const auto ri = static_cast<Eigen::Index>(row);
      std::vector<double> s, a;
      for (Eigen::Index j = 0; j < 6; ++j) {
        s.push_back(t::NaiveCosine(us.matrix, ri, ut.matrix, j));
        a.push_back(t::NaiveCosine(as.matrix, ri, at.matrix, j));
      }
      const auto crossings = t::Crossovers(s, a);
      size_t prev = *r.Best(row, 0.0);
      const int steps = 2000;
      for (int k = 1; k <= steps; ++k) {
        const double lo = 3.0 * (k - 1) / steps, hi = 3.0 * k / steps;
        const size_t cur = *r.Best(row, hi);
        if (cur == prev) continue;
        ++changes;
        bool explained = false;
        for (double x : crossings) explained = explained || (x >= lo - 1e-9 && x <= hi + 1e-9);
        c.Expect(explained, "argmax changed away from any crossover near " + Num(hi));
        prev = cur;
      }
    }
  }
  c.Expect(changes > 0, "no argmax change observed");

  auto circle = [](double a0, double a1) {
    Matrix m(2, 2);
    m << std::cos(a0), std::sin(a0), std::cos(a1), std::sin(a1);
    return m;
  };
  const Matrix us = circle(2.3, 1.8), ut = circle(3.1, 2.8);
  const Matrix as = circle(3.1, 1.4), at = circle(1.7, 1.3);
  const auto grid = DefaultLambdaGrid();
  const auto oracle = t::OracleRoundTrip(us, ut, as, at, grid);
  const auto su = MakeSpace({"s0", "s1"}, us), st = MakeSpace({"t0", "t1"}, ut);
  const auto sa = MakeSpace({"s0", "s1"}, as), ta = MakeSpace({"t0", "t1"}, at);
  InterpolatedRetriever forward(su, st, &sa, &ta);
  const auto sweep = TuneLambda({"s0", "s1"}, forward, forward.Reversed(), grid);
  c.Expect(oracle.best_lambda == 0.5, "oracle optimum is " + Num(oracle.best_lambda));
  c.Expect(sweep.best_lambda == oracle.best_lambda,
           "tune_lambda chose " + Num(sweep.best_lambda));
  c.Note(std::to_string(changes) + " argmax changes all at crossovers, tuned lambda " +
         Num(sweep.best_lambda));
}

void CodeSwitching(Checker& c) {
  // G = D = 8; b sits exactly on the boundary and stays general.
  const auto table = BuildFrequencyTable({"a b c d", "a a e f"}, {"a b g g", "c c a h"});
  const std::map<std::string, WordClass> want{
      {"a", WordClass::kGeneral}, {"b", WordClass::kGeneral}, {"c", WordClass::kDomain},
      {"d", WordClass::kGeneral}, {"g", WordClass::kDomain},  {"h", WordClass::kDomain}};
  for (const auto& [w, cls] : want) c.Expect(ClassifyWord(w, table) == cls, "class of " + w);
  const auto skew = BuildFrequencyTable({"x y y y"}, {"x x z z z z z z"});
  c.Expect(ClassifyWord("x", skew) == WordClass::kGeneral, "unequal-size boundary");

  BilingualDictionary dict("cs");
  dict.Add("a", "A");
  dict.Add("c", "C");
  dict.Add("g", "G");
  dict.Add("h", "H");

  const std::vector<std::string> mixed{"a b c", "  a\t\tc  g b ", "", "d e f"};
  CodeSwitchConfig identity;
  identity.alpha = 0.0;
  identity.gamma = 1.0;
  c.Expect(SwitchCorpus(mixed, dict, table, identity).first == mixed, "alpha 0 changed bytes");

  CodeSwitchConfig all;
  all.alpha = 1.0;
  all.beta = 1.0;
  all.gamma = 0.0;
  const auto full = SwitchCorpus(mixed, dict, table, all);
  c.Expect(full.second.tokens_replaced == full.second.tokens_dictionary_covered &&
               full.second.tokens_dictionary_covered == 5,
           "alpha = beta = 1 left covered tokens");
  c.Expect(full.first[1] == "  A\t\tC  G b ", "separators not preserved");

  SplitMix64 rng(99);
  const std::vector<std::string> pool{"a", "b", "c", "d", "e", "g", "h"};
  std::vector<std::string> corpus;
  for (int i = 0; i < 10000; ++i) {
    std::string s = "d";
    const uint64_t len = 2 + rng.Below(6);
    for (uint64_t k = 0; k < len; ++k) s += " " + pool[rng.Below(pool.size())];
    corpus.push_back(s);
  }
  std::string rates;
  for (auto [alpha, beta] : {std::pair{0.5, 0.5}, std::pair{0.8, 0.6}, std::pair{1.0, 0.4}}) {
    CodeSwitchConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.gamma = 1.0;
    cfg.rng_seed = 4;
    const auto r = SwitchCorpus(corpus, dict, table, cfg).second;
    const double n = static_cast<double>(r.tokens_dictionary_covered);
    const double p = alpha * beta;
    const double rate = static_cast<double>(r.tokens_replaced) / n;
    const double z = std::abs(rate - p) / std::sqrt(p * (1 - p) / n);
    c.Expect(z <= 3.0, "rate " + Num(rate) + " vs " + Num(p));
    rates += (rates.empty() ? "" : ", ") + Num(z) + "σ";

    const auto again = SwitchCorpus(corpus, dict, table, cfg);
    std::ostringstream first, second;
    for (const auto& s : SwitchCorpus(corpus, dict, table, cfg).first) first << s << '\n';
    for (const auto& s : again.first) second << s << '\n';
    c.Expect(Sha256Hex(first.str()) == Sha256Hex(second.str()), "same seed, different output");
  }
  c.Note("rate deviations " + rates);
}

void Evaluator(Checker& c) {
  BilingualDictionary gold;
  gold.Add("a", "x");
  gold.Add("a", "y");
  gold.Add("b", "z");
  gold.Add("c", "w");
  gold.Add("d", "v");
  const auto r = EvaluatePAt1({{"a", "y"}, {"b", "x"}, {"d", "v"}, {"e", "q"}}, gold);
  c.Expect(r.p_at_1 == 2.0 / 3.0, "P@1 " + Num(r.p_at_1));
  c.Expect(r.correct_count == 2 && r.evaluated_count == 3 && r.skipped_oov_count == 1,
           "counts");
  c.Expect(FormatReportTsv(r) == "a\ty\tcorrect\nb\tx\twrong\nc\t\toov\nd\tv\tcorrect\n",
           "report rows");

  BilingualDictionary multi;
  for (const char* tgt : {"p", "q", "r"}) multi.Add("m", tgt);
  multi.Add("n", "p");
  const auto r2 = EvaluatePAt1({{"m", "r"}, {"n", "r"}}, multi);
  c.Expect(r2.p_at_1 == 0.5, "multi-translation P@1 " + Num(r2.p_at_1));
  const auto r3 = EvaluatePAt1({}, multi);
  c.Expect(r3.p_at_1 == 0.0 && r3.skipped_oov_count == 2, "all-OOV accounting");
}

void Determinism(Checker& c) {
  t::TempDir dir;
  const auto config = LoadPipelineConfig(t::WritePipelineFixture(dir.path(), {}));
  const auto first = RunPipeline(config);
  const auto second = RunPipeline(config);
  c.Expect(first.manifest.output_hashes == second.manifest.output_hashes,
           "output hashes differ between runs");
  c.Expect(first.manifest.output_hashes.size() >= 15,
           "only " + std::to_string(first.manifest.output_hashes.size()) + " outputs hashed");
  c.Note(std::to_string(first.manifest.output_hashes.size()) + " outputs identical, P@1 " +
         Num(first.report.p_at_1));
}

}  // namespace
}  // namespace domlex

int main() {
  using domlex::Checker;
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
      {"rotation recovery", domlex::RotationRecovery},
      {"CSLS oracle equivalence", domlex::CslsOracle},
      {"average anchors", domlex::AnchorMeans},
      {"spring objective and training", domlex::SpringObjective},
      {"similarity interpolation", domlex::Interpolation},
      {"code switching", domlex::CodeSwitching},
      {"P@1 evaluator", domlex::Evaluator},
      {"pipeline determinism", domlex::Determinism},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Checker c;
    std::string detail;
    try {
      criteria[i].second(c);
      detail = c.Detail();
    } catch (const std::exception& e) {
      c.Expect(false, "");
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (c.failed() ? "FAIL" : "PASS") << "  " << (i + 1) << "  "
              << criteria[i].first << (detail.empty() ? "" : "  (" + detail + ")") << '\n';
    failed += c.failed();
  }
  return failed == 0 ? 0 : 1;
}
