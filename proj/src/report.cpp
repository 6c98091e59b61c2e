#include "hind/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hind/parallel.hpp"

namespace hind {

CorrectnessThreshold threshold_from_name(const std::string& name) {
  if (name == "any_match" || name == "gt0") return CorrectnessThreshold::any_match;
  if (name == "one_third") return CorrectnessThreshold::one_third;
  if (name == "full") return CorrectnessThreshold::full;
  throw ConfigError("unknown correctness threshold: " + name);
}

namespace {

bool is_correct(double vqa, CorrectnessThreshold t) {
  switch (t) {
    case CorrectnessThreshold::any_match: return vqa > 0.0;
    case CorrectnessThreshold::one_third: return vqa >= 1.0 / 3.0 - 1e-12;
    case CorrectnessThreshold::full: return vqa >= 1.0 - 1e-12;
  }
  return false;
}

}  // namespace

EvalReport evaluate(const std::map<std::string, EvalInput>& predictions,
                    const std::vector<Sample>& samples,
                    const std::map<std::string, std::vector<std::string>>& contexts,
                    CorrectnessThreshold threshold) {
  std::vector<std::string> missing;
  for (const auto& s : samples) {
    if (!predictions.count(s.sample_id)) missing.push_back("prediction:" + s.sample_id);
    if (!contexts.count(s.sample_id)) missing.push_back("context:" + s.sample_id);
  }
  if (!missing.empty()) {
    std::string joined = join(missing, ", ");
    throw DomainError("evaluate: missing keys [" + joined + "]");
  }

  EvalReport report;
  double vqa_sum = 0.0;
  int prr_count = 0, mc_correct = 0, mc_total = 0;
  for (const auto& sample : samples) {
    const EvalInput& pred = predictions.at(sample.sample_id);
    PerSampleRow row;
    row.sample_id = sample.sample_id;
    row.vqa = sample.answers.empty() ? 0.0 : vqa_score(pred.answer, sample.answers);
    row.context_hit = prr_at_k(contexts.at(sample.sample_id), sample.answers);
    row.correct = is_correct(row.vqa, threshold);
    if (sample.choices && sample.correct_choice_index && pred.predicted_choice) {
      row.mc = mc_accuracy(*pred.predicted_choice, *sample.correct_choice_index);
      mc_correct += *row.mc;
      ++mc_total;
    }
    vqa_sum += row.vqa;
    prr_count += row.context_hit ? 1 : 0;
    ++report.confusion[row.context_hit ? 1 : 0][row.correct ? 1 : 0];
    report.per_sample.push_back(std::move(row));
    ++report.n;
  }
  if (report.n > 0) {
    report.mean_vqa_score = vqa_sum / report.n;
    report.prr_at_k = static_cast<double>(prr_count) / report.n;
  }
  if (mc_total > 0) report.mc_accuracy = static_cast<double>(mc_correct) / mc_total;
  return report;
}

ConfHitsHistogram confidence_hits_histogram(const std::vector<KnowledgeCandidate>& candidates,
                                            int bin_count) {
  if (bin_count < 1) throw DomainError("bin_count must be >= 1");
  ConfHitsHistogram histogram;
  histogram.bin_count = bin_count;
  std::map<std::pair<int, int>, int> cells;
  for (const auto& c : candidates) {
    int bin = std::min(static_cast<int>(c.confidence * bin_count), bin_count - 1);
    ++cells[{c.hit_count, bin}];
    ++histogram.total;
  }
  for (const auto& [key, count] : cells) {
    histogram.rows.push_back({key.first, key.second, count});
  }
  return histogram;
}

std::string histogram_csv(const ConfHitsHistogram& histogram) {
  std::ostringstream out;
  out << "hits,confidence_lo,confidence_hi,count\n";
  double width = 1.0 / histogram.bin_count;
  char buf[128];
  for (const auto& row : histogram.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%d\n", row.hits, row.bin * width,
                  (row.bin + 1) * width, row.count);
    out << buf;
  }
  return out.str();
}

std::vector<SweepRow> knowledge_shots_sweep(const std::vector<Sample>& samples,
                                            Backend& backend, const TemplateSet& templates,
                                            const std::vector<int>& k_values,
                                            const SamplingParams& knowledge_params,
                                            const SamplingParams& answer_params,
                                            int max_in_flight) {
  if (k_values.empty()) throw ConfigError("sweep needs at least one k");
  if (!std::is_sorted(k_values.begin(), k_values.end())) {
    throw ConfigError("sweep k_values must be sorted ascending");
  }
  int max_k = k_values.back();
  if (max_k < 1) throw ConfigError("sweep k must be >= 1");

  struct PoolEntry {
    std::vector<std::string> knowledge;
  };
  auto pools = parallel_map(
      samples,
      [&](const Sample& sample) {
        PoolEntry entry;
        std::string prompt =
            templates.render(TemplateId::know_gen, {{"question", sample.question}});
        for (int i = 0; i < max_k; ++i) {
          SamplingParams p = knowledge_params;
          p.seed = knowledge_params.seed + i;
          entry.knowledge.push_back(
              backend.generate(Role::knowledge_generator_kepo, prompt, sample.image_ref, p)
                  .text);
        }
        return entry;
      },
      max_in_flight);

  std::vector<SweepRow> rows;
  for (int k : k_values) {
    double vqa_sum = 0.0;
    int prr_count = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Sample& sample = samples[i];
      std::vector<std::string> contexts(pools[i].knowledge.begin(),
                                        pools[i].knowledge.begin() + k);
      if (prr_at_k(contexts, sample.answers)) ++prr_count;
      std::string prompt =
          templates.render_answer_prompt(sample.question, std::nullopt, contexts);
      SamplingParams p = answer_params;
      GenerationResult gen =
          backend.generate(Role::answer_generator, prompt, sample.image_ref, p);
      vqa_sum += vqa_score(gen.text, sample.answers);
    }
    SweepRow row;
    row.k = k;
    row.prr = samples.empty() ? 0.0 : static_cast<double>(prr_count) / samples.size();
    row.score = samples.empty() ? 0.0 : vqa_sum / samples.size();
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "k,prr_at_k,vqa_score\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", row.k, row.prr, row.score);
    out << buf;
  }
  return out.str();
}

std::string report_summary(const EvalReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "n=%d  mean_vqa_score=%.4f  prr_at_k=%.4f", report.n,
                report.mean_vqa_score, report.prr_at_k);
  out << buf;
  if (report.mc_accuracy) {
    std::snprintf(buf, sizeof(buf), "  mc_accuracy=%.4f", *report.mc_accuracy);
    out << buf;
  }
  out << "\nconfusion (context_hit x correct):\n";
  std::snprintf(buf, sizeof(buf), "  hit,correct=%d  hit,wrong=%d\n  miss,correct=%d  miss,wrong=%d\n",
                report.confusion[1][1], report.confusion[1][0], report.confusion[0][1],
                report.confusion[0][0]);
  out << buf;
  return out.str();
}

}  // namespace hind
