#include "hind/hindsight.hpp"

#include <unordered_map>

#include "hind/parallel.hpp"

namespace hind {

std::string sft_task_name(SftTask t) {
  switch (t) {
    case SftTask::cot: return "cot";
    case SftTask::knowledge: return "knowledge";
    case SftTask::answer: return "answer";
  }
  return "?";
}

std::vector<HindsightOutcome> build_hindsight_zero(const std::vector<Sample>& samples,
                                                   Backend& backend,
                                                   const TemplateSet& templates,
                                                   const SamplingParams& params,
                                                   int max_retries, int max_in_flight) {
  auto run_one = [&](const Sample& sample) {
    HindsightOutcome out;
    out.sample_id = sample.sample_id;
    std::string prompt = templates.render(
        TemplateId::hindsight_zero,
        {{"question", sample.question}, {"answer", canonical_answer(sample)}});
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
      out.attempts = attempt + 1;
      SamplingParams p = params;
      p.seed = params.seed + attempt;
      try {
        GenerationResult gen = backend.generate(
            Role::hindsight_zero, prompt, sample.image_ref, p);
        out.outcome = parse_hindsight(gen.text);
        out.backend_error.reset();
      } catch (const BackendError& e) {
        out.backend_error = e.what();
        out.outcome = ParseOutcome{};
        out.outcome.defects.push_back(Defect::missing_section);
      }
      if (!out.outcome.fatal()) break;
    }
    return out;
  };
  return parallel_map(samples, run_one, max_in_flight);
}

namespace {

const HindsightZeroRecord* record_of(const HindsightOutcome& o) {
  return o.outcome.record ? &*o.outcome.record : nullptr;
}

std::unordered_map<std::string, const Sample*> index_samples(
    const std::vector<Sample>& samples) {
  std::unordered_map<std::string, const Sample*> by_id;
  for (const auto& s : samples) by_id[s.sample_id] = &s;
  return by_id;
}

}  // namespace

std::pair<std::vector<SftRecord>, BuildStats> build_cot_sft(
    const std::vector<HindsightOutcome>& outcomes, const std::vector<Sample>& samples,
    const TemplateSet& templates) {
  auto by_id = index_samples(samples);
  std::vector<SftRecord> records;
  BuildStats stats;
  for (const auto& o : outcomes) {
    ++stats.total;
    stats.retries_used += o.attempts - 1;
    const auto* rec = record_of(o);
    if (!rec) continue;
    ++stats.parsed_ok;
    const Sample* sample = by_id.at(o.sample_id);
    std::string trajectory = cot_text(*rec) + "\n" + rec->final_answer;
    if (contains_answer(trajectory, sample->answers) == 0) continue;
    SftRecord r;
    r.sample_id = o.sample_id;
    r.task = SftTask::cot;
    r.prompt = templates.render(TemplateId::cot_gen, {{"question", sample->question}});
    r.image_ref = sample->image_ref;
    r.target = cot_text(*rec);
    records.push_back(std::move(r));
    ++stats.cot_kept;
  }
  return {std::move(records), stats};
}

std::pair<std::vector<SftRecord>, BuildStats> build_knowledge_sft(
    const std::vector<HindsightOutcome>& outcomes, const std::vector<Sample>& samples,
    const TemplateSet& templates, std::uint64_t rng_seed) {
  auto by_id = index_samples(samples);
  std::vector<SftRecord> records;
  BuildStats stats;
  for (const auto& o : outcomes) {
    ++stats.total;
    stats.retries_used += o.attempts - 1;
    const auto* rec = record_of(o);
    if (!rec) continue;
    ++stats.parsed_ok;
    const Sample* sample = by_id.at(o.sample_id);
    std::vector<std::string> hits;
    for (const auto& piece : rec->knowledge) {
      if (contains_answer(piece, sample->answers) > 0) hits.push_back(piece);
    }
    if (hits.empty()) continue;
    DetRng rng(fnv1a64(o.sample_id, rng_seed ^ 0x6b6e6f77u));  // per-sample stream
    SftRecord r;
    r.sample_id = o.sample_id;
    r.task = SftTask::knowledge;
    r.prompt = templates.render(TemplateId::know_gen, {{"question", sample->question}});
    r.image_ref = sample->image_ref;
    r.target = hits[rng.below(hits.size())];
    records.push_back(std::move(r));
    ++stats.knowledge_kept;
  }
  return {std::move(records), stats};
}

std::vector<SftRecord> build_answer_sft(const std::vector<HindsightOutcome>& outcomes,
                                        const std::vector<Sample>& samples,
                                        const TemplateSet& templates, std::uint64_t rng_seed,
                                        AnswerVariant variant,
                                        AnswerTargetKind target_kind) {
  auto by_id = index_samples(samples);
  std::vector<SftRecord> records;
  for (const auto& o : outcomes) {
    const Sample* sample = by_id.at(o.sample_id);
    HindsightZeroRecord empty;
    const HindsightZeroRecord& rec = o.outcome.record ? *o.outcome.record : empty;

    std::vector<std::string> knowledge = rec.knowledge;
    DetRng rng(fnv1a64(o.sample_id, rng_seed ^ 0x616e7377u));
    det_shuffle(knowledge, rng);

    // Imperfect records contribute whatever parsed; an entirely empty context
    // still yields a record (the full train set is kept), so the structured
    // render is used directly rather than render_answer_prompt's
    // non-degenerate contract.
    Bindings b{{"question", sample->question},
               {"knowledge", format_knowledge_block(knowledge)}};
    std::string prompt;
    if (variant == AnswerVariant::cot_know) {
      b["cot_process"] = cot_text(rec);
      prompt = templates.render(TemplateId::answer_cot_know, b);
    } else {
      prompt = templates.render(TemplateId::answer_know, b);
    }

    SftRecord r;
    r.sample_id = o.sample_id;
    r.task = SftTask::answer;
    r.prompt = std::move(prompt);
    r.image_ref = sample->image_ref;
    if (target_kind == AnswerTargetKind::multiple_choice) {
      if (!sample->choices || !sample->correct_choice_index) {
        throw DomainError("sample " + sample->sample_id + " lacks multiple-choice data");
      }
      r.target = (*sample->choices)[*sample->correct_choice_index];
    } else {
      r.target = canonical_answer(*sample);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace hind
