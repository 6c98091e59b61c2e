#include "hind/kepo.hpp"

#include <algorithm>
#include <cmath>

namespace hind {

std::string provenance_name(PairProvenance p) {
  return p == PairProvenance::native ? "native" : "cross_sample_negative";
}

std::vector<KnowledgeCandidate> sample_candidates(const Sample& sample, Backend& backend,
                                                  const TemplateSet& templates, int n,
                                                  const SamplingParams& params, long seed_base,
                                                  std::vector<std::string>* warnings) {
  std::string prompt =
      templates.render(TemplateId::know_gen, {{"question", sample.question}});
  std::vector<KnowledgeCandidate> candidates;
  for (int i = 0; i < n; ++i) {
    SamplingParams p = params;
    p.seed = seed_base + i;
    try {
      GenerationResult gen =
          backend.generate(Role::knowledge_generator_hdft, prompt, sample.image_ref, p);
      if (gen.token_logprobs.empty()) {
        if (warnings)
          warnings->push_back(sample.sample_id + ": empty generation at seed " +
                              std::to_string(p.seed));
        continue;
      }
      KnowledgeCandidate c;
      c.sample_id = sample.sample_id;
      c.text = gen.text;
      c.token_logprobs = gen.logprob_values();
      c.confidence = confidence(c.token_logprobs);
      c.hit_count = contains_answer(c.text, sample.answers);
      c.hit = c.hit_count > 0;
      c.seed = p.seed;
      candidates.push_back(std::move(c));
    } catch (const BackendError& e) {
      if (warnings) warnings->push_back(sample.sample_id + ": " + e.what());
    }
  }
  return candidates;
}

Rescorer backend_rescorer(Backend& backend, Role role) {
  return [&backend, role](const std::string& prompt, const std::string& text) {
    auto logprobs = backend.score(role, prompt, std::nullopt, text);
    std::vector<double> values;
    values.reserve(logprobs.size());
    for (const auto& t : logprobs) values.push_back(t.logprob);
    return confidence(values);
  };
}

namespace {

// Candidates arrive in sampling-seed order, so strict comparison keeps the
// earliest seed on ties.
const KnowledgeCandidate* min_confidence(const std::vector<const KnowledgeCandidate*>& set) {
  const KnowledgeCandidate* best = nullptr;
  for (const auto* c : set) {
    if (!best || c->confidence < best->confidence) best = c;
  }
  return best;
}

const KnowledgeCandidate* max_confidence(const std::vector<const KnowledgeCandidate*>& set) {
  const KnowledgeCandidate* best = nullptr;
  for (const auto* c : set) {
    if (!best || c->confidence > best->confidence) best = c;
  }
  return best;
}

std::vector<PreferencePair> build_pairs_impl(
    const std::map<std::string, std::vector<KnowledgeCandidate>>& candidates_by_sample,
    const std::vector<Sample>& samples, const TemplateSet& templates, std::uint64_t rng_seed,
    const Rescorer& rescorer, bool use_confidence, std::vector<std::string>* warnings) {
  // Pool for cross-sample negatives: every candidate, tagged by owner.
  std::vector<const KnowledgeCandidate*> all_candidates;
  for (const auto& [sid, cands] : candidates_by_sample) {
    for (const auto& c : cands) all_candidates.push_back(&c);
  }

  std::vector<PreferencePair> pairs;
  for (const auto& sample : samples) {
    auto it = candidates_by_sample.find(sample.sample_id);
    if (it == candidates_by_sample.end() || it->second.empty()) continue;

    std::vector<const KnowledgeCandidate*> hits, misses;
    for (const auto& c : it->second) (c.hit ? hits : misses).push_back(&c);
    if (hits.empty()) continue;  // only unhelpful knowledge: omitted

    std::string prompt =
        templates.render(TemplateId::know_gen, {{"question", sample.question}});
    DetRng rng(fnv1a64(sample.sample_id, rng_seed ^ 0x6b65706fu));

    auto emit = [&](const KnowledgeCandidate* chosen, const KnowledgeCandidate* rejected,
                    double rejected_conf, PairProvenance prov) {
      PreferencePair p;
      p.sample_id = sample.sample_id;
      p.prompt = prompt;
      p.image_ref = sample.image_ref;
      p.chosen = chosen->text;
      p.rejected = rejected->text;
      p.chosen_confidence = chosen->confidence;
      p.rejected_confidence = rejected_conf;
      p.provenance = prov;
      pairs.push_back(std::move(p));
    };

    if (misses.empty()) {
      // Only accurate knowledge: negative drawn from other samples' pieces,
      // rescored under this sample's prompt.
      std::vector<const KnowledgeCandidate*> others;
      for (const auto* c : all_candidates) {
        if (c->sample_id != sample.sample_id) others.push_back(c);
      }
      if (others.empty()) {
        if (warnings)
          warnings->push_back(sample.sample_id +
                              ": no cross-sample negative available, pair skipped");
        continue;
      }
      const KnowledgeCandidate* chosen =
          use_confidence ? min_confidence(hits) : hits[rng.below(hits.size())];
      const KnowledgeCandidate* negative = others[rng.below(others.size())];
      emit(chosen, negative, rescorer(prompt, negative->text),
           PairProvenance::cross_sample_negative);
      continue;
    }

    // Mixed hit/miss: primary pair, then one random (hit, miss) for diversity.
    std::size_t h1, m1;
    if (use_confidence) {
      const KnowledgeCandidate* cw = min_confidence(hits);
      const KnowledgeCandidate* cl = max_confidence(misses);
      h1 = std::find(hits.begin(), hits.end(), cw) - hits.begin();
      m1 = std::find(misses.begin(), misses.end(), cl) - misses.begin();
    } else {
      h1 = rng.below(hits.size());
      m1 = rng.below(misses.size());
    }
    emit(hits[h1], misses[m1], misses[m1]->confidence, PairProvenance::native);

    std::vector<std::pair<std::size_t, std::size_t>> combos;
    for (std::size_t h = 0; h < hits.size(); ++h) {
      for (std::size_t m = 0; m < misses.size(); ++m) {
        if (h == h1 && m == m1) continue;
        combos.emplace_back(h, m);
      }
    }
    if (!combos.empty()) {
      auto [h2, m2] = combos[rng.below(combos.size())];
      emit(hits[h2], misses[m2], misses[m2]->confidence, PairProvenance::native);
    }
  }
  return pairs;
}

}  // namespace

std::vector<PreferencePair> build_pairs(
    const std::map<std::string, std::vector<KnowledgeCandidate>>& candidates_by_sample,
    const std::vector<Sample>& samples, const TemplateSet& templates, std::uint64_t rng_seed,
    const Rescorer& rescorer, std::vector<std::string>* warnings) {
  return build_pairs_impl(candidates_by_sample, samples, templates, rng_seed, rescorer,
                          /*use_confidence=*/true, warnings);
}

std::vector<PreferencePair> build_pairs_no_confidence(
    const std::map<std::string, std::vector<KnowledgeCandidate>>& candidates_by_sample,
    const std::vector<Sample>& samples, const TemplateSet& templates, std::uint64_t rng_seed,
    const Rescorer& rescorer, std::vector<std::string>* warnings) {
  return build_pairs_impl(candidates_by_sample, samples, templates, rng_seed, rescorer,
                          /*use_confidence=*/false, warnings);
}

namespace {

double margin(const KepoLossInput& in) {
  double chosen_ratio = in.policy_logprob_chosen - in.ref_logprob_chosen;
  double rejected_ratio = in.policy_logprob_rejected - in.ref_logprob_rejected;
  if (in.form == KepoLossForm::symmetric_beta) {
    return in.beta * (chosen_ratio - rejected_ratio);
  }
  return in.beta * chosen_ratio - rejected_ratio;
}

void check_input(const KepoLossInput& in) {
  for (double v : {in.policy_logprob_chosen, in.policy_logprob_rejected,
                   in.ref_logprob_chosen, in.ref_logprob_rejected, in.beta}) {
    if (!std::isfinite(v)) throw DomainError("non-finite KEPO loss input");
  }
  if (in.beta <= 0) throw DomainError("beta must be > 0");
}

// -log sigma(z) = softplus(-z), computed without overflow.
double softplus_neg(double z) {
  if (z > 0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

}  // namespace

double kepo_loss(const KepoLossInput& input) {
  check_input(input);
  return softplus_neg(margin(input));
}

KepoLossGrad kepo_loss_grad(const KepoLossInput& input) {
  check_input(input);
  double z = margin(input);
  // dL/dz = -sigma(-z)
  double dz = -1.0 / (1.0 + std::exp(z));
  double rejected_scale =
      input.form == KepoLossForm::symmetric_beta ? input.beta : 1.0;
  KepoLossGrad g;
  g.d_policy_chosen = dz * input.beta;
  g.d_ref_chosen = -dz * input.beta;
  g.d_policy_rejected = -dz * rejected_scale;
  g.d_ref_rejected = dz * rejected_scale;
  return g;
}

}  // namespace hind
