#include "pronlex/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>

#include "pronlex/attnalign.hpp"
#include "pronlex/dpalign.hpp"
#include "pronlex/error.hpp"
#include "pronlex/lexbuild.hpp"
#include "pronlex/phonecore.hpp"
#include "pronlex/synthbench.hpp"

namespace pronlex {

namespace {

struct CliFailure {
  int code;
  std::string message;
};

int code_for(const Error& e) {
  return is_format_error(e.kind()) ? kExitFormat : kExitConstraint;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kExitUsage, "cannot open " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliFailure{kExitUsage, "cannot write " + path};
  out << content;
  if (!out) throw CliFailure{kExitUsage, "failed writing " + path};
}

// Parses a file, turning library errors into failures that name the file.
template <class Parse>
auto load(const std::string& path, Parse&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    std::string where = path;
    if (e.line() != 0) where += ":" + std::to_string(e.line());
    std::string msg(error_kind_name(e.kind()));
    if (!e.detail().empty()) msg += ": " + e.detail();
    throw CliFailure{code_for(e), where + ": " + msg};
  }
}

PhoneInventory load_inventory(const std::string& path) {
  if (path.empty()) return PhoneInventory::open();
  return load(path, [](const std::string& t) { return parse_inventory(t); });
}

ReferenceDictionary load_dictionary(const std::string& path, const PhoneInventory& inv) {
  return load(path, [&](const std::string& t) { return parse_dictionary(t, inv); });
}

Lexicon load_lexicon(const std::string& path, const PhoneInventory& inv) {
  return load(path, [&](const std::string& t) { return parse_lexicon(t, inv); });
}

std::vector<SegmentedUtterance> load_refs(const std::string& path, const PhoneInventory& inv) {
  return load(path, [&](const std::string& t) { return parse_segmented_file(t, inv); });
}

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string pairs_to_lexicon_lines(const std::vector<VariantPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += p.word + "\t1\t" + join_phones(p.pron) + '\n';
  return out;
}

std::string extraction_summary(const ExtractionResult& r) {
  return "utterances\t" + std::to_string(r.utterances) + "\nwords\t" + std::to_string(r.words) +
         "\nempty_spans\t" + std::to_string(r.empty_spans) + "\npairs\t" +
         std::to_string(r.pairs.size()) + '\n';
}

// ---------------------------------------------------------------------------

struct AlignDpArgs {
  std::string hyp, ref, dict, out, inventory;
  AlignConfig cfg;
  unsigned jobs = 1;
};

void run_align_dp(const AlignDpArgs& a, std::ostream& out) {
  try {
    a.cfg.validate();
  } catch (const Error& e) {
    throw CliFailure{kExitUsage, e.what()};
  }
  const auto inv = load_inventory(a.inventory);
  const auto hyps =
      load(a.hyp, [&](const std::string& t) { return parse_phone_file(t, inv); });
  const auto refs = load_refs(a.ref, inv);
  const auto dict = load_dictionary(a.dict, inv);
  const auto result = extract_variants_dp(hyps, refs, dict, a.cfg, a.jobs);
  write_file(a.out, pairs_to_lexicon_lines(result.pairs));
  out << extraction_summary(result);
}

struct AlignAttnArgs {
  std::string attn, ref, dict, out, rejects, bounds, inventory;
  std::string mode = "global";
  AttnConfig cfg;
  unsigned jobs = 1;
};

void run_align_attn(AlignAttnArgs a, std::ostream& out) {
  a.cfg.mode = a.mode == "per-boundary" ? ShiftMode::PerBoundary : ShiftMode::GlobalShift;
  const auto inv = load_inventory(a.inventory);
  const auto maps =
      load(a.attn, [&](const std::string& t) { return parse_attention_file(t, inv); });
  const auto refs = load_refs(a.ref, inv);
  const auto dict = load_dictionary(a.dict, inv);
  const auto batch = align_attention_batch(maps, refs, &dict, a.cfg, a.jobs);
  const auto variants = accepted_variants(batch, maps);

  std::string rejects;
  std::vector<UtteranceCuts> bounds;
  for (const auto& u : batch.utterances) {
    if (const auto* rej = std::get_if<Rejected>(&u.decision)) {
      rejects += u.utterance_id + '\t' + fixed(rej->best_distance) + '\n';
      bounds.push_back({u.utterance_id, rej->segmentation.cuts});
    } else {
      bounds.push_back({u.utterance_id, std::get<Accepted>(u.decision).segmentation.cuts});
    }
  }
  write_file(a.out, pairs_to_lexicon_lines(variants.pairs));
  if (!a.rejects.empty()) write_file(a.rejects, rejects);
  if (!a.bounds.empty()) write_file(a.bounds, emit_bounds_file(bounds));
  out << extraction_summary(variants) << "accepted\t" << batch.accepted() << "\nrejected\t"
      << batch.rejected() << '\n';
}

struct BuildArgs {
  std::vector<std::string> pairs;
  std::string out, dict, inventory;
  std::uint64_t min_count = 0;
  std::size_t max_variants = kUnlimitedVariants;
};

void run_build(const BuildArgs& a, std::ostream& out) {
  const auto inv = load_inventory(a.inventory);
  Lexicon lex;
  for (const auto& path : a.pairs) lex = merge(lex, load_lexicon(path, inv));
  std::optional<ReferenceDictionary> dict;
  if (!a.dict.empty()) {
    dict = load_dictionary(a.dict, inv);
    lex = merge(lex, lexicon_from_dictionary(*dict));
  }
  lex = prune(lex, a.min_count, a.max_variants, dict ? &*dict : nullptr);
  write_file(a.out, emit_lexicon(lex));
  out << format_stats_tsv(stats(lex));
}

struct MergeArgs {
  std::vector<std::string> in;
  std::string out, inventory;
};

void run_merge(const MergeArgs& a, std::ostream& out) {
  const auto inv = load_inventory(a.inventory);
  Lexicon lex;
  std::size_t input_entries = 0;
  for (const auto& path : a.in) {
    const auto part = load_lexicon(path, inv);
    input_entries += part.entry_count();
    lex = merge(lex, part);
  }
  write_file(a.out, emit_lexicon(lex));
  out << "input_entries\t" << input_entries << "\nmerged_entries\t" << lex.entry_count()
      << "\nshared_entries\t" << input_entries - lex.entry_count() << '\n';
}

struct StatsArgs {
  std::string lex, baseline, inventory;
  bool text = false;
};

void run_stats(const StatsArgs& a, std::ostream& out) {
  const auto inv = load_inventory(a.inventory);
  const auto lex = load_lexicon(a.lex, inv);
  std::optional<Lexicon> baseline;
  if (!a.baseline.empty()) baseline = load_lexicon(a.baseline, inv);
  const auto s = stats(lex, baseline ? &*baseline : nullptr);
  out << (a.text ? format_stats_text(s) : format_stats_tsv(s));
}

struct SynthArgs {
  std::string dict, rules, out_dir, attn = "identity", inventory;
  std::size_t words = 3;
  std::size_t utts = 100;
  std::uint64_t seed = 1;
  CorruptOptions corrupt;
};

void run_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.words_per_utterance = a.words;
  cfg.utterances = a.utts;
  cfg.seed = a.seed;
  cfg.corrupt = a.corrupt;
  if (a.attn == "identity") {
    cfg.attention = SynthAttention::Identity;
  } else if (a.attn.rfind("jitter:", 0) == 0) {
    cfg.attention = SynthAttention::Jitter;
    const std::string k = a.attn.substr(7);
    const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), cfg.jitter);
    if (k.empty() || ec != std::errc() || ptr != k.data() + k.size())
      throw CliFailure{kExitUsage, "--attn expects identity or jitter:K"};
  } else {
    throw CliFailure{kExitUsage, "--attn expects identity or jitter:K"};
  }

  const auto inv = load_inventory(a.inventory);
  const auto dict = load_dictionary(a.dict, inv);
  const auto rules = load(a.rules, [&](const std::string& t) { return parse_rules(t, inv); });
  const auto corpus = generate_corpus(dict, rules, cfg);

  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliFailure{kExitUsage, "cannot create " + a.out_dir};
  write_file((dir / "hyp.txt").string(), emit_phone_file(corpus.hyps));
  write_file((dir / "ref.txt").string(), emit_segmented_file(corpus.refs));
  write_file((dir / "attn.txt").string(), emit_attention_file(corpus.maps));
  write_file((dir / "truth.lex").string(), emit_lexicon(corpus.truth));
  write_file((dir / "truth.bounds").string(), emit_bounds_file(corpus.truth_bounds));
  out << "utterances\t" << corpus.refs.size() << "\ntruth_entries\t"
      << corpus.truth.entry_count() << '\n';
}

struct EvalArgs {
  std::string built, truth, dict, inventory;
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  const auto inv = load_inventory(a.inventory);
  const auto built = load_lexicon(a.built, inv);
  const auto truth = load_lexicon(a.truth, inv);
  std::optional<ReferenceDictionary> dict;
  if (!a.dict.empty()) dict = load_dictionary(a.dict, inv);
  const auto r = recovery_report(built, truth, dict ? &*dict : nullptr);
  out << "truth_variants\t" << r.truth_variants << "\nrecovered\t" << r.recovered
      << "\nbuilt_variants\t" << r.built_variants << "\nbuilt_correct\t" << r.built_correct
      << "\nprecision\t" << fixed(r.precision()) << "\nrecall\t" << fixed(r.recall()) << '\n';
}

struct EvalBoundsArgs {
  std::string pred, truth;
};

void run_eval_bounds(const EvalBoundsArgs& a, std::ostream& out) {
  const auto parse = [](const std::string& t) { return parse_bounds_file(t); };
  const auto pred = load(a.pred, parse);
  const auto truth = load(a.truth, parse);
  std::map<std::string, const UtteranceCuts*> truth_by_id;
  for (const auto& t : truth) truth_by_id.emplace(t.utterance_id, &t);
  if (pred.size() != truth.size()) {
    for (const auto& p : pred) truth_by_id.erase(p.utterance_id);
    const std::string missing =
        truth_by_id.empty() ? std::string("(extra predictions)") : truth_by_id.begin()->first;
    throw Error(ErrorKind::MissingUtterance, missing + " not paired between files");
  }
  BoundaryScore total;
  for (const auto& p : pred) {
    const auto it = truth_by_id.find(p.utterance_id);
    if (it == truth_by_id.end())
      throw Error(ErrorKind::MissingUtterance, p.utterance_id + " has no truth boundaries");
    total += boundary_f1(p.cuts, it->second->cuts);
  }
  out << "utterances\t" << pred.size() << "\ncorrect\t" << total.correct << "\npredicted\t"
      << total.predicted << "\ntruth\t" << total.truth << "\nprecision\t"
      << fixed(total.precision()) << "\nrecall\t" << fixed(total.recall()) << "\nf1\t"
      << fixed(total.f1()) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mispronunciation lexicon induction from unsegmented phone sequences",
               "pronlex"};
  app.require_subcommand(1);

  AlignDpArgs dp;
  auto* dp_cmd = app.add_subcommand("align-dp", "Needleman-Wunsch alignment and boundary projection");
  dp_cmd->add_option("--hyp", dp.hyp, "Hypothesis phone file")->required()->check(CLI::ExistingFile);
  dp_cmd->add_option("--ref", dp.ref, "Segmented reference file")->required()->check(CLI::ExistingFile);
  dp_cmd->add_option("--dict", dp.dict, "Reference dictionary")->required()->check(CLI::ExistingFile);
  dp_cmd->add_option("--out", dp.out, "Output variant pairs (lexicon format)")->required();
  dp_cmd->add_option("--match", dp.cfg.match_score, "Match cost")->capture_default_str();
  dp_cmd->add_option("--mismatch", dp.cfg.mismatch_score, "Mismatch cost")->capture_default_str();
  dp_cmd->add_option("--gap", dp.cfg.gap_penalty, "Gap cost")->capture_default_str();
  dp_cmd->add_option("--inventory", dp.inventory, "Phone inventory")->check(CLI::ExistingFile);
  dp_cmd->add_option("--jobs", dp.jobs, "Worker threads")->check(CLI::PositiveNumber);

  AlignAttnArgs at;
  auto* at_cmd = app.add_subcommand("align-attn", "Attention-guided boundary search");
  at_cmd->add_option("--attn", at.attn, "Attention map file")->required()->check(CLI::ExistingFile);
  at_cmd->add_option("--ref", at.ref, "Segmented reference file")->required()->check(CLI::ExistingFile);
  at_cmd->add_option("--dict", at.dict, "Reference dictionary")->required()->check(CLI::ExistingFile);
  at_cmd->add_option("--out", at.out, "Output variant pairs (lexicon format)")->required();
  at_cmd->add_option("--radius", at.cfg.shift_radius, "Boundary shift radius")->capture_default_str();
  at_cmd->add_option("--mode", at.mode, "Shift mode")
      ->check(CLI::IsMember({"global", "per-boundary"}))
      ->capture_default_str();
  at_cmd->add_option("--threshold", at.cfg.threshold, "Max normalized edit distance")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  at_cmd->add_option("--rejects", at.rejects, "Rejected utterances with best distances");
  at_cmd->add_option("--bounds", at.bounds, "Chosen boundaries per utterance");
  at_cmd->add_option("--inventory", at.inventory, "Phone inventory")->check(CLI::ExistingFile);
  at_cmd->add_option("--jobs", at.jobs, "Worker threads")->check(CLI::PositiveNumber);

  BuildArgs bd;
  auto* bd_cmd = app.add_subcommand("build", "Accumulate and prune variant pairs");
  bd_cmd->add_option("--pairs", bd.pairs, "Variant pair files")
      ->required()
      ->expected(1, -1)
      ->check(CLI::ExistingFile);
  bd_cmd->add_option("--out", bd.out, "Output lexicon")->required();
  bd_cmd->add_option("--min-count", bd.min_count, "Drop variants seen fewer times");
  bd_cmd->add_option("--max-variants", bd.max_variants, "Variants kept per word")
      ->check(CLI::PositiveNumber);
  bd_cmd->add_option("--dict", bd.dict, "Add and protect canonical pronunciations")
      ->check(CLI::ExistingFile);
  bd_cmd->add_option("--inventory", bd.inventory, "Phone inventory")->check(CLI::ExistingFile);

  MergeArgs mg;
  auto* mg_cmd = app.add_subcommand("merge", "Union of lexicons");
  mg_cmd->add_option("--in", mg.in, "Input lexicon (repeat)")
      ->required()
      ->expected(1, -1)
      ->check(CLI::ExistingFile);
  mg_cmd->add_option("--out", mg.out, "Output lexicon")->required();
  mg_cmd->add_option("--inventory", mg.inventory, "Phone inventory")->check(CLI::ExistingFile);

  StatsArgs st;
  auto* st_cmd = app.add_subcommand("stats", "Lexicon size report");
  st_cmd->add_option("--lex", st.lex, "Lexicon")->required()->check(CLI::ExistingFile);
  st_cmd->add_option("--baseline", st.baseline, "Baseline lexicon")->check(CLI::ExistingFile);
  st_cmd->add_flag("--text", st.text, "Aligned plain text instead of key/value lines");
  st_cmd->add_option("--inventory", st.inventory, "Phone inventory")->check(CLI::ExistingFile);

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic corrupted corpus");
  sy_cmd->add_option("--dict", sy.dict, "Reference dictionary")->required()->check(CLI::ExistingFile);
  sy_cmd->add_option("--rules", sy.rules, "Confusion rules")->required()->check(CLI::ExistingFile);
  sy_cmd->add_option("--words", sy.words, "Words per utterance")->required()->check(CLI::PositiveNumber);
  sy_cmd->add_option("--utts", sy.utts, "Number of utterances")->required();
  sy_cmd->add_option("--seed", sy.seed, "Random seed")->required();
  sy_cmd->add_option("--out-dir", sy.out_dir, "Output directory")->required();
  sy_cmd->add_option("--attn", sy.attn, "identity or jitter:K")->capture_default_str();
  sy_cmd->add_option("--delete-prob", sy.corrupt.delete_prob, "Phone deletion probability")
      ->check(CLI::Range(0.0, 1.0));
  sy_cmd->add_option("--insert-prob", sy.corrupt.insert_prob, "Phone insertion probability")
      ->check(CLI::Range(0.0, 1.0));
  sy_cmd->add_option("--insert-phone", sy.corrupt.insert_phone, "Inserted phone")
      ->capture_default_str();
  sy_cmd->add_option("--inventory", sy.inventory, "Phone inventory")->check(CLI::ExistingFile);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Variant recovery against a truth lexicon");
  ev_cmd->add_option("--built", ev.built, "Built lexicon")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--truth", ev.truth, "Truth lexicon")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--dict", ev.dict, "Canonical pronunciations to exclude")
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--inventory", ev.inventory, "Phone inventory")->check(CLI::ExistingFile);

  EvalBoundsArgs eb;
  auto* eb_cmd = app.add_subcommand("eval-bounds", "Boundary precision/recall/F1");
  eb_cmd->add_option("--pred", eb.pred, "Predicted boundaries")->required()->check(CLI::ExistingFile);
  eb_cmd->add_option("--truth", eb.truth, "True boundaries")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*dp_cmd) run_align_dp(dp, out);
    else if (*at_cmd) run_align_attn(at, out);
    else if (*bd_cmd) run_build(bd, out);
    else if (*mg_cmd) run_merge(mg, out);
    else if (*st_cmd) run_stats(st, out);
    else if (*sy_cmd) run_synth(sy, out);
    else if (*ev_cmd) run_eval(ev, out);
    else if (*eb_cmd) run_eval_bounds(eb, out);
  } catch (const CliFailure& f) {
    err << "pronlex: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "pronlex: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidConfig ? kExitUsage : code_for(e);
  }
  return kExitOk;
}

}  // namespace pronlex
