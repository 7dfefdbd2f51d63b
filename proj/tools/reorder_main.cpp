// Command-line front end: validate, invert, count, enumerate and sample
// buffer patterns, run the forward simulation, and compare traces.
//
// Exit codes: 0 success, 1 invalid pattern or failed domain operation,
// 2 malformed input or usage error. Batch runs return the worst per-line
// code. Machine output goes to stdout, diagnostics to stderr.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "reorder/reorder.hpp"

namespace {

using nlohmann::json;
using namespace reorder;

bool g_json = false;

void emit_text(const std::string& line) { std::cout << line << "\n"; }
void emit_json(const json& rec) { std::cout << rec.dump() << "\n"; }

// Validity, classes and ACK trace of a pattern, optionally decomposing at
// interior zeros first. Rejection stages are always global.
struct Analysis {
  bool valid = false;
  Rejection rej{};
  std::vector<StageClass> classes;
  std::vector<Id> ack;
};

Analysis analyze_pattern(const std::vector<Id>& w, bool split) {
  Analysis a;
  if (!split) {
    auto cls = classify_stages(w);
    if (!cls.ok()) {
      a.rej = cls.rejection();
      return a;
    }
    a.classes = cls.value().classes;
    a.ack = ack_from_pattern(w).value();
    a.valid = true;
    return a;
  }

  auto segs = decompose_at_zeros(w);
  if (!segs.ok()) {
    a.rej = segs.rejection();
    return a;
  }
  for (const PatternSegment& seg : segs.value()) {
    auto cls = classify_stages(seg.values);
    if (!cls.ok()) {
      a.rej = cls.rejection();
      a.rej.index += seg.stage_offset;
      a.classes.clear();
      return a;
    }
    for (StageClass c : cls.value().classes) a.classes.push_back(c);
  }
  a.ack = ack_from_pattern_split(w).value();
  a.valid = true;
  return a;
}

json class_names(const std::vector<StageClass>& classes) {
  json arr = json::array();
  for (StageClass c : classes) arr.push_back(to_string(c));
  return arr;
}

void add_analysis(json& rec, const Analysis& a) {
  rec["valid"] = a.valid;
  if (a.valid) {
    rec["classes"] = class_names(a.classes);
    rec["ack"] = a.ack;
  } else {
    rec["error"] = {{"rule", to_string(a.rej.rule)}, {"stage", a.rej.index}};
  }
}

int report_parse_error(const std::string& input, const std::string& msg) {
  std::cerr << "parse error: " << msg << "\n";
  if (g_json)
    emit_json({{"input", input}, {"error", {{"rule", "parse"}, {"message", msg}}}});
  else
    emit_text("error");
  return 2;
}

int run_check(const std::string& input, bool signed_mode, bool split) {
  auto parsed = parse_pattern(input, signed_mode);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);

  const Analysis a = analyze_pattern(parsed.value, split);
  if (g_json) {
    json rec{{"input", input}};
    add_analysis(rec, a);
    emit_json(rec);
  } else {
    emit_text(a.valid ? "valid" : "invalid");
  }
  if (!a.valid) {
    std::cerr << "invalid: " << describe(a.rej) << "\n";
    return 1;
  }
  return 0;
}

int run_invert(const std::string& input, bool signed_mode, bool split) {
  auto parsed = parse_pattern(input, signed_mode);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);
  const std::vector<Id>& w = parsed.value;

  Result<PacketIdSequence> witness =
      signed_mode ? (split ? reconstruct_signed(w) : reconstruct_signed_single(w))
                  : (split ? reconstruct(w) : reconstruct_single(w));

  if (g_json) {
    json rec{{"input", input}};
    add_analysis(rec, analyze_pattern(w, split));
    if (witness.ok()) rec["witness"] = witness.value();
    emit_json(rec);
  } else {
    emit_text(witness.ok() ? format_plain(witness.value()) : "invalid");
  }
  if (!witness.ok()) {
    std::cerr << "invalid: " << describe(witness.rejection()) << "\n";
    return 1;
  }
  return 0;
}

int run_count(const std::string& input, bool signed_mode, bool split) {
  auto parsed = parse_pattern(input, signed_mode);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);
  const std::vector<Id>& w = parsed.value;

  const BigCount c =
      signed_mode ? (split ? count_preimages_signed(w) : count_preimages_signed_single(w))
                  : (split ? count_preimages(w) : count_preimages_single(w));

  if (g_json) {
    json rec{{"input", input}};
    add_analysis(rec, analyze_pattern(w, split));
    rec["count"] = c.str();
    emit_json(rec);
  } else {
    emit_text(c.str());
  }
  return 0;  // a zero count is an answer, not a failure
}

int run_forward(const std::string& input, const std::string& trace) {
  auto parsed = parse_id_sequence(input);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);

  const ReceiverTrace t = simulate_receiver(parsed.value);
  if (g_json) {
    json rec{{"input", parsed.value}};
    if (trace == "buf" || trace == "all") rec["buf"] = t.buffer_size;
    if (trace == "signed" || trace == "all") rec["signed"] = t.signed_buffer;
    if (trace == "fb" || trace == "all") rec["fb"] = t.fb;
    if (trace == "ack" || trace == "all") rec["ack"] = t.ack;
    emit_json(rec);
    return 0;
  }
  if (trace == "buf") emit_text(format_plain(t.buffer_size));
  else if (trace == "signed") emit_text(format_plain(t.signed_buffer));
  else if (trace == "fb") emit_text(format_plain(t.fb));
  else if (trace == "ack") emit_text(format_plain(t.ack));
  else
    emit_text("buf: " + format_plain(t.buffer_size) +
              " | signed: " + format_plain(t.signed_buffer) +
              " | fb: " + format_plain(t.fb) + " | ack: " + format_plain(t.ack));
  return 0;
}

int run_sample(const std::string& input, std::uint64_t seed, std::uint64_t draws) {
  auto parsed = parse_pattern(input, false);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);

  std::vector<PacketIdSequence> samples;
  for (std::uint64_t k = 0; k < draws; ++k) {
    auto s = sample_preimage(parsed.value, seed + k);
    if (!s.ok()) {
      if (g_json) {
        json rec{{"input", input}, {"valid", false}};
        rec["error"] = {{"rule", to_string(s.rejection().rule)},
                        {"stage", s.rejection().index}};
        emit_json(rec);
      } else {
        emit_text("invalid");
      }
      std::cerr << "invalid: " << describe(s.rejection()) << "\n";
      return 1;
    }
    samples.push_back(std::move(s).value());
  }

  if (g_json) {
    json rec{{"input", input}, {"valid", true}, {"seed", seed}, {"samples", samples}};
    emit_json(rec);
  } else {
    for (const PacketIdSequence& s : samples) emit_text(format_plain(s));
  }
  return 0;
}

int run_enumerate(const std::string& input, bool signed_mode, std::uint64_t limit,
                  bool oracle_check) {
  auto parsed = parse_pattern(input, signed_mode);
  if (!parsed.ok()) return report_parse_error(input, parsed.error);
  const std::vector<Id>& w = parsed.value;

  const EnumerateResult res = enumerate_preimages(w, limit);
  if (!res.ok()) {
    std::cerr << "limit-exceeded: " << res.exceeded->str() << " preimages exceed limit "
              << limit << "\n";
    if (g_json)
      emit_json({{"input", input},
                 {"count", res.exceeded->str()},
                 {"error", "limit-exceeded"},
                 {"limit", limit}});
    return 1;
  }

  if (oracle_check) {
    UniverseSpec spec;
    spec.n = w.size();
    spec.max_repeats = static_cast<std::size_t>(
        std::count_if(w.begin(), w.end(), [](Id v) { return v < 0; }));
    spec.allow_repeats = spec.max_repeats > 0;
    try {
      const auto brute = brute_force_signed(w, spec);
      if (brute != res.items) {
        std::cerr << "oracle mismatch: enumeration disagrees with brute force\n";
        return 1;
      }
    } catch (const UniverseTooLarge& e) {
      std::cerr << "oracle unavailable: " << e.what() << "\n";
      return 1;
    }
  }

  if (g_json) {
    emit_json({{"input", input},
               {"count", std::to_string(res.items.size())},
               {"preimages", res.items}});
  } else {
    for (const PacketIdSequence& p : res.items) emit_text(format_plain(p));
  }
  return 0;
}

int run_equiv(const std::string& a_text, const std::string& b_text,
              const std::string& relation) {
  auto a = parse_id_sequence(a_text);
  if (!a.ok()) return report_parse_error(a_text, a.error);
  auto b = parse_id_sequence(b_text);
  if (!b.ok()) return report_parse_error(b_text, b.error);

  bool eq = false;
  if (relation == "buf") eq = buf_equiv(a.value, b.value);
  else if (relation == "beh") eq = beh_equiv(a.value, b.value);
  else if (relation == "fb") eq = fb_equiv(a.value, b.value);
  else eq = modified_buf_equiv(a.value, b.value);  // mbuf

  if (g_json)
    emit_json({{"a", a.value}, {"b", b.value}, {"relation", relation}, {"equivalent", eq}});
  else
    emit_text(eq ? "true" : "false");
  return 0;
}

// Runs fn once per batch line, or once on the inline input. Blank lines
// and '#'-prefixed comment lines are skipped; every other line produces
// exactly one stdout record, so line k of the output answers the k-th
// retained input line. The aggregate exit code is the worst per-line code.
template <typename Fn>
int with_inputs(const std::string& batch_path, bool inline_given,
                const std::string& inline_input, Fn&& fn) {
  if (batch_path.empty()) {
    if (!inline_given) {
      std::cerr << "missing input: pass a pattern or --batch FILE\n";
      return 2;
    }
    return fn(inline_input);
  }
  std::ifstream in(batch_path);
  if (!in) {
    std::cerr << "cannot open batch file: " << batch_path << "\n";
    return 2;
  }
  int worst = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = reorder::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    worst = std::max(worst, fn(std::string(t)));
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reorder-buffer pattern toolkit"};
  app.require_subcommand(1);

  std::string output_mode = "text";
  app.add_option("--output", output_mode, "record format: text or json")
      ->envname("REORDER_OUTPUT")
      ->check(CLI::IsMember({"text", "json"}));

  std::string pattern, batch, seq_b, trace = "all", relation;
  std::vector<std::string> seq_parts;
  bool signed_mode = false, split = false, oracle_check = false;
  std::uint64_t seed = 0, draws = 1, limit = 1000;

  auto* check = app.add_subcommand("check", "validate a buffer pattern");
  auto* check_pat = check->add_option("pattern", pattern, "pattern (hash or plain form)");
  check->add_flag("--signed", signed_mode, "allow negative (repeat) entries");
  check->add_flag("--split-zeros", split, "decompose at interior zeros");
  check->add_option("--batch", batch, "file with one pattern per line")
      ->check(CLI::ExistingFile)
      ->excludes(check_pat);

  auto* invert = app.add_subcommand("invert", "canonical preimage of a pattern");
  auto* invert_pat = invert->add_option("pattern", pattern, "pattern (hash or plain form)");
  invert->add_flag("--signed", signed_mode, "allow negative (repeat) entries");
  invert->add_flag("--split-zeros", split, "decompose at interior zeros");
  invert->add_option("--batch", batch, "file with one pattern per line")
      ->check(CLI::ExistingFile)
      ->excludes(invert_pat);

  auto* count = app.add_subcommand("count", "number of preimages of a pattern");
  auto* count_pat = count->add_option("pattern", pattern, "pattern (hash or plain form)");
  count->add_flag("--signed", signed_mode, "allow negative (repeat) entries");
  count->add_flag("--split-zeros", split, "decompose at interior zeros");
  count->add_option("--batch", batch, "file with one pattern per line")
      ->check(CLI::ExistingFile)
      ->excludes(count_pat);

  auto* forward = app.add_subcommand("forward", "simulate the receiver on a sequence");
  auto* forward_seq = forward->add_option("sequence", seq_parts, "arrival sequence");
  forward->add_option("--trace", trace, "buf, signed, fb, ack or all")
      ->check(CLI::IsMember({"buf", "signed", "fb", "ack", "all"}));
  forward->add_option("--batch", batch, "file with one sequence per line")
      ->check(CLI::ExistingFile)
      ->excludes(forward_seq);

  auto* sample = app.add_subcommand("sample", "uniform random preimages of a pattern");
  sample->add_option("pattern", pattern, "pattern (hash or plain form)")->required();
  sample->add_option("--seed", seed, "seed of the first draw (default 0)");
  sample->add_option("--count", draws, "number of draws (seeded seed, seed+1, ...)");

  auto* enumerate = app.add_subcommand("enumerate", "all preimages of a pattern");
  enumerate->add_option("pattern", pattern, "pattern (hash or plain form)")->required();
  enumerate->add_flag("--signed", signed_mode, "allow negative (repeat) entries");
  enumerate->add_option("--limit", limit, "refuse to list more than this many");
  enumerate->add_flag("--oracle", oracle_check, "cross-check against brute force");

  auto* equiv = app.add_subcommand("equiv", "compare the traces of two sequences");
  equiv->add_option("a", pattern, "first sequence")->required();
  equiv->add_option("b", seq_b, "second sequence")->required();
  equiv->add_option("--relation", relation, "buf, beh, fb or mbuf")
      ->required()
      ->check(CLI::IsMember({"buf", "beh", "fb", "mbuf"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  g_json = output_mode == "json";

  if (check->parsed())
    return with_inputs(batch, check_pat->count() > 0, pattern,
                       [&](const std::string& in) { return run_check(in, signed_mode, split); });
  if (invert->parsed())
    return with_inputs(batch, invert_pat->count() > 0, pattern,
                       [&](const std::string& in) { return run_invert(in, signed_mode, split); });
  if (count->parsed())
    return with_inputs(batch, count_pat->count() > 0, pattern,
                       [&](const std::string& in) { return run_count(in, signed_mode, split); });
  if (forward->parsed()) {
    std::string joined;
    for (const std::string& part : seq_parts) {
      if (!joined.empty()) joined += ' ';
      joined += part;
    }
    return with_inputs(batch, forward_seq->count() > 0, joined,
                       [&](const std::string& in) { return run_forward(in, trace); });
  }
  if (sample->parsed()) return run_sample(pattern, seed, draws);
  if (enumerate->parsed()) return run_enumerate(pattern, signed_mode, limit, oracle_check);
  if (equiv->parsed()) return run_equiv(pattern, seq_b, relation);
  return 2;
}
