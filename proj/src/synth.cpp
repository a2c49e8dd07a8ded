#include "loglens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/log_ingest.hpp"
#include "loglens/parallel.hpp"
#include "loglens/rng.hpp"

namespace loglens::synth {
namespace {

// 14:30:00.000, well clear of midnight for a sub-minute run.
constexpr std::int64_t kBaseMs = (14 * 60 + 30) * 60'000LL;

// Attach signaling is a dense burst confined to the first four seconds;
// the divergence window runs hotter than steady state, not just different.
constexpr int kBootSeconds = 4;
constexpr double kBootRateBoost = 3.0;
constexpr double kWindowRateBoost = 1.5;

const char* kChannels[4] = {"PDSCH", "PUSCH", "PUCCH", "PDCCH"};
const char* kAnchorContent = "network attach procedure started";
const char* kKeywordContent = "Received rrcConnectionSetupComplete";

std::string fill_template(const std::string& tmpl, Rng& rng) {
  std::string out;
  out.reserve(tmpl.size() + 8);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out += std::to_string(rng.below(256));
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

struct PendingEvent {
  std::int64_t ms = 0;
  ingest::LogRecord rec;
  std::vector<std::string> extra_lines;
};

}  // namespace

const VocabProfile& VocabProfile::defaults() {
  static const VocabProfile profile = {
      // boot; two interleaved stems, cell search then attach signaling,
      // each cohesive on its own
      {"attach phase imsi digest {}", "attach phase auth vector index {}",
       "attach phase nas emm counter {}", "attach phase esm bearer slot {}",
       "attach phase gummei mmec {}", "attach phase tau timer {}",
       "attach phase plmn tracking area {}", "attach phase s1 setup token {}",
       "cell search pss hit {}", "cell search sss metric {}",
       "cell search pbch mib frame {}", "cell search rsrq scan {}",
       "cell search fo estimate {}", "cell search duplex probe {}",
       "cell search raster step {}", "cell search agc target {}"},
      // rlc
      {"SRB{} Tx PDU sn={} pdu_len={}", "DRB{} Rx SDU queued len={}",
       "tx queue advanced vt_a={}", "retx count={} for sn={}",
       "status report requested ack_sn={}", "pdu segment reassembled sn={} so={}",
       "buffer state update bytes={}", "polling bit set sn={}"},
      // mac
      {"UL grant rnti=0x{} tbs={}", "DL sched rnti=0x{} mcs={} prb={}",
       "BSR received lcg={} bytes={}", "HARQ retx pid={} redv={}",
       "RAR sent ta={} temp_crnti=0x{}", "padding bytes={} added",
       "PHR report headroom={}", "scheduling request rnti=0x{}"},
      // phy
      {"l_crb={} harq={} tbs={} mcs={}", "snr={} db turbo iterations={}",
       "cqi={} ri={} reported", "crc ok rnti=0x{} tbs={}", "pucch format1 n_pucch={}",
       "prach preamble={} ta={}", "epre={} db rssi={} db", "dl pdu decoded ok mcs={}"},
      // rrc
      {"RRC connection request cause mo_sig", "security mode command sent",
       "ue capability enquiry", "rrc dl info transfer len={}",
       "measurement report rsrp={}", "sib{} window period={}", "paging record total={}",
       "ue context updated rnti=0x{}"},
      // divergent; the "anomaly flag raised" stem binds the pool together
      // while every word stays out of the shared pools above
      {"anomaly flag raised integrity drift {}",
       "anomaly flag raised ciphering desync {}",
       "anomaly flag raised reconfiguration loop {}",
       "anomaly flag raised teardown storm {}",
       "anomaly flag raised purge cascade {}",
       "anomaly flag raised downlink flood {}",
       "anomaly flag raised handover oscillation {}",
       "anomaly flag raised watchdog stall {}"}};
  return profile;
}

void validate(const CorpusSpec& spec) {
  if (spec.n_files < 2) throw ConfigError("corpus needs at least 2 files");
  if (!(spec.pass_fraction >= 0.0 && spec.pass_fraction <= 1.0))
    throw ConfigError("pass fraction must lie in [0,1]");
  if (spec.window_start_s < 0 || spec.window_start_s > spec.window_end_s ||
      spec.window_end_s > 40)
    throw ConfigError("divergence window must satisfy 0 <= start <= end <= 40");
  if (!(spec.events_per_second > 0.0)) throw ConfigError("event rate must be positive");
  if (spec.duration_s < 1) throw ConfigError("duration must be at least 1 second");
  if (spec.pass_fraction > 0.0 && spec.duration_s < 11)
    throw ConfigError("pass files need at least 11 seconds for the completion line");
  if (spec.vocab.boot.empty() || spec.vocab.rlc.empty() || spec.vocab.mac.empty() ||
      spec.vocab.phy.empty() || spec.vocab.rrc.empty() || spec.vocab.divergent.empty())
    throw ConfigError("every vocabulary pool needs at least one template");
}

std::vector<int> assign_labels(const CorpusSpec& spec) {
  validate(spec);
  const std::size_t n_pass =
      std::size_t(std::llround(double(spec.n_files) * spec.pass_fraction));
  std::vector<std::size_t> perm(spec.n_files);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(derive_seed(spec.seed, "labels"));
  rng.shuffle(perm);
  std::vector<int> labels(spec.n_files, 0);
  for (std::size_t i = 0; i < n_pass; ++i) labels[perm[i]] = 1;
  return labels;
}

GeneratedFile generate_file(const CorpusSpec& spec, std::size_t index, int label) {
  Rng rng(derive_seed(spec.seed, "file:" + std::to_string(index)));

  // Completion time: most connections finish near 10 s with a delayed tail.
  std::int64_t keyword_ms = 0;
  if (label == 1) {
    const std::int64_t lo = 10'000;
    const std::int64_t hi = std::max(lo, std::int64_t(spec.duration_s) * 1000 - 4'000);
    keyword_ms = std::llround((10.0 + rng.exponential(3.0)) * 1000.0);
    keyword_ms = std::clamp(keyword_ms, lo, hi);
  }

  std::vector<PendingEvent> events;
  {
    PendingEvent anchor;
    anchor.ms = 0;
    anchor.rec.timestamp_ms = kBaseMs;
    anchor.rec.layer = "RRC";
    anchor.rec.level = ingest::Level::Info;
    anchor.rec.content = kAnchorContent;
    events.push_back(std::move(anchor));
  }

  for (int s = 0; s < spec.duration_s; ++s) {
    const bool divergent =
        label == 0 && s >= spec.window_start_s && s < spec.window_end_s;
    const bool booting = !divergent && s < kBootSeconds;
    const double rate = spec.events_per_second *
                        (divergent ? kWindowRateBoost : booting ? kBootRateBoost : 1.0);
    const int burst = rng.poisson(rate);
    for (int e = 0; e < burst; ++e) {
      PendingEvent ev;
      ev.ms = std::int64_t(s) * 1000 + std::int64_t(rng.below(1000));
      ev.rec.timestamp_ms = kBaseMs + ev.ms;

      const std::vector<std::string>* pool;
      if (booting) {
        ev.rec.layer = "RRC";
        pool = &spec.vocab.boot;
      } else {
        const std::uint64_t layer_draw = rng.below(20);
        if (layer_draw < 6) {
          ev.rec.layer = "RLC";
          pool = &spec.vocab.rlc;
        } else if (layer_draw < 12) {
          ev.rec.layer = "MAC";
          pool = &spec.vocab.mac;
        } else if (layer_draw < 17) {
          ev.rec.layer = rng.below(2) == 0 ? "PHY0" : "PHY1";
          ev.rec.subframe = int(ev.ms % 10240);
          ev.rec.channel = kChannels[rng.below(4)];
          pool = &spec.vocab.phy;
        } else {
          ev.rec.layer = "RRC";
          pool = &spec.vocab.rrc;
        }
        if (divergent) pool = &spec.vocab.divergent;
      }

      const std::uint64_t level_draw = rng.below(10);
      ev.rec.level = level_draw == 0   ? ingest::Level::Warning
                     : level_draw <= 2 ? ingest::Level::Debug
                                       : ingest::Level::Info;
      ev.rec.content = fill_template((*pool)[rng.below(pool->size())], rng);

      if (rng.below(32) == 0) {
        const int rows = 1 + int(rng.below(2));
        for (int r = 0; r < rows; ++r) {
          char head[16];
          std::snprintf(head, sizeof head, "  %04x:", r * 8);
          std::string line = head;
          for (int b = 0; b < 8; ++b) {
            char byte[8];
            std::snprintf(byte, sizeof byte, " %02x", unsigned(rng.below(256)));
            line += byte;
          }
          ev.extra_lines.push_back(std::move(line));
        }
      }
      events.push_back(std::move(ev));
    }
  }

  if (label == 1 && spec.include_keyword_line) {
    PendingEvent done;
    done.ms = keyword_ms;
    done.rec.timestamp_ms = kBaseMs + keyword_ms;
    done.rec.layer = "RRC";
    done.rec.level = ingest::Level::Info;
    done.rec.content = kKeywordContent;
    events.push_back(std::move(done));
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const PendingEvent& a, const PendingEvent& b) { return a.ms < b.ms; });

  GeneratedFile out;
  char name[32];
  std::snprintf(name, sizeof name, "logs/file%04zu.log", index);
  out.relative_path = name;
  for (const auto& ev : events) {
    out.text += ingest::format_record(ev.rec);
    out.text += '\n';
    for (const auto& line : ev.extra_lines) {
      out.text += line;
      out.text += '\n';
    }
    out.record_lines += 1;
    out.hex_lines += ev.extra_lines.size();
  }

  out.manifest_row.source_path = out.relative_path;
  out.manifest_row.outcome.label = label;
  if (label == 1) {
    out.manifest_row.outcome.duration_s = keyword_ms / 1000;
    if (spec.include_keyword_line) out.manifest_row.outcome.matched_at_ms = keyword_ms;
  }
  return out;
}

std::vector<truth::LabeledFile> generate_corpus(const CorpusSpec& spec,
                                                const std::string& out_dir) {
  validate(spec);
  const auto labels = assign_labels(spec);

  std::vector<GeneratedFile> files(spec.n_files);
  parallel_for(spec.n_files, 0,
               [&](std::size_t i) { files[i] = generate_file(spec, i, labels[i]); });

  ensure_dir(out_dir);
  ensure_dir(out_dir + "/logs");
  std::vector<truth::LabeledFile> manifest;
  manifest.reserve(spec.n_files);
  for (const auto& gf : files) {
    write_text_file(out_dir + "/" + gf.relative_path, gf.text);
    manifest.push_back(gf.manifest_row);
  }
  truth::write_manifest(manifest, out_dir + "/labels.csv");
  write_spec_echo(spec, out_dir + "/spec.echo");
  return manifest;
}

void write_spec_echo(const CorpusSpec& spec, const std::string& path) {
  nlohmann::json j{{"n_files", spec.n_files},
                   {"pass_fraction", spec.pass_fraction},
                   {"window_start_s", spec.window_start_s},
                   {"window_end_s", spec.window_end_s},
                   {"events_per_second", spec.events_per_second},
                   {"duration_s", spec.duration_s},
                   {"seed", spec.seed},
                   {"include_keyword_line", spec.include_keyword_line},
                   {"vocab",
                    {{"boot", spec.vocab.boot},
                     {"rlc", spec.vocab.rlc},
                     {"mac", spec.vocab.mac},
                     {"phy", spec.vocab.phy},
                     {"rrc", spec.vocab.rrc},
                     {"divergent", spec.vocab.divergent}}}};
  write_text_file(path, j.dump(2) + "\n");
}

CorpusSpec read_spec_echo(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("not a corpus spec: " + path);
  CorpusSpec spec;
  spec.n_files = j.at("n_files").get<std::size_t>();
  spec.pass_fraction = j.at("pass_fraction").get<double>();
  spec.window_start_s = j.at("window_start_s").get<int>();
  spec.window_end_s = j.at("window_end_s").get<int>();
  spec.events_per_second = j.at("events_per_second").get<double>();
  spec.duration_s = j.at("duration_s").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.include_keyword_line = j.at("include_keyword_line").get<bool>();
  const auto& v = j.at("vocab");
  spec.vocab.boot = v.at("boot").get<std::vector<std::string>>();
  spec.vocab.rlc = v.at("rlc").get<std::vector<std::string>>();
  spec.vocab.mac = v.at("mac").get<std::vector<std::string>>();
  spec.vocab.phy = v.at("phy").get<std::vector<std::string>>();
  spec.vocab.rrc = v.at("rrc").get<std::vector<std::string>>();
  spec.vocab.divergent = v.at("divergent").get<std::vector<std::string>>();
  validate(spec);
  return spec;
}

}  // namespace loglens::synth
