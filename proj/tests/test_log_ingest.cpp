#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/log_ingest.hpp"
#include "loglens/rng.hpp"

using namespace loglens;
using namespace loglens::ingest;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "loglens_ingest_test";
  std::filesystem::create_directories(dir);
  return dir;
}

bool tokens_alphanumeric(const std::string& text) {
  if (text.empty()) return true;
  if (text.front() == ' ' || text.back() == ' ') return false;
  bool prev_space = false;
  for (unsigned char c : text) {
    if (c == ' ') {
      if (prev_space) return false;
      prev_space = true;
    } else if (std::isalnum(c)) {
      prev_space = false;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rlc example line parses field by field") {
  auto rec = parse_line("17:52:25.246 [RLC ] Info DRB1 Tx SDU");
  REQUIRE(rec.has_value());
  CHECK(rec->timestamp_ms == 64'345'246);
  CHECK(rec->layer == "RLC");
  CHECK(rec->level == Level::Info);
  CHECK_FALSE(rec->subframe.has_value());
  CHECK_FALSE(rec->channel.has_value());
  CHECK(rec->content == "DRB1 Tx SDU");
}

TEST_CASE("phy example line carries subframe and channel") {
  auto rec = parse_line("17:52:26.094 [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...");
  REQUIRE(rec.has_value());
  CHECK(rec->timestamp_ms == 64'346'094);
  CHECK(rec->layer == "PHY1");
  CHECK(rec->level == Level::Info);
  REQUIRE(rec->subframe.has_value());
  CHECK(*rec->subframe == 5788);
  REQUIRE(rec->channel.has_value());
  CHECK(*rec->channel == "PDSCH");
  CHECK(rec->content == "l_crb=1, harq=0, ...");
}

TEST_CASE("non-grammar lines yield skip markers") {
  CHECK_FALSE(parse_line("").has_value());
  CHECK_FALSE(parse_line("  0000: 2a ff 01 9c").has_value());
  CHECK_FALSE(parse_line("--- srsENB started ---").has_value());
  CHECK_FALSE(parse_line("17:52:25.246 no layer bracket").has_value());
  CHECK_FALSE(parse_line("99:00:00.000 [RLC ] Info bad hour").has_value());
  CHECK_FALSE(parse_line("17:61:00.000 [RLC ] Info bad minute").has_value());
  CHECK_FALSE(parse_line("17:00:61.000 [RLC ] Info bad second").has_value());
  CHECK_FALSE(parse_line("17:52:25.24 [RLC ] Info short millis").has_value());
  CHECK_FALSE(parse_line("17:52:25.246 [] Info empty layer").has_value());
  CHECK_FALSE(parse_line("17:52:25.246 [RLC ] Info").has_value());
  CHECK_FALSE(parse_line("17:52:25.246 [RLC ] Info   ").has_value());
}

TEST_CASE("levels are case-insensitive and unknowns map to info") {
  CHECK(parse_line("00:00:00.000 [MAC ] debug x")->level == Level::Debug);
  CHECK(parse_line("00:00:00.000 [MAC ] INFO x")->level == Level::Info);
  CHECK(parse_line("00:00:00.000 [MAC ] Warning x")->level == Level::Warning);
  CHECK(parse_line("00:00:00.000 [MAC ] warn x")->level == Level::Warning);
  CHECK(parse_line("00:00:00.000 [MAC ] ERROR x")->level == Level::Error);

  ParseStats stats;
  auto rec = parse_line("00:00:00.000 [MAC ] Trace something", &stats);
  REQUIRE(rec.has_value());
  CHECK(rec->level == Level::Info);
  CHECK(stats.unknown_levels == 1);
}

TEST_CASE("subframe prefix is consumed only when complete") {
  auto no_colon = parse_line("00:00:01.000 [PHY0] Info [00123] missing colon here");
  REQUIRE(no_colon.has_value());
  CHECK_FALSE(no_colon->subframe.has_value());
  CHECK(no_colon->content == "[00123] missing colon here");

  auto not_digits = parse_line("00:00:01.000 [PHY0] Info [00x23] PDSCH: rest");
  REQUIRE(not_digits.has_value());
  CHECK_FALSE(not_digits->subframe.has_value());

  auto empty_rest = parse_line("00:00:01.000 [PHY0] Info [00123] PDSCH:");
  REQUIRE(empty_rest.has_value());
  CHECK_FALSE(empty_rest->subframe.has_value());
  CHECK(empty_rest->content == "[00123] PDSCH:");
}

TEST_CASE("normalize_content applies the published examples") {
  CHECK(normalize_content("l_crb=1, harq=0") == "l crb 1 harq 0");
  CHECK(normalize_content("DRB1 Tx SDU") == "DRB1 Tx SDU");
  CHECK(normalize_content("***") == "");
  CHECK(normalize_content("") == "");
  CHECK(normalize_content("  spaced   out  ") == "spaced out");
}

TEST_CASE("normalize_content is idempotent with a clean alphabet on fuzzed input") {
  Rng rng(derive_seed(1234, "normalize-fuzz"));
  for (int i = 0; i < 10'000; ++i) {
    std::string line;
    std::size_t len = rng.below(80);
    for (std::size_t j = 0; j < len; ++j)
      line.push_back(static_cast<char>(rng.below(256)));
    std::string once = normalize_content(line);
    CHECK(tokens_alphanumeric(once));
    CHECK(normalize_content(once) == once);
  }
}

TEST_CASE("grouping merges identical timestamps and floors elapsed seconds") {
  std::vector<LogRecord> records;
  auto push = [&](std::int64_t ts, std::string content) {
    LogRecord r;
    r.timestamp_ms = ts;
    r.layer = "RLC";
    r.content = std::move(content);
    records.push_back(std::move(r));
  };
  push(64'345'246, "DRB1 Tx SDU");
  push(64'345'246, "DRB1 Rx SDU");
  push(64'345'246 + 5400, "later");

  auto groups = group_records(records);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].elapsed_s == 0);
  CHECK(groups[0].text == "DRB1 Tx SDU DRB1 Rx SDU");
  CHECK(groups[0].record_count == 2);
  CHECK(groups[1].elapsed_s == 5);
  CHECK(groups[1].text == "later");

  std::size_t contributing = 0;
  for (const auto& g : groups) contributing += g.record_count;
  CHECK(contributing == records.size());
}

TEST_CASE("midnight wrap adds a day before differencing") {
  std::vector<LogRecord> records;
  LogRecord a;
  a.timestamp_ms = 86'399'900;  // 23:59:59.900
  a.layer = "MAC";
  a.content = "before";
  LogRecord b;
  b.timestamp_ms = 200;  // 00:00:00.200
  b.layer = "MAC";
  b.content = "after";
  records.push_back(a);
  records.push_back(b);

  auto groups = group_records(records);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].elapsed_s == 0);
  CHECK(groups[1].elapsed_s == 0);  // only 300 ms later
  CHECK(groups[1].text == "after");
}

TEST_CASE("per-second grouping merges within the same elapsed second") {
  std::vector<LogRecord> records;
  for (std::int64_t off : {0, 100, 999, 1000}) {
    LogRecord r;
    r.timestamp_ms = 1'000'000 + off;
    r.layer = "MAC";
    r.content = "t" + std::to_string(off);
    records.push_back(std::move(r));
  }
  auto groups = group_records(records, GroupBy::Second);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].text == "t0 t100 t999");
  CHECK(groups[1].text == "t1000");
}

TEST_CASE("parse_text attaches continuation lines and keeps file order") {
  const char* text =
      "--- banner before anything ---\n"
      "17:52:25.246 [RLC ] Info DRB1 Tx SDU\n"
      "  0000: 2a ff 01 9c\n"
      "  0010: 11 22 33 44\n"
      "\n"
      "17:52:26.094 [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...\n";
  auto doc = parse_text(text, "inline");
  CHECK(doc.source_path == "inline");
  REQUIRE(doc.records.size() == 2);
  CHECK(doc.records[0].content == "DRB1 Tx SDU 0000: 2a ff 01 9c 0010: 11 22 33 44");
  CHECK(doc.stats.parsed_records == 2);
  CHECK(doc.stats.continuation_lines == 2);
  CHECK(doc.stats.skipped_lines == 1);
  REQUIRE(doc.groups.size() == 2);
  CHECK(doc.groups[0].elapsed_s == 0);
  CHECK(doc.groups[1].elapsed_s == 0);

  std::int64_t prev = -1;
  for (const auto& g : doc.groups) {
    CHECK(g.elapsed_s >= prev);
    prev = g.elapsed_s;
  }
}

TEST_CASE("parse_file handles the two-line example and failure modes") {
  auto dir = temp_dir();
  auto good = dir / "good.log";
  write_text_file(good.string(),
                  "17:52:25.246 [RLC ] Info DRB1 Tx SDU\n"
                  "17:52:26.094 [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...\n");
  auto doc = parse_file(good.string());
  CHECK(doc.records.size() == 2);
  CHECK(doc.groups.size() == 2);
  CHECK(doc.source_path == good.string());

  auto shared = dir / "shared.log";
  write_text_file(shared.string(),
                  "17:52:25.246 [RLC ] Info DRB1 Tx SDU\n"
                  "17:52:25.246 [MAC ] Info ul grant\n");
  auto doc2 = parse_file(shared.string());
  CHECK(doc2.records.size() == 2);
  CHECK(doc2.groups.size() == 1);

  auto garbage = dir / "garbage.bin";
  write_text_file(garbage.string(), std::string("\x01\x02\xff\xfe garbage\n\x00\x7f", 22));
  CHECK_THROWS_AS(parse_file(garbage.string()), EmptyDocumentError);

  CHECK_THROWS_AS(parse_file((dir / "missing.log").string()), IoError);
}

TEST_CASE("format_record round-trips through parse_line") {
  Rng rng(derive_seed(99, "roundtrip"));
  const char* layers[] = {"RLC", "MAC", "PHY0", "PHY1", "RRC", "S1AP"};
  const Level levels[] = {Level::Debug, Level::Info, Level::Warning, Level::Error};
  for (int i = 0; i < 500; ++i) {
    LogRecord rec;
    rec.timestamp_ms = std::int64_t(rng.below(86'400'000));
    rec.layer = layers[rng.below(6)];
    rec.level = levels[rng.below(4)];
    rec.content = "tok" + std::to_string(rng.below(1000)) + " v=" + std::to_string(rng.below(64));
    if (rng.below(2) == 0) {
      rec.subframe = int(rng.below(10240));
      rec.channel = rng.below(2) == 0 ? "PDSCH" : "PUSCH";
    }
    auto back = parse_line(format_record(rec));
    REQUIRE(back.has_value());
    CHECK(back->timestamp_ms == rec.timestamp_ms);
    CHECK(back->layer == rec.layer);
    CHECK(back->level == rec.level);
    CHECK(back->subframe == rec.subframe);
    CHECK(back->channel == rec.channel);
    CHECK(back->content == rec.content);
  }
}

TEST_CASE("groups jsonl sidecar round-trips") {
  auto dir = temp_dir();
  auto doc = parse_text(
      "17:52:25.246 [RLC ] Info DRB1 Tx SDU\n"
      "17:52:26.094 [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...\n",
      "inline");
  auto path = (dir / "groups.jsonl").string();
  write_groups_jsonl(doc, path);
  auto back = read_groups_jsonl(path);
  REQUIRE(back.size() == doc.groups.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].timestamp_ms == doc.groups[i].timestamp_ms);
    CHECK(back[i].elapsed_s == doc.groups[i].elapsed_s);
    CHECK(back[i].text == doc.groups[i].text);
    CHECK(back[i].record_count == doc.groups[i].record_count);
  }
}
