// Copyright 2026 The factframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "factframe/data_pipeline.h"
#include "factframe/errors.h"

namespace factframe {
namespace {

Sample S(std::string id, std::string doc, std::string sum, unsigned bits = 0,
         std::string system = "", Origin origin = Origin::kCNNDM,
         SystemCategory cat = SystemCategory::kSOTA) {
  Sample s;
  s.id = std::move(id);
  s.document = std::move(doc);
  s.summary = std::move(sum);
  s.labels = LabelVector::FromBits(static_cast<std::uint8_t>(bits));
  s.system = std::move(system);
  s.origin = origin;
  s.system_category = cat;
  return s;
}

std::vector<std::string> Ids(const std::vector<Sample>& samples) {
  std::vector<std::string> out;
  for (const auto& s : samples) out.push_back(s.id);
  return out;
}

TEST_CASE("dedup keeps the first of each pair") {
  const std::vector<Sample> in = {S("a", "doc one", "sum", 1), S("b", "doc two", "sum"),
                                  S("c", "doc  one ", "sum", 1), S("d", "doc one", "other")};
  const auto r = Dedup(in);
  CHECK(Ids(r.samples) == std::vector<std::string>{"a", "b", "d"});
  CHECK(r.removed == 1);
  CHECK(r.conflicts == 0);
  const auto again = Dedup(r.samples);
  CHECK(Ids(again.samples) == Ids(r.samples));
  CHECK(again.removed == 0);

  const auto conflict = Dedup({S("a", "x", "y", 1), S("b", "x", "y", 2)});
  CHECK(conflict.samples.size() == 1);
  CHECK(conflict.samples[0].labels.bits() == 1);
  CHECK(conflict.conflicts == 1);
}

std::vector<Sample> Numbered(int n) {
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(S("s" + std::to_string(i), "doc " + std::to_string(i), "sum",
                    0, "sys" + std::to_string(i % 3)));
  }
  return out;
}

TEST_CASE("random split partitions the ids deterministically") {
  const auto samples = Numbered(10);
  SplitSpec spec;
  spec.train = 8;
  spec.validation = 1;
  spec.test = 1;
  const auto m = MakeRandomSplit(samples, spec);
  CHECK(m.train.size() == 8);
  CHECK(m.validation.size() == 1);
  CHECK(m.test.size() == 1);
  std::set<std::string> all(m.train.begin(), m.train.end());
  all.insert(m.validation.begin(), m.validation.end());
  all.insert(m.test.begin(), m.test.end());
  CHECK(all.size() == 10);

  const auto again = MakeRandomSplit(samples, spec);
  CHECK(again.ToJson() == m.ToJson());
  spec.seed = 99;
  CHECK(MakeRandomSplit(samples, spec).ToJson() != m.ToJson());

  spec.train = 7;
  try {
    MakeRandomSplit(samples, spec);
    FAIL("expected a size mismatch");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("9") != std::string::npos);
    CHECK(msg.find("10") != std::string::npos);
  }
}

TEST_CASE("seeded permutation is a permutation") {
  const auto p = SeededPermutation(50, 4);
  std::vector<std::size_t> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
  CHECK(SeededPermutation(50, 4) == p);
}

TEST_CASE("challenging split toy example") {
  const std::vector<Sample> samples = {
      S("h1", "shared doc", "s1", 0, "bart"), S("h2", "test only", "s2", 0, "bart"),
      S("t1", "shared doc", "s3", 0, "pgn"),  S("t2", "train doc a", "s4", 0, "pgn"),
      S("t3", "train doc b", "s5", 0, "tconv"), S("t4", "train doc c", "s6", 0, "tconv")};
  const auto m = MakeChallengingSplit(samples, "bart", 1, 7);
  CHECK(m.test == std::vector<std::string>{"h1", "h2"});
  CHECK(m.validation.size() == 1);
  CHECK(m.removed_overlap == std::vector<std::string>{"t1"});
  CHECK(m.train.size() + m.validation.size() == 3);
  CHECK(std::find(m.train.begin(), m.train.end(), "t1") == m.train.end());

  CHECK_THROWS(MakeChallengingSplit(samples, "gpt", 1, 7));
}

TEST_CASE("challenging split never shares a document between train and test") {
  std::vector<Sample> samples;
  for (int i = 0; i < 60; ++i) {
    samples.push_back(S("x" + std::to_string(i), "doc " + std::to_string(i % 15),
                        "sum " + std::to_string(i), 0, i % 4 == 0 ? "bart" : "other"));
  }
  const auto m = MakeChallengingSplit(samples, "bart", 5, 3);
  const auto train = SelectSamples(samples, m.train);
  const auto test = SelectSamples(samples, m.test);
  for (const auto& a : train) {
    for (const auto& b : test) CHECK(a.document != b.document);
  }
  for (const auto& s : test) CHECK(s.system == "bart");
  CHECK(m.train.size() + m.validation.size() + m.test.size() +
            m.removed_overlap.size() == samples.size());
}

TEST_CASE("manifest round trip and selection") {
  SplitManifest m;
  m.train = {"a", "b"};
  m.test = {"c"};
  m.removed_overlap = {"d"};
  const std::string path = "pipeline_manifest.json";
  m.Write(path);
  const auto back = SplitManifest::Read(path);
  CHECK(back.ToJson() == m.ToJson());
  CHECK(back.ToJson().contains("removed_overlap"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(SplitManifest::Read(path), MissingInputError);

  const auto samples = Numbered(3);
  CHECK(Ids(SelectSamples(samples, {"s2", "s0"})) == std::vector<std::string>{"s2", "s0"});
  CHECK_THROWS(SelectSamples(samples, {"nope"}));
}

TEST_CASE("corpus statistics") {
  const auto empty = ComputeCorpusStats({});
  CHECK(empty.samples == 0);
  REQUIRE(empty.by_origin.count("CNNDM") == 1);
  REQUIRE(empty.by_origin.count("XSum") == 1);
  for (long c : empty.by_origin.at("XSum")) CHECK(c == 0);

  const std::vector<Sample> samples = {
      S("a", "d", "s", 0b0001, "", Origin::kXSum, SystemCategory::kSOTA),
      S("b", "d", "t", 0b0011, "", Origin::kXSum, SystemCategory::kOLD),
      S("c", "d", "u", 0b1000, "", Origin::kCNNDM, SystemCategory::kXFORMER)};
  const auto stats = ComputeCorpusStats(samples);
  CHECK(stats.samples == 3);
  CHECK(stats.by_origin.at("XSum") == std::array<long, 4>{2, 1, 0, 0});
  CHECK(stats.by_origin.at("CNNDM") == std::array<long, 4>{0, 0, 0, 1});
  CHECK(stats.categories_by_origin.at("XSum") == std::array<long, 4>{1, 0, 1, 0});
  CHECK(stats.ToJson()["samples"] == 3);
  CHECK(stats.ToTable().find("XSum") != std::string::npos);
}

TEST_CASE("csv parsing") {
  const auto rows = ParseCsv("a,b,c\n\"x, y\",\"he said \"\"hi\"\"\",\"two\nlines\"\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(rows[1][0] == "x, y");
  CHECK(rows[1][1] == "he said \"hi\"");
  CHECK(rows[1][2] == "two\nlines");
  CHECK(ParseCsv("p,q\r\n1,\r\n")[1] == std::vector<std::string>{"1", ""});
}

TEST_CASE("raw corpus ingestion") {
  RawCorpusConfig config = RawCorpusConfig::FromJson(
      {{"system_categories", {{"bart", "XFORMER"}, {"pgn", "OLD"}}}});
  CHECK(config.document_field == "doc");

  const std::string jsonl = "raw_corpus.jsonl";
  {
    std::ofstream out(jsonl);
    out << R"({"id": "r1", "doc": "D1", "summary": "S1", )"
        << R"("errors": ["extrinsic-NP", "intrinsic-predicate"], )"
        << R"("model_name": "bart", "origin": "xsum"})" "\n";
    out << R"({"id": "r2", "doc": "D2", "summary": "S2", "errors": "no-error", )"
        << R"("model_name": "pgn", "origin": "cnndm"})" "\n";
    out << R"({"id": "r3", "doc": "D3", "summary": "S3", "errors": "['entire-sentence']", )"
        << R"("model_name": "other", "origin": "cnndm"})" "\n";
  }
  const auto samples = ReadRawCorpus(jsonl, config);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].labels == LabelVector::FromArray({true, false, false, true}));
  CHECK(samples[0].system_category == SystemCategory::kXFORMER);
  CHECK(samples[0].origin == Origin::kXSum);
  CHECK(samples[1].labels.NoError());
  CHECK(samples[1].system_category == SystemCategory::kOLD);
  CHECK(samples[2].labels.bits() == 0b1111);
  CHECK(samples[2].system_category == SystemCategory::kUnknown);
  std::filesystem::remove(jsonl);

  const std::string csv = "raw_corpus.csv";
  {
    std::ofstream out(csv);
    out << "doc,summary,errors,model_name,origin\n";
    out << "\"A, doc\",A sum,intrinsic-NP;extrinsic-predicate,bart,XSum\n";
    out << "B doc,B sum,coreference,bart,XSum\n";
  }
  CHECK_THROWS_AS(ReadRawCorpus(csv, config), UnknownTagError);
  {
    std::ofstream out(csv);
    out << "doc,summary,errors,model_name,origin\n";
    out << "\"A, doc\",A sum,intrinsic-NP;extrinsic-predicate,bart,XSum\n";
  }
  const auto from_csv = ReadRawCorpus(csv, config);
  REQUIRE(from_csv.size() == 1);
  CHECK(from_csv[0].document == "A, doc");
  CHECK(from_csv[0].id == "s0");
  CHECK(from_csv[0].labels == LabelVector::FromArray({false, true, true, false}));
  std::filesystem::remove(csv);
  CHECK_THROWS_AS(ReadRawCorpus("missing.jsonl", config), MissingInputError);
}

}  // namespace
}  // namespace factframe
