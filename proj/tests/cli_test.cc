// Copyright (c) 2026 The hprm Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path Dir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("hprm_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string P(const std::string& name) { return (Dir() / name).string(); }

Outcome Hprm(const std::string& args) {
  std::string cmd = std::string("HPRM_LEXICON=") + HPRM_DATA_DIR "/demo_lexicon.tsv " +
                    HPRM_CLI + " " + args + " >" + P("stdout") + " 2>" + P("stderr");
  int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = Slurp(P("stdout"));
  o.err = Slurp(P("stderr"));
  return o;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Tiny corpus, bank and model shared by the tests below.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Outcome s = Hprm("simulate --synthetic -q --records 60 --hotword-count 20 --bank-size 40 "
                    "--extra-distractors 20 --seed 3 -o " + P("corpus.jsonl") +
                    " --bank-list " + P("bank.txt") + " --distractor-list " +
                    P("distractors.txt"));
    ASSERT_EQ(s.code, 0) << s.err;
    Outcome b = Hprm("bank -q --hotwords " + P("bank.txt") + " -o " + P("bank.bin"));
    ASSERT_EQ(b.code, 0) << b.err;
    Outcome t = Hprm("train -q --corpus " + P("corpus.jsonl") + " --bank " + P("bank.bin") +
                    " -o " + P("model.bin") + " --epochs 3 --report " + P("report.json") +
                    " --heldout-out " + P("heldout.jsonl"));
    ASSERT_EQ(t.code, 0) << t.err;
  }
};

TEST_F(Cli, HelpMatchesGolden) {
  for (std::string sub : {"", "bank", "simulate", "train", "retrieve", "evaluate", "heatmap"}) {
    Outcome o = Hprm(sub + " --help");
    EXPECT_EQ(o.code, 0);
    std::string golden = std::string(HPRM_TEST_DIR "/golden/help_") +
                         (sub.empty() ? "main" : sub) + ".txt";
    EXPECT_EQ(o.out, Slurp(golden)) << sub;
  }
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(Hprm("").code, 2);
  EXPECT_EQ(Hprm("frobnicate").code, 2);
  EXPECT_EQ(Hprm("retrieve --bank " + P("bank.bin")).code, 2);
  EXPECT_EQ(Hprm("retrieve --model /nonexistent --bank " + P("bank.bin") + " --text x").code, 2);
  EXPECT_EQ(Hprm("evaluate --bank " + P("bank.bin") + " --eval-set " + P("heldout.jsonl") +
                " --model " + P("model.bin") + " --rescore bogus").code, 2);
}

TEST_F(Cli, BankBuildsAndIsByteStable) {
  WriteText(P("two.txt"), "北京\n上海\n");
  Outcome a = Hprm("bank --hotwords " + P("two.txt") + " -o " + P("two.bin"));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.err.find("2 entries"), std::string::npos) << a.err;
  std::string first = Slurp(P("two.bin"));
  ASSERT_EQ(Hprm("bank -q --hotwords " + P("two.txt") + " -o " + P("two.bin")).code, 0);
  EXPECT_EQ(Slurp(P("two.bin")), first);

  WriteText(P("empty.txt"), "\n\n");
  Outcome e = Hprm("bank --hotwords " + P("empty.txt") + " -o " + P("empty.bin"));
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("empty bank"), std::string::npos) << e.err;
  EXPECT_FALSE(fs::exists(P("empty.bin")));
}

TEST_F(Cli, RetrieveTableAndPrompts) {
  WriteText(P("two.txt"), "北京\n上海\n");
  ASSERT_EQ(Hprm("bank -q --hotwords " + P("two.txt") + " -o " + P("two.bin")).code, 0);
  // A model trained on another bank still scores any bank with the same vocab.
  Outcome r = Hprm("retrieve -q --model " + P("model.bin") + " --bank " + P("two.bin") +
                  " --text 我在北京 -n 3");
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> lines;
  std::stringstream ss(r.out);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 2u) << r.out;
  EXPECT_EQ(Hprm("retrieve -q --threads 3 --model " + P("model.bin") + " --bank " +
                 P("two.bin") + " --text 我在北京 -n 3").out, r.out);
  EXPECT_EQ(lines[0].substr(0, 2), "1\t");
  EXPECT_EQ(lines[1].substr(0, 2), "2\t");

  Outcome i = Hprm("retrieve -q --model " + P("model.bin") + " --bank " + P("two.bin") +
                  " --text 我在北京 --emit-prompt instruct");
  ASSERT_EQ(i.code, 0);
  EXPECT_NE(i.out.find("热词列表["), std::string::npos);
  EXPECT_EQ(std::count(i.out.begin(), i.out.end(), '\n'), 1);
  Outcome w = Hprm("retrieve -q --baseline --bank " + P("two.bin") +
                  " --text 我在北京 -n 1 --emit-prompt whisper");
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_NE(w.out.find("北京"), std::string::npos);
  EXPECT_EQ(w.out.find("上海"), std::string::npos);
}

TEST_F(Cli, EvaluateIsDeterministicAndGatesOnPrrr) {
  std::string base = "evaluate -q --model " + P("model.bin") + " --bank " + P("bank.bin") +
                     " --eval-set " + P("heldout.jsonl");
  Outcome a = Hprm(base + " --threads 1");
  Outcome b = Hprm(base + " --threads 4");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 2), "N\t");
  EXPECT_EQ(Hprm(base + " --require-prrr50 0").code, 0);
  Outcome fail = Hprm(base + " --require-prrr50 1.01");
  EXPECT_EQ(fail.code, 1);
  EXPECT_NE(fail.err.find("FAIL: PrRR@50"), std::string::npos) << fail.err;

  Outcome sc = Hprm(base + " --scaling 40,50,60 --distractors " + P("distractors.txt") +
                   " --scaling-n 10 --scaling-out " + P("scaling.tsv") + " -o " + P("sweep.tsv"));
  ASSERT_EQ(sc.code, 0) << sc.err;
  EXPECT_EQ(Slurp(P("scaling.tsv")).substr(0, 13), "size\tPrRR@10\n");
  Outcome big = Hprm(base + " --scaling 40,500 --distractors " + P("distractors.txt"));
  EXPECT_EQ(big.code, 2);
}

TEST_F(Cli, TrainIsReproducible) {
  std::string cmd = "train -q --corpus " + P("corpus.jsonl") + " --bank " + P("bank.bin") +
                    " --epochs 3 --no-round-eval --mining-rounds 1 -o ";
  ASSERT_EQ(Hprm(cmd + P("m1.bin") + " --threads 1").code, 0);
  ASSERT_EQ(Hprm(cmd + P("m2.bin") + " --threads 4").code, 0);
  EXPECT_EQ(Slurp(P("m1.bin")), Slurp(P("m2.bin")));
  std::string report = Slurp(P("report.json"));
  EXPECT_NE(report.find("\"rounds\""), std::string::npos);
  EXPECT_NE(report.find("\"epochs\": 3"), std::string::npos);
  EXPECT_NE(report.find("\"lr\": 0.0001"), std::string::npos);
  EXPECT_NE(report.find("\"batch_size\": 32"), std::string::npos);
}

TEST_F(Cli, HeatmapWritesCsv) {
  Outcome h = Hprm("heatmap --model " + P("model.bin") + " --hotword 北京 --text 我在北京开会 -o " +
                  P("h.csv"));
  ASSERT_EQ(h.code, 0) << h.err;
  std::string csv = Slurp(P("h.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);  // b ei j ing
  EXPECT_NE(csv.find("1.000000"), std::string::npos);
  ASSERT_EQ(Hprm("heatmap -q --model " + P("model.bin") + " --hotword 北京 --text 我在北京开会 -o " +
                 P("h.csv")).code, 0);
  EXPECT_EQ(Slurp(P("h.csv")), csv);
}

TEST_F(Cli, FailedWriteLeavesNoFile) {
  // Renaming onto a non-empty directory fails after the data is written.
  fs::create_directories(P("occupied"));
  WriteText(P("occupied/keep"), "x");
  WriteText(P("two.txt"), "北京\n上海\n");
  Outcome o = Hprm("bank -q --hotwords " + P("two.txt") + " -o " + P("occupied"));
  EXPECT_EQ(o.code, 2);
  EXPECT_TRUE(fs::is_directory(P("occupied")));
  for (const auto& e : fs::directory_iterator(Dir())) {
    EXPECT_EQ(e.path().filename().string().find("occupied.tmp"), std::string::npos);
  }
}

TEST_F(Cli, SimulateCorruptsAnExistingCorpus) {
  WriteText(P("plain.jsonl"),
            "{\"reference\":\"今天我们在北京开会讨论工作\",\"hotwords\":[\"北京\"]}\n");
  Outcome o = Hprm("simulate -q --corpus " + P("plain.jsonl") + " -o " + P("sim.jsonl") +
                  " --seed 5");
  ASSERT_EQ(o.code, 0) << o.err;
  std::string first = Slurp(P("sim.jsonl"));
  EXPECT_NE(first.find("\"hypothesis\""), std::string::npos);
  ASSERT_EQ(Hprm("simulate -q --corpus " + P("plain.jsonl") + " -o " + P("sim.jsonl") +
                " --seed 5").code, 0);
  EXPECT_EQ(Slurp(P("sim.jsonl")), first);
  WriteText(P("bad.jsonl"), "{not json\n");
  EXPECT_EQ(Hprm("simulate -q --corpus " + P("bad.jsonl") + " -o " + P("x.jsonl")).code, 2);
}

}  // namespace
