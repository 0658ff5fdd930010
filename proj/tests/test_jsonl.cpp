#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ablategen/error.hpp"
#include "ablategen/jsonl.hpp"

using namespace ablategen;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("ablategen_test_" + name);
}

}  // namespace

TEST_CASE("ablation datasets round-trip through JSON Lines") {
  const auto corpus = make_desk_corpus(25, 77);
  std::vector<nlohmann::json> rows;
  for (const auto& ex : corpus.ablation) rows.push_back(to_json(ex));
  const auto path = temp_file("ablation.jsonl").string();
  write_jsonl(path, rows);
  CHECK(load_ablation_examples(path) == corpus.ablation);

  std::vector<nlohmann::json> train_rows;
  for (const auto& ex : corpus.train) train_rows.push_back(to_json(ex));
  write_jsonl(path, train_rows);
  CHECK(load_examples(path) == corpus.train);
  fs::remove(path);
}

TEST_CASE("revision records round-trip and validate") {
  const RevisionPairRecord rec{"c", "y old", "y new", "g old", "g new",
                               {"https://a.example/1", "https://b.example/2"}};
  CHECK(revision_record_from_json(nlohmann::json::parse(to_json(rec).dump())) == rec);

  auto same = to_json(rec);
  same["new_target"] = "y old";
  CHECK_THROWS_AS(revision_record_from_json(same), DataError);
  auto one_url = to_json(rec);
  one_url["source_urls"] = {"https://a.example/1"};
  CHECK_THROWS_AS(revision_record_from_json(one_url), DataError);
}

TEST_CASE("malformed lines name the file and line") {
  const auto path = temp_file("bad.jsonl").string();
  {
    std::ofstream out(path);
    out << R"({"grounding": "g", "context": "c", "target": "t"})" << "\n\n{not json}\n";
  }
  try {
    read_jsonl(path);
    FAIL("expected a parse error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << R"({"grounding": "g", "context": "c"})" << "\n";
  }
  CHECK_THROWS_AS(load_examples(path), DataError);
  {
    std::ofstream out(path);
    out << R"({"grounding": "g", "grounding_ablated": "g", "context": "c", "target": "t"})" << "\n";
  }
  CHECK_THROWS_AS(load_ablation_examples(path), DataError);
  fs::remove(path);
  CHECK_THROWS_AS(read_jsonl("/nonexistent/file.jsonl"), DataError);
}
