#include "unshade/dataset.hpp"

#include <filesystem>
#include <fstream>

#include "unshade/errors.hpp"
#include "unshade/logging.hpp"

namespace unshade {

namespace {

// Yields (line_number, line) pairs with \r stripped, blanks/comments skipped.
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  check(in.good(), "dataset: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(lineno, line);
  }
}

std::string resolve(const std::string& base_file, const std::string& rel) {
  namespace fs = std::filesystem;
  fs::path p(rel);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (fs::path(base_file).parent_path() / p).lexically_normal().string();
}

}  // namespace

UnpairedDataset load_manifest(const std::string& manifest_path) {
  UnpairedDataset ds;
  for_each_line(manifest_path, [&](int lineno, const std::string& line) {
    auto tab = line.find('\t');
    check(tab != std::string::npos && tab > 0 && tab + 1 < line.size(),
          "dataset: malformed manifest line " + std::to_string(lineno) +
              " in " + manifest_path);
    std::string label = line.substr(0, tab);
    std::string rel = line.substr(tab + 1);
    std::string full = resolve(manifest_path, rel);
    if (label == "s") {
      ds.shadow.push_back(read_png_rgb8(full));
      ds.shadow_paths.push_back(full);
    } else if (label == "f") {
      ds.shadowfree.push_back(read_png_rgb8(full));
      ds.shadowfree_paths.push_back(full);
    } else {
      throw Error("dataset: unknown label '" + label + "' at line " +
                  std::to_string(lineno) + " in " + manifest_path);
    }
  });
  check(!ds.shadow.empty(), "dataset: no shadow images in " + manifest_path);
  check(!ds.shadowfree.empty(),
        "dataset: no shadow-free images in " + manifest_path);
  LOG_INFO("dataset: %zu shadow / %zu shadow-free images", ds.shadow.size(),
           ds.shadowfree.size());
  return ds;
}

std::vector<EvalPair> load_pairs(const std::string& pairs_path) {
  std::vector<EvalPair> pairs;
  for_each_line(pairs_path, [&](int lineno, const std::string& line) {
    auto tab = line.find('\t');
    check(tab != std::string::npos && tab > 0 && tab + 1 < line.size(),
          "dataset: malformed pairs line " + std::to_string(lineno) + " in " +
              pairs_path);
    pairs.push_back({resolve(pairs_path, line.substr(0, tab)),
                     resolve(pairs_path, line.substr(tab + 1))});
  });
  check(!pairs.empty(), "dataset: no pairs in " + pairs_path);
  return pairs;
}

}  // namespace unshade
