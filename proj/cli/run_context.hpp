#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cylbem/io.hpp"

namespace cylbem::cli {

/// Output directory bookkeeping for one subcommand run. Files are staged and
/// only become visible on finish(); on failure everything created is removed.
class RunContext {
 public:
  RunContext(std::string subcommand, std::filesystem::path out_dir,
             std::map<std::string, std::string> options);
  ~RunContext();

  std::ostream& open(const std::string& name);
  /// Records a failed --check criterion; the run still writes its outputs.
  void fail(const std::string& what);
  void note(const std::string& what);
  bool failed() const { return !failures_.empty(); }
  /// Commits staged files and writes the manifest.
  void finish();

 private:
  std::string subcommand_;
  std::filesystem::path dir_;
  bool created_dir_ = false;
  bool finished_ = false;
  std::map<std::string, std::string> options_;
  std::vector<std::unique_ptr<io::AtomicFile>> files_;
  std::vector<std::string> failures_;
};

}  // namespace cylbem::cli
