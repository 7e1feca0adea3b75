#include "run_context.hpp"

#include <iostream>
#include <json.hpp>

#include "cylbem/errors.hpp"

namespace cylbem::cli {

namespace fs = std::filesystem;

RunContext::RunContext(std::string subcommand, fs::path out_dir,
                       std::map<std::string, std::string> options)
    : subcommand_(std::move(subcommand)), dir_(std::move(out_dir)), options_(std::move(options)) {
  if (!fs::exists(dir_)) {
    fs::create_directories(dir_);
    created_dir_ = true;
  } else if (!fs::is_directory(dir_)) {
    throw UsageError(dir_.string() + " is not a directory");
  }
}

RunContext::~RunContext() {
  if (finished_) return;
  files_.clear();  // removes staged temporaries
  if (created_dir_) {
    std::error_code ec;
    if (fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }
}

std::ostream& RunContext::open(const std::string& name) {
  files_.push_back(std::make_unique<io::AtomicFile>(dir_ / name));
  return files_.back()->stream();
}

void RunContext::fail(const std::string& what) {
  failures_.push_back(what);
  std::cerr << "check failed: " << what << '\n';
}

void RunContext::note(const std::string& what) { std::cout << what << '\n'; }

void RunContext::finish() {
  nlohmann::json manifest;
  manifest["tool"] = "cylbem";
  manifest["version"] = CYLBEM_VERSION;
  manifest["subcommand"] = subcommand_;
  manifest["options"] = options_;
  std::vector<std::string> outputs;
  for (const auto& f : files_) outputs.push_back(f->target().filename().string());
  manifest["outputs"] = outputs;

  io::AtomicFile m(dir_ / "run_manifest.json");
  m.stream() << manifest.dump(2) << '\n';
  for (auto& f : files_) f->commit();
  m.commit();
  finished_ = true;
}

}  // namespace cylbem::cli
