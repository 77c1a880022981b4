#include <atomic>
#include <iostream>
#include <mutex>
#include <set>

#include "qbl/error.hpp"
#include "qbl/log.hpp"

namespace qbl {

namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_mu;
std::set<std::string>& seen() {
  static std::set<std::string> s;
  return s;
}
}  // namespace

void set_quiet(bool q) { g_quiet.store(q); }
bool quiet() { return g_quiet.load(); }

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lk(g_mu);
  if (!seen().insert(msg).second) return;
  if (!g_quiet.load()) std::cerr << "warning: " << msg << "\n";
}

void info(const std::string& msg) {
  if (!g_quiet.load()) std::cerr << msg << "\n";
}

}  // namespace qbl
