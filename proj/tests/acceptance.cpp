// Acceptance run: one PASS/FAIL line per criterion 1-13.
// Usage: acceptance <path to the bosegas executable>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosegas/meanfield.hpp"
#include "bosegas/scattering.hpp"
#include "bosegas/verify.hpp"

using namespace bosegas;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double criterion1_seconds = 1.0;
constexpr double minimization_seconds = 10.0;
constexpr double suite_seconds = 600.0;
constexpr std::uint64_t seed = 20240607;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double timed(const std::function<void()>& f) {
  const auto t0 = Clock::now();
  f();
  return seconds_since(t0);
}

const char* cmp_text(Comparison c) {
  switch (c) {
    case Comparison::less:
      return "<";
    case Comparison::less_equal:
      return "<=";
    case Comparison::greater_equal:
      return ">=";
    case Comparison::equal:
      return "==";
  }
  return "?";
}

struct Line {
  int criterion;
  bool pass;
  std::string detail;
};

Line from_scorecard(const Scorecard& sc, int c, std::vector<std::string> extra_fail, const std::string& extra) {
  const auto checks = sc.criterion(c);
  std::ostringstream d;
  int failed = 0;
  for (const auto* ch : checks)
    if (!ch->pass) {
      ++failed;
      d << " [" << ch->id << " = " << ch->value << ", need " << cmp_text(ch->cmp) << " " << ch->threshold << "]";
    }
  for (const auto& f : extra_fail) d << " [" << f << "]";
  std::ostringstream head;
  head << checks.size() << " checks, " << failed << " failed" << extra;
  return {c, !checks.empty() && failed == 0 && extra_fail.empty(), head.str() + d.str()};
}

GPProblem harmonic(double N, double a) {
  GPProblem p;
  p.dimension = 3;
  p.N = N;
  p.coupling = a;
  return p;
}

bool run_verify_cli(const std::string& exe, const std::filesystem::path& out) {
  const std::string cmd = "\"" + exe + "\" verify --seed " + std::to_string(seed) + " --out \"" + out.string() + "\" 2>&1";
  return std::system(cmd.c_str()) == 0;
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <bosegas executable>\n";
    return 2;
  }
  const std::string exe = argv[1];
  const auto start = Clock::now();

  // Criterion 1 timing: the scattering work on its own.
  const double t1 = timed([] {
    const auto hc = RadialPotential::hard_core(1.0);
    const auto ss = RadialPotential::soft_sphere(1.0, 10.0);
    const auto a = solve_zero_energy(hc), b = solve_zero_energy(ss);
    for (double R : {2.0, 4.0, 8.0}) {
      (void)energy_identity_residual(a, hc, R);
      (void)energy_identity_residual(b, ss, R);
    }
  });

  // Criterion 6 timing: every minimisation used by the GP checks.
  double t6 = 0;
  for (auto [N, a] : {std::pair{1.0, 0.0}, {10.0, 0.1}, {1.0, 1.0}, {10.0, 0.2}, {1.0, 1e4}})
    t6 = std::max(t6, timed([N = N, a = a] { (void)gp_minimize(harmonic(N, a)); }));

  const Scorecard sc = run_verify(seed);
  std::vector<Line> lines;
  {
    std::vector<std::string> f;
    if (t1 >= criterion1_seconds) f.push_back("runtime " + std::to_string(t1) + " s >= 1 s");
    lines.push_back(from_scorecard(sc, 1, f, ", runtime " + std::to_string(t1) + " s"));
  }
  for (int c = 2; c <= 5; ++c) lines.push_back(from_scorecard(sc, c, {}, ""));
  {
    std::vector<std::string> f;
    if (t6 >= minimization_seconds) f.push_back("slowest minimisation " + std::to_string(t6) + " s >= 10 s");
    lines.push_back(from_scorecard(sc, 6, f, ", slowest minimisation " + std::to_string(t6) + " s"));
  }
  for (int c = 7; c <= 12; ++c) lines.push_back(from_scorecard(sc, c, {}, ""));

  // Criterion 13: two CLI verify runs agree up to the timestamp.
  {
    const auto dir = std::filesystem::temp_directory_path() / "bosegas_acceptance";
    std::filesystem::create_directories(dir);
    const auto a = dir / "scorecard_a.json", b = dir / "scorecard_b.json";
    std::vector<std::string> f;
    const bool ran = run_verify_cli(exe, a) & run_verify_cli(exe, b);
    if (!ran) f.push_back("verify exited nonzero");
    bool same = false;
    if (std::filesystem::exists(a) && std::filesystem::exists(b)) {
      same = strip_timestamp(read_json(a)) == strip_timestamp(read_json(b));
      if (!same) f.push_back("scorecards differ");
      if (strip_timestamp(read_json(a)) != strip_timestamp(sc.to_json(false))) f.push_back("CLI scorecard differs from the library run");
    } else {
      f.push_back("scorecard file missing");
    }
    const double total = seconds_since(start);
    if (total >= suite_seconds) f.push_back("total " + std::to_string(total) + " s >= 600 s");
    std::ostringstream d;
    d << "identical scorecards: " << (same ? "yes" : "no") << ", acceptance runtime " << total << " s";
    for (const auto& x : f) d << " [" << x << "]";
    lines.push_back({13, f.empty(), d.str()});
  }

  bool all = true;
  for (const auto& l : lines) {
    std::printf("%s criterion %d: %s\n", l.pass ? "PASS" : "FAIL", l.criterion, l.detail.c_str());
    all = all && l.pass;
  }
  std::printf("%s: %zu/%zu criteria\n", all ? "ALL PASS" : "FAILURES", static_cast<std::size_t>(std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.pass; })), lines.size());
  return all ? 0 : 1;
}
