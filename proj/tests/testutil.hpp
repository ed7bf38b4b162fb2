#pragma once

// Shared helpers for the unit and acceptance suites: relative error,
// reproducible random problem generation, error-code capture, and a tiny
// process runner for the CLI-level checks.

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "measure.hpp"

namespace wcetest {

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

template <typename Fn>
std::optional<wce::ErrorCode> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const wce::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct RandomProblem {
  wce::AtomicSpace space;
  wce::SubAlgebra alg;
  wce::Weight u;
  wce::Weight w;
};

struct GenOptions {
  std::size_t max_blocks = 20;
  std::size_t max_cells = 8;  // per block
  bool allow_zero_values = true;
};

// Random partitioned space with table weights. Masses in [0.1, 10]; values
// in [-3, 3] with occasional exact zeros, or (allow_zero_values = false)
// magnitudes bounded away from zero so every block norm is positive.
inline RandomProblem random_problem(std::mt19937& rng, const GenOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> nb(1, opt.max_blocks);
  std::uniform_int_distribution<std::size_t> nc(1, opt.max_cells);
  std::uniform_real_distribution<double> mass(0.1, 10.0);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  std::bernoulli_distribution zero(0.15);
  std::bernoulli_distribution sign(0.5);

  const std::size_t blocks = nb(rng);
  std::vector<wce::Cell> cells;
  std::vector<std::vector<std::int64_t>> ids;
  std::int64_t next_id = 1;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t k = nc(rng);
    std::vector<std::int64_t> blk;
    blk.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      cells.push_back(wce::Cell{next_id, mass(rng)});
      blk.push_back(next_id);
      ++next_id;
    }
    ids.push_back(std::move(blk));
  }
  std::vector<std::pair<std::int64_t, double>> ut;
  std::vector<std::pair<std::int64_t, double>> wt;
  for (const wce::Cell& c : cells) {
    double uv = 0.0;
    double wv = 0.0;
    if (opt.allow_zero_values) {
      uv = zero(rng) ? 0.0 : val(rng);
      wv = zero(rng) ? 0.0 : val(rng);
    } else {
      uv = (sign(rng) ? 1.0 : -1.0) * mag(rng);
      wv = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    }
    ut.emplace_back(c.id, uv);
    wt.emplace_back(c.id, wv);
  }
  wce::AtomicSpace space(std::move(cells));
  wce::SubAlgebra alg(space, std::move(ids));
  return RandomProblem{std::move(space), std::move(alg), wce::Weight::table(std::move(ut)),
                       wce::Weight::table(std::move(wt))};
}

enum class RegimePick { Any, Smaller, Larger };

// Exponents sampled from [1.2, 6] (conjugates stay moderate, so the
// power-sum moments stay inside double range for the value ranges above).
inline wce::Exponents random_exponents(std::mt19937& rng, RegimePick pick = RegimePick::Any) {
  std::uniform_real_distribution<double> ex(1.2, 6.0);
  for (;;) {
    double p = ex(rng);
    double q = ex(rng);
    if (std::abs(p - q) < 0.05) {
      continue;
    }
    if (pick == RegimePick::Smaller && q > p) {
      std::swap(p, q);
    }
    if (pick == RegimePick::Larger && p > q) {
      std::swap(p, q);
    }
    return wce::Exponents::make(p, q);
  }
}

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr interleaved
};

inline RunResult run_command(const std::string& cmd) {
  RunResult r;
  const std::string full = cmd + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) {
    r.exit_code = WEXITSTATUS(status);
  }
  return r;
}

inline std::string write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

}  // namespace wcetest
