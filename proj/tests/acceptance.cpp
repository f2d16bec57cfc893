// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/resource.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssmod/curve.hpp"
#include "ssmod/eigenmod.hpp"
#include "ssmod/graph_cache.hpp"
#include "ssmod/modpoly.hpp"
#include "ssmod/pipeline.hpp"
#include "ssmod/report.hpp"
#include "ssmod/ssgraph.hpp"
#include "ssmod/watkins.hpp"

using namespace ssmod;
using Rational = boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

namespace {

const std::vector<std::uint64_t> kPrimes{11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 101, 389, 1009};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail.str("");
    ok = false;
    detail << why << "; ";
  }
};

struct Row {
  pipeline::CurveInput input;
  watkins::VerificationReport report;
};

std::vector<Row> run_bundled(graph_cache::GraphProvider& graphs) {
  std::ifstream csv(std::string(SSMOD_DATA_DIR) + "/curves/prime_conductor.csv");
  std::vector<Row> out;
  for (const auto& row : pipeline::read_csv(csv)) {
    if (!row.input) continue;
    out.push_back({*row.input, pipeline::verify_curve(*row.input, {}, graphs)});
  }
  return out;
}

const watkins::Verdict* check(const watkins::VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c.verdict;
  return nullptr;
}

std::size_t size_formula(std::uint64_t p) {
  static constexpr std::size_t extra[12]{0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2};
  return p / 12 + extra[p % 12];
}

void criterion1(Outcome& o) {
  double worst = 0;
  for (auto p : kPrimes) {
    const auto t0 = Clock::now();
    const auto b = ssgraph::enumerate_basis(p);
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    if (b.size() != size_formula(p)) o.fail("n wrong at p=" + std::to_string(p));
    Rational mass = 0;
    for (int w : b.weights) mass += Rational(1, w);
    if (mass != Rational(p - 1, 12)) o.fail("mass formula at p=" + std::to_string(p));
    if (dt >= 1.0) o.fail("p=" + std::to_string(p) + " took " + std::to_string(dt) + " s");
  }
  if (o.ok) o.detail << kPrimes.size() << " primes, slowest " << worst << " s";
}

void criterion2(Outcome& o) {
  const auto t0 = Clock::now();
  std::size_t matrices = 0;
  for (auto p : kPrimes) {
    const auto b = ssgraph::enumerate_basis(p);
    std::vector<ssgraph::HeckeMatrix> ms;
    for (unsigned ell : {2u, 3u, 5u, 7u}) {
      const auto m = ssgraph::hecke_matrix(b, modpoly::reduce_mod_p(modpoly::shipped(ell), p));
      ms.push_back(m);
      ++matrices;
      const std::string where = " (p=" + std::to_string(p) + ", l=" + std::to_string(ell) + ")";
      for (std::size_t i = 0; i < m.n; ++i) {
        std::int64_t row = 0;
        Rational col = 0;
        for (std::size_t k = 0; k < m.n; ++k) {
          row += m.at(i, k);
          col += Rational(m.at(k, i), b.weights[k]);
          if (m.at(i, k) * b.weights[k] != m.at(k, i) * b.weights[i]) o.fail("adjointness" + where);
          if (m.at(b.bar[i], b.bar[k]) != m.at(i, k)) o.fail("Frobenius equivariance" + where);
        }
        if (row != static_cast<std::int64_t>(ell) + 1) o.fail("row sum" + where);
        if (col != Rational(ell + 1, b.weights[i])) o.fail("Eisenstein column" + where);
      }
    }
    for (std::size_t x = 0; x < ms.size(); ++x)
      for (std::size_t y = x + 1; y < ms.size(); ++y)
        if (ssgraph::multiply(ms[x], ms[y]) != ssgraph::multiply(ms[y], ms[x]))
          o.fail("commutation at p=" + std::to_string(p));
  }
  const double dt = seconds_since(t0);
  if (dt >= 10.0) o.fail("took " + std::to_string(dt) + " s");
  if (o.ok) o.detail << matrices << " matrices in " << dt << " s";
}

void criterion3(Outcome& o) {
  std::size_t count = 0;
  for (std::uint64_t p = 11; p <= 100; ++p) {
    if (!ff::is_prime(p)) continue;
    const auto b = ssgraph::enumerate_basis(p);
    ++count;
    if (ssgraph::hecke_matrix_velu2(b) != ssgraph::hecke_matrix(b, modpoly::reduce_mod_p(modpoly::shipped(2), p)))
      o.fail("mismatch at p=" + std::to_string(p));
  }
  if (o.ok) o.detail << count << " primes identical";
}

void criterion4(Outcome& o, const std::vector<Row>& rows) {
  const std::vector<std::pair<std::array<curve::BigInt, 5>, int>> fixtures{
      {{0, -1, 1, -10, -20}, 1}, {{0, 0, 1, -1, 0}, 2}, {{0, 1, 1, -2, 0}, 40}};
  for (const auto& [a, m] : fixtures) {
    bool found = false;
    for (const auto& r : rows) {
      if (r.input.coefficients != a) continue;
      found = true;
      if (!r.report.modular_degree || *r.report.modular_degree != m)
        o.fail(r.input.label + " m_E != " + std::to_string(m));
      else
        o.detail << r.input.label << " m_E=" << m << " ";
    }
    if (!found) o.fail("fixture curve missing from bundled list");
  }
}

void criterion5(Outcome& o, const std::vector<Row>& rows) {
  if (rows.size() < 20) o.fail("fewer than 20 curves");
  std::size_t odd = 0;
  for (const auto& r : rows) {
    const auto& rep = r.report;
    if (!rep.modular_degree || !rep.l_value || !rep.norm) {
      o.fail(r.input.label + " incomplete report");
      continue;
    }
    const bool m_odd = *rep.modular_degree % 2 != 0;
    if (m_odd) {
      ++odd;
      if (rep.l_value->numerically_zero) o.fail(r.input.label + " odd m_E with L(E,1) zero");
      if (rep.l_value->root_number != 1) o.fail(r.input.label + " odd m_E with root number -1");
    }
    const auto res = rep.p % 12;
    const curve::BigInt nv = *rep.norm;
    if (res == 1 || res == 5) {
      if (nv % 2 != 0) o.fail(r.input.label + " <v,v> odd");
    } else {
      if (!rep.m4 || (nv - *rep.m4) % 2 != 0) o.fail(r.input.label + " <v,v> != v(e_k) mod 2");
    }
  }
  if (o.ok) o.detail << rows.size() << " curves, " << odd << " with odd m_E";
}

void criterion6(Outcome& o, const std::vector<Row>& rows) {
  std::size_t zeros = 0;
  for (const auto& r : rows) {
    const auto& rep = r.report;
    if (!rep.l_value || !rep.gross_kudla) continue;
    if (std::abs(rep.l_value->value) < 1e-6) {
      ++zeros;
      if (*rep.gross_kudla != 0) o.fail(r.input.label + " sum = " + rep.gross_kudla->str());
    }
    if (r.input.label == "11a1" && *rep.gross_kudla != 5) o.fail("11a1 sum != 5");
  }
  if (zeros == 0) o.fail("no vanishing L-value in the list");
  if (o.ok) o.detail << zeros << " curves with L(E,1) = 0, all sums 0; 11a1 gives 5";
}

void criterion7(Outcome& o, const std::vector<Row>& rows) {
  bool seen = false;
  for (const auto& r : rows) {
    const auto& rep = r.report;
    if (!rep.v) {
      o.fail(r.input.label + " no v_E");
      continue;
    }
    std::int64_t sum = 0;
    for (auto x : rep.v->coords) sum += x;
    if (sum != 0) o.fail(r.input.label + " zero-sum fails");
    if (r.input.label != "389a1") continue;
    seen = true;
    for (const auto& [i, x] : rep.fixed_entries)
      if (x % 2 != 0) o.fail("389a1 odd fixed entry at " + std::to_string(i));
    if (!rep.modular_degree || *rep.modular_degree % 4 != 0) o.fail("389a1: 4 does not divide m_E");
    const auto* t2 = check(rep, "theorem2");
    const auto* c1 = check(rep, "conjecture1");
    if (!t2 || t2->status != watkins::Status::Pass) o.fail("389a1 theorem2 not pass");
    if (!c1 || c1->status != watkins::Status::Pass) o.fail("389a1 conjecture1 not pass");
    if (o.ok) o.detail << "389a1: " << rep.fixed_entries.size() << " fixed entries even, m_E = " << *rep.modular_degree;
  }
  if (!seen) o.fail("389a1 missing");
}

void criterion8(Outcome& o, const std::vector<Row>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows) {
    const auto& rep = r.report;
    if (rep.p % 4 != 3) continue;
    ++n;
    if (!rep.m4 || !rep.l_value || !rep.l_twist) {
      o.fail(r.input.label + " incomplete");
      continue;
    }
    const bool lhs = rep.l_value->numerically_zero || rep.l_twist->numerically_zero;
    if (lhs != (*rep.m4 == 0)) o.fail(r.input.label + " counterexample");
  }
  if (o.ok) o.detail << n << " curves with p = 3 mod 4, no counterexample";
}

void criterion9(Outcome& o) {
  std::ifstream csv(std::string(SSMOD_DATA_DIR) + "/curves/prime_conductor.csv");
  const auto rows = pipeline::read_csv(csv);
  std::string outputs[2];
  const unsigned jobs[2]{1, 8};
  for (int k = 0; k < 2; ++k) {
    graph_cache::GraphProvider graphs;
    std::ostringstream out;
    pipeline::run_batch(rows, out, {}, jobs[k], graphs);
    outputs[k] = out.str();
  }
  if (outputs[0] != outputs[1]) o.fail("JSONL differs between --jobs 1 and --jobs 8");
  if (outputs[0].empty()) o.fail("empty output");
  if (o.ok) o.detail << outputs[0].size() << " bytes identical";
}

void criterion10(Outcome& o) {
  graph_cache::GraphProvider graphs;
  const auto t0 = Clock::now();
  const auto r = pipeline::verify_curve({"5077a1", {0, 0, 1, -7, 6}, 3}, {}, graphs);
  const double dt = seconds_since(t0);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double mib = static_cast<double>(usage.ru_maxrss) / 1024.0;
  if (r.status != watkins::ReportStatus::Pass) o.fail("5077a1 report " + watkins::to_string(r.status));
  if (dt >= 60) o.fail("took " + std::to_string(dt) + " s");
  if (mib >= 1024) o.fail("peak RSS " + std::to_string(mib) + " MiB");
  if (o.ok) o.detail << "p=5077, n=" << r.n << ", " << dt << " s, peak RSS " << mib << " MiB";
}

}  // namespace

int main() {
  graph_cache::GraphProvider graphs;
  std::vector<Row> rows;
  try {
    rows = run_bundled(graphs);
  } catch (const std::exception& e) {
    std::cerr << "bundled curves failed: " << e.what() << "\n";
  }

  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"basis size and mass formula", criterion1},
      {"Hecke invariants", criterion2},
      {"Velu and Phi_2 backends agree", criterion3},
      {"modular degree fixtures", [&](Outcome& o) { criterion4(o, rows); }},
      {"odd degree implies rank 0; parity identities", [&](Outcome& o) { criterion5(o, rows); }},
      {"Gross-Kudla vanishing", [&](Outcome& o) { criterion6(o, rows); }},
      {"389a1 fixed entries even, 4 | m_E; zero-sum", [&](Outcome& o) { criterion7(o, rows); }},
      {"m4 = 0 iff L(E,1) L(E x chi_-4,1) = 0", [&](Outcome& o) { criterion8(o, rows); }},
      {"batch determinism", criterion9},
      {"scale: p = 5077", criterion10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " -- "
              << o.detail.str() << "\n";
  }
  return failures == 0 ? 0 : 1;
}
