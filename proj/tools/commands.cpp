#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "lyap/dh.hpp"
#include "lyap/disorder.hpp"
#include "lyap/edge.hpp"
#include "lyap/errors.hpp"
#include "lyap/matprod.hpp"
#include "lyap/model_io.hpp"
#include "lyap/projective.hpp"
#include "lyap/transfer_operator.hpp"

namespace lyapcli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to a file, or to the fallback stream when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw lyap::DomainError("outputPath not writable: " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) *os_ << ',';
      *os_ << c;
      first = false;
    }
    *os_ << '\n';
  }
  void record(std::vector<std::string>& written) const {
    if (!path_.empty()) written.push_back(path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

lyap::DisorderModel modelOr(const Common& c, const lyap::DisorderModel& fallback) {
  return c.modelPath.empty() ? fallback : lyap::loadModel(c.modelPath);
}

void writeJson(const std::string& path, const json& doc, std::vector<std::string>& written) {
  std::ofstream f(path);
  if (!f) throw lyap::DomainError("outputPath not writable: " + path);
  f << doc.dump(2) << '\n';
  written.push_back(path);
}

std::vector<double> edgeAbscissae(const lyap::EdgeMeasure& m) {
  std::vector<double> x(static_cast<std::size_t>(m.grid.size()));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = m.grid.node(i);
  return x;
}

json edgeSummary(const lyap::EdgeMeasure& m) {
  return {{"side", lyap::edgeSideName(m.side)},
          {"slopeRaw", m.slopeRaw},
          {"intercept", m.intercept},
          {"rhoEstimate", m.rhoEstimate},
          {"rhoIsLowerBound", m.rhoIsLowerBound},
          {"fitWindow", {m.fitWindow.first, m.fitWindow.second}},
          {"iterations", m.iterations},
          {"fixedPointResidual", m.fixedPointResidual}};
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json makeManifest(const std::string& command, std::uint64_t seed, const json& config,
                  const std::vector<std::string>& outputs) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return {{"command", command}, {"version", kVersion}, {"seed", seed},
          {"configHash", hex},  {"config", config},    {"outputs", outputs}};
}

std::vector<std::string> runMc(const McArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  if (a.eps.empty()) throw lyap::DomainError("eps: at least one value required");
  lyap::MCOptions mo;
  if (a.norm == "max") {
    mo.norm = lyap::VectorNorm::MaxEntry;
  } else if (a.norm != "rowsum") {
    throw lyap::DomainError("norm: expected rowsum or max");
  }

  std::vector<lyap::LyapEstimate> est;
  if (a.eps.size() == 1) {
    est.push_back(lyap::lyapunovMC(a.eps[0], model, a.steps, a.batches, a.common.seed, mo));
  } else {
    if (mo.norm != lyap::VectorNorm::RowSum) throw lyap::DomainError("norm: sweeps use rowsum");
    est = lyap::epsilonSweep(model, a.eps, a.steps, a.batches, a.common.seed);
  }

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"epsilon", "k", "mean", "stderr", "steps", "seed"});
  for (const auto& e : est) {
    csv.row({num(e.epsilon), num(e.k), num(e.mean), num(e.stdErr), std::to_string(e.steps), std::to_string(e.seed)});
  }
  csv.record(written);
  return written;
}

std::vector<std::string> runChain(const ChainArgs& a, std::ostream& os) {
  lyap::ChainConfig cfg;
  cfg.k = a.k;
  cfg.model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  cfg.steps = a.steps;
  cfg.burnIn = a.burnIn;
  cfg.seed = a.common.seed;
  cfg.x0 = a.x0;
  const lyap::ChainSummary s = lyap::simulateX(cfg);
  const lyap::LyapEstimate L = lyap::ergodicLyapunov(cfg);

  std::vector<std::string> written;
  if (!a.histOut.empty()) {
    Sink csv(a.histOut, os);
    csv.row({"binLeft", "binRight", "density"});
    const Eigen::VectorXd d = s.histogram.density();
    for (std::size_t b = 0; b < s.histogram.bins(); ++b) {
      const double left = s.histogram.binLeft(b);
      csv.row({num(left), num(left + s.histogram.binWidth()), num(d(static_cast<Eigen::Index>(b)))});
    }
    csv.record(written);
  }
  const json summary = {{"k", a.k},
                        {"lyapunov", L.mean},
                        {"stderr", L.stdErr},
                        {"driftMean", s.driftMean},
                        {"driftStdErr", s.driftStdErr},
                        {"steps", L.steps},
                        {"seed", L.seed}};
  if (a.common.out.empty()) {
    os << summary.dump(2) << '\n';
  } else {
    writeJson(a.common.out, summary, written);
  }
  return written;
}

std::vector<std::string> runOperator(const OperatorArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  lyap::InvariantOptions io;
  io.tol = a.tol;
  io.spacing = a.spacing;
  io.margin = a.margin;
  io.maxIter = a.maxIter;
  if (a.method == "iterate") {
    io.method = lyap::FixedPointMethod::Iterate;
  } else if (a.method != "direct") {
    throw lyap::DomainError("method: expected direct or iterate");
  }
  const lyap::InvariantTail inv = lyap::solveInvariant(a.k, model, io);
  const double L = lyap::lyapFunctional(inv.tail, a.k);

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"x", "G", "density"});
  const Eigen::VectorXd d = inv.tail.density();
  for (Eigen::Index i = 0; i < inv.tail.grid.size(); ++i) {
    csv.row({num(inv.tail.grid.node(static_cast<std::size_t>(i))), num(inv.tail.values(i)), num(d(i))});
  }
  csv.record(written);
  if (!a.common.out.empty()) {
    os << json{{"k", a.k}, {"iterations", inv.iterations}, {"residual", inv.residual}, {"lyapunov", L}}.dump(2)
       << '\n';
  }
  return written;
}

std::vector<std::string> runEdge(const EdgeArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  lyap::EdgeSide side;
  if (a.side == "left") {
    side = lyap::EdgeSide::Left;
  } else if (a.side == "right") {
    side = lyap::EdgeSide::Right;
  } else {
    throw lyap::DomainError("side: expected left or right");
  }
  lyap::EdgeSolveOptions eo;
  eo.spacing = a.spacing;
  eo.x0 = a.x0;
  const lyap::EdgeMeasure m = lyap::solveEdge(model, side, eo);

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"x", "F", "residual"});
  const Eigen::VectorXd r = m.residual();
  const auto x = edgeAbscissae(m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    csv.row({num(x[i]), num(m.F(j)), num(r(j))});
  }
  csv.record(written);
  const json summary = edgeSummary(m);
  if (!a.jsonOut.empty()) writeJson(a.jsonOut, summary, written);
  if (!a.common.out.empty()) os << summary.dump(2) << '\n';
  return written;
}

std::vector<std::string> runDh(const DhArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  const lyap::EdgeMeasure left = lyap::solveEdge(model, lyap::EdgeSide::Left);
  const lyap::EdgeMeasure right = lyap::solveEdge(model, lyap::EdgeSide::Right);

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"k", "Ck", "kappa1", "kappa2", "asymptotic", "oneStepResidual"});
  for (double k : a.ks) {
    const lyap::DHApprox dh = lyap::buildDH(k, left, right);
    csv.row({num(k), num(dh.Ck), num(dh.constants.kappa1), num(dh.constants.kappa2), num(lyap::asymptoticLyap(dh)),
             num(lyap::oneStepResidual(dh, model))});
  }
  csv.record(written);
  return written;
}

std::vector<std::string> runDhConstants(const DhConstantsArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  const lyap::EdgeMeasure left = lyap::solveEdge(model, lyap::EdgeSide::Left);
  const lyap::EdgeMeasure right = lyap::solveEdge(model, lyap::EdgeSide::Right);
  const lyap::DHConstants c = lyap::dhConstants(left, right);
  const json doc = {{"kappa1", c.kappa1},   {"kappa2", c.kappa2},   {"cLeft", c.cLeft},
                    {"cRight", c.cRight},   {"rhoLeft", c.rhoLeft}, {"rhoRight", c.rhoRight},
                    {"kappa1Left", c.kappa1Left}, {"kappa1Right", c.kappa1Right}};
  const std::string path = a.jsonOut.empty() ? a.common.out : a.jsonOut;
  std::vector<std::string> written;
  if (path.empty()) {
    os << doc.dump(2) << '\n';
  } else {
    writeJson(path, doc, written);
  }
  return written;
}

std::vector<std::string> runWd(const WdArgs& a, std::ostream& os) {
  const bool haveEps = a.eps != 0.0;
  const bool haveK = a.k != 0.0;
  if (haveEps == haveK) throw lyap::DomainError("eps: give exactly one of --eps and --k");
  const double eps = haveEps ? a.eps : std::exp(-a.k);
  const double v = lyap::weakDisorderFormula(eps);
  std::vector<std::string> written;
  if (a.common.out.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    os << buf << '\n';
  } else {
    Sink csv(a.common.out, os);
    csv.row({"epsilon", "k", "wd"});
    csv.row({num(eps), num(-std::log(eps)), num(v)});
    csv.record(written);
  }
  return written;
}

std::vector<std::string> runCompare(const CompareArgs& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::gaussian(0.0, 1.0));
  const lyap::EdgeMeasure left = lyap::solveEdge(model, lyap::EdgeSide::Left);
  const lyap::EdgeMeasure right = lyap::solveEdge(model, lyap::EdgeSide::Right);
  lyap::CompareOptions co;
  co.mcSteps = a.mcSteps;
  co.chainSteps = a.chainSteps;
  co.mcBatches = a.batches;
  co.seed = a.common.seed;
  const auto rows = lyap::compareAll(a.ks, model, left, right, co);

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"k", "mc", "mcStderr", "ergodic", "ergodicStderr", "operator", "dh", "oneStepResidual"});
  for (const auto& r : rows) {
    csv.row({num(r.k), num(r.mc.mean), num(r.mc.stdErr), num(r.ergodic.mean), num(r.ergodic.stdErr),
             num(r.operatorL), num(r.dh), num(r.residual)});
  }
  csv.record(written);
  return written;
}

std::vector<std::string> runFig2(const Fig2Args& a, std::ostream& os) {
  const auto model = modelOr(a.common, lyap::DisorderModel::figure2());
  if (!(a.xMax > a.xMin)) throw lyap::DomainError("x-max: must exceed x-min");
  const lyap::EdgeMeasure left = lyap::solveEdge(model, lyap::EdgeSide::Left);
  const lyap::EdgeMeasure right = lyap::solveEdge(model, lyap::EdgeSide::Right);
  const lyap::DHApprox dh = lyap::buildDH(a.k, left, right);
  const lyap::InvariantTail inv = lyap::solveInvariant(a.k, model);
  const Eigen::VectorXd dens = inv.tail.density();

  std::vector<std::string> written;
  Sink csv(a.common.out, os);
  csv.row({"x", "invariant", "dhLeft", "dhRight"});
  const lyap::UniformGrid& g = inv.tail.grid;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    if (x < a.xMin - 1e-9 || x > a.xMax + 1e-9) continue;
    const auto [dl, dr] = dh.branchDensities(x);
    csv.row({num(x), num(dens(static_cast<Eigen::Index>(i))), num(dl), num(dr)});
  }
  csv.record(written);
  return written;
}

}  // namespace lyapcli
