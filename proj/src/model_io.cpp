#include "spanlab/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "spanlab/error.hpp"

namespace spanlab {

namespace {

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

void put(std::ostream& out, cplx z) { out << hex(z.real()) << ' ' << hex(z.imag()) << '\n'; }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw Error(ErrorKind::Io, "model file ends early");
    return w;
  }
  void expect(const std::string& w) {
    const std::string got = word();
    if (got != w) throw Error(ErrorKind::Io, "model file: expected '" + w + "', got '" + got + "'");
  }
  double real() {
    const std::string w = word();
    char* end = nullptr;
    const double x = std::strtod(w.c_str(), &end);
    if (end == w.c_str() || *end != '\0') throw Error(ErrorKind::Io, "model file: bad number " + w);
    return x;
  }
  cplx complex() {
    const double re = real();
    return {re, real()};
  }
  long integer() {
    const std::string w = word();
    char* end = nullptr;
    const long x = std::strtol(w.c_str(), &end, 10);
    if (end == w.c_str() || *end != '\0') throw Error(ErrorKind::Io, "model file: bad integer " + w);
    return x;
  }
  std::size_t count(std::size_t limit) {
    const long x = integer();
    if (x < 0 || static_cast<std::size_t>(x) > limit) {
      throw Error(ErrorKind::Io, "model file: count out of range");
    }
    return static_cast<std::size_t>(x);
  }

 private:
  std::istream& in_;
};

constexpr std::size_t kLimit = std::size_t(1) << 26;

}  // namespace

void write_model(std::ostream& out, const KernelModel& model) {
  const Domain& dom = model.domain();
  out << "spanlab-model 1\n";
  out << "curves " << dom.curve_count() << '\n';
  for (std::size_t i = 0; i < dom.curve_count(); ++i) {
    const BoundaryCurve& c = dom.curve(i);
    out << "curve " << c.nodes() << ' ' << c.coefficients().size() << '\n';
    for (const cplx& z : c.coefficients()) put(out, z);
  }
  out << "anchors " << dom.hole_count() << '\n';
  for (std::size_t q = 0; q < dom.hole_count(); ++q) put(out, dom.anchor(q));
  const DerivativeBasis& basis = model.basis();
  out << "degrees " << basis.degrees().outer;
  for (std::size_t q = 0; q < dom.hole_count(); ++q) out << ' ' << basis.degrees().hole(q);
  out << '\n';
  out << "max_order " << basis.max_order() << '\n';
  const GramFactorization& g = model.gram();
  out << "residual " << hex(g.hermitian_residual()) << '\n';
  out << "blocks " << g.blocks().size() << '\n';
  for (const GramBlock& blk : g.blocks()) {
    const std::size_t m = blk.columns.size();
    out << "block " << m << ' ' << blk.rank << '\n';
    out << "columns";
    for (std::size_t k : blk.columns) out << ' ' << k;
    out << "\ngram\n";
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) put(out, blk.gram(x, y));
    }
    out << "scale";
    for (std::size_t x = 0; x < m; ++x) out << ' ' << hex(blk.scale[x]);
    out << "\npivots";
    for (int p : blk.pivots) out << ' ' << p;
    out << "\nfactor\n";
    for (int x = 0; x < blk.rank; ++x) {
      for (int y = 0; y < blk.rank; ++y) put(out, blk.factor(x, y));
    }
  }
  out << "end\n";
}

KernelModel read_model(std::istream& in) {
  Reader r(in);
  r.expect("spanlab-model");
  if (r.integer() != 1) throw Error(ErrorKind::Io, "unsupported model format version");
  r.expect("curves");
  const std::size_t ncurves = r.count(1 << 16);
  if (ncurves == 0) throw Error(ErrorKind::Io, "model has no curves");
  std::vector<BoundaryCurve> curves;
  for (std::size_t i = 0; i < ncurves; ++i) {
    r.expect("curve");
    const int nodes = static_cast<int>(r.count(kLimit));
    const std::size_t ncoef = r.count(kLimit);
    std::vector<cplx> coef(ncoef);
    for (cplx& z : coef) z = r.complex();
    curves.emplace_back(std::move(coef), nodes);
  }
  r.expect("anchors");
  if (r.count(1 << 16) != ncurves - 1) throw Error(ErrorKind::Io, "anchor count mismatch");
  std::vector<Hole> holes;
  for (std::size_t q = 1; q < ncurves; ++q) holes.push_back({curves[q], r.complex()});
  auto domain = std::make_shared<const Domain>(curves[0], std::move(holes));

  r.expect("degrees");
  BasisDegrees deg;
  deg.outer = static_cast<int>(r.count(kLimit));
  for (std::size_t q = 1; q < ncurves; ++q) deg.holes.push_back(static_cast<int>(r.count(kLimit)));
  r.expect("max_order");
  const int max_order = static_cast<int>(r.count(64));
  DerivativeBasis basis(domain, deg, max_order);

  r.expect("residual");
  const double residual = r.real();
  r.expect("blocks");
  const std::size_t nblocks = r.count(basis.size());
  std::vector<GramBlock> blocks(nblocks);
  for (GramBlock& blk : blocks) {
    r.expect("block");
    const std::size_t m = r.count(basis.size());
    blk.rank = static_cast<int>(r.count(m));
    r.expect("columns");
    blk.columns.resize(m);
    for (std::size_t& k : blk.columns) k = r.count(basis.size() - 1);
    r.expect("gram");
    blk.gram.resize(m, m);
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) blk.gram(x, y) = r.complex();
    }
    r.expect("scale");
    blk.scale.resize(m);
    for (std::size_t x = 0; x < m; ++x) blk.scale[x] = r.real();
    r.expect("pivots");
    blk.pivots.resize(m);
    for (int& p : blk.pivots) p = static_cast<int>(r.count(m - 1));
    r.expect("factor");
    blk.factor.resize(blk.rank, blk.rank);
    for (int x = 0; x < blk.rank; ++x) {
      for (int y = 0; y < blk.rank; ++y) blk.factor(x, y) = r.complex();
    }
  }
  r.expect("end");
  GramFactorization g(basis.size(), std::move(blocks), residual);
  if (g.rank() == 0) throw Error(ErrorKind::RankZero, "stored model has rank 0");
  return KernelModel(std::move(basis), std::move(g));
}

void save_model(const std::filesystem::path& path, const KernelModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_model(out, model);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

KernelModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return read_model(in);
}

}  // namespace spanlab
