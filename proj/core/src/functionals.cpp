#include "curvlab/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

namespace {

// Stage-1 contraction: out[i*n*n + j*n + k] = sum_l R(i,j,k,l) w[l].
void contract_last(const CurvatureTensor& r, const double* w, double* out) {
  const int n = r.dim();
  const double* c = r.components().data();
  const std::size_t cells = static_cast<std::size_t>(n) * n * n;
  for (std::size_t ijk = 0; ijk < cells; ++ijk) {
    const double* row = c + ijk * n;
    double s = 0.0;
    for (int l = 0; l < n; ++l) s += row[l] * w[l];
    out[ijk] = s;
  }
}

// Stage-2: out[i*n + j] = sum_k p[i*n*n + j*n + k] ck[k].
void contract_third(const double* p, int n, const double* ck, double* out) {
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  for (std::size_t ij = 0; ij < cells; ++ij) {
    const double* row = p + ij * n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += row[k] * ck[k];
    out[ij] = s;
  }
}

// out[i] = sum_j q[i*n + j] b[j]
void matvec(const double* q, int n, const double* b, double* out) {
  for (int i = 0; i < n; ++i) {
    const double* row = q + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j] * b[j];
    out[i] = s;
  }
}

double bilinear(const double* q, int n, const double* a, const double* b) {
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = q + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j] * b[j];
    out += a[i] * s;
  }
  return out;
}

// Ordered vector pairs (a < b) of a four-frame; q for pair (a,b) holds
// q_ab[i][j] = sum_{k,l} R(i,j,k,l) f_a[k] f_b[l], i.e. R(e_i, e_j, f_a, f_b).
constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr int kASumPairs[4] = {1, 2, 3, 4};  // (0,2), (0,3), (1,2), (1,3)
constexpr int kBSumPairs[2] = {0, 5};        // (0,1), (2,3)

struct FourFrameCore {
  const double* q[6];
  const double* rows;
  int n;

  const double* vec(int a) const {
    return rows + static_cast<std::size_t>(a) * n;
  }
  double s(int pair) const {
    return bilinear(q[pair], n, vec(kPairs[pair][0]), vec(kPairs[pair][1]));
  }
  double t() const { return bilinear(q[5], n, vec(0), vec(1)); }
};

FourFrameCore build_four_frame_core(const CurvatureTensor& r,
                                    std::span<const double> rows,
                                    EvalWorkspace& ws) {
  const int n = r.dim();
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  ws.p.resize(3 * n3);
  ws.q.resize(6 * n2);
  // p slot d-1 holds the contraction against vector d (d = 1, 2, 3).
  for (int d = 1; d < 4; ++d)
    contract_last(r, rows.data() + static_cast<std::size_t>(d) * n,
                  ws.p.data() + static_cast<std::size_t>(d - 1) * n3);
  FourFrameCore core;
  core.rows = rows.data();
  core.n = n;
  for (int pi = 0; pi < 6; ++pi) {
    const int a = kPairs[pi][0];
    const int b = kPairs[pi][1];
    double* q = ws.q.data() + static_cast<std::size_t>(pi) * n2;
    contract_third(ws.p.data() + static_cast<std::size_t>(b - 1) * n3, n,
                   rows.data() + static_cast<std::size_t>(a) * n, q);
    core.q[pi] = q;
  }
  return core;
}

// Per-pair coefficients of the four-frame functionals; ct multiplies
// t = R(f1,f2,f3,f4).
void functional_coefficients(const FrameFunctional& f, double cs[6],
                             double& ct) {
  for (int i = 0; i < 6; ++i) cs[i] = 0.0;
  ct = 0.0;
  switch (f.kind) {
    case FrameFunctional::Kind::ASum:
      for (int pi : kASumPairs) cs[pi] = 1.0;
      break;
    case FrameFunctional::Kind::BSum:
      for (int pi : kBSumPairs) cs[pi] = 1.0;
      break;
    case FrameFunctional::Kind::Condition:
      for (int pi : kASumPairs) cs[pi] = 1.0;
      for (int pi : kBSumPairs) cs[pi] = -f.gamma;
      break;
    case FrameFunctional::Kind::Isotropic:
      for (int pi : kASumPairs) cs[pi] = 1.0;
      ct = -2.0;
      break;
    default:
      throw InvalidInput("not a four-frame functional");
  }
}

double flag_value(const CurvatureTensor& r, std::span<const double> rows,
                  double theta, EvalWorkspace& ws, bool with_gradient,
                  std::span<double> grad_rows, double* grad_theta) {
  const int n = r.dim();
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);

  // Extended row set (v, w1, w2, w) with w = w1 cos + w2 sin.
  ws.rows.resize(4 * static_cast<std::size_t>(n));
  const double* v = rows.data();
  const double* w1 = rows.data() + n;
  const double* w2 = rows.data() + 2 * static_cast<std::size_t>(n);
  double* w = ws.rows.data() + 3 * static_cast<std::size_t>(n);
  std::copy(rows.begin(), rows.end(), ws.rows.begin());
  for (int i = 0; i < n; ++i) w[i] = ct * w1[i] + st * w2[i];

  ws.p.resize(2 * n3);
  ws.q.resize(2 * n2);
  double* p_w1 = ws.p.data();
  double* p_w = ws.p.data() + n3;
  contract_last(r, w1, p_w1);
  contract_last(r, w, p_w);
  double* q01 = ws.q.data();       // R(e_i, e_j, v, w1)
  double* q0w = ws.q.data() + n2;  // R(e_i, e_j, v, w)
  contract_third(p_w1, n, v, q01);
  contract_third(p_w, n, v, q0w);

  const double k1 = bilinear(q01, n, v, w1);  // K(span(v, w1))
  const double k2 = bilinear(q0w, n, v, w);   // K(span(v, w))
  const double value = k1 - 0.25 * k2;
  if (!with_gradient) return value;

  std::vector<double> tmp1(n), tmp2(n), tmp3(n);
  matvec(q01, n, w1, tmp1.data());  // R(., w1, v, w1)
  matvec(q0w, n, w, tmp2.data());   // R(., w,  v, w)
  matvec(q0w, n, v, tmp3.data());   // R(., v,  v, w)
  double* gv = grad_rows.data();
  double* gw1 = grad_rows.data() + n;
  double* gw2 = grad_rows.data() + 2 * static_cast<std::size_t>(n);
  std::vector<double> gq01v(n);
  matvec(q01, n, v, gq01v.data());  // R(., v, v, w1)
  double gth = 0.0;
  for (int i = 0; i < n; ++i) {
    const double gw = 0.5 * tmp3[i];  // d/dw of the composed term
    gv[i] = 2.0 * tmp1[i] - 0.5 * tmp2[i];
    gw1[i] = -2.0 * gq01v[i] + ct * gw;
    gw2[i] = st * gw;
    gth += gw * (-st * w1[i] + ct * w2[i]);
  }
  *grad_theta = gth;
  return value;
}

}  // namespace

int FrameFunctional::vector_count() const {
  switch (kind) {
    case Kind::Sectional:
      return 2;
    case Kind::FlagPinching:
      return 3;
    default:
      return 4;
  }
}

int FrameFunctional::min_dim() const {
  switch (kind) {
    case Kind::Sectional:
      return 2;
    case Kind::FlagPinching:
      return 3;
    default:
      return 4;
  }
}

const char* FrameFunctional::name() const {
  switch (kind) {
    case Kind::ASum:
      return "a-sum";
    case Kind::BSum:
      return "b-sum";
    case Kind::Condition:
      return "condition";
    case Kind::Isotropic:
      return "isotropic";
    case Kind::Sectional:
      return "sectional";
    case Kind::FlagPinching:
      return "flag-pinching";
  }
  return "?";
}

FourFrameTerms four_frame_terms(const CurvatureTensor& r,
                                std::span<const double> rows,
                                EvalWorkspace& ws) {
  FourFrameCore core = build_four_frame_core(r, rows, ws);
  FourFrameTerms t;
  for (int pi : kASumPairs) t.a += core.s(pi);
  for (int pi : kBSumPairs) t.b += core.s(pi);
  t.t = core.t();
  return t;
}

double functional_from_terms(const FrameFunctional& f, const FourFrameTerms& t) {
  switch (f.kind) {
    case FrameFunctional::Kind::ASum:
      return t.a;
    case FrameFunctional::Kind::BSum:
      return t.b;
    case FrameFunctional::Kind::Condition:
      return t.a - f.gamma * t.b;
    case FrameFunctional::Kind::Isotropic:
      return t.a - 2.0 * t.t;
    default:
      throw InvalidInput("not a four-frame functional");
  }
}

double eval_rows(const CurvatureTensor& r, const FrameFunctional& f,
                 std::span<const double> rows, double theta,
                 EvalWorkspace& ws) {
  const int n = r.dim();
  switch (f.kind) {
    case FrameFunctional::Kind::Sectional: {
      const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
      const std::size_t n2 = static_cast<std::size_t>(n) * n;
      ws.p.resize(n3);
      ws.q.resize(n2);
      contract_last(r, rows.data() + n, ws.p.data());
      contract_third(ws.p.data(), n, rows.data(), ws.q.data());
      return bilinear(ws.q.data(), n, rows.data(), rows.data() + n);
    }
    case FrameFunctional::Kind::FlagPinching: {
      double unused = 0.0;
      return flag_value(r, rows, theta, ws, false, {}, &unused);
    }
    default:
      return functional_from_terms(f, four_frame_terms(r, rows, ws));
  }
}

double eval_rows_gradient(const CurvatureTensor& r, const FrameFunctional& f,
                          std::span<const double> rows, double theta,
                          std::span<double> grad_rows, double& grad_theta,
                          EvalWorkspace& ws) {
  const int n = r.dim();
  grad_theta = 0.0;
  std::fill(grad_rows.begin(), grad_rows.end(), 0.0);
  switch (f.kind) {
    case FrameFunctional::Kind::Sectional: {
      const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
      const std::size_t n2 = static_cast<std::size_t>(n) * n;
      ws.p.resize(n3);
      ws.q.resize(n2);
      const double* u = rows.data();
      const double* v = rows.data() + n;
      contract_last(r, v, ws.p.data());
      contract_third(ws.p.data(), n, u, ws.q.data());
      const double value = bilinear(ws.q.data(), n, u, v);
      std::vector<double> gu(n), gv(n);
      matvec(ws.q.data(), n, v, gu.data());  // R(., v, u, v)
      matvec(ws.q.data(), n, u, gv.data());  // R(., u, u, v)
      for (int i = 0; i < n; ++i) {
        grad_rows[i] = 2.0 * gu[i];
        grad_rows[static_cast<std::size_t>(n) + i] = -2.0 * gv[i];
      }
      return value;
    }
    case FrameFunctional::Kind::FlagPinching:
      return flag_value(r, rows, theta, ws, true, grad_rows, &grad_theta);
    default: {
      FourFrameCore core = build_four_frame_core(r, rows, ws);
      double cs[6];
      double ct = 0.0;
      functional_coefficients(f, cs, ct);
      double value = 0.0;
      std::vector<double> gtmp(n);
      for (int pi = 0; pi < 6; ++pi) {
        if (cs[pi] == 0.0) continue;
        const int a = kPairs[pi][0];
        const int b = kPairs[pi][1];
        value += cs[pi] * core.s(pi);
        // d/d f_a R(f_a,f_b,f_a,f_b) = 2 R(., f_b, f_a, f_b)
        matvec(core.q[pi], n, core.vec(b), gtmp.data());
        for (int i = 0; i < n; ++i)
          grad_rows[static_cast<std::size_t>(a) * n + i] +=
              2.0 * cs[pi] * gtmp[i];
        // d/d f_b R(f_a,f_b,f_a,f_b) = -2 R(., f_a, f_a, f_b)
        matvec(core.q[pi], n, core.vec(a), gtmp.data());
        for (int i = 0; i < n; ++i)
          grad_rows[static_cast<std::size_t>(b) * n + i] -=
              2.0 * cs[pi] * gtmp[i];
      }
      if (ct != 0.0) {
        value += ct * core.t();
        // q[5] = R(.,., f3, f4), q[0] = R(.,., f1, f2)
        matvec(core.q[5], n, core.vec(1), gtmp.data());
        for (int i = 0; i < n; ++i) grad_rows[i] += ct * gtmp[i];
        matvec(core.q[5], n, core.vec(0), gtmp.data());
        for (int i = 0; i < n; ++i)
          grad_rows[static_cast<std::size_t>(n) + i] -= ct * gtmp[i];
        matvec(core.q[0], n, core.vec(3), gtmp.data());
        for (int i = 0; i < n; ++i)
          grad_rows[2 * static_cast<std::size_t>(n) + i] += ct * gtmp[i];
        matvec(core.q[0], n, core.vec(2), gtmp.data());
        for (int i = 0; i < n; ++i)
          grad_rows[3 * static_cast<std::size_t>(n) + i] -= ct * gtmp[i];
      }
      return value;
    }
  }
}

double evaluate_functional(const CurvatureTensor& r, const FrameFunctional& f,
                           const Frame& frame, double theta) {
  if (frame.count() != f.vector_count())
    throw InvalidFrame(std::string(f.name()) + " needs a " +
                       std::to_string(f.vector_count()) + "-frame");
  if (frame.dim() != r.dim())
    throw DimensionMismatch("frame dimension does not match the tensor");
  if (r.dim() < f.min_dim())
    throw InvalidDimension(std::string(f.name()) + " needs dimension >= " +
                           std::to_string(f.min_dim()));
  EvalWorkspace ws;
  return eval_rows(r, f, frame.rows(), theta, ws);
}

}  // namespace curvlab
