#include "sras/recurrent.hpp"

#include <cmath>

#include "sras/error.hpp"

namespace sras {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd logistic(const VectorXd& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }
VectorXd tanh_of(const VectorXd& a) { return a.array().tanh().matrix(); }

void check_shapes(const RecurrentParams& p, Eigen::Index x_size, Eigen::Index h_size) {
  if (x_size != p.input_size || h_size != p.hidden_size ||
      p.gates.size() != gate_count(p.kind)) {
    throw Error(ErrorCode::ShapeMismatch, "input/hidden size does not match the parameters");
  }
}

VectorXd pre_activation(const GateWeights& g, const VectorXd& x, const VectorXd& h) {
  VectorXd a = g.bias;
  a.noalias() += g.input * x;
  a.noalias() += g.recurrent * h;
  return a;
}

struct GruStep {
  VectorXd h_prev, z, r, rh, cand;
};

struct LstmStep {
  VectorXd h_prev, c_prev, i, f, o, g, c, tanh_c;
};

void accumulate(GateWeights& grad, const VectorXd& da, const VectorXd& x, const VectorXd& h) {
  grad.input.noalias() += da * x.transpose();
  grad.recurrent.noalias() += da * h.transpose();
  grad.bias += da;
}

}  // namespace

std::size_t gate_count(CellKind kind) { return kind == CellKind::Gru ? 3 : 4; }

std::string_view gate_name(CellKind kind, std::size_t gate) {
  static constexpr std::string_view gru[] = {"update", "reset", "candidate"};
  static constexpr std::string_view lstm[] = {"input", "forget", "output", "cell"};
  return kind == CellKind::Gru ? gru[gate] : lstm[gate];
}

RecurrentParams RecurrentParams::zeros(CellKind kind, int input_size, int hidden_size) {
  if (input_size <= 0 || hidden_size <= 0) throw Error(ErrorCode::ShapeMismatch, "sizes must be positive");
  RecurrentParams p;
  p.kind = kind;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  p.gates.resize(gate_count(kind));
  for (auto& g : p.gates) {
    g.input = MatrixXd::Zero(hidden_size, input_size);
    g.recurrent = MatrixXd::Zero(hidden_size, hidden_size);
    g.bias = VectorXd::Zero(hidden_size);
  }
  p.out_weights = VectorXd::Zero(hidden_size);
  return p;
}

RecurrentParams RecurrentParams::random(CellKind kind, int input_size, int hidden_size, std::mt19937_64& rng) {
  RecurrentParams p = zeros(kind, input_size, hidden_size);
  const double bound = std::sqrt(1.0 / hidden_size);
  std::uniform_real_distribution<double> dist(-bound, bound);
  VectorXd flat(static_cast<Eigen::Index>(p.parameter_count()));
  for (Eigen::Index k = 0; k < flat.size(); ++k) flat(k) = dist(rng);
  p.assign(flat);
  return p;
}

std::size_t RecurrentParams::parameter_count() const {
  const auto h = static_cast<std::size_t>(hidden_size), x = static_cast<std::size_t>(input_size);
  return gates.size() * (h * x + h * h + h) + h + 1;
}

VectorXd RecurrentParams::flatten() const {
  VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index at = 0;
  const auto put = [&](const auto& m) {
    flat.segment(at, m.size()) = Eigen::Map<const VectorXd>(m.data(), m.size());
    at += m.size();
  };
  for (const auto& g : gates) {
    put(g.input);
    put(g.recurrent);
    put(g.bias);
  }
  put(out_weights);
  flat(at) = out_bias;
  return flat;
}

void RecurrentParams::assign(const VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw Error(ErrorCode::ShapeMismatch, "flat parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  const auto take = [&](auto& m) {
    Eigen::Map<VectorXd>(m.data(), m.size()) = flat.segment(at, m.size());
    at += m.size();
  };
  for (auto& g : gates) {
    take(g.input);
    take(g.recurrent);
    take(g.bias);
  }
  take(out_weights);
  out_bias = flat(at);
}

bool RecurrentParams::all_finite() const {
  for (const auto& g : gates) {
    if (!g.input.allFinite() || !g.recurrent.allFinite() || !g.bias.allFinite()) return false;
  }
  return out_weights.allFinite() && std::isfinite(out_bias);
}

VectorXd gru_cell(const RecurrentParams& p, const VectorXd& x, const VectorXd& h) {
  if (p.kind != CellKind::Gru) throw Error(ErrorCode::ShapeMismatch, "parameters are not a GRU");
  check_shapes(p, x.size(), h.size());
  using namespace gru_gate;
  const VectorXd z = logistic(pre_activation(p.gates[update], x, h));
  const VectorXd r = logistic(pre_activation(p.gates[reset], x, h));
  const VectorXd cand = tanh_of(pre_activation(p.gates[candidate], x, r.cwiseProduct(h)));
  return (1.0 - z.array()) * h.array() + z.array() * cand.array();
}

std::pair<VectorXd, VectorXd> lstm_cell(const RecurrentParams& p, const VectorXd& x, const VectorXd& h,
                                        const VectorXd& c) {
  if (p.kind != CellKind::Lstm) throw Error(ErrorCode::ShapeMismatch, "parameters are not an LSTM");
  check_shapes(p, x.size(), h.size());
  if (c.size() != p.hidden_size) throw Error(ErrorCode::ShapeMismatch, "cell state size mismatch");
  using namespace lstm_gate;
  const VectorXd i = logistic(pre_activation(p.gates[input], x, h));
  const VectorXd f = logistic(pre_activation(p.gates[forget], x, h));
  const VectorXd o = logistic(pre_activation(p.gates[output], x, h));
  const VectorXd g = tanh_of(pre_activation(p.gates[cell], x, h));
  VectorXd c_next = f.cwiseProduct(c) + i.cwiseProduct(g);
  VectorXd h_next = o.cwiseProduct(tanh_of(c_next));
  return {std::move(h_next), std::move(c_next)};
}

double forward_prediction(const RecurrentParams& p, const Sequence& window) {
  if (window.rows() == 0) throw Error(ErrorCode::ShapeMismatch, "empty window");
  VectorXd h = VectorXd::Zero(p.hidden_size);
  VectorXd c = VectorXd::Zero(p.hidden_size);
  for (Eigen::Index t = 0; t < window.rows(); ++t) {
    const VectorXd x = window.row(t).transpose();
    if (p.kind == CellKind::Gru) {
      h = gru_cell(p, x, h);
    } else {
      std::tie(h, c) = lstm_cell(p, x, h, c);
    }
  }
  return p.out_weights.dot(h) + p.out_bias;
}

LossGradient loss_and_gradients(const RecurrentParams& p, const Sequence& window, double target) {
  const Eigen::Index steps = window.rows();
  if (steps == 0) throw Error(ErrorCode::ShapeMismatch, "empty window");
  check_shapes(p, window.cols(), p.out_weights.size());
  const int hs = p.hidden_size;

  LossGradient out;
  out.gradient = RecurrentParams::zeros(p.kind, p.input_size, hs);
  auto& grad = out.gradient;

  if (p.kind == CellKind::Gru) {
    using namespace gru_gate;
    std::vector<GruStep> cache(static_cast<std::size_t>(steps));
    VectorXd h = VectorXd::Zero(hs);
    for (Eigen::Index t = 0; t < steps; ++t) {
      const VectorXd x = window.row(t).transpose();
      auto& s = cache[static_cast<std::size_t>(t)];
      s.h_prev = h;
      s.z = logistic(pre_activation(p.gates[update], x, h));
      s.r = logistic(pre_activation(p.gates[reset], x, h));
      s.rh = s.r.cwiseProduct(h);
      s.cand = tanh_of(pre_activation(p.gates[candidate], x, s.rh));
      h = (1.0 - s.z.array()) * h.array() + s.z.array() * s.cand.array();
    }
    out.prediction = p.out_weights.dot(h) + p.out_bias;
    const double residual = out.prediction - target;
    out.loss = residual * residual;
    const double d_pred = 2.0 * residual;
    grad.out_weights = d_pred * h;
    grad.out_bias = d_pred;

    VectorXd dh = d_pred * p.out_weights;
    for (Eigen::Index t = steps - 1; t >= 0; --t) {
      const VectorXd x = window.row(t).transpose();
      const auto& s = cache[static_cast<std::size_t>(t)];
      const VectorXd dz = dh.cwiseProduct(s.cand - s.h_prev);
      const VectorXd d_cand = dh.cwiseProduct(s.z);
      VectorXd dh_prev = dh.array() * (1.0 - s.z.array());

      const VectorXd da_cand = d_cand.array() * (1.0 - s.cand.array().square());
      accumulate(grad.gates[candidate], da_cand, x, s.rh);
      const VectorXd d_rh = p.gates[candidate].recurrent.transpose() * da_cand;
      const VectorXd dr = d_rh.cwiseProduct(s.h_prev);
      dh_prev += d_rh.cwiseProduct(s.r);

      const VectorXd da_z = dz.array() * s.z.array() * (1.0 - s.z.array());
      accumulate(grad.gates[update], da_z, x, s.h_prev);
      dh_prev.noalias() += p.gates[update].recurrent.transpose() * da_z;

      const VectorXd da_r = dr.array() * s.r.array() * (1.0 - s.r.array());
      accumulate(grad.gates[reset], da_r, x, s.h_prev);
      dh_prev.noalias() += p.gates[reset].recurrent.transpose() * da_r;

      dh = std::move(dh_prev);
    }
    return out;
  }

  using namespace lstm_gate;
  std::vector<LstmStep> cache(static_cast<std::size_t>(steps));
  VectorXd h = VectorXd::Zero(hs);
  VectorXd c = VectorXd::Zero(hs);
  for (Eigen::Index t = 0; t < steps; ++t) {
    const VectorXd x = window.row(t).transpose();
    auto& s = cache[static_cast<std::size_t>(t)];
    s.h_prev = h;
    s.c_prev = c;
    s.i = logistic(pre_activation(p.gates[input], x, h));
    s.f = logistic(pre_activation(p.gates[forget], x, h));
    s.o = logistic(pre_activation(p.gates[output], x, h));
    s.g = tanh_of(pre_activation(p.gates[cell], x, h));
    s.c = s.f.cwiseProduct(c) + s.i.cwiseProduct(s.g);
    s.tanh_c = tanh_of(s.c);
    c = s.c;
    h = s.o.cwiseProduct(s.tanh_c);
  }
  out.prediction = p.out_weights.dot(h) + p.out_bias;
  const double residual = out.prediction - target;
  out.loss = residual * residual;
  const double d_pred = 2.0 * residual;
  grad.out_weights = d_pred * h;
  grad.out_bias = d_pred;

  VectorXd dh = d_pred * p.out_weights;
  VectorXd dc = VectorXd::Zero(hs);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const VectorXd x = window.row(t).transpose();
    const auto& s = cache[static_cast<std::size_t>(t)];
    const VectorXd d_o = dh.cwiseProduct(s.tanh_c);
    dc.array() += dh.array() * s.o.array() * (1.0 - s.tanh_c.array().square());
    const VectorXd d_f = dc.cwiseProduct(s.c_prev);
    const VectorXd d_i = dc.cwiseProduct(s.g);
    const VectorXd d_g = dc.cwiseProduct(s.i);

    const VectorXd da_i = d_i.array() * s.i.array() * (1.0 - s.i.array());
    const VectorXd da_f = d_f.array() * s.f.array() * (1.0 - s.f.array());
    const VectorXd da_o = d_o.array() * s.o.array() * (1.0 - s.o.array());
    const VectorXd da_g = d_g.array() * (1.0 - s.g.array().square());

    accumulate(grad.gates[input], da_i, x, s.h_prev);
    accumulate(grad.gates[forget], da_f, x, s.h_prev);
    accumulate(grad.gates[output], da_o, x, s.h_prev);
    accumulate(grad.gates[cell], da_g, x, s.h_prev);

    VectorXd dh_prev = p.gates[input].recurrent.transpose() * da_i;
    dh_prev.noalias() += p.gates[forget].recurrent.transpose() * da_f;
    dh_prev.noalias() += p.gates[output].recurrent.transpose() * da_o;
    dh_prev.noalias() += p.gates[cell].recurrent.transpose() * da_g;

    dc = dc.cwiseProduct(s.f);
    dh = std::move(dh_prev);
  }
  return out;
}

}  // namespace sras
