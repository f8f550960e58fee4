#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sras {

enum class CellKind { Gru, Lstm };

namespace gru_gate {
inline constexpr std::size_t update = 0;
inline constexpr std::size_t reset = 1;
inline constexpr std::size_t candidate = 2;
}  // namespace gru_gate

namespace lstm_gate {
inline constexpr std::size_t input = 0;
inline constexpr std::size_t forget = 1;
inline constexpr std::size_t output = 2;
inline constexpr std::size_t cell = 3;
}  // namespace lstm_gate

/// Timesteps as rows, features as columns.
using Sequence = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GateWeights {
  Eigen::MatrixXd input;      // hidden x input
  Eigen::MatrixXd recurrent;  // hidden x hidden
  Eigen::VectorXd bias;       // hidden
};

/// Weights of a single-layer recurrent regressor: one GRU or LSTM cell whose
/// final hidden state feeds a scalar linear read-out. The same type doubles
/// as the gradient container.
struct RecurrentParams {
  CellKind kind = CellKind::Gru;
  int input_size = 0;
  int hidden_size = 0;
  std::vector<GateWeights> gates;  // GRU: update, reset, candidate. LSTM: input, forget, output, cell.
  Eigen::VectorXd out_weights;
  double out_bias = 0.0;

  static RecurrentParams zeros(CellKind kind, int input_size, int hidden_size);
  /// Every entry uniform in [-sqrt(1/hidden), sqrt(1/hidden)].
  static RecurrentParams random(CellKind kind, int input_size, int hidden_size, std::mt19937_64& rng);

  std::size_t parameter_count() const;
  /// Fixed order: per gate input, recurrent, bias (column-major), then read-out.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  bool all_finite() const;
};

std::size_t gate_count(CellKind kind);
std::string_view gate_name(CellKind kind, std::size_t gate);

/// z = s(Wz x + Uz h + bz), r = s(Wr x + Ur h + br),
/// c = tanh(Wh x + Uh (r*h) + bh), h' = (1 - z) * h + z * c.
/// Throws ShapeMismatch.
Eigen::VectorXd gru_cell(const RecurrentParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& h);

/// Returns (h', c') with c' = f*c + i*g and h' = o*tanh(c'). Throws ShapeMismatch.
std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_cell(const RecurrentParams& p, const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& h, const Eigen::VectorXd& c);

/// Runs the cell over the window from a zero state and reads out the final
/// hidden state.
double forward_prediction(const RecurrentParams& p, const Sequence& window);

struct LossGradient {
  double loss = 0.0;  // (prediction - target)^2
  double prediction = 0.0;
  RecurrentParams gradient;
};

/// Squared error and its exact gradient by backprop-through-time over the
/// whole window. Throws ShapeMismatch (also for an empty window).
LossGradient loss_and_gradients(const RecurrentParams& p, const Sequence& window, double target);

}  // namespace sras
