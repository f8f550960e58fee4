#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sras/features.hpp"
#include "sras/linear.hpp"
#include "sras/metrics.hpp"
#include "sras/recurrent.hpp"

namespace sras {

enum class ModelKind { Linear, Lstm, Gru };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct TrainConfig {
  int window_length = 28;
  int epochs = 30;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int hidden_size = 16;
  int validation_days = 92;  // chronological tail held out
  int batch_size = 1;

  /// Throws InvalidArgument.
  void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, TrainConfig& c);

/// One (store, item) daily sales series without gaps.
struct SalesSeries {
  int store = 0;
  int item = 0;
  Date start;
  std::vector<double> sales;

  Date date_at(std::size_t index) const { return add_days(start, static_cast<int>(index)); }
  Date end() const { return date_at(sales.size() - 1); }
};

/// Groups records by (store, item) in ascending key order. Throws
/// InsufficientData when a series skips a day.
std::vector<SalesSeries> build_series(std::span<const SalesRecord> records);

/// Number of inputs per timestep: normalized sales, month/12, day/31,
/// week/53, normalized weekday mean, normalized month mean.
inline constexpr int kStepFeatures = 6;
/// Regressors of the linear baseline: the target day's calendar columns and
/// seasonal means, plus a linear trend in days since the series start.
inline constexpr int kLinearFeatures = 6;

/// A fitted model for one series together with everything needed to build
/// its inputs for unseen dates.
struct ForecastModel {
  ModelKind kind = ModelKind::Gru;
  int store = 0;
  int item = 0;
  int window_length = 28;
  double sales_mean = 0.0;
  double sales_std = 1.0;
  GroupAverages averages;
  Date origin;         // series start; day 0 of the trend regressor
  int train_days = 1;  // trend scale
  LinearModel linear;
  RecurrentParams recurrent;
};

void to_json(nlohmann::json& j, const ForecastModel& m);
void from_json(const nlohmann::json& j, ForecastModel& m);

struct LossHistory {
  std::vector<double> train_loss;  // normalized MSE per epoch
  std::vector<double> val_loss;
};

void write_loss_history(const LossHistory& history, std::ostream& out);

struct TrainResult {
  ForecastModel model;
  LossHistory history;
  std::vector<Date> validation_dates;
  std::vector<double> validation_predicted;  // sales units, one-step-ahead on true history
  std::vector<double> validation_actual;
};

/// Fits one series. The linear baseline is solved in closed form and reports
/// a single history entry; recurrent models run `epochs` passes of Adam over
/// shuffled windows. Fully determined by (series, kind, cfg).
/// Throws InsufficientData when no training window fits before the
/// validation tail.
TrainResult train(const SalesSeries& series, ModelKind kind, const TrainConfig& cfg);

/// Rolling forecast of the `horizon` days after the end of `history`;
/// recurrent models feed their own predictions back as inputs. Throws
/// InsufficientHistory when history is shorter than the model's window.
std::vector<double> predict(const ForecastModel& model, const SalesSeries& history, int horizon);

/// Per-timestep input rows for `sales` starting at `start`, normalized with
/// the model's constants.
Sequence step_features(const ForecastModel& model, const Date& start, std::span<const double> sales);

/// Linear-baseline regressors for one target date.
Eigen::VectorXd linear_features(const ForecastModel& model, const Date& date);

}  // namespace sras
