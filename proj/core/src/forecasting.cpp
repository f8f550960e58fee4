#include "sras/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "sras/error.hpp"
#include "sras/io.hpp"

namespace sras {

namespace {

using Eigen::VectorXd;

double normalize(const ForecastModel& m, double v) { return (v - m.sales_mean) / m.sales_std; }
double denormalize(const ForecastModel& m, double v) { return v * m.sales_std + m.sales_mean; }

// Adaptive-moment update over a flat parameter vector.
class Adam {
 public:
  Adam(std::size_t n, const TrainConfig& cfg)
      : cfg_(cfg), m_(VectorXd::Zero(static_cast<Eigen::Index>(n))), v_(VectorXd::Zero(static_cast<Eigen::Index>(n))) {}

  void step(VectorXd& params, const VectorXd& grad) {
    ++t_;
    m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
    v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    params.array() -= cfg_.learning_rate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + cfg_.epsilon);
  }

 private:
  const TrainConfig& cfg_;
  VectorXd m_;
  VectorXd v_;
  long t_ = 0;
};

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto flat = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
    throw Error(ErrorCode::ShapeMismatch, "weight array has the wrong length");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Lstm: return "lstm";
    case ModelKind::Gru: return "gru";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::Linear;
  if (name == "lstm") return ModelKind::Lstm;
  if (name == "gru") return ModelKind::Gru;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (window_length < 2) throw Error(ErrorCode::InvalidArgument, "window_length must be >= 2");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
  if (hidden_size < 1) throw Error(ErrorCode::InvalidArgument, "hidden_size must be >= 1");
  if (validation_days < 1) throw Error(ErrorCode::InvalidArgument, "validation_days must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid optimizer constants");
  }
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"window_length", c.window_length}, {"epochs", c.epochs},   {"learning_rate", c.learning_rate},
                     {"seed", c.seed},                   {"beta1", c.beta1},     {"beta2", c.beta2},
                     {"epsilon", c.epsilon},             {"hidden_size", c.hidden_size},
                     {"validation_days", c.validation_days}, {"batch_size", c.batch_size}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.window_length = j.value("window_length", c.window_length);
  c.epochs = j.value("epochs", c.epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.seed = j.value("seed", c.seed);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.hidden_size = j.value("hidden_size", c.hidden_size);
  c.validation_days = j.value("validation_days", c.validation_days);
  c.batch_size = j.value("batch_size", c.batch_size);
}

std::vector<SalesSeries> build_series(std::span<const SalesRecord> records) {
  std::map<SeriesKey, std::vector<const SalesRecord*>> groups;
  for (const auto& r : records) groups[{r.store, r.item}].push_back(&r);

  std::vector<SalesSeries> out;
  for (auto& [key, rows] : groups) {
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
      return std::chrono::sys_days{a->date} < std::chrono::sys_days{b->date};
    });
    SalesSeries s;
    s.store = key.first;
    s.item = key.second;
    s.start = rows.front()->date;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (days_between(s.start, rows[i]->date) != static_cast<int>(i)) {
        throw Error(ErrorCode::InsufficientData, "series store " + std::to_string(key.first) + " item " +
                                                     std::to_string(key.second) + " has a missing day before " +
                                                     format_date(rows[i]->date));
      }
      s.sales.push_back(static_cast<double>(rows[i]->sales));
    }
    out.push_back(std::move(s));
  }
  return out;
}

Sequence step_features(const ForecastModel& model, const Date& start, std::span<const double> sales) {
  Sequence seq(static_cast<Eigen::Index>(sales.size()), kStepFeatures);
  for (std::size_t i = 0; i < sales.size(); ++i) {
    const Date d = add_days(start, static_cast<int>(i));
    const auto r = static_cast<Eigen::Index>(i);
    seq(r, 0) = normalize(model, sales[i]);
    seq(r, 1) = static_cast<unsigned>(d.month()) / 12.0;
    seq(r, 2) = static_cast<unsigned>(d.day()) / 31.0;
    seq(r, 3) = iso_week(d) / 53.0;
    seq(r, 4) = normalize(model, model.averages.daily(d));
    seq(r, 5) = normalize(model, model.averages.monthly(d));
  }
  return seq;
}

Eigen::VectorXd linear_features(const ForecastModel& model, const Date& d) {
  Eigen::VectorXd x(kLinearFeatures);
  x << static_cast<unsigned>(d.month()) / 12.0, static_cast<unsigned>(d.day()) / 31.0, iso_week(d) / 53.0,
      normalize(model, model.averages.daily(d)), normalize(model, model.averages.monthly(d)),
      static_cast<double>(days_between(model.origin, d)) / model.train_days;
  return x;
}

TrainResult train(const SalesSeries& series, ModelKind kind, const TrainConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(series.sales.size());
  const int train_n = n - cfg.validation_days;
  const int min_train = kind == ModelKind::Linear ? kLinearFeatures + 2 : cfg.window_length + 1;
  if (train_n < min_train) {
    throw Error(ErrorCode::InsufficientData, "series of " + std::to_string(n) + " days leaves no training window");
  }

  TrainResult result;
  ForecastModel& model = result.model;
  model.kind = kind;
  model.store = series.store;
  model.item = series.item;
  model.window_length = cfg.window_length;
  model.origin = series.start;
  model.train_days = train_n;

  const std::span<const double> train_sales(series.sales.data(), static_cast<std::size_t>(train_n));
  model.sales_mean = std::accumulate(train_sales.begin(), train_sales.end(), 0.0) / train_n;
  double var = 0.0;
  for (double s : train_sales) var += (s - model.sales_mean) * (s - model.sales_mean);
  model.sales_std = std::sqrt(var / train_n);
  if (!(model.sales_std > 0.0)) model.sales_std = 1.0;
  model.averages = series_averages(series.start, train_sales);

  for (int t = train_n; t < n; ++t) {
    result.validation_dates.push_back(series.date_at(static_cast<std::size_t>(t)));
    result.validation_actual.push_back(series.sales[static_cast<std::size_t>(t)]);
  }

  if (kind == ModelKind::Linear) {
    Eigen::MatrixXd x(train_n, kLinearFeatures);
    Eigen::VectorXd y(train_n);
    for (int t = 0; t < train_n; ++t) {
      x.row(t) = linear_features(model, series.date_at(static_cast<std::size_t>(t))).transpose();
      y(t) = normalize(model, series.sales[static_cast<std::size_t>(t)]);
    }
    model.linear = fit_linear(x, y);
    const double train_mse = (model.linear.predict_rows(x) - y).squaredNorm() / train_n;
    double val_sq = 0.0;
    for (int t = train_n; t < n; ++t) {
      const double p = model.linear.predict(linear_features(model, series.date_at(static_cast<std::size_t>(t))));
      const double target = normalize(model, series.sales[static_cast<std::size_t>(t)]);
      val_sq += (p - target) * (p - target);
      result.validation_predicted.push_back(denormalize(model, p));
    }
    result.history.train_loss.push_back(train_mse);
    result.history.val_loss.push_back(val_sq / (n - train_n));
    return result;
  }

  const CellKind cell = kind == ModelKind::Gru ? CellKind::Gru : CellKind::Lstm;
  const Sequence inputs = step_features(model, series.start, series.sales);
  const int window = cfg.window_length;
  const auto window_at = [&](int target) -> Sequence { return inputs.middleRows(target - window, window); };
  const auto target_at = [&](int t) { return normalize(model, series.sales[static_cast<std::size_t>(t)]); };

  std::mt19937_64 rng(cfg.seed);
  model.recurrent = RecurrentParams::random(cell, kStepFeatures, cfg.hidden_size, rng);
  Eigen::VectorXd flat = model.recurrent.flatten();
  Adam adam(static_cast<std::size_t>(flat.size()), cfg);

  std::vector<int> order;
  for (int t = window; t < train_n; ++t) order.push_back(t);

  Eigen::VectorXd batch_grad = Eigen::VectorXd::Zero(flat.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int in_batch = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto lg = loss_and_gradients(model.recurrent, window_at(order[k]), target_at(order[k]));
      loss_sum += lg.loss;
      batch_grad += lg.gradient.flatten();
      if (++in_batch == cfg.batch_size || k + 1 == order.size()) {
        adam.step(flat, batch_grad / in_batch);
        model.recurrent.assign(flat);
        batch_grad.setZero();
        in_batch = 0;
      }
    }
    double val_sq = 0.0;
    for (int t = train_n; t < n; ++t) {
      const double e = forward_prediction(model.recurrent, window_at(t)) - target_at(t);
      val_sq += e * e;
    }
    result.history.train_loss.push_back(loss_sum / static_cast<double>(order.size()));
    result.history.val_loss.push_back(val_sq / (n - train_n));
  }
  if (!model.recurrent.all_finite()) throw Error(ErrorCode::InvalidArgument, "training diverged");

  for (int t = train_n; t < n; ++t) {
    result.validation_predicted.push_back(denormalize(model, forward_prediction(model.recurrent, window_at(t))));
  }
  return result;
}

std::vector<double> predict(const ForecastModel& model, const SalesSeries& history, int horizon) {
  if (horizon < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
  if (history.sales.size() < static_cast<std::size_t>(model.window_length)) {
    throw Error(ErrorCode::InsufficientHistory, "history shorter than the model window");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  const Date last = history.end();

  if (model.kind == ModelKind::Linear) {
    for (int k = 1; k <= horizon; ++k) {
      out.push_back(denormalize(model, model.linear.predict(linear_features(model, add_days(last, k)))));
    }
    return out;
  }

  const auto window = static_cast<std::size_t>(model.window_length);
  std::vector<double> recent(history.sales.end() - static_cast<std::ptrdiff_t>(window), history.sales.end());
  Date first = add_days(last, 1 - model.window_length);
  for (int k = 0; k < horizon; ++k) {
    const double next = denormalize(model, forward_prediction(model.recurrent, step_features(model, first, recent)));
    out.push_back(next);
    recent.erase(recent.begin());
    recent.push_back(next);
    first = add_days(first, 1);
  }
  return out;
}

void write_loss_history(const LossHistory& history, std::ostream& out) {
  out << "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out << e + 1 << ',' << format_real(history.train_loss[e]) << ',' << format_real(history.val_loss[e]) << '\n';
  }
}

void to_json(nlohmann::json& j, const ForecastModel& m) {
  nlohmann::json weights = nlohmann::json::object();
  int input_size = kLinearFeatures, hidden_size = 0;
  if (m.kind == ModelKind::Linear) {
    weights["coefficients"] = std::vector<double>(m.linear.weights.data(), m.linear.weights.data() + m.linear.weights.size());
    weights["intercept"] = std::vector<double>{m.linear.intercept};
  } else {
    input_size = m.recurrent.input_size;
    hidden_size = m.recurrent.hidden_size;
    for (std::size_t g = 0; g < m.recurrent.gates.size(); ++g) {
      const std::string name(gate_name(m.recurrent.kind, g));
      weights[name + "_input"] = matrix_json(m.recurrent.gates[g].input);
      weights[name + "_recurrent"] = matrix_json(m.recurrent.gates[g].recurrent);
      weights[name + "_bias"] = matrix_json(m.recurrent.gates[g].bias);
    }
    weights["out_weights"] = matrix_json(m.recurrent.out_weights);
    weights["out_bias"] = std::vector<double>{m.recurrent.out_bias};
  }
  j = nlohmann::json{
      {"kind", std::string(to_string(m.kind))},
      {"store", m.store},
      {"item", m.item},
      {"input_size", input_size},
      {"hidden_size", hidden_size},
      {"window_length", m.window_length},
      {"normalization", {{"mean", m.sales_mean}, {"std", m.sales_std}}},
      {"averages",
       {{"weekday", m.averages.by_weekday}, {"month", m.averages.by_month}, {"overall", m.averages.overall}}},
      {"trend", {{"origin", format_date(m.origin)}, {"train_days", m.train_days}}},
      {"weights", std::move(weights)},
  };
}

void from_json(const nlohmann::json& j, ForecastModel& m) {
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown model kind");
  m.kind = *kind;
  m.store = j.at("store").get<int>();
  m.item = j.at("item").get<int>();
  m.window_length = j.at("window_length").get<int>();
  m.sales_mean = j.at("normalization").at("mean").get<double>();
  m.sales_std = j.at("normalization").at("std").get<double>();
  m.averages.by_weekday = j.at("averages").at("weekday").get<std::array<double, 7>>();
  m.averages.by_month = j.at("averages").at("month").get<std::array<double, 12>>();
  m.averages.overall = j.at("averages").at("overall").get<double>();
  const auto origin = parse_date(j.at("trend").at("origin").get<std::string>());
  if (!origin) throw Error(ErrorCode::BadDate, "invalid trend origin");
  m.origin = *origin;
  m.train_days = j.at("trend").at("train_days").get<int>();

  const auto& w = j.at("weights");
  if (m.kind == ModelKind::Linear) {
    const auto coef = w.at("coefficients").get<std::vector<double>>();
    m.linear.weights = Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
    m.linear.intercept = w.at("intercept").at(0).get<double>();
    return;
  }
  const int in = j.at("input_size").get<int>();
  const int hs = j.at("hidden_size").get<int>();
  m.recurrent = RecurrentParams::zeros(m.kind == ModelKind::Gru ? CellKind::Gru : CellKind::Lstm, in, hs);
  for (std::size_t g = 0; g < m.recurrent.gates.size(); ++g) {
    const std::string name(gate_name(m.recurrent.kind, g));
    m.recurrent.gates[g].input = matrix_from_json(w.at(name + "_input"), hs, in);
    m.recurrent.gates[g].recurrent = matrix_from_json(w.at(name + "_recurrent"), hs, hs);
    m.recurrent.gates[g].bias = matrix_from_json(w.at(name + "_bias"), hs, 1);
  }
  m.recurrent.out_weights = matrix_from_json(w.at("out_weights"), hs, 1);
  m.recurrent.out_bias = w.at("out_bias").at(0).get<double>();
}

}  // namespace sras
