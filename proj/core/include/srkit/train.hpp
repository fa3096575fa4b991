#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srkit/loss.hpp"
#include "srkit/metrics.hpp"
#include "srkit/net.hpp"

namespace srkit {

// Full run configuration. The JSON form contains exactly these fields
// (net as a nested object); unknown keys are rejected so a typo cannot
// silently change an ablation.
struct TrainConfig {
  std::string data_dir;
  int scale = 4;
  double lambda = 0.0;
  int epochs = 300;
  int batch_size = 16;
  int patches_per_epoch = 1600;
  NetConfig net;
  double lr = 1e-4;
  std::int64_t lr_halve_every = 200000;
  std::uint64_t seed = 0;
  int connectivity = 4;
  std::string out_dir;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

TrainConfig parse_train_config_json(const std::string& text);
TrainConfig load_train_config(const std::filesystem::path& path);
std::string train_config_to_json(const TrainConfig& cfg);

struct TrainResult {
  std::filesystem::path checkpoint_path;  // final checkpoint
  std::filesystem::path log_path;         // per-step CSV
  std::int64_t steps = 0;
  LossValue last_batch_loss;
};

// Runs the training loop: sample a patch batch, augment, forward, combined
// loss gradient, backward, optimizer step. Deterministic given (config,
// seed); log columns are step,epoch,sse,glrdn,lambda,total,lr.
TrainResult train(const TrainConfig& cfg);

struct EvalResult {
  std::vector<MetricReport> per_image;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
};

// Scores a checkpoint on every image of hr_dir: the net runs on the
// bicubic-upscaled degradation of each image and benchmark_pair supplies
// the Y-channel/shave conventions. With dump_dir set, a side-by-side
// [hr | sr] PNG is written per image for visual comparison.
EvalResult evaluate(
    const std::filesystem::path& checkpoint,
    const std::filesystem::path& hr_dir, int scale,
    const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

struct AblationRow {
  double lambda = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

// Trains one model per lambda from the same seed and scores each on the
// same held-out set. When eval_dir is absent, every fifth image of
// data_dir (sorted order) is held out and the rest train.
std::vector<AblationRow> ablate(
    const TrainConfig& cfg, std::span<const double> lambdas,
    const std::optional<std::filesystem::path>& eval_dir = std::nullopt);

// CSV schema: lambda,psnr,ssim (rows in input lambda order).
void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace srkit
