// srkit command line: bicubic degradation, GLRDN-regularized training,
// evaluation, lambda ablation and one-shot metrics.
//
//   srkit degrade --in DIR --out DIR --scale N
//   srkit train   --config FILE
//   srkit eval    --ckpt FILE --hr DIR --scale N --out CSV
//   srkit ablate  --config FILE --lambdas 0,0.1,1,5,10,100 --out CSV
//   srkit metric  {psnr|ssim} --a IMG --b IMG
//
// SRKIT_THREADS caps worker threads. Exit code 0 on success; failures
// print a single "error: ..." line on stderr.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "srkit/dataset.hpp"
#include "srkit/metrics.hpp"
#include "srkit/train.hpp"

namespace {

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      throw std::invalid_argument("ablate: empty entry in --lambdas");
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size())
      throw std::invalid_argument("ablate: bad lambda '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int run_degrade(const std::string& in_dir, const std::string& out_dir,
                int scale) {
  const int n = srkit::degrade_directory(in_dir, out_dir, scale);
  std::printf("degraded %d images at x%d into %s\n", n, scale, out_dir.c_str());
  return 0;
}

int run_train(const std::string& config_path) {
  const srkit::TrainConfig cfg = srkit::load_train_config(config_path);
  const srkit::TrainResult result = srkit::train(cfg);
  std::printf("trained %lld steps; final sse=%.6g glrdn=%.6g total=%.6g\n",
              (long long)result.steps, result.last_batch_loss.sse,
              result.last_batch_loss.glrdn, result.last_batch_loss.total);
  std::printf("checkpoint: %s\nlog: %s\n", result.checkpoint_path.c_str(),
              result.log_path.c_str());
  return 0;
}

int run_eval(const std::string& ckpt, const std::string& hr_dir, int scale,
             const std::string& out_csv, const std::string& dump_dir) {
  std::optional<std::filesystem::path> dump;
  if (!dump_dir.empty()) dump = dump_dir;
  srkit::EvalResult result = srkit::evaluate(ckpt, hr_dir, scale, dump);
  std::vector<srkit::MetricReport> rows = result.per_image;
  srkit::MetricReport mean;
  mean.dataset = rows.front().dataset;
  mean.image_id = "_mean";
  mean.scale = scale;
  mean.psnr_db = result.mean_psnr;
  mean.ssim = result.mean_ssim;
  rows.push_back(mean);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error("eval: cannot write " + out_csv);
    srkit::write_metric_csv(out, rows);
  } else {
    srkit::write_metric_csv(std::cout, rows);
  }
  std::printf("mean over %zu images: %.2f dB / %.4f\n", result.per_image.size(),
              result.mean_psnr, result.mean_ssim);
  return 0;
}

int run_ablate(const std::string& config_path, const std::string& lambdas_text,
               const std::string& out_csv, const std::string& eval_dir) {
  const srkit::TrainConfig cfg = srkit::load_train_config(config_path);
  const std::vector<double> lambdas = parse_lambda_list(lambdas_text);
  std::optional<std::filesystem::path> eval;
  if (!eval_dir.empty()) eval = eval_dir;
  const auto rows = srkit::ablate(cfg, lambdas, eval);
  std::ofstream out(out_csv);
  if (!out) throw std::runtime_error("ablate: cannot write " + out_csv);
  srkit::write_ablation_csv(out, rows);
  for (const auto& r : rows)
    std::printf("lambda=%-8g psnr=%.2f ssim=%.4f\n", r.lambda, r.psnr, r.ssim);
  return 0;
}

int run_metric(const std::string& kind, const std::string& a_path,
               const std::string& b_path) {
  const srkit::ImageF32 a = srkit::load_image(a_path);
  const srkit::ImageF32 b = srkit::load_image(b_path);
  const srkit::MetricReport rep = srkit::benchmark_pair(a, b, 0);
  const double value = kind == "psnr" ? rep.psnr_db : rep.ssim;
  if (std::isinf(value))
    std::printf("inf\n");
  else
    std::printf("%.6f\n", value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLRDN super-resolution toolkit"};
  app.require_subcommand(1);

  std::string in_dir, out_dir, config_path, ckpt, hr_dir, out_csv, eval_dir;
  std::string lambdas_text, metric_kind, a_path, b_path, dump_dir;
  int scale = 4;

  auto* degrade = app.add_subcommand("degrade", "bicubic LR/LR-up mirrors");
  degrade->add_option("--in", in_dir, "HR image directory")->required();
  degrade->add_option("--out", out_dir, "output directory")->required();
  degrade->add_option("--scale", scale, "downscale factor (2, 3 or 4)")->required();

  auto* train = app.add_subcommand("train", "train with the combined loss");
  train->add_option("--config", config_path, "JSON config file")->required();

  auto* eval = app.add_subcommand("eval", "score a checkpoint on a directory");
  eval->add_option("--ckpt", ckpt, "checkpoint file")->required();
  eval->add_option("--hr", hr_dir, "HR image directory")->required();
  eval->add_option("--scale", scale, "scale factor")->required();
  eval->add_option("--out", out_csv, "output CSV (stdout when omitted)");
  eval->add_option("--dump", dump_dir, "write side-by-side [hr | sr] PNGs here");

  auto* ablate = app.add_subcommand("ablate", "lambda sweep");
  ablate->add_option("--config", config_path, "JSON config file")->required();
  ablate->add_option("--lambdas", lambdas_text, "comma-separated lambda list")
      ->required();
  ablate->add_option("--out", out_csv, "output CSV")->required();
  ablate->add_option("--eval-dir", eval_dir,
                     "held-out directory (default: every fifth training image)");

  auto* metric = app.add_subcommand("metric", "one-shot PSNR/SSIM");
  metric->add_option("kind", metric_kind, "psnr or ssim")
      ->required()
      ->check(CLI::IsMember({"psnr", "ssim"}));
  metric->add_option("--a", a_path, "first image")->required();
  metric->add_option("--b", b_path, "second image")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(degrade)) return run_degrade(in_dir, out_dir, scale);
    if (app.got_subcommand(train)) return run_train(config_path);
    if (app.got_subcommand(eval))
      return run_eval(ckpt, hr_dir, scale, out_csv, dump_dir);
    if (app.got_subcommand(ablate))
      return run_ablate(config_path, lambdas_text, out_csv, eval_dir);
    if (app.got_subcommand(metric))
      return run_metric(metric_kind, a_path, b_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
