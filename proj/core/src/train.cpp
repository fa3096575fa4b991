#include "srkit/train.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "srkit/dataset.hpp"
#include "srkit/graph.hpp"
#include "srkit/optim.hpp"
#include "srkit/rng.hpp"

namespace srkit {

using nlohmann::json;

void TrainConfig::validate() const {
  if (data_dir.empty()) throw std::invalid_argument("config: data_dir is required");
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir is required");
  if (scale != 2 && scale != 3 && scale != 4)
    throw std::invalid_argument("config: scale must be 2, 3 or 4");
  if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (patches_per_epoch < batch_size)
    throw std::invalid_argument("config: patches_per_epoch must be >= batch_size");
  if (lr <= 0.0) throw std::invalid_argument("config: lr must be positive");
  if (lr_halve_every < 1)
    throw std::invalid_argument("config: lr_halve_every must be >= 1");
  if (connectivity != 4 && connectivity != 8)
    throw std::invalid_argument("config: connectivity must be 4 or 8");
  net.validate();
}

namespace {

void reject_unknown_keys(const json& obj, std::set<std::string> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                  where);
}

NetConfig parse_net_config(const json& obj, std::uint64_t default_seed) {
  reject_unknown_keys(obj, {"blocks", "channels", "kernel", "in_channels", "seed"},
                      "net");
  NetConfig net;
  net.seed = default_seed;
  if (obj.contains("blocks")) net.blocks = obj.at("blocks").get<int>();
  if (obj.contains("channels")) net.channels = obj.at("channels").get<int>();
  if (obj.contains("kernel")) net.kernel = obj.at("kernel").get<int>();
  if (obj.contains("in_channels"))
    net.in_channels = obj.at("in_channels").get<int>();
  if (obj.contains("seed")) net.seed = obj.at("seed").get<std::uint64_t>();
  return net;
}

}  // namespace

TrainConfig parse_train_config_json(const std::string& text) {
  json root = json::parse(text);
  if (!root.is_object())
    throw std::invalid_argument("config: top level must be a JSON object");
  reject_unknown_keys(root,
                      {"data_dir", "scale", "lambda", "epochs", "batch_size",
                       "patches_per_epoch", "net", "lr", "lr_halve_every",
                       "seed", "connectivity", "out_dir"},
                      "config");
  TrainConfig cfg;
  if (root.contains("data_dir")) cfg.data_dir = root.at("data_dir").get<std::string>();
  if (root.contains("out_dir")) cfg.out_dir = root.at("out_dir").get<std::string>();
  if (root.contains("scale")) cfg.scale = root.at("scale").get<int>();
  if (root.contains("lambda")) cfg.lambda = root.at("lambda").get<double>();
  if (root.contains("epochs")) cfg.epochs = root.at("epochs").get<int>();
  if (root.contains("batch_size")) cfg.batch_size = root.at("batch_size").get<int>();
  if (root.contains("patches_per_epoch"))
    cfg.patches_per_epoch = root.at("patches_per_epoch").get<int>();
  if (root.contains("lr")) cfg.lr = root.at("lr").get<double>();
  if (root.contains("lr_halve_every"))
    cfg.lr_halve_every = root.at("lr_halve_every").get<std::int64_t>();
  if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
  if (root.contains("connectivity"))
    cfg.connectivity = root.at("connectivity").get<int>();
  cfg.net.seed = cfg.seed;  // net seed defaults to the run seed
  if (root.contains("net")) cfg.net = parse_net_config(root.at("net"), cfg.seed);
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_train_config_json(ss.str());
}

std::string train_config_to_json(const TrainConfig& cfg) {
  json root;
  root["data_dir"] = cfg.data_dir;
  root["scale"] = cfg.scale;
  root["lambda"] = cfg.lambda;
  root["epochs"] = cfg.epochs;
  root["batch_size"] = cfg.batch_size;
  root["patches_per_epoch"] = cfg.patches_per_epoch;
  root["net"] = {{"blocks", cfg.net.blocks},
                 {"channels", cfg.net.channels},
                 {"kernel", cfg.net.kernel},
                 {"in_channels", cfg.net.in_channels},
                 {"seed", cfg.net.seed}};
  root["lr"] = cfg.lr;
  root["lr_halve_every"] = cfg.lr_halve_every;
  root["seed"] = cfg.seed;
  root["connectivity"] = cfg.connectivity;
  root["out_dir"] = cfg.out_dir;
  return root.dump(2) + "\n";
}

namespace {

// Loads every usable image of dir as a SamplePair at the given scale.
// Training additionally demands room for a 48x48 HR-grid patch.
std::vector<SamplePair> load_pairs(const std::filesystem::path& dir, int scale,
                                   int in_channels, bool for_training) {
  const auto files = list_image_files(dir);
  std::vector<SamplePair> pairs;
  for (const auto& file : files) {
    ImageF32 img = load_image(file);
    if (img.channels != in_channels)
      throw std::runtime_error("image '" + file.string() + "' has " +
                               std::to_string(img.channels) +
                               " channels but the net expects " +
                               std::to_string(in_channels));
    if (for_training) {
      const int ch = img.height - img.height % scale;
      const int cw = img.width - img.width % scale;
      if (ch < kPatchSize || cw < kPatchSize) continue;  // unusable for patches
    }
    pairs.push_back(make_pair(img, scale, file.stem().string()));
  }
  return pairs;
}

struct StepLoss {
  double sse = 0.0;
  double glrdn = 0.0;
};

// Core loop shared by train() and ablate(): pairs are preloaded so the
// ablation can reuse one split across lambdas.
TrainResult train_on_pairs(const TrainConfig& cfg,
                           const std::vector<SamplePair>& pairs) {
  cfg.validate();
  if (pairs.empty())
    throw std::runtime_error("train: no usable images in " + cfg.data_dir);

  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path out_dir(cfg.out_dir);
  {
    std::ofstream cfg_out(out_dir / "config.json");
    cfg_out << train_config_to_json(cfg);
  }

  const GridGraph graph =
      build_grid_graph(kPatchSize, kPatchSize, cfg.connectivity);
  NetParams params = init_params<float>(cfg.net);
  OptimConfig ocfg;
  ocfg.lr0 = cfg.lr;
  ocfg.halve_every = cfg.lr_halve_every;
  OptimState<float> optim = make_optim_state(params, ocfg);

  const std::filesystem::path log_path = out_dir / "train_log.csv";
  std::ofstream log(log_path);
  if (!log) throw std::runtime_error("train: cannot write " + log_path.string());
  log << "step,epoch,sse,glrdn,lambda,total,lr\n";

  const int steps_per_epoch = cfg.patches_per_epoch / cfg.batch_size;
  const int batch = cfg.batch_size;
  std::int64_t step = 0;
  LossValue last_loss;
  char buf[256];

  std::vector<ImageF32> inputs(batch), targets(batch), outputs(batch);
  std::vector<NetGrads<float>> sample_grads(batch);
  std::vector<StepLoss> sample_loss(batch);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (int s = 0; s < steps_per_epoch; ++s) {
      ++step;
      // each batch element comes from its own randomly drawn source image
      SplitMix64 select(derive_seed(cfg.seed, 1, std::uint64_t(step)));
      std::string sources;
      for (int k = 0; k < batch; ++k) {
        const SamplePair& pair =
            pairs[select.next_below(std::uint32_t(pairs.size()))];
        if (k < 4) sources += (k ? " " : "") + pair.source_id;
        PatchBatch one = extract_patches(
            pair, 1, derive_seed(cfg.seed, 2, std::uint64_t(step) * batch + k));
        auto [in, tgt] = augment(
            one.inputs[0], one.targets[0],
            derive_seed(cfg.seed, 3, std::uint64_t(step) * batch + k));
        inputs[k] = std::move(in);
        targets[k] = std::move(tgt);
      }

      // forward/backward per sample in parallel; reduction stays in
      // sample order so the result is independent of the thread count
      detail::parallel_for(batch, [&](int k) {
        ForwardCache<float> cache;
        outputs[k] = forward(params, inputs[k], &cache);
        const LossValue lv = total_loss(targets[k], outputs[k], cfg.lambda, graph);
        sample_loss[k] = {lv.sse, lv.glrdn};
        const ImageF32 grad_out =
            total_loss_grad(targets[k], outputs[k], cfg.lambda, graph);
        sample_grads[k] = make_zero_grads(params);
        backward(params, inputs[k], cache, grad_out, sample_grads[k]);
      });

      LossValue batch_loss;
      batch_loss.lambda = cfg.lambda;
      for (int k = 0; k < batch; ++k) {
        batch_loss.sse += sample_loss[k].sse;
        batch_loss.glrdn += sample_loss[k].glrdn;
      }
      batch_loss.total = batch_loss.sse + cfg.lambda * batch_loss.glrdn;
      if (!std::isfinite(batch_loss.total))
        throw std::runtime_error(
            "train: non-finite loss at step " + std::to_string(step) +
            " (batch sources: " + sources + " ...)");

      NetGrads<float> grads = make_zero_grads(params);
      for (int k = 0; k < batch; ++k) accumulate_grads(grads, sample_grads[k]);

      const double lr_used = optim.lr;
      optim_step(params, grads, optim);

      std::snprintf(buf, sizeof buf, "%lld,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    (long long)step, epoch, batch_loss.sse, batch_loss.glrdn,
                    cfg.lambda, batch_loss.total, lr_used);
      log << buf;
      last_loss = batch_loss;
    }
    save_checkpoint({params, step, optim.lr}, out_dir / "ckpt-latest.srk");
  }

  TrainResult result;
  result.checkpoint_path = out_dir / "ckpt-final.srk";
  save_checkpoint({params, step, optim.lr}, result.checkpoint_path);
  result.log_path = log_path;
  result.steps = step;
  result.last_batch_loss = last_loss;
  return result;
}

// hr and sr side by side with a thin separator, for eyeballing results.
ImageF32 side_by_side(const ImageF32& hr, const ImageF32& sr) {
  const int gap = 4;
  ImageF32 out(hr.height, hr.width * 2 + gap, hr.channels);
  for (int c = 0; c < hr.channels; ++c)
    for (int y = 0; y < hr.height; ++y) {
      for (int x = 0; x < hr.width; ++x) {
        out.at(c, y, x) = hr.at(c, y, x);
        out.at(c, y, hr.width + gap + x) = sr.at(c, y, x);
      }
      for (int x = 0; x < gap; ++x) out.at(c, y, hr.width + x) = 1.0f;
    }
  return out;
}

std::vector<MetricReport> score_pairs(
    const NetParams& params, const std::vector<SamplePair>& pairs, int scale,
    const std::string& dataset,
    const std::optional<std::filesystem::path>& dump_dir = std::nullopt) {
  if (dump_dir) std::filesystem::create_directories(*dump_dir);
  std::vector<MetricReport> reports(pairs.size());
  detail::parallel_for(int(pairs.size()), [&](int i) {
    const ImageF32 sr = forward(params, pairs[i].lr_up);
    MetricReport rep = benchmark_pair(pairs[i].hr, sr, scale);
    rep.dataset = dataset;
    rep.image_id = pairs[i].source_id;
    if (dump_dir)
      save_image(side_by_side(pairs[i].hr, sr),
                 *dump_dir / (pairs[i].source_id + "_pair.png"));
    reports[i] = std::move(rep);
  });
  return reports;
}

void mean_metrics(const std::vector<MetricReport>& rows, double& psnr_out,
                  double& ssim_out) {
  double p = 0.0, s = 0.0;
  for (const auto& r : rows) {
    p += r.psnr_db;
    s += r.ssim;
  }
  psnr_out = p / double(rows.size());
  ssim_out = s / double(rows.size());
}

}  // namespace

TrainResult train(const TrainConfig& cfg) {
  cfg.validate();
  const auto pairs =
      load_pairs(cfg.data_dir, cfg.scale, cfg.net.in_channels, true);
  return train_on_pairs(cfg, pairs);
}

EvalResult evaluate(const std::filesystem::path& checkpoint,
                    const std::filesystem::path& hr_dir, int scale,
                    const std::optional<std::filesystem::path>& dump_dir) {
  const Checkpoint ckpt = load_checkpoint(checkpoint);
  const auto pairs =
      load_pairs(hr_dir, scale, ckpt.params.cfg.in_channels, false);
  if (pairs.empty())
    throw std::runtime_error("evaluate: no images in " + hr_dir.string());
  EvalResult result;
  result.per_image = score_pairs(ckpt.params, pairs, scale,
                                 hr_dir.filename().string(), dump_dir);
  mean_metrics(result.per_image, result.mean_psnr, result.mean_ssim);
  return result;
}

std::vector<AblationRow> ablate(
    const TrainConfig& cfg, std::span<const double> lambdas,
    const std::optional<std::filesystem::path>& eval_dir) {
  cfg.validate();
  if (lambdas.size() < 2)
    throw std::invalid_argument("ablate: need at least two lambda values");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0)
      throw std::invalid_argument("ablate: negative lambda");
    for (std::size_t j = i + 1; j < lambdas.size(); ++j)
      if (lambdas[i] == lambdas[j])
        throw std::invalid_argument("ablate: duplicate lambda values");
  }

  std::vector<SamplePair> train_pairs, eval_pairs;
  if (eval_dir) {
    train_pairs = load_pairs(cfg.data_dir, cfg.scale, cfg.net.in_channels, true);
    eval_pairs = load_pairs(*eval_dir, cfg.scale, cfg.net.in_channels, false);
  } else {
    // deterministic split: every fifth image (sorted order) is held out
    auto all = load_pairs(cfg.data_dir, cfg.scale, cfg.net.in_channels, true);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (i % 5 == 4)
        eval_pairs.push_back(std::move(all[i]));
      else
        train_pairs.push_back(std::move(all[i]));
    }
  }
  if (train_pairs.empty())
    throw std::runtime_error("ablate: no usable training images");
  if (eval_pairs.empty())
    throw std::runtime_error("ablate: held-out set is empty");

  std::vector<AblationRow> rows;
  for (const double lambda : lambdas) {
    TrainConfig sub = cfg;
    sub.lambda = lambda;
    char name[64];
    std::snprintf(name, sizeof name, "lambda_%g", lambda);
    sub.out_dir = (std::filesystem::path(cfg.out_dir) / name).string();
    const TrainResult tr = train_on_pairs(sub, train_pairs);
    const Checkpoint ckpt = load_checkpoint(tr.checkpoint_path);
    const auto reports =
        score_pairs(ckpt.params, eval_pairs, cfg.scale, "holdout");
    AblationRow row;
    row.lambda = lambda;
    mean_metrics(reports, row.psnr, row.ssim);
    rows.push_back(row);
  }
  return rows;
}

void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows) {
  out << "lambda,psnr,ssim\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%g,%.17g,%.17g\n", r.lambda, r.psnr,
                  r.ssim);
    out << buf;
  }
}

}  // namespace srkit
