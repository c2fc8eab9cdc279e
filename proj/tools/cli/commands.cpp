#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "topowarp/loss.hpp"
#include "topowarp/parallel.hpp"
#include "topowarp/simple_point.hpp"
#include "topowarp/synthetic.hpp"
#include "topowarp/topology.hpp"

namespace topowarp::cli {
namespace {

void add_warp_flags(CLI::App* cmd, WarpFlags& f) {
  cmd->add_option("--metric", f.metric, "cityblock, chessboard or euclidean")->capture_default_str();
  cmd->add_option("--passes", f.passes, "Maximum warping rounds")->capture_default_str();
  cmd->add_flag("--recompute-dt", f.recompute_dt, "Recompute the distance transform between rounds");
  cmd->add_option("--tie", f.tie, "Tie-break among equal distances: rowmajor or random")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed for random tie-breaks and patch sampling");
  cmd->add_option("--fg-adjacency", f.fg_adjacency, "Foreground adjacency: 4 or 8 (2D), 6 or 26 (3D)");
}

void add_out_dir(CLI::App* cmd, std::string& out_dir) {
  cmd->add_option("--out-dir", out_dir, "Directory for outputs and the run manifest")->capture_default_str();
}

void emit(Run& run, const std::string& command, const io::KeyValueReport& report) {
  const std::string text = report.render();
  run.save_text(command + ".txt", text);
  std::cout << text;
}

void record_config(Run& run, const io::KeyValueReport& report, std::uint64_t seed) {
  for (const auto& kv : report.entries()) run.manifest().config.push_back(kv);
  run.manifest().seed = seed;
}

std::string coord_text(const Coord& c, int rank) {
  if (rank == 2) return std::to_string(c.y) + "," + std::to_string(c.x);
  return std::to_string(c.z) + "," + std::to_string(c.y) + "," + std::to_string(c.x);
}

// Critical cells over the prediction: M_g only red, M_f only green, both yellow.
void write_overlay(Run& run, const Grid& base, const CriticalMask& m) {
  const Shape& s = base.shape();
  const std::size_t plane = static_cast<std::size_t>(s.height()) * s.width();
  for (int z = 0; z < s.depth(); ++z) {
    std::vector<std::uint8_t> rgb(plane * 3);
    for (std::size_t p = 0; p < plane; ++p) {
      const std::size_t i = static_cast<std::size_t>(z) * plane + p;
      const bool g = m.from_gt_warp[i], f = m.from_pred_warp[i];
      std::uint8_t* px = &rgb[p * 3];
      if (g || f) {
        px[0] = g ? 255 : 0;
        px[1] = f ? 255 : 0;
        px[2] = 0;
      } else {
        px[0] = px[1] = px[2] = base[i] ? 160 : 0;
      }
    }
    char name[32];
    if (s.rank() == 2)
      std::snprintf(name, sizeof name, "overlay.png");
    else
      std::snprintf(name, sizeof name, "overlay_z%03d.png", z);
    io::write_rgb_png(run.out_dir() / name, s.height(), s.width(), rgb);
    run.record_output(name);
  }
}

Grid load_prediction(Run& run, const std::string& path, const Grid& gt) {
  if (is_float_npy(path)) {
    run.add_input(path);
    return binarize(io::load_likelihood(path), gt.adjacency());
  }
  return run.load_mask(path, "").with_adjacency(gt.adjacency());
}

void write_flip_log(Run& run, const WarpResult& r, int rank) {
  std::string text = "# pass " + std::string(rank == 2 ? "y,x" : "z,y,x") + "\n";
  for (const Flip& f : r.flips) text += std::to_string(f.pass) + " " + coord_text(f.coord, rank) + "\n";
  run.save_text("flips.txt", text);
}

}  // namespace

void add_simple_check(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    std::string mask, at, fg_adjacency, out_dir = ".";
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("simple-check", "List simple cells of a mask, or test one cell");
  cmd->add_option("--mask", o->mask, "Mask file (.png, .pgm, .npy)")->required();
  cmd->add_option("--at", o->at, "Single cell as Y,X or Z,Y,X");
  cmd->add_option("--fg-adjacency", o->fg_adjacency, "Foreground adjacency: 4 or 8 (2D), 6 or 26 (3D)");
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o] {
    action = [&ctx, o] {
      Run run("simple-check", ctx.argv, o->out_dir);
      const Grid g = run.load_mask(o->mask, o->fg_adjacency);
      io::KeyValueReport report;
      report.put("mask", o->mask).put("shape", g.shape().to_string()).put("fg_adjacency", to_string(g.adjacency().fg()));
      if (!o->at.empty()) report.put("at", o->at);
      record_config(run, report, 0);
      if (!o->at.empty()) {
        const auto c = parse_coord(o->at);
        if (static_cast<int>(c.size()) != g.rank()) throw ValidationError("--at rank does not match the mask");
        const Coord coord = c.size() == 2 ? Coord{c[0], c[1]} : Coord{c[0], c[1], c[2]};
        report.put_bool("simple", is_simple_at(g, coord));
      } else {
        Grid simple(g.shape(), g.adjacency());
        {
          io::StageTimer t(run.manifest(), "classify");
          for (std::size_t i = 0; i < g.size(); ++i)
            if (is_simple_at(g, g.shape().coord(i))) simple.set(i, true);
        }
        const std::string name = "simple" + mask_extension(o->mask);
        run.save_mask(simple, name);
        report.put_int("simple_count", static_cast<std::int64_t>(simple.count())).put("simple_mask", name);
      }
      emit(run, "simple-check", report);
      run.finish();
    };
  });
}

void add_warp(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    std::string source, target, out_dir = ".";
    WarpFlags warp;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("warp", "Warp a source mask toward a target without changing its topology");
  cmd->add_option("--source", o->source, "Source mask")->required();
  cmd->add_option("--target", o->target, "Target mask")->required();
  add_warp_flags(cmd, o->warp);
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o] {
    action = [&ctx, o] {
      Run run("warp", ctx.argv, o->out_dir);
      const WarpConfig cfg = o->warp.config();
      const Grid source = run.load_mask(o->source, o->warp.fg_adjacency);
      const Grid target = run.load_mask(o->target, o->warp.fg_adjacency);
      WarpResult r;
      {
        io::StageTimer t(run.manifest(), "warp");
        r = warp(source, target, cfg);
      }
      const std::string ext = mask_extension(o->source);
      run.save_mask(r.warped, "warped" + ext);
      run.save_mask(r.residual, "residual" + ext);
      write_flip_log(run, r, source.rank());

      io::KeyValueReport report;
      report.put("source", o->source).put("target", o->target).put("shape", source.shape().to_string());
      report.put("fg_adjacency", to_string(source.adjacency().fg()));
      o->warp.echo(report);
      record_config(run, report, o->warp.seed.value_or(0));
      report.put_int("initial_hamming", static_cast<std::int64_t>(r.initial_hamming))
          .put_int("flips", static_cast<std::int64_t>(r.flips.size()))
          .put_int("final_hamming", static_cast<std::int64_t>(r.final_hamming))
          .put_int("residual_count", static_cast<std::int64_t>(r.residual.count()));
      emit(run, "warp", report);
      run.finish();
    };
  });
}

void add_critical(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    std::string pred, gt, out_dir = ".";
    WarpFlags warp;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("critical", "Critical cells from warping in both directions");
  cmd->add_option("--pred", o->pred, "Predicted mask, or float likelihood .npy (thresholded at 0.5)")->required();
  cmd->add_option("--gt", o->gt, "Ground-truth mask")->required();
  add_warp_flags(cmd, o->warp);
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o] {
    action = [&ctx, o] {
      Run run("critical", ctx.argv, o->out_dir);
      const WarpConfig cfg = o->warp.config();
      const Grid gt = run.load_mask(o->gt, o->warp.fg_adjacency);
      const Grid pred = load_prediction(run, o->pred, gt);
      CriticalMask m;
      {
        io::StageTimer t(run.manifest(), "critical_mask");
        m = critical_mask(pred, gt, cfg);
      }
      const std::string ext = mask_extension(o->gt);
      run.save_mask(m.mask, "critical" + ext);
      run.save_mask(m.from_gt_warp, "critical_gt_warp" + ext);
      run.save_mask(m.from_pred_warp, "critical_pred_warp" + ext);
      write_overlay(run, pred, m);

      io::KeyValueReport report;
      report.put("pred", o->pred).put("gt", o->gt).put("shape", gt.shape().to_string());
      report.put("fg_adjacency", to_string(gt.adjacency().fg()));
      o->warp.echo(report);
      record_config(run, report, o->warp.seed.value_or(0));
      report.put_int("difference_count", static_cast<std::int64_t>(hamming(pred, gt)))
          .put_int("critical_count", static_cast<std::int64_t>(m.mask.count()))
          .put_int("critical_gt_warp_count", static_cast<std::int64_t>(m.from_gt_warp.count()))
          .put_int("critical_pred_warp_count", static_cast<std::int64_t>(m.from_pred_warp.count()))
          .put("overlay_colors", "gt_warp_only=red,pred_warp_only=green,both=yellow");
      emit(run, "critical", report);
      run.finish();
    };
  });
}

void add_loss(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    std::string likelihood, gt, pixel_loss = "ce", reduction = "mean", out_dir = ".";
    double lambda_warp = kLambdaWarp2D;
    bool lambda_set = false;
    WarpFlags warp;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("loss", "Dice + weighted warping loss with per-cell gradient");
  cmd->add_option("--likelihood", o->likelihood, "float32/float64 .npy with values in [0, 1]")->required();
  cmd->add_option("--gt", o->gt, "Ground-truth mask")->required();
  auto* lw = cmd->add_option("--lambda-warp", o->lambda_warp, "Weight of the warping term (default 1e-4 in 2D, 2e-5 in 3D)");
  cmd->add_option("--pixel-loss", o->pixel_loss, "ce, mse or dice")->capture_default_str();
  cmd->add_option("--reduction", o->reduction, "mean or sum over critical cells")->capture_default_str();
  add_warp_flags(cmd, o->warp);
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o, lw] {
    o->lambda_set = lw->count() > 0;
    action = [&ctx, o] {
      Run run("loss", ctx.argv, o->out_dir);
      const WarpConfig wcfg = o->warp.config();
      const Grid gt = run.load_mask(o->gt, o->warp.fg_adjacency);
      run.add_input(o->likelihood);
      const LikelihoodMap f = io::load_likelihood(o->likelihood);
      LossConfig cfg;
      const auto p = parse_pixel_loss(o->pixel_loss);
      if (!p) throw ValidationError("--pixel-loss must be ce, mse or dice, got '" + o->pixel_loss + "'");
      cfg.pixel_loss = *p;
      if (o->reduction == "sum")
        cfg.reduction = Reduction::Sum;
      else if (o->reduction != "mean")
        throw ValidationError("--reduction must be mean or sum");
      cfg.lambda_warp = o->lambda_set ? o->lambda_warp : (gt.rank() == 3 ? kLambdaWarp3D : kLambdaWarp2D);
      cfg.validate();
      LossReport r;
      {
        io::StageTimer t(run.manifest(), "loss");
        r = total_loss(f, gt, cfg, wcfg);
      }
      io::save_field(r.gradient, gt.shape(), run.out_dir() / "gradient.npy", true);
      run.record_output("gradient.npy");

      io::KeyValueReport report;
      report.put("likelihood", o->likelihood).put("gt", o->gt).put("shape", gt.shape().to_string());
      report.put("pixel_loss", to_string(cfg.pixel_loss))
          .put("reduction", to_string(cfg.reduction))
          .put_real("lambda_warp", cfg.lambda_warp)
          .put_real("epsilon", cfg.epsilon)
          .put_real("dice_smooth", cfg.dice_smooth);
      o->warp.echo(report);
      record_config(run, report, o->warp.seed.value_or(0));
      report.put_real("l_dice", r.l_dice)
          .put_real("l_warp", r.l_warp)
          .put_real("l_total", r.l_total)
          .put_int("critical_count", static_cast<std::int64_t>(r.critical_count))
          .put("gradient", "gradient.npy");
      emit(run, "loss", report);
      run.finish();
    };
  });
}

void add_metrics(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    std::vector<std::string> preds, gts;
    std::string out_dir = ".";
    WarpFlags warp;
    BettiFlags betti;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("metrics", "Dice, ARI, warping error and Betti error for one or more pairs");
  cmd->add_option("--pred", o->preds, "Prediction mask or float likelihood .npy (repeatable)")->required();
  cmd->add_option("--gt", o->gts, "Ground-truth mask (repeatable, paired with --pred in order)")->required();
  cmd->add_option("--patch", o->betti.patch, "Betti patch HxW or HxWxD (default 64x64 / 48x48x16, clipped)");
  cmd->add_option("--samples", o->betti.samples, "Betti patches per image")->capture_default_str();
  cmd->add_option("--betti-dims", o->betti.dims, "Comma-separated Betti dimensions (default 0,1 / 0,1,2)");
  add_warp_flags(cmd, o->warp);
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o] {
    action = [&ctx, o] {
      if (o->preds.size() != o->gts.size())
        throw ValidationError("metrics: --pred and --gt must be given the same number of times");
      Run run("metrics", ctx.argv, o->out_dir);
      const std::uint64_t seed = o->warp.seed.value_or(0);
      MetricConfig cfg;
      cfg.warp = o->warp.config();
      cfg.betti = o->betti.config(seed);

      const std::size_t n = o->preds.size();
      std::vector<Grid> gts;
      std::vector<std::optional<LikelihoodMap>> likelihoods(n);
      std::vector<std::optional<Grid>> masks(n);
      for (std::size_t i = 0; i < n; ++i) {
        gts.push_back(run.load_mask(o->gts[i], o->warp.fg_adjacency));
        if (is_float_npy(o->preds[i])) {
          run.add_input(o->preds[i]);
          likelihoods[i] = io::load_likelihood(o->preds[i]);
        } else {
          masks[i] = run.load_mask(o->preds[i], "").with_adjacency(gts[i].adjacency());
        }
      }

      const unsigned cap = thread_cap();
      cfg.betti.threads = n == 1 ? cap : 1;
      std::vector<MetricReport> reports(n);
      {
        io::StageTimer t(run.manifest(), "evaluate");
        parallel_for(n, cap, [&](std::size_t i) {
          reports[i] = likelihoods[i] ? evaluate(*likelihoods[i], gts[i], cfg) : evaluate(*masks[i], gts[i], cfg);
        });
      }

      std::string text;
      io::KeyValueReport head;
      o->warp.echo(head);
      head.put("betti_patch", o->betti.patch.empty() ? "auto" : o->betti.patch)
          .put("betti_dims", o->betti.dims.empty() ? "auto" : o->betti.dims);
      head.put_int("betti_samples", cfg.betti.samples).put_int("betti_seed", static_cast<std::int64_t>(seed));
      head.put_int("items", static_cast<std::int64_t>(n));
      record_config(run, head, seed);
      text += head.render();
      for (std::size_t i = 0; i < n; ++i) {
        const MetricReport& r = reports[i];
        io::KeyValueReport item;
        item.put_int("item", static_cast<std::int64_t>(i)).put("pred", o->preds[i]).put("gt", o->gts[i]);
        std::string dims;
        for (int d : r.betti.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
        item.put("betti_patch", r.betti.patch->to_string()).put("betti_dims", dims);
        item.put_real("dice", r.dice)
            .put_real("ari", r.ari)
            .put_real("warping_error", r.warping_error)
            .put_real("betti_error", r.betti_error);
        text += "\n" + item.render();
      }
      run.save_text("metrics.txt", text);
      std::cout << text;
      run.finish();
    };
  });
}

void add_bench(CLI::App& app, const Context& ctx, std::function<void()>& action) {
  struct Opts {
    int size = 512;
    int repeat = 3;
    std::uint64_t seed = 0;
    std::string source, target, out_dir = ".";
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("bench", "Time distance-ordered against naive warping");
  cmd->add_option("--size", o->size, "Side of the synthetic road-like pair")->capture_default_str();
  cmd->add_option("--repeat", o->repeat, "Timed repetitions (best is reported)")->capture_default_str();
  cmd->add_option("--seed", o->seed, "Seed of the synthetic pair")->capture_default_str();
  cmd->add_option("--source", o->source, "Use this source mask instead of a synthetic pair");
  cmd->add_option("--target", o->target, "Target mask (with --source)");
  add_out_dir(cmd, o->out_dir);
  cmd->callback([&action, &ctx, o] {
    action = [&ctx, o] {
      if (o->repeat < 1) throw ValidationError("--repeat must be >= 1");
      if (o->source.empty() != o->target.empty()) throw ValidationError("--source and --target go together");
      Run run("bench", ctx.argv, o->out_dir);
      Grid source, target;
      if (!o->source.empty()) {
        source = run.load_mask(o->source, "");
        target = run.load_mask(o->target, "");
      } else {
        if (o->size < 16) throw ValidationError("--size must be >= 16");
        auto pair = synthetic::road_pair(o->size, o->seed);
        source = std::move(pair.pred);
        target = std::move(pair.gt);
      }
      using clock = std::chrono::steady_clock;
      auto best = [&](auto&& fn) {
        double t = 1e300;
        WarpResult last;
        for (int k = 0; k < o->repeat; ++k) {
          const auto t0 = clock::now();
          last = fn();
          t = std::min(t, std::chrono::duration<double>(clock::now() - t0).count());
        }
        return std::pair{t, std::move(last)};
      };
      auto [t_ordered, ordered] = best([&] { return warp(source, target); });
      auto [t_naive, naive] = best([&] { return naive_warp(source, target); });

      io::KeyValueReport report;
      report.put("input", o->source.empty() ? "synthetic_roads" : o->source)
          .put("shape", source.shape().to_string())
          .put_int("repeat", o->repeat)
          .put_int("initial_hamming", static_cast<std::int64_t>(ordered.initial_hamming))
          .put_int("ordered_final_hamming", static_cast<std::int64_t>(ordered.final_hamming))
          .put_int("naive_final_hamming", static_cast<std::int64_t>(naive.final_hamming))
          .put_int("naive_passes", naive.flips.empty() ? 0 : naive.flips.back().pass + 1)
          .put_real("ordered_seconds", t_ordered)
          .put_real("naive_seconds", t_naive)
          .put_real("speedup", t_naive / t_ordered);
      run.manifest().seed = o->seed;
      run.manifest().config.emplace_back("size", std::to_string(o->size));
      run.manifest().config.emplace_back("repeat", std::to_string(o->repeat));
      emit(run, "bench", report);
      run.finish();
    };
  });
}

}  // namespace topowarp::cli
