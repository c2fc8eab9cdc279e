#pragma once

#include <CLI11.hpp>
#include <functional>
#include <string>
#include <vector>

namespace topowarp::cli {

struct Context {
  std::vector<std::string> argv;
};

// Each registers a subcommand whose callback stores the work in `action`.
void add_simple_check(CLI::App& app, const Context& ctx, std::function<void()>& action);
void add_warp(CLI::App& app, const Context& ctx, std::function<void()>& action);
void add_critical(CLI::App& app, const Context& ctx, std::function<void()>& action);
void add_loss(CLI::App& app, const Context& ctx, std::function<void()>& action);
void add_metrics(CLI::App& app, const Context& ctx, std::function<void()>& action);
void add_bench(CLI::App& app, const Context& ctx, std::function<void()>& action);

}  // namespace topowarp::cli
