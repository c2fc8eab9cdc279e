#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "topowarp/io.hpp"
#include "topowarp/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIo = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace topowarp::cli;
  Context ctx{std::vector<std::string>(argv, argv + argc)};
  std::function<void()> action;

  CLI::App app{"Topology-preserving warping of binary masks"};
  app.set_version_flag("--version", topowarp::kVersion);
  app.require_subcommand(1);
  add_simple_check(app, ctx, action);
  add_warp(app, ctx, action);
  add_critical(app, ctx, action);
  add_loss(app, ctx, action);
  add_metrics(app, ctx, action);
  add_bench(app, ctx, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const topowarp::io::IoError& e) {
    std::cerr << "topowarp: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "topowarp: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "topowarp: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "topowarp: " << e.what() << "\n";
    return kIo;
  }
}
