#include "config.hpp"
#include "run.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;
namespace cli = crowdflow::cli;

template <typename T>
void put(json& doc, const char* key, const std::optional<T>& v) {
  if (v) doc[key] = *v;
}

struct Numerics {
  std::optional<double> tau, tol, eta;
  std::optional<int> max_iter;

  void add_to(CLI::App* app) {
    app->add_option("--tau", tau, "pseudo-time step");
    app->add_option("--tol", tol, "stopping tolerance on the L2 update");
    app->add_option("--eta", eta, "interior penalty parameter");
    app->add_option("--max-iter", max_iter, "iteration cap");
  }
  void put_into(json& doc) const {
    put(doc, "tau", tau);
    put(doc, "tol", tol);
    put(doc, "eta", eta);
    put(doc, "max_iter", max_iter);
  }
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cli::ConfigError("", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw cli::ConfigError("", path + ": malformed JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady crowd flow through corridors: DG solver, analytic profiles, phase scans"};
  app.require_subcommand(1);
  json doc;

  std::optional<double> epsilon, alpha, beta, step, length, height;
  std::optional<int> cells, jobs, nx, ny;
  std::optional<std::string> out, config, geometry;
  std::vector<std::string> formats;
  std::vector<double> obstacle;
  Numerics num;

  auto* s1 = app.add_subcommand("solve1d", "DG solve on the unit interval with u = 1");
  s1->add_option("--epsilon", epsilon, "diffusion coefficient")->required();
  s1->add_option("--alpha", alpha, "inflow rate")->required();
  s1->add_option("--beta", beta, "outflow rate")->required();
  s1->add_option("--cells", cells, "number of cells (default 200)");
  s1->add_option("--out", out, "output directory")->required();
  s1->add_option("--format", formats, "csv, vtk, json (default csv and json)");
  num.add_to(s1);

  auto* s2 = app.add_subcommand("solve2d", "DG solve on a corridor described by a JSON file");
  s2->add_option("--config", config, "JSON run description")->required()->check(CLI::ExistingFile);
  s2->add_option("--out", out, "output directory (overrides output.path)");

  auto* ph = app.add_subcommand("phase", "1D phase diagram scan over (alpha, beta)");
  ph->add_option("--epsilon", epsilon, "diffusion coefficient")->required();
  ph->add_option("--step", step, "rate spacing (default 0.01)");
  ph->add_option("--cells", cells, "cells per solve (default 200)");
  ph->add_option("--jobs", jobs, "worker threads, 0 = all cores");
  ph->add_option("--out", out, "output directory")->required();
  num.add_to(ph);

  auto* an = app.add_subcommand("analytic", "closed-form profile and phase boundary curve");
  an->add_option("--epsilon", epsilon, "diffusion coefficient")->required();
  an->add_option("--alpha", alpha, "inflow rate");
  an->add_option("--beta", beta, "outflow rate");
  an->add_option("--out", out, "output directory")->required();

  auto* me = app.add_subcommand("mesh", "write a corridor mesh file");
  me->add_option("--geometry", geometry, "corridor or obstacle")
      ->check(CLI::IsMember({"corridor", "obstacle"}));
  me->add_option("--nx", nx, "cells along the corridor");
  me->add_option("--ny", ny, "cells across the corridor");
  me->add_option("--length", length, "corridor length");
  me->add_option("--height", height, "corridor height");
  me->add_option("--obstacle", obstacle, "cx,cy,r")->delimiter(',')->expected(3);
  me->add_option("--out", out, "mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (s1->parsed()) {
      doc["mode"] = "solve1d";
      put(doc, "epsilon", epsilon);
      put(doc, "alpha", alpha);
      put(doc, "beta", beta);
      put(doc, "cells", cells);
      num.put_into(doc);
    } else if (s2->parsed()) {
      doc = read_json_file(*config);
      if (!doc.is_object()) throw cli::ConfigError("", "expected a JSON object");
      if (!doc.contains("mode")) doc["mode"] = "solve2d";
      if (doc["mode"] != "solve2d") throw cli::ConfigError("mode", "solve2d expects mode 'solve2d'");
    } else if (ph->parsed()) {
      doc["mode"] = "phase";
      put(doc, "epsilon", epsilon);
      put(doc, "step", step);
      put(doc, "cells", cells);
      put(doc, "jobs", jobs);
      num.put_into(doc);
    } else if (an->parsed()) {
      doc["mode"] = "analytic";
      put(doc, "epsilon", epsilon);
      put(doc, "alpha", alpha);
      put(doc, "beta", beta);
    } else {
      doc["mode"] = "mesh";
      json g = {{"type", geometry.value_or("corridor")}};
      put(g, "nx", nx);
      put(g, "ny", ny);
      put(g, "length", length);
      put(g, "height", height);
      if (!obstacle.empty()) {
        if (g["type"] != "obstacle")
          throw cli::ConfigError("geometry.obstacle", "--obstacle needs --geometry obstacle");
        g["obstacle"] = {{"center", {obstacle[0], obstacle[1]}}, {"radius", obstacle[2]}};
      }
      doc["geometry"] = g;
    }
    if (out) {
      if (!doc.contains("output")) doc["output"] = json::object();
      doc["output"]["path"] = *out;
    }
    if (!formats.empty()) doc["output"]["formats"] = formats;

    const cli::RunConfig cfg = cli::parse_config(doc.dump());
    return cli::run(cfg, std::cerr);
  } catch (const cli::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
}
