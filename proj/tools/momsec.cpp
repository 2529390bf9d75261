#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "momsec/checks.hpp"

namespace {

int run_report(const momsec::ModelDocument& doc, const std::string& format) {
  momsec::Report rep = momsec::run_checks(doc);
  if (format == "json")
    std::cout << momsec::report_json(rep);
  else
    std::cout << momsec::report_text(rep);
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie algebroid calculus and momentum-section verification"};
  app.require_subcommand(1);

  std::string model_path, format = "text";
  double tol = 1e-9;
  int points = 32;
  std::uint64_t seed = 42;

  auto* check = app.add_subcommand("check", "run the checks of a model file");
  check->add_option("--model", model_path, "model JSON file")->required();
  check->add_option("--tol", tol, "residual tolerance");
  check->add_option("--points", points, "number of sample points");
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--format", format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* gallery = app.add_subcommand("gallery", "built-in worked examples");
  gallery->require_subcommand(1);
  auto* glist = gallery->add_subcommand("list", "list gallery model names");
  std::string gname, export_path;
  auto* grun = gallery->add_subcommand("run", "run a gallery model's checks");
  grun->add_option("name", gname, "gallery model name")->required();
  grun->add_option("--export", export_path, "write the model file here");
  grun->add_option("--tol", tol, "residual tolerance");
  grun->add_option("--points", points, "number of sample points");
  grun->add_option("--seed", seed, "sampling seed");
  grun->add_option("--format", format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      momsec::ModelDocument doc = momsec::load_model(model_path);
      // flags override the file's run configuration when given explicitly
      if (check->count("--tol")) doc.config.tolerance = tol;
      if (check->count("--points")) doc.config.sample_points = points;
      if (check->count("--seed")) doc.config.seed = seed;
      return run_report(doc, format);
    }
    if (glist->parsed()) {
      for (const auto& name : momsec::gallery_names()) std::cout << name << "\n";
      return 0;
    }
    if (grun->parsed()) {
      momsec::GalleryInstance g = momsec::make_gallery(gname);
      momsec::RunConfig cfg;
      cfg.tolerance = tol;
      cfg.sample_points = points;
      cfg.seed = seed;
      if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) {
          std::cerr << "error: cannot write '" << export_path << "'\n";
          return 2;
        }
        out << momsec::to_model_json(g, cfg);
      }
      return run_report(momsec::document_of(g, cfg), format);
    }
  } catch (const momsec::ModelError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const momsec::GalleryError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
