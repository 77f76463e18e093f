// Command-line front end: segment an image under the convexity prior, or
// generate synthetic phantoms for testing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvxseg/cvxseg.hpp"

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int run_segment(const std::string& image_path, const std::string& fg_path,
                const std::string& bg_path, const std::string& out_mask,
                const std::string& config_path, const std::string& overlay_path,
                const std::string& csv_path, const std::string& report_path,
                bool seed_given, std::uint64_t seed) {
    cvxseg::Image image = cvxseg::load_image(image_path);
    auto [r_ob, r_bg] = cvxseg::load_labels(fg_path, bg_path, image.width, image.height);

    cvxseg::SolverConfig cfg;
    if (!config_path.empty()) cfg = cvxseg::load_config_file(config_path);
    if (seed_given) cfg.seed = seed;

    std::ofstream csv;
    cvxseg::SolverObserver observer;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        if (!csv) throw std::runtime_error("cannot write CSV log '" + csv_path + "'");
        csv << "t,rv";
        for (double r : cfg.radii) csv << ",min_violation_r" << format_number(r);
        csv << ",band_size\n";
        observer = [&csv](const cvxseg::IterationStats& s, const cvxseg::IterationTrace&) {
            csv << s.t << ",";
            if (s.rv) csv << *s.rv;
            for (double v : s.min_constraint) csv << "," << v;
            csv << "," << s.band_size << "\n";
        };
    }

    cvxseg::RunResult result = cvxseg::segment(image, r_ob, r_bg, cfg, observer);
    const cvxseg::RunReport& rep = result.report;

    cvxseg::write_mask(result.u, out_mask);
    if (!overlay_path.empty())
        cvxseg::save_image(cvxseg::make_overlay(image, result.u), overlay_path);

    if (!report_path.empty()) {
        nlohmann::json j;
        j["iterations"] = rep.iterations;
        j["stop_reason"] = rep.stop_reason;
        if (rep.final_rv) j["final_rv"] = *rep.final_rv;
        else j["final_rv"] = nullptr;
        nlohmann::json mv = nlohmann::json::object();
        for (const auto& [r, v] : rep.min_violation_per_radius) mv[format_number(r)] = v;
        j["min_violation_per_radius"] = mv;
        j["convexity_score"] = rep.convexity_score;
        j["wall_seconds"] = rep.wall_seconds;
        nlohmann::json hist = nlohmann::json::array();
        for (const auto& [t, rv] : rep.rv_history) hist.push_back({t, rv});
        j["rv_history"] = hist;
        nlohmann::json radii = nlohmann::json::array();
        for (double r : cfg.radii) radii.push_back(r);
        j["radii"] = radii;
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write report '" + report_path + "'");
        out << j.dump(2) << "\n";
    }

    std::cout << "stop_reason=" << rep.stop_reason << " iterations=" << rep.iterations;
    if (rep.final_rv) std::cout << " final_rv=" << *rep.final_rv;
    std::cout << " convexity_score=" << rep.convexity_score
              << " wall_seconds=" << rep.wall_seconds << "\n";
    return 0;
}

int run_phantom(const cvxseg::PhantomSpec& spec, const std::string& out_dir,
                const std::string& ext) {
    cvxseg::Phantom ph = cvxseg::gen_phantom(spec);
    cvxseg::save_image(ph.image, out_dir + "/image." + ext);
    cvxseg::save_image(cvxseg::label_mask_image(ph.fg_labels, spec.width, spec.height),
                       out_dir + "/fg_mask." + ext);
    cvxseg::save_image(cvxseg::label_mask_image(ph.bg_labels, spec.width, spec.height),
                       out_dir + "/bg_mask." + ext);
    cvxseg::write_mask(ph.truth, out_dir + "/truth." + ext);
    std::cout << "wrote image/fg_mask/bg_mask/truth to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive image segmentation with a convex shape prior"};
    app.require_subcommand(1);

    // segment
    auto* seg = app.add_subcommand("segment", "Segment an image from label scribbles");
    std::string image_path, fg_path, bg_path, out_mask;
    std::string config_path, overlay_path, csv_path, report_path;
    std::uint64_t seed = 0;
    seg->add_option("--image", image_path, "Input image (PGM/PPM/PNG, 8-bit)")->required();
    seg->add_option("--fg-mask", fg_path, "Object label mask (nonzero = labeled)")->required();
    seg->add_option("--bg-mask", bg_path, "Background label mask (nonzero = labeled)")
        ->required();
    seg->add_option("--out-mask", out_mask,
                    "Output mask path (.pgm/.png); object = 0, background = 255")
        ->required();
    seg->add_option("--config", config_path, "Flat key=value config file");
    seg->add_option("--overlay", overlay_path, "Write RGB overlay with red object boundary");
    seg->add_option("--log-csv", csv_path, "Per-iteration CSV log");
    auto* seed_opt = seg->add_option("--seed", seed, "RNG seed for the model fits");
    seg->add_option("--report-json", report_path, "Write run report as JSON");

    // phantom
    auto* pht = app.add_subcommand("phantom", "Generate a synthetic test scene");
    cvxseg::PhantomSpec spec;
    std::string out_dir = ".", ext = "pgm";
    pht->add_option("--shape", spec.shape,
                    "disc | rectangle | l-shape | random-convex-polygon");
    pht->add_option("--out-dir", out_dir, "Output directory")->required();
    pht->add_option("--width", spec.width, "Canvas width");
    pht->add_option("--height", spec.height, "Canvas height");
    pht->add_option("--fg", spec.fg_intensity, "Object intensity");
    pht->add_option("--bg", spec.bg_intensity, "Background intensity");
    pht->add_option("--noise", spec.noise_std, "Gaussian noise std");
    pht->add_option("--seed", spec.seed, "Noise RNG seed");
    pht->add_option("--radius", spec.disc_radius, "Shape radius / scale");
    pht->add_option("--format", ext, "Output format extension (pgm or png)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seg->parsed())
            return run_segment(image_path, fg_path, bg_path, out_mask, config_path,
                               overlay_path, csv_path, report_path, seed_opt->count() > 0,
                               seed);
        return run_phantom(spec, out_dir, ext);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
