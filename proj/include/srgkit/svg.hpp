#pragma once

#include <string>
#include <vector>

#include "srgkit/region.hpp"

namespace srg::svg {

struct Layer {
  Region region;
  std::string label;
  std::string color = "#1f77b4";
};

struct PlotOptions {
  int width = 640;
  int height = 640;
  int raster = 320;      // cells along the longer side
  double margin = 0.08;  // relative padding around the data
  /// Half-width used to draw unbounded regions; 0 picks 1.5x the bounded data.
  double truncation = 0.0;
  std::string title;
};

/// Rasterized plot of the layers in the complex plane with axes and legend.
std::string render(const std::vector<Layer>& layers, const PlotOptions& opt = {});

/// Phi^{-1} against tau * G_zw at the tau where they come closest.
std::string separation_plot(const Region& phi_inverse, const Region& gzw,
                            double tau, const PlotOptions& opt = {});

}  // namespace srg::svg
