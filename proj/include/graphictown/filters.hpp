#pragma once

#include <string_view>

#include <json.hpp>

#include "graphictown/raster.hpp"

namespace gtown {

using json = nlohmann::json;

// Object adjustments. Every transform is integer or fixed-iteration
// floating point, so results are reproducible bit for bit. Alpha is
// preserved unless noted.

/// ((v-128)*(100+contrast))/100 + 128 + brightness per channel.
Raster adjust_bc(const Raster& src, double brightness, double contrast);
/// Rec. 601 luma grayscale.
Raster adjust_bw(const Raster& src);
/// Hue rotation in degrees; saturation and light in percent toward 0 or full.
Raster adjust_hsl(const Raster& src, double hue, double saturation, double light);
/// Three box-blur passes whose radii sum to round(amount) px.
Raster blur(const Raster& src, double amount);
/// Blend toward the filter color at density percent. Unknown filter names
/// use the warming color.
Raster photo_filter(const Raster& src, std::string_view filter_type, double density);
Rgba photo_filter_color(std::string_view filter_type);
/// Displacement by smooth value noise.
Raster glass_filter(const Raster& src, double distortion, double smoothness, double scaling);
/// Blurred highlights added back with grain.
Raster glow_filter(const Raster& src, double graininess, double glow_amount, double clear_amount);
/// Sinusoidal displacement; period from rippleSize, amplitude in px.
Raster ocean_ripple_filter(const Raster& src, double ripple_size, double ripple_magnitude);
/// Voronoi cells filled with the seed color, dark borders, lit centers.
Raster stained_glass_filter(const Raster& src, double cell_size, double border_thickness, double light_intensity);
/// Averaged squares with a beveled edge.
Raster patchwork_filter(const Raster& src, double square_size, double relief);
/// Blur, posterize, edge darkening and paper grain.
Raster watercolor_filter(const Raster& src, double brush_detail, double shadow_intensity, int texture);

bool is_adjustment(std::string_view action);
/// Dispatch by action name using already-normalized parameters.
Raster apply_adjustment(std::string_view action, const json& params, const Raster& src);

}  // namespace gtown
