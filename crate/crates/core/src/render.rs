//! Deterministic SVG rendering of an interpolated AGB-density grid with the
//! site polygon outline and optional crown boxes overlaid.
//!
//! Cells are color-mapped with a linear ramp from `#ffffcc` (minimum) to
//! `#005a32` (maximum); nodata cells are gray. The min/max of the ramp are
//! annotated as text, so the figure is self-describing. Output bytes depend
//! only on the inputs.

use thiserror::Error;

use crate::crownmatch::CrownBox;
use crate::raster::GeoGrid;
use crate::zonal::GeoPolygon;

/// Drawing scale: SVG user units per raster cell.
const CELL_PX: f64 = 4.0;
/// Vertical space reserved under the map for the legend text.
const LEGEND_PX: f64 = 28.0;

const RAMP_LOW: [u8; 3] = [0xff, 0xff, 0xcc];
const RAMP_HIGH: [u8; 3] = [0x00, 0x5a, 0x32];
const NODATA_FILL: &str = "#bdbdbd";

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("grid has no renderable cells: {0}")]
    DegenerateExtent(String),
}

/// Renders the grid as an SVG heatmap with the polygon outline and optional
/// crown rectangles. Byte-identical across runs for identical inputs.
pub fn render_heatmap_svg(
    grid: &GeoGrid,
    poly: &GeoPolygon,
    crowns: Option<&[CrownBox]>,
) -> Result<String, RenderError> {
    let valid: Vec<f64> = grid
        .values()
        .iter()
        .copied()
        .filter(|v| !grid.is_nodata(*v))
        .collect();
    if valid.is_empty() {
        return Err(RenderError::DegenerateExtent(
            "every cell is nodata".to_string(),
        ));
    }
    let min = valid.iter().copied().fold(f64::INFINITY, f64::min);
    let max = valid.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let width = grid.ncols() as f64 * CELL_PX;
    let height = grid.nrows() as f64 * CELL_PX;
    let total_height = height + LEGEND_PX;

    // lon/lat -> SVG user units.
    let x_of = |lon: f64| (lon - grid.origin_lon()) / grid.pixel_width_deg() * CELL_PX;
    let y_of = |lat: f64| (grid.origin_lat() - lat) / grid.pixel_height_deg() * CELL_PX;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = fmt(width),
        h = fmt(total_height),
    ));
    svg.push_str(&format!(
        "  <!-- linear color ramp {} (min) to {} (max); nodata {} -->\n",
        rgb(RAMP_LOW),
        rgb(RAMP_HIGH),
        NODATA_FILL
    ));

    for row in 0..grid.nrows() {
        for col in 0..grid.ncols() {
            let v = grid.value_at(col, row);
            let fill = if grid.is_nodata(v) {
                NODATA_FILL.to_string()
            } else {
                ramp_color(v, min, max)
            };
            svg.push_str(&format!(
                "  <rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                fmt(col as f64 * CELL_PX),
                fmt(row as f64 * CELL_PX),
                fmt(CELL_PX),
                fmt(CELL_PX),
                fill
            ));
        }
    }

    let mut path = String::new();
    for (i, p) in poly.exterior().iter().enumerate() {
        path.push_str(if i == 0 { "M" } else { " L" });
        path.push_str(&format!("{} {}", fmt(x_of(p.lon)), fmt(y_of(p.lat))));
    }
    path.push_str(" Z");
    for hole in poly.holes() {
        for (i, p) in hole.iter().enumerate() {
            path.push_str(if i == 0 { " M" } else { " L" });
            path.push_str(&format!("{} {}", fmt(x_of(p.lon)), fmt(y_of(p.lat))));
        }
        path.push_str(" Z");
    }
    svg.push_str(&format!(
        "  <path class=\"site\" d=\"{path}\" fill=\"none\" stroke=\"#1f78b4\" stroke-width=\"1\"/>\n"
    ));

    for crown in crowns.unwrap_or(&[]) {
        let x = x_of(crown.min_lon);
        let y = y_of(crown.max_lat);
        let w = x_of(crown.max_lon) - x;
        let h = y_of(crown.min_lat) - y;
        svg.push_str(&format!(
            "  <rect class=\"crown\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" \
             fill=\"none\" stroke=\"#e31a1c\" stroke-width=\"0.5\"/>\n",
            fmt(x),
            fmt(y),
            fmt(w),
            fmt(h)
        ));
    }

    svg.push_str(&format!(
        "  <text class=\"legend\" x=\"0\" y=\"{}\" font-size=\"8\" font-family=\"monospace\">min {} t/ha ({})</text>\n",
        fmt(height + 10.0),
        fmt(min),
        rgb(RAMP_LOW)
    ));
    svg.push_str(&format!(
        "  <text class=\"legend\" x=\"0\" y=\"{}\" font-size=\"8\" font-family=\"monospace\">max {} t/ha ({})</text>\n",
        fmt(height + 20.0),
        fmt(max),
        rgb(RAMP_HIGH)
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn ramp_color(v: f64, min: f64, max: f64) -> String {
    let t = if max > min { (v - min) / (max - min) } else { 0.0 };
    let channel = |lo: u8, hi: u8| (lo as f64 + (hi as f64 - lo as f64) * t).round() as u8;
    rgb([
        channel(RAMP_LOW[0], RAMP_HIGH[0]),
        channel(RAMP_LOW[1], RAMP_HIGH[1]),
        channel(RAMP_LOW[2], RAMP_HIGH[2]),
    ])
}

fn rgb(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Fixed-precision coordinate/value formatting keeps the output stable and
/// diffable.
fn fmt(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
