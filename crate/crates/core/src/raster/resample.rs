//! Cubic-convolution resampling (Keys kernel, a = -0.5, the common GIS
//! "cubic" resampler) with clamp padding at the edges.
//!
//! Samples are evaluated relative to the nearest cell value, so constant
//! fields are reproduced bit-exactly, and fractional pixel offsets within
//! 1e-9 of a cell center snap onto it so node values are reproduced exactly.

use super::{GeoGrid, LonLatBbox, RasterError, DEFAULT_NODATA};

const KERNEL_A: f64 = -0.5;

/// Hard cap on regrid output size (~800 MB of cells) so a huge bbox with a
/// tiny target pixel fails fast instead of exhausting memory.
const MAX_OUTPUT_CELLS: usize = 100_000_000;

/// Offsets this close to a node collapse onto it (in pixel units).
const NODE_SNAP: f64 = 1e-9;

/// Keys cubic-convolution kernel with a = -0.5.
pub fn cubic_kernel(t: f64) -> f64 {
    let x = t.abs();
    if x <= 1.0 {
        ((KERNEL_A + 2.0) * x - (KERNEL_A + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        (((x - 5.0) * x + 8.0) * x - 4.0) * KERNEL_A
    } else {
        0.0
    }
}

/// Splits a pixel-center coordinate into its base cell index and fractional
/// offset in [0, 1), snapping near-node offsets to exactly 0.
fn split(center_coord: f64) -> (i64, f64) {
    let mut base = center_coord.floor();
    let mut frac = center_coord - base;
    if frac < NODE_SNAP {
        frac = 0.0;
    } else if frac > 1.0 - NODE_SNAP {
        base += 1.0;
        frac = 0.0;
    }
    (base as i64, frac)
}

fn clamp_index(i: i64, n: usize) -> usize {
    i.clamp(0, n as i64 - 1) as usize
}

/// Samples the grid at a lon/lat position with separable 4x4 cubic
/// convolution on pixel-center values; edge rows/columns are replicated.
///
/// Returns `Ok(None)` when the sample is nodata: if any cell of the 4x4
/// support is nodata the sample falls back to bilinear on the surrounding
/// 2x2 cells, and if that neighborhood is also contaminated the sample
/// itself is nodata.
pub fn bicubic_sample(grid: &GeoGrid, lon: f64, lat: f64) -> Result<Option<f64>, RasterError> {
    let p = grid.world_to_pixel(lon, lat);
    if !(p.col.is_finite() && p.row.is_finite())
        || p.col < 0.0
        || p.col > grid.ncols() as f64
        || p.row < 0.0
        || p.row > grid.nrows() as f64
    {
        return Err(RasterError::OutOfBounds { lon, lat });
    }

    // Pixel-center coordinates: the center of cell (c, r) sits at (c, r).
    let (base_c, fx) = split(p.col - 0.5);
    let (base_r, fy) = split(p.row - 0.5);

    let mut support = [[0.0f64; 4]; 4];
    let mut any_nodata = false;
    for (j, row) in support.iter_mut().enumerate() {
        let r = clamp_index(base_r - 1 + j as i64, grid.nrows());
        for (i, cell) in row.iter_mut().enumerate() {
            let c = clamp_index(base_c - 1 + i as i64, grid.ncols());
            let v = grid.value_at(c, r);
            if grid.is_nodata(v) {
                any_nodata = true;
            }
            *cell = v;
        }
    }

    if any_nodata {
        return Ok(bilinear_fallback(grid, base_c, base_r, fx, fy));
    }

    let wx = kernel_weights(fx);
    let wy = kernel_weights(fy);
    // Reference cell is the support's (1, 1) entry, the cell containing the
    // sample; accumulating weighted differences keeps constants exact.
    let vref = support[1][1];
    let mut acc = 0.0;
    for j in 0..4 {
        for i in 0..4 {
            acc += wy[j] * wx[i] * (support[j][i] - vref);
        }
    }
    Ok(Some(vref + acc))
}

fn kernel_weights(frac: f64) -> [f64; 4] {
    [
        cubic_kernel(frac + 1.0),
        cubic_kernel(frac),
        cubic_kernel(frac - 1.0),
        cubic_kernel(frac - 2.0),
    ]
}

fn bilinear_fallback(grid: &GeoGrid, base_c: i64, base_r: i64, fx: f64, fy: f64) -> Option<f64> {
    let c0 = clamp_index(base_c, grid.ncols());
    let c1 = clamp_index(base_c + 1, grid.ncols());
    let r0 = clamp_index(base_r, grid.nrows());
    let r1 = clamp_index(base_r + 1, grid.nrows());
    let v00 = grid.get(c0, r0)?;
    let v10 = grid.get(c1, r0)?;
    let v01 = grid.get(c0, r1)?;
    let v11 = grid.get(c1, r1)?;
    let w = [
        (1.0 - fx) * (1.0 - fy),
        fx * (1.0 - fy),
        (1.0 - fx) * fy,
        fx * fy,
    ];
    let acc = w[1] * (v10 - v00) + w[2] * (v01 - v00) + w[3] * (v11 - v00);
    Some(v00 + acc)
}

/// Resamples the grid onto a finer/coarser square-pixel lattice anchored at
/// the northwest corner of `bbox` and covering it entirely (the south and
/// east edges snap outward to whole pixels).
///
/// Output cells whose centers fall outside the source extent, or whose
/// sample is nodata, carry the output nodata value (the source's, or
/// [`DEFAULT_NODATA`] when the source has none).
pub fn regrid(
    grid: &GeoGrid,
    target_pixel_deg: f64,
    bbox: &LonLatBbox,
) -> Result<GeoGrid, RasterError> {
    if !(target_pixel_deg.is_finite() && target_pixel_deg > 0.0) {
        return Err(RasterError::BadTargetPixel(target_pixel_deg));
    }
    if !(bbox.width() > 0.0 && bbox.height() > 0.0) {
        return Err(RasterError::EmptyIntersection);
    }
    if !bbox.intersects(&grid.extent()) {
        return Err(RasterError::EmptyIntersection);
    }

    let ncols = snap_cell_count(bbox.width() / target_pixel_deg);
    let nrows = snap_cell_count(bbox.height() / target_pixel_deg);
    if ncols.saturating_mul(nrows) > MAX_OUTPUT_CELLS {
        return Err(RasterError::TooManyCells {
            requested: ncols.saturating_mul(nrows),
            limit: MAX_OUTPUT_CELLS,
        });
    }
    let nodata_out = grid.nodata().unwrap_or(DEFAULT_NODATA);

    let mut values = Vec::with_capacity(ncols * nrows);
    let mut used_nodata = false;
    for r in 0..nrows {
        let lat = bbox.max_lat - (r as f64 + 0.5) * target_pixel_deg;
        for c in 0..ncols {
            let lon = bbox.min_lon + (c as f64 + 0.5) * target_pixel_deg;
            let v = match bicubic_sample(grid, lon, lat) {
                Ok(Some(v)) => v,
                Ok(None) | Err(RasterError::OutOfBounds { .. }) => {
                    used_nodata = true;
                    nodata_out
                }
                Err(e) => return Err(e),
            };
            values.push(v);
        }
    }

    let nodata = if used_nodata || grid.nodata().is_some() {
        Some(nodata_out)
    } else {
        None
    };
    GeoGrid::new(
        ncols,
        nrows,
        bbox.min_lon,
        bbox.max_lat,
        target_pixel_deg,
        target_pixel_deg,
        nodata,
        values,
    )
}

/// ceil() with a tolerance so ratios a float hair above an integer do not
/// gain a full extra pixel.
fn snap_cell_count(ratio: f64) -> usize {
    ((ratio - 1e-9).ceil().max(1.0)) as usize
}
