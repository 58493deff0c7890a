//! ESRI ASCII grid reader/writer. This is the universal fallback raster
//! format and the one used for most test fixtures.

use super::{GeoGrid, RasterError};

const REQUIRED_HEADERS: [&str; 5] = ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize"];

/// Parses an ESRI ASCII grid. Header keywords are case-insensitive; row 1 of
/// the data block is the northernmost row.
pub fn parse_esri_ascii(text: &str) -> Result<GeoGrid, RasterError> {
    let mut ncols: Option<usize> = None;
    let mut nrows: Option<usize> = None;
    let mut xllcorner: Option<f64> = None;
    let mut yllcorner: Option<f64> = None;
    let mut cellsize: Option<f64> = None;
    let mut nodata: Option<f64> = None;

    let mut values: Vec<f64> = Vec::new();
    let mut in_data = false;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        if !in_data {
            let first = *tokens.peek().expect("peeked non-empty");
            if first.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                let keyword = tokens.next().expect("peeked").to_ascii_lowercase();
                let value = tokens.next().ok_or_else(|| {
                    RasterError::Parse(format!("header {keyword:?} at line {line_no} has no value"))
                })?;
                if let Some(extra) = tokens.next() {
                    return Err(RasterError::Parse(format!(
                        "unexpected token {extra:?} after header {keyword:?} at line {line_no}"
                    )));
                }
                parse_header(
                    &keyword, value, line_no, &mut ncols, &mut nrows, &mut xllcorner,
                    &mut yllcorner, &mut cellsize, &mut nodata,
                )?;
                continue;
            }
            in_data = true;
        }
        for token in tokens {
            let v: f64 = token.parse().map_err(|_| {
                RasterError::Parse(format!(
                    "non-numeric data token {token:?} at line {line_no}"
                ))
            })?;
            values.push(v);
        }
    }

    let missing: Vec<&str> = REQUIRED_HEADERS
        .iter()
        .copied()
        .filter(|h| match *h {
            "ncols" => ncols.is_none(),
            "nrows" => nrows.is_none(),
            "xllcorner" => xllcorner.is_none(),
            "yllcorner" => yllcorner.is_none(),
            "cellsize" => cellsize.is_none(),
            _ => unreachable!(),
        })
        .collect();
    if !missing.is_empty() {
        return Err(RasterError::Parse(format!(
            "missing required header(s): {}",
            missing.join(", ")
        )));
    }

    let (ncols, nrows) = (ncols.expect("checked"), nrows.expect("checked"));
    let cellsize = cellsize.expect("checked");
    if !(cellsize.is_finite() && cellsize > 0.0) {
        return Err(RasterError::Parse(format!("cellsize {cellsize} must be > 0")));
    }
    if values.len() != ncols * nrows {
        return Err(RasterError::Parse(format!(
            "expected {} data values for a {}x{} grid, found {}",
            ncols * nrows,
            ncols,
            nrows,
            values.len()
        )));
    }

    // yllcorner is the south edge; the grid origin is the northwest corner.
    let origin_lat = yllcorner.expect("checked") + nrows as f64 * cellsize;
    GeoGrid::new(
        ncols,
        nrows,
        xllcorner.expect("checked"),
        origin_lat,
        cellsize,
        cellsize,
        nodata,
        values,
    )
}

#[allow(clippy::too_many_arguments)]
fn parse_header(
    keyword: &str,
    value: &str,
    line_no: usize,
    ncols: &mut Option<usize>,
    nrows: &mut Option<usize>,
    xllcorner: &mut Option<f64>,
    yllcorner: &mut Option<f64>,
    cellsize: &mut Option<f64>,
    nodata: &mut Option<f64>,
) -> Result<(), RasterError> {
    fn set<T>(slot: &mut Option<T>, keyword: &str, line_no: usize, v: T) -> Result<(), RasterError> {
        if slot.is_some() {
            return Err(RasterError::Parse(format!(
                "duplicate header {keyword:?} at line {line_no}"
            )));
        }
        *slot = Some(v);
        Ok(())
    }
    let bad_num = || {
        RasterError::Parse(format!(
            "header {keyword:?} at line {line_no} has non-numeric value {value:?}"
        ))
    };
    match keyword {
        "ncols" => set(ncols, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        "nrows" => set(nrows, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        "xllcorner" => set(xllcorner, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        "yllcorner" => set(yllcorner, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        "cellsize" => set(cellsize, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        "nodata_value" => set(nodata, keyword, line_no, value.parse().map_err(|_| bad_num())?),
        other => Err(RasterError::Parse(format!(
            "unsupported header {other:?} at line {line_no} (xllcenter/yllcenter grids are not supported)"
        ))),
    }
}

/// Writes a grid as ESRI ASCII text. Data values are printed with 17
/// significant digits so `parse(write(g))` reproduces `g` exactly. Only
/// square-pixel grids can be represented.
pub fn write_esri_ascii(grid: &GeoGrid) -> Result<String, RasterError> {
    let pw = grid.pixel_width_deg();
    let ph = grid.pixel_height_deg();
    if (pw - ph).abs() > 1e-12 * pw.max(ph) {
        return Err(RasterError::Unsupported(format!(
            "ESRI ASCII requires square pixels; got {pw} x {ph} degrees"
        )));
    }

    let yllcorner = representable_yllcorner(grid.origin_lat(), grid.nrows() as f64 * ph);
    let mut out = String::new();
    out.push_str(&format!("ncols {}\n", grid.ncols()));
    out.push_str(&format!("nrows {}\n", grid.nrows()));
    out.push_str(&format!("xllcorner {}\n", fmt_f64(grid.origin_lon())));
    out.push_str(&format!("yllcorner {}\n", fmt_f64(yllcorner)));
    out.push_str(&format!("cellsize {}\n", fmt_f64(pw)));
    if let Some(nd) = grid.nodata() {
        out.push_str(&format!("NODATA_value {}\n", fmt_f64(nd)));
    }
    for row in 0..grid.nrows() {
        let mut line = String::new();
        for col in 0..grid.ncols() {
            if col > 0 {
                line.push(' ');
            }
            line.push_str(&fmt_f64(grid.value_at(col, row)));
        }
        line.push('\n');
        out.push_str(&line);
    }
    Ok(out)
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Finds a south-edge value whose re-parse (`yllcorner + height`) recovers
/// the stored origin latitude bit-exactly. The naive `origin - height`
/// candidate can be off by an ulp, so bisect the monotone map
/// `yll -> yll + height` for an exact witness. A witness always exists for
/// grids whose origin came from a corner header in the first place; when
/// none exists the nearest representable corner is used.
fn representable_yllcorner(origin_lat: f64, height: f64) -> f64 {
    let base = origin_lat - height;
    if base + height == origin_lat {
        return base;
    }
    let err = (base + height - origin_lat).abs();
    let w = 4.0 * err.max(f64::EPSILON * origin_lat.abs()).max(f64::MIN_POSITIVE);
    let (mut lo, mut hi) = (base - w, base + w);
    if lo + height == origin_lat {
        return lo;
    }
    if hi + height == origin_lat {
        return hi;
    }
    if lo + height > origin_lat || hi + height < origin_lat {
        return base;
    }
    for _ in 0..200 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = mid + height;
        if v == origin_lat {
            return mid;
        }
        if v < origin_lat {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    base
}
