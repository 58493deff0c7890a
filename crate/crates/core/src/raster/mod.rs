//! Georeferenced single-band rasters in WGS84 degrees, the file parsers that
//! produce them, and cubic-convolution resampling.

mod esri_ascii;
mod geotiff;
mod resample;

pub use esri_ascii::{parse_esri_ascii, write_esri_ascii};
pub use geotiff::parse_geotiff_subset;
pub use resample::{bicubic_sample, cubic_kernel, regrid};

use thiserror::Error;

/// Name of the resampling kernel, recorded in audit reports.
pub const KERNEL_NAME: &str = "keys-cubic-convolution(a=-0.5)";

/// Fill value used for cells a regrid cannot source when the input grid has
/// no nodata value of its own.
pub const DEFAULT_NODATA: f64 = -9999.0;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("raster parse error: {0}")]
    Parse(String),
    #[error("unsupported raster format: {0}")]
    Unsupported(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("sample point (lon {lon}, lat {lat}) is outside the grid extent")]
    OutOfBounds { lon: f64, lat: f64 },
    #[error("target bbox does not intersect the grid extent")]
    EmptyIntersection,
    #[error("invalid target pixel size {0}: must be finite and > 0")]
    BadTargetPixel(f64),
    #[error("regrid output would hold {requested} cells, over the {limit} limit; choose a coarser target pixel")]
    TooManyCells { requested: usize, limit: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Continuous raster coordinates: (0, 0) is the outer corner of the top-left
/// pixel and pixel centers sit at half-integer offsets. Values may lie
/// outside the grid; callers decide what out-of-range means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelCoord {
    pub col: f64,
    pub row: f64,
}

/// An axis-aligned lon/lat rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LonLatBbox {
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
}

impl LonLatBbox {
    pub fn new(min_lon: f64, min_lat: f64, max_lon: f64, max_lat: f64) -> Self {
        LonLatBbox {
            min_lon,
            min_lat,
            max_lon,
            max_lat,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_lon - self.min_lon
    }

    pub fn height(&self) -> f64 {
        self.max_lat - self.min_lat
    }

    pub fn intersects(&self, other: &LonLatBbox) -> bool {
        self.min_lon < other.max_lon
            && other.min_lon < self.max_lon
            && self.min_lat < other.max_lat
            && other.min_lat < self.max_lat
    }
}

/// A georeferenced single-band grid of AGB density values (t/ha).
///
/// The origin is the outer corner of the top-left pixel; rows advance
/// southward by `pixel_height_deg`. Values are stored row-major, immutable
/// after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoGrid {
    ncols: usize,
    nrows: usize,
    origin_lon: f64,
    origin_lat: f64,
    pixel_width_deg: f64,
    pixel_height_deg: f64,
    nodata: Option<f64>,
    values: Vec<f64>,
}

impl GeoGrid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ncols: usize,
        nrows: usize,
        origin_lon: f64,
        origin_lat: f64,
        pixel_width_deg: f64,
        pixel_height_deg: f64,
        nodata: Option<f64>,
        values: Vec<f64>,
    ) -> Result<Self, RasterError> {
        if ncols == 0 || nrows == 0 {
            return Err(RasterError::InvalidGrid(
                "grid dimensions must be positive".into(),
            ));
        }
        if values.len() != ncols * nrows {
            return Err(RasterError::InvalidGrid(format!(
                "expected {} values for a {}x{} grid, got {}",
                ncols * nrows,
                ncols,
                nrows,
                values.len()
            )));
        }
        if !(pixel_width_deg.is_finite() && pixel_width_deg > 0.0)
            || !(pixel_height_deg.is_finite() && pixel_height_deg > 0.0)
        {
            return Err(RasterError::InvalidGrid("pixel sizes must be > 0".into()));
        }
        if !origin_lon.is_finite() || !origin_lat.is_finite() {
            return Err(RasterError::InvalidGrid("origin must be finite".into()));
        }
        if let Some(nd) = nodata {
            if !nd.is_finite() {
                return Err(RasterError::InvalidGrid(
                    "nodata value must be finite".into(),
                ));
            }
        }
        if let Some(bad) = values
            .iter()
            .find(|v| !v.is_finite() && Some(**v) != nodata)
        {
            return Err(RasterError::InvalidGrid(format!(
                "non-finite cell value {bad} (not the nodata value)"
            )));
        }
        Ok(GeoGrid {
            ncols,
            nrows,
            origin_lon,
            origin_lat,
            pixel_width_deg,
            pixel_height_deg,
            nodata,
            values,
        })
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn origin_lon(&self) -> f64 {
        self.origin_lon
    }

    pub fn origin_lat(&self) -> f64 {
        self.origin_lat
    }

    pub fn pixel_width_deg(&self) -> f64 {
        self.pixel_width_deg
    }

    pub fn pixel_height_deg(&self) -> f64 {
        self.pixel_height_deg
    }

    pub fn nodata(&self) -> Option<f64> {
        self.nodata
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Raw cell value at (col, row). Panics when out of range.
    pub fn value_at(&self, col: usize, row: usize) -> f64 {
        assert!(col < self.ncols && row < self.nrows, "cell index in range");
        self.values[row * self.ncols + col]
    }

    pub fn is_nodata(&self, value: f64) -> bool {
        self.nodata == Some(value)
    }

    /// Cell value with nodata mapped to `None`.
    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        let v = self.value_at(col, row);
        if self.is_nodata(v) {
            None
        } else {
            Some(v)
        }
    }

    /// Geographic extent covered by the grid's cells.
    pub fn extent(&self) -> LonLatBbox {
        LonLatBbox {
            min_lon: self.origin_lon,
            max_lon: self.origin_lon + self.ncols as f64 * self.pixel_width_deg,
            min_lat: self.origin_lat - self.nrows as f64 * self.pixel_height_deg,
            max_lat: self.origin_lat,
        }
    }

    /// Longitude of the center of column `col`.
    pub fn center_lon(&self, col: usize) -> f64 {
        self.origin_lon + (col as f64 + 0.5) * self.pixel_width_deg
    }

    /// Latitude of the center of row `row`.
    pub fn center_lat(&self, row: usize) -> f64 {
        self.origin_lat - (row as f64 + 0.5) * self.pixel_height_deg
    }

    /// Maps a lon/lat position to continuous raster coordinates. Positions
    /// outside the grid are returned as-is, not clamped.
    pub fn world_to_pixel(&self, lon: f64, lat: f64) -> PixelCoord {
        PixelCoord {
            col: (lon - self.origin_lon) / self.pixel_width_deg,
            row: (self.origin_lat - lat) / self.pixel_height_deg,
        }
    }
}

/// Free-function form of [`GeoGrid::world_to_pixel`].
pub fn world_to_pixel(grid: &GeoGrid, lon: f64, lat: f64) -> PixelCoord {
    grid.world_to_pixel(lon, lat)
}
