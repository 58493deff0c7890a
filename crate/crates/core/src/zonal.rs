//! Polygon geometry in geographic coordinates and the polygon-filtered zonal
//! mean that produces the satellite-side density estimate.
//!
//! All metric quantities (areas, distances) come from a local equirectangular
//! projection about a reference point: `x = R * dlon * cos(lat0)`,
//! `y = R * dlat` with angles in radians and the authalic Earth radius
//! `R = 6371007.181 m`. At plot scale (hundreds of meters) the projection
//! error is negligible and the math is reproducible from first principles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{self, GeoGrid, LonLatBbox, RasterError};
use crate::KahanSum;

/// Authalic Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_007.181;

/// Largest polygon extent (degrees, per axis) the local projection accepts.
pub const MAX_EXTENT_DEG: f64 = 0.5;

const M2_PER_HA: f64 = 10_000.0;

#[derive(Debug, Error)]
pub enum ZonalError {
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("no interpolated cells fall inside the polygon")]
    EmptyZone,
    #[error("all {0} cells inside the polygon are nodata")]
    NodataZone(usize),
    #[error("invalid target pixel size {0} m: must be finite and > 0")]
    BadTargetPixel(f64),
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate ring: need at least 3 distinct vertices, got {0}")]
    DegenerateRing(usize),
    #[error("polygon extent {extent_deg}° exceeds the {MAX_EXTENT_DEG}° limit of the local projection")]
    OversizedExtent { extent_deg: f64 },
    #[error("vertex (lon {lon}, lat {lat}) is not a finite WGS84 coordinate")]
    BadVertex { lon: f64, lat: f64 },
    #[error("GeoJSON error: {0}")]
    GeoJson(String),
    #[error("MultiPolygon has {0} polygons; pass --allow-multipolygon to audit the first one")]
    MultiPolygonDisabled(usize),
}

/// A longitude/latitude pair in degrees (WGS84, lon first like GeoJSON).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

impl LonLat {
    pub fn new(lon: f64, lat: f64) -> Self {
        LonLat { lon, lat }
    }
}

/// Equirectangular plane about a reference point; x is east, y is north,
/// both in meters.
#[derive(Debug, Clone, Copy)]
pub struct LocalProjection {
    pub lon0: f64,
    pub lat0: f64,
    cos_lat0: f64,
}

impl LocalProjection {
    pub fn new(lon0: f64, lat0: f64) -> Self {
        LocalProjection {
            lon0,
            lat0,
            cos_lat0: lat0.to_radians().cos(),
        }
    }

    /// Reference point at the arithmetic mean of the given vertices.
    pub fn about(points: impl IntoIterator<Item = LonLat>) -> Self {
        let mut lon = KahanSum::new();
        let mut lat = KahanSum::new();
        let mut n = 0usize;
        for p in points {
            lon.add(p.lon);
            lat.add(p.lat);
            n += 1;
        }
        let n = n.max(1) as f64;
        Self::new(lon.value() / n, lat.value() / n)
    }

    pub fn project(&self, p: LonLat) -> (f64, f64) {
        let x = EARTH_RADIUS_M * (p.lon - self.lon0).to_radians() * self.cos_lat0;
        let y = EARTH_RADIUS_M * (p.lat - self.lat0).to_radians();
        (x, y)
    }

    /// Inverse of [`project`](Self::project); used to build test geometry
    /// with known metric dimensions.
    pub fn unproject(&self, x: f64, y: f64) -> LonLat {
        LonLat {
            lon: self.lon0 + (x / (EARTH_RADIUS_M * self.cos_lat0)).to_degrees(),
            lat: self.lat0 + (y / EARTH_RADIUS_M).to_degrees(),
        }
    }

    /// Euclidean distance in meters between two projected points.
    pub fn distance_m(&self, a: LonLat, b: LonLat) -> f64 {
        let (ax, ay) = self.project(a);
        let (bx, by) = self.project(b);
        ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
    }
}

/// A polygon in geographic coordinates: one exterior ring plus optional
/// interior rings (holes). Rings are stored open (no repeated closing
/// vertex) and are implicitly closed.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoPolygon {
    exterior: Vec<LonLat>,
    holes: Vec<Vec<LonLat>>,
}

impl GeoPolygon {
    pub fn new(exterior: Vec<LonLat>, holes: Vec<Vec<LonLat>>) -> Result<Self, GeometryError> {
        let exterior = normalize_ring(exterior)?;
        let holes = holes
            .into_iter()
            .map(normalize_ring)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeoPolygon { exterior, holes })
    }

    pub fn exterior(&self) -> &[LonLat] {
        &self.exterior
    }

    pub fn holes(&self) -> &[Vec<LonLat>] {
        &self.holes
    }

    pub fn bbox(&self) -> LonLatBbox {
        let mut b = LonLatBbox::new(
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for p in &self.exterior {
            b.min_lon = b.min_lon.min(p.lon);
            b.max_lon = b.max_lon.max(p.lon);
            b.min_lat = b.min_lat.min(p.lat);
            b.max_lat = b.max_lat.max(p.lat);
        }
        b
    }

    /// Vertex mean of the exterior ring; the reference point for all metric
    /// computations involving this polygon.
    pub fn centroid(&self) -> LonLat {
        let mut lon = KahanSum::new();
        let mut lat = KahanSum::new();
        for p in &self.exterior {
            lon.add(p.lon);
            lat.add(p.lat);
        }
        let n = self.exterior.len() as f64;
        LonLat::new(lon.value() / n, lat.value() / n)
    }

    /// Even-odd ray-casting containment test. Points on any ring boundary
    /// count as inside; points inside holes count as outside.
    pub fn contains(&self, lon: f64, lat: f64) -> bool {
        for ring in self.rings() {
            if on_ring_boundary(ring, lon, lat) {
                return true;
            }
        }
        let mut crossings = 0usize;
        for ring in self.rings() {
            crossings += ray_crossings(ring, lon, lat);
        }
        crossings % 2 == 1
    }

    fn rings(&self) -> impl Iterator<Item = &[LonLat]> {
        std::iter::once(self.exterior.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    /// Minimum distance in meters from a point to the polygon outline.
    pub fn boundary_distance_m(&self, point: LonLat, proj: &LocalProjection) -> f64 {
        let (px, py) = proj.project(point);
        let mut best = f64::INFINITY;
        for ring in self.rings() {
            for (a, b) in ring_edges(ring) {
                let (ax, ay) = proj.project(a);
                let (bx, by) = proj.project(b);
                best = best.min(point_segment_distance(px, py, ax, ay, bx, by));
            }
        }
        best
    }
}

fn normalize_ring(mut ring: Vec<LonLat>) -> Result<Vec<LonLat>, GeometryError> {
    if let Some(bad) = ring
        .iter()
        .find(|p| !(p.lon.is_finite() && p.lat.is_finite()))
    {
        return Err(GeometryError::BadVertex {
            lon: bad.lon,
            lat: bad.lat,
        });
    }
    if ring.len() >= 2 && ring.first() == ring.last() {
        ring.pop();
    }
    let mut distinct: Vec<LonLat> = Vec::new();
    for p in &ring {
        if !distinct.contains(p) {
            distinct.push(*p);
        }
    }
    if distinct.len() < 3 {
        return Err(GeometryError::DegenerateRing(distinct.len()));
    }
    Ok(ring)
}

fn ring_edges(ring: &[LonLat]) -> impl Iterator<Item = (LonLat, LonLat)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

fn on_ring_boundary(ring: &[LonLat], lon: f64, lat: f64) -> bool {
    for (a, b) in ring_edges(ring) {
        let cross = (b.lon - a.lon) * (lat - a.lat) - (b.lat - a.lat) * (lon - a.lon);
        if cross == 0.0
            && lon >= a.lon.min(b.lon)
            && lon <= a.lon.max(b.lon)
            && lat >= a.lat.min(b.lat)
            && lat <= a.lat.max(b.lat)
        {
            return true;
        }
    }
    false
}

fn ray_crossings(ring: &[LonLat], lon: f64, lat: f64) -> usize {
    let mut n = 0;
    for (a, b) in ring_edges(ring) {
        // Half-open vertical rule so shared vertices are counted once.
        if (a.lat > lat) != (b.lat > lat) {
            let x_int = a.lon + (lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if lon < x_int {
                n += 1;
            }
        }
    }
    n
}

fn point_segment_distance(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let dx = bx - ax;
    let dy = by - ay;
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    };
    let cx = ax + t * dx;
    let cy = ay + t * dy;
    ((px - cx).powi(2) + (py - cy).powi(2)).sqrt()
}

fn check_extent(poly: &GeoPolygon) -> Result<(), GeometryError> {
    let b = poly.bbox();
    let extent = b.width().max(b.height());
    if extent >= MAX_EXTENT_DEG {
        return Err(GeometryError::OversizedExtent { extent_deg: extent });
    }
    Ok(())
}

fn shoelace_area_m2(ring: &[LonLat], proj: &LocalProjection) -> f64 {
    let mut acc = KahanSum::new();
    for (a, b) in ring_edges(ring) {
        let (ax, ay) = proj.project(a);
        let (bx, by) = proj.project(b);
        acc.add(ax * by - bx * ay);
    }
    0.5 * acc.value().abs()
}

/// Polygon area in hectares via the local equirectangular projection about
/// the polygon centroid; hole areas are subtracted. Collinear rings yield 0.
pub fn polygon_area_ha(poly: &GeoPolygon) -> Result<f64, GeometryError> {
    check_extent(poly)?;
    let proj = {
        let c = poly.centroid();
        LocalProjection::new(c.lon, c.lat)
    };
    let mut area = shoelace_area_m2(&poly.exterior, &proj);
    for hole in &poly.holes {
        area -= shoelace_area_m2(hole, &proj);
    }
    Ok(area / M2_PER_HA)
}

/// Boolean operation form of [`GeoPolygon::contains`].
pub fn point_in_polygon(poly: &GeoPolygon, lon: f64, lat: f64) -> bool {
    poly.contains(lon, lat)
}

/// The polygon-filtered mean of a regridded raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalResult {
    /// Mean of the kept (non-nodata) fine cells, t/ha.
    pub mean_t_per_ha: f64,
    /// Number of fine cells whose centers fall in the polygon with data.
    pub cell_count: usize,
    /// Fine cells inside the polygon carrying nodata.
    pub nodata_count: usize,
    /// Interpolation target resolution, meters.
    pub target_pixel_m: f64,
    /// Polygon area in hectares (local projection).
    pub polygon_area_ha: f64,
}

/// Regrids the raster over the polygon's bbox at `target_pixel_m` (converted
/// to degrees of longitude at the polygon centroid), keeps the fine cells
/// whose centers fall inside the polygon and averages the non-nodata ones.
///
/// The mean is a compensated sum of deviations from the first kept cell, so
/// a constant field averages to exactly that constant.
pub fn zonal_filtered_mean(
    grid: &GeoGrid,
    poly: &GeoPolygon,
    target_pixel_m: f64,
) -> Result<ZonalResult, ZonalError> {
    check_extent(poly)?;
    let area_ha = polygon_area_ha(poly)?;
    let fine = regrid_for_polygon(grid, poly, target_pixel_m)?;

    let mut first: Option<f64> = None;
    let mut dev = KahanSum::new();
    let mut cell_count = 0usize;
    let mut nodata_count = 0usize;
    for row in 0..fine.nrows() {
        let lat = fine.center_lat(row);
        for col in 0..fine.ncols() {
            let lon = fine.center_lon(col);
            if !poly.contains(lon, lat) {
                continue;
            }
            match fine.get(col, row) {
                Some(v) => {
                    let base = *first.get_or_insert(v);
                    dev.add(v - base);
                    cell_count += 1;
                }
                None => nodata_count += 1,
            }
        }
    }

    let Some(base) = first else {
        return if nodata_count > 0 {
            Err(ZonalError::NodataZone(nodata_count))
        } else {
            Err(ZonalError::EmptyZone)
        };
    };
    let mean = base + dev.value() / cell_count as f64;
    Ok(ZonalResult {
        mean_t_per_ha: mean,
        cell_count,
        nodata_count,
        target_pixel_m,
        polygon_area_ha: area_ha,
    })
}

/// Degrees of longitude spanned by `meters` east-west at latitude `lat_deg`.
pub fn meters_to_lon_degrees(meters: f64, lat_deg: f64) -> f64 {
    (meters / (EARTH_RADIUS_M * lat_deg.to_radians().cos())).to_degrees()
}

/// Interpolates the raster over the polygon's bbox at `target_pixel_m`
/// meters, converted to degrees of longitude at the polygon centroid. This
/// is the grid the zonal mean filters; it is also what gets rendered.
pub fn regrid_for_polygon(
    grid: &GeoGrid,
    poly: &GeoPolygon,
    target_pixel_m: f64,
) -> Result<GeoGrid, ZonalError> {
    if !(target_pixel_m.is_finite() && target_pixel_m > 0.0) {
        return Err(ZonalError::BadTargetPixel(target_pixel_m));
    }
    let centroid = poly.centroid();
    let target_deg = meters_to_lon_degrees(target_pixel_m, centroid.lat);
    Ok(raster::regrid(grid, target_deg, &poly.bbox())?)
}

/// Builds a polygon from a GeoJSON `Polygon` or `MultiPolygon` geometry
/// object (coordinates in lon-lat order). For a MultiPolygon the first
/// polygon is the site; additional polygons are rejected unless
/// `allow_multipolygon` is set.
pub fn polygon_from_geojson(
    geometry: &serde_json::Value,
    allow_multipolygon: bool,
) -> Result<GeoPolygon, GeometryError> {
    let gj = |msg: &str| GeometryError::GeoJson(msg.to_string());
    let gtype = geometry
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| gj("geometry has no type"))?;
    let coords = geometry
        .get("coordinates")
        .ok_or_else(|| gj("geometry has no coordinates"))?;
    let rings_value = match gtype {
        "Polygon" => coords.clone(),
        "MultiPolygon" => {
            let polys = coords
                .as_array()
                .ok_or_else(|| gj("MultiPolygon coordinates must be an array"))?;
            if polys.len() != 1 && !allow_multipolygon {
                return Err(GeometryError::MultiPolygonDisabled(polys.len()));
            }
            polys
                .first()
                .cloned()
                .ok_or_else(|| gj("MultiPolygon has no polygons"))?
        }
        other => {
            return Err(GeometryError::GeoJson(format!(
                "unsupported geometry type {other:?}, expected Polygon or MultiPolygon"
            )))
        }
    };

    let rings = rings_value
        .as_array()
        .ok_or_else(|| gj("Polygon coordinates must be an array of rings"))?;
    let mut parsed: Vec<Vec<LonLat>> = Vec::with_capacity(rings.len());
    for ring in rings {
        let positions = ring
            .as_array()
            .ok_or_else(|| gj("ring must be an array of positions"))?;
        let mut pts = Vec::with_capacity(positions.len());
        for pos in positions {
            let pair = pos
                .as_array()
                .filter(|a| a.len() >= 2)
                .ok_or_else(|| gj("position must be a [lon, lat] array"))?;
            let lon = pair[0]
                .as_f64()
                .ok_or_else(|| gj("longitude must be a number"))?;
            let lat = pair[1]
                .as_f64()
                .ok_or_else(|| gj("latitude must be a number"))?;
            pts.push(LonLat::new(lon, lat));
        }
        parsed.push(pts);
    }
    if parsed.is_empty() {
        return Err(gj("polygon has no rings"));
    }
    let exterior = parsed.remove(0);
    GeoPolygon::new(exterior, parsed)
}
