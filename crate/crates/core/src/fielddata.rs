//! Field-measurement ingestion and per-site ground-truth aggregation.
//!
//! The canonical measurement format is one CSV per site with the header
//! `tree_id,lat,lon,species,dbh_cm[,family][,height_m]`. Totals are
//! accumulated in sorted tree_id order with compensated summation so results
//! are bit-stable across platforms and record orderings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allometry::{self, AllometryError, FamilyClass, FamilyMapping};
use crate::zonal::{GeoPolygon, LocalProjection, LonLat};
use crate::KahanSum;

/// Records farther than this from the site boundary trigger a warning.
pub const BOUNDARY_TOLERANCE_M: f64 = 10.0;

const KG_PER_TONNE: f64 = 1000.0;

#[derive(Debug, Error)]
pub enum FieldDataError {
    #[error("field CSV is missing required column {0:?}")]
    MissingColumn(&'static str),
    #[error("field CSV has unexpected column {0:?} (schema: tree_id,lat,lon,species,dbh_cm[,family][,height_m])")]
    UnexpectedColumn(String),
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
    #[error("duplicate tree_id {0:?}")]
    DuplicateTreeId(String),
    #[error("site {0:?} has no records; an empty site cannot be audited")]
    EmptySite(String),
    #[error("record {record_id:?}: {source}")]
    Classification {
        record_id: String,
        source: AllometryError,
    },
    #[error("invalid site area {0} ha: must be finite and > 0")]
    BadArea(f64),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// One field-measured tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub tree_id: String,
    pub lat: f64,
    pub lon: f64,
    pub species: String,
    /// Explicit family class; when absent the species text is classified
    /// through the family mapping.
    pub family: Option<FamilyClass>,
    pub dbh_cm: f64,
    pub height_m: Option<f64>,
}

impl TreeRecord {
    pub fn position(&self) -> LonLat {
        LonLat::new(self.lon, self.lat)
    }
}

/// A project site: boundary polygon, measurements, optional declared area
/// for cross-checking (the polygon-derived area is authoritative).
#[derive(Debug, Clone)]
pub struct SiteDefinition {
    pub site_id: String,
    pub boundary: GeoPolygon,
    pub records: Vec<TreeRecord>,
    pub declared_area_ha: Option<f64>,
}

impl SiteDefinition {
    /// Warnings for records outside the boundary by more than
    /// [`BOUNDARY_TOLERANCE_M`]. GPS jitter is expected; such records still
    /// count toward the site total.
    pub fn boundary_warnings(&self) -> Vec<String> {
        let centroid = self.boundary.centroid();
        let proj = LocalProjection::new(centroid.lon, centroid.lat);
        let mut out = Vec::new();
        for r in &self.records {
            if self.boundary.contains(r.lon, r.lat) {
                continue;
            }
            let d = self.boundary.boundary_distance_m(r.position(), &proj);
            if d > BOUNDARY_TOLERANCE_M {
                out.push(format!(
                    "record {:?} lies {:.1} m outside the site boundary",
                    r.tree_id, d
                ));
            }
        }
        out
    }
}

/// Site AGB totals before an area is attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteTotals {
    pub site_id: String,
    /// Total aboveground biomass, metric tonnes.
    pub total_agb_t: f64,
    /// Per-family subtotals, tonnes; they sum to `total_agb_t`.
    pub per_family_t: BTreeMap<FamilyClass, f64>,
}

/// Ground truth for one site: total biomass over area.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteGroundTruth {
    pub site_id: String,
    pub total_agb_t: f64,
    pub area_ha: f64,
    pub density_t_per_ha: f64,
    pub per_family_t: BTreeMap<FamilyClass, f64>,
}

const BASE_COLUMNS: [&str; 5] = ["tree_id", "lat", "lon", "species", "dbh_cm"];

/// Parses field-measurement CSV bytes into records, in file order.
///
/// The header must list the required columns in canonical order, optionally
/// followed by `family` and/or `height_m`. Cells are whitespace-trimmed.
/// Duplicate tree ids, malformed numbers and out-of-range coordinates are
/// row-level errors carrying the 1-based line number (header is line 1).
pub fn parse_field_csv(text: &str) -> Result<Vec<TreeRecord>, FieldDataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());

    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    for (i, want) in BASE_COLUMNS.iter().enumerate() {
        match headers.get(i) {
            Some(got) if got == want => {}
            Some(got) => return Err(FieldDataError::UnexpectedColumn(got.clone())),
            None => return Err(FieldDataError::MissingColumn(want)),
        }
    }
    let (mut family_idx, mut height_idx) = (None, None);
    for (i, extra) in headers.iter().enumerate().skip(BASE_COLUMNS.len()) {
        match extra.as_str() {
            "family" if family_idx.is_none() && height_idx.is_none() => family_idx = Some(i),
            "height_m" if height_idx.is_none() => height_idx = Some(i),
            _ => return Err(FieldDataError::UnexpectedColumn(extra.clone())),
        }
    }

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut records = Vec::new();
    for (row_idx, row) in reader.records().enumerate() {
        let line = row_idx + 2;
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("").trim();
        let num = |i: usize, name: &str| -> Result<f64, FieldDataError> {
            let cell = field(i);
            cell.parse::<f64>().map_err(|_| FieldDataError::Row {
                line,
                reason: format!("column {name:?} has unparseable numeric value {cell:?}"),
            })
        };

        let tree_id = field(0).to_string();
        if tree_id.is_empty() {
            return Err(FieldDataError::Row {
                line,
                reason: "empty tree_id".into(),
            });
        }
        if !seen.insert(tree_id.clone()) {
            return Err(FieldDataError::DuplicateTreeId(tree_id));
        }

        let lat = num(1, "lat")?;
        let lon = num(2, "lon")?;
        if !(-90.0..=90.0).contains(&lat) {
            return Err(FieldDataError::Row {
                line,
                reason: format!("lat {lat} outside [-90, 90]"),
            });
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(FieldDataError::Row {
                line,
                reason: format!("lon {lon} outside [-180, 180]"),
            });
        }

        let species = field(3).to_string();
        if species.is_empty() {
            return Err(FieldDataError::Row {
                line,
                reason: "empty species".into(),
            });
        }

        let dbh_cm = num(4, "dbh_cm")?;
        if !(dbh_cm.is_finite() && dbh_cm > 0.0) {
            return Err(FieldDataError::Row {
                line,
                reason: format!("dbh_cm {dbh_cm} must be > 0"),
            });
        }

        let family = match family_idx {
            Some(i) if !field(i).is_empty() => {
                Some(field(i).parse::<FamilyClass>().map_err(|e| {
                    FieldDataError::Row {
                        line,
                        reason: e.to_string(),
                    }
                })?)
            }
            _ => None,
        };
        let height_m = match height_idx {
            Some(i) if !field(i).is_empty() => {
                let h = num(i, "height_m")?;
                if !(h.is_finite() && h > 0.0) {
                    return Err(FieldDataError::Row {
                        line,
                        reason: format!("height_m {h} must be > 0"),
                    });
                }
                Some(h)
            }
            _ => None,
        };

        records.push(TreeRecord {
            tree_id,
            lat,
            lon,
            species,
            family,
            dbh_cm,
            height_m,
        });
    }
    Ok(records)
}

/// Writes records back to the canonical CSV schema. The optional columns are
/// emitted only when some record uses them, so `parse(serialize(r)) == r`.
pub fn serialize_field_csv(records: &[TreeRecord]) -> String {
    let with_family = records.iter().any(|r| r.family.is_some());
    let with_height = records.iter().any(|r| r.height_m.is_some());
    let mut out = String::from("tree_id,lat,lon,species,dbh_cm");
    if with_family {
        out.push_str(",family");
    }
    if with_height {
        out.push_str(",height_m");
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}",
            r.tree_id, r.lat, r.lon, r.species, r.dbh_cm
        ));
        if with_family {
            out.push(',');
            if let Some(f) = r.family {
                out.push_str(f.name());
            }
        }
        if with_height {
            out.push(',');
            if let Some(h) = r.height_m {
                out.push_str(&h.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Resolves a record's family class, preferring the explicit column.
pub fn record_family(
    record: &TreeRecord,
    mapping: &FamilyMapping,
) -> Result<FamilyClass, FieldDataError> {
    match record.family {
        Some(f) => Ok(f),
        None => mapping
            .classify(&record.species)
            .map_err(|source| FieldDataError::Classification {
                record_id: record.tree_id.clone(),
                source,
            }),
    }
}

/// Sums per-record AGB (kg) into site totals (tonnes). Input order is
/// irrelevant: records are sorted by tree_id before accumulation.
pub(crate) fn aggregate_agb_kg(
    site_id: &str,
    per_record: &[(String, FamilyClass, f64)],
) -> SiteTotals {
    let mut order: Vec<usize> = (0..per_record.len()).collect();
    order.sort_by(|&a, &b| per_record[a].0.cmp(&per_record[b].0));

    let mut total = KahanSum::new();
    let mut per_family: BTreeMap<FamilyClass, KahanSum> = BTreeMap::new();
    for &i in &order {
        let (_, family, agb_kg) = &per_record[i];
        let t = agb_kg / KG_PER_TONNE;
        total.add(t);
        per_family.entry(*family).or_default().add(t);
    }
    SiteTotals {
        site_id: site_id.to_string(),
        total_agb_t: total.value(),
        per_family_t: per_family.into_iter().map(|(k, v)| (k, v.value())).collect(),
    }
}

/// Computes a site's total AGB through the allometric equations. Any
/// unclassifiable record aborts the whole site (no partial totals).
pub fn site_total_agb(
    site: &SiteDefinition,
    mapping: &FamilyMapping,
) -> Result<SiteTotals, FieldDataError> {
    if site.records.is_empty() {
        return Err(FieldDataError::EmptySite(site.site_id.clone()));
    }
    let mut per_record = Vec::with_capacity(site.records.len());
    for r in &site.records {
        let family = record_family(r, mapping)?;
        let agb_kg = allometry::tree_agb(family, r.dbh_cm).map_err(|source| {
            FieldDataError::Classification {
                record_id: r.tree_id.clone(),
                source,
            }
        })?;
        per_record.push((r.tree_id.clone(), family, agb_kg));
    }
    Ok(aggregate_agb_kg(&site.site_id, &per_record))
}

/// Ground-truth density in t/ha: total biomass divided by site area.
pub fn ground_truth_density(total_agb_t: f64, area_ha: f64) -> Result<f64, FieldDataError> {
    if !(area_ha.is_finite() && area_ha > 0.0) {
        return Err(FieldDataError::BadArea(area_ha));
    }
    Ok(total_agb_t / area_ha)
}

impl SiteTotals {
    /// Attaches an area, producing the full ground truth.
    pub fn with_area(self, area_ha: f64) -> Result<SiteGroundTruth, FieldDataError> {
        let density = ground_truth_density(self.total_agb_t, area_ha)?;
        Ok(SiteGroundTruth {
            site_id: self.site_id,
            total_agb_t: self.total_agb_t,
            area_ha,
            density_t_per_ha: density,
            per_family_t: self.per_family_t,
        })
    }
}

/// One feature of the sites file: the geometry parse outcome is per-site so
/// a bad polygon fails its own site instead of the whole batch.
#[derive(Debug, Clone)]
pub struct ParsedSiteFeature {
    pub site_id: String,
    pub geometry: Result<(GeoPolygon, Option<f64>), String>,
}

/// Parses a sites GeoJSON FeatureCollection. Each feature must carry a
/// string `site_id` property and a Polygon/MultiPolygon geometry; an
/// optional numeric `declared_area_ha` property is kept for cross-checking.
/// File-level problems (bad JSON, missing/duplicate ids) are errors;
/// geometry problems are recorded per site. Records are attached separately
/// (see [`SiteDefinition`]).
pub fn parse_sites_geojson(
    text: &str,
    allow_multipolygon: bool,
) -> Result<Vec<ParsedSiteFeature>, FieldDataError> {
    let bad = |msg: String| FieldDataError::Row {
        line: 0,
        reason: msg,
    };
    let root: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| bad(format!("sites file is not valid JSON: {e}")))?;
    if root.get("type").and_then(|t| t.as_str()) != Some("FeatureCollection") {
        return Err(bad("sites file must be a GeoJSON FeatureCollection".into()));
    }
    let features = root
        .get("features")
        .and_then(|f| f.as_array())
        .ok_or_else(|| bad("FeatureCollection has no features array".into()))?;

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::with_capacity(features.len());
    for (i, feature) in features.iter().enumerate() {
        let site_id = feature
            .get("properties")
            .and_then(|p| p.get("site_id"))
            .and_then(|s| s.as_str())
            .ok_or_else(|| bad(format!("feature {i} has no string property \"site_id\"")))?
            .to_string();
        if !seen.insert(site_id.clone()) {
            return Err(bad(format!("duplicate site_id {site_id:?} in sites file")));
        }
        let geometry = parse_site_geometry(feature, &site_id, allow_multipolygon);
        out.push(ParsedSiteFeature { site_id, geometry });
    }
    Ok(out)
}

fn parse_site_geometry(
    feature: &serde_json::Value,
    site_id: &str,
    allow_multipolygon: bool,
) -> Result<(GeoPolygon, Option<f64>), String> {
    let declared_area_ha = feature
        .get("properties")
        .and_then(|p| p.get("declared_area_ha"))
        .and_then(|a| a.as_f64());
    if let Some(a) = declared_area_ha {
        if !(a.is_finite() && a > 0.0) {
            return Err(format!("declared_area_ha {a} must be > 0"));
        }
    }
    let geometry = feature
        .get("geometry")
        .ok_or_else(|| format!("site {site_id:?} has no geometry"))?;
    let polygon = crate::zonal::polygon_from_geojson(geometry, allow_multipolygon)
        .map_err(|e| e.to_string())?;
    Ok((polygon, declared_area_ha))
}
