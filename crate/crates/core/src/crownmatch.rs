//! Assigns field-measured trees to externally detected crown bounding boxes.
//!
//! The pairing is a maximum-cardinality, minimum-total-distance one-to-one
//! matching over all record/crown pairs closer than a distance cap,
//! computed exactly with a potentials-based assignment solver (forbidden
//! pairs carry a prohibitive cost, so feasible cardinality dominates the
//! objective). Unlike greedy nearest-neighbor, the result is independent of
//! input order and optimal on crossing layouts.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::allometry::{AllometryError, FamilyMapping};
use crate::fielddata::{record_family, FieldDataError, TreeRecord};
use crate::zonal::{LocalProjection, LonLat};
use crate::KahanSum;

/// Default matching distance cap in meters: GPS error plus crown-center
/// offset at agroforestry density.
pub const DEFAULT_CAP_M: f64 = 3.0;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("crown CSV is missing required column {0:?}")]
    MissingColumn(&'static str),
    #[error("crown CSV has unexpected column {0:?} (schema: crown_id,min_lon,min_lat,max_lon,max_lat[,confidence])")]
    UnexpectedColumn(String),
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
    #[error("duplicate crown_id {0:?}")]
    DuplicateCrownId(String),
    #[error("invalid crown {crown_id:?}: {reason}")]
    BadCrown { crown_id: String, reason: String },
    #[error("invalid cap_m {0}: must be finite and > 0")]
    BadCap(f64),
    #[error("GeoJSON error: {0}")]
    GeoJson(String),
    #[error("crown {crown_id:?}: {source}")]
    CrownAgb {
        crown_id: String,
        source: AllometryError,
    },
    #[error(transparent)]
    Field(#[from] FieldDataError),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// One detected tree crown, reduced to its bounding box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrownBox {
    pub crown_id: String,
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
    pub confidence: Option<f64>,
}

impl CrownBox {
    pub fn new(
        crown_id: impl Into<String>,
        min_lon: f64,
        min_lat: f64,
        max_lon: f64,
        max_lat: f64,
        confidence: Option<f64>,
    ) -> Result<Self, MatchError> {
        let crown_id = crown_id.into();
        let fail = |reason: String| MatchError::BadCrown {
            crown_id: crown_id.clone(),
            reason,
        };
        for v in [min_lon, min_lat, max_lon, max_lat] {
            if !v.is_finite() {
                return Err(fail(format!("non-finite corner coordinate {v}")));
            }
        }
        if min_lon >= max_lon || min_lat >= max_lat {
            return Err(fail(format!(
                "box corners must satisfy min < max, got ({min_lon},{min_lat})-({max_lon},{max_lat})"
            )));
        }
        if let Some(c) = confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(fail(format!("confidence {c} outside [0, 1]")));
            }
        }
        Ok(CrownBox {
            crown_id,
            min_lon,
            min_lat,
            max_lon,
            max_lat,
            confidence,
        })
    }

    /// Matching reduces the crown to its box center.
    pub fn centroid(&self) -> LonLat {
        LonLat::new(
            0.5 * (self.min_lon + self.max_lon),
            0.5 * (self.min_lat + self.max_lat),
        )
    }
}

/// Result of matching one site's records against detected crowns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    /// Matched pairs sorted by (tree_id, crown_id); every distance <= cap.
    pub pairs: Vec<MatchedPair>,
    pub unmatched_records: Vec<String>,
    pub unmatched_crowns: Vec<String>,
    pub total_distance_m: f64,
    pub cap_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub tree_id: String,
    pub crown_id: String,
    pub distance_m: f64,
}

/// Matches records to crown centroids within `cap_m` meters, maximizing the
/// number of matches and, among maximum matchings, minimizing the total
/// distance. Distances are measured in the local projection about the joint
/// centroid of all points. Inputs are sorted by id first, so ties resolve by
/// index order, i.e. lexicographically.
pub fn match_records_to_crowns(
    records: &[TreeRecord],
    crowns: &[CrownBox],
    cap_m: f64,
) -> Result<MatchResult, MatchError> {
    if !(cap_m.is_finite() && cap_m > 0.0) {
        return Err(MatchError::BadCap(cap_m));
    }

    let mut record_order: Vec<usize> = (0..records.len()).collect();
    record_order.sort_by(|&a, &b| records[a].tree_id.cmp(&records[b].tree_id));
    let mut crown_order: Vec<usize> = (0..crowns.len()).collect();
    crown_order.sort_by(|&a, &b| crowns[a].crown_id.cmp(&crowns[b].crown_id));

    if records.is_empty() || crowns.is_empty() {
        return Ok(MatchResult {
            pairs: Vec::new(),
            unmatched_records: record_order
                .iter()
                .map(|&i| records[i].tree_id.clone())
                .collect(),
            unmatched_crowns: crown_order
                .iter()
                .map(|&j| crowns[j].crown_id.clone())
                .collect(),
            total_distance_m: 0.0,
            cap_m,
        });
    }

    let proj = LocalProjection::about(
        records
            .iter()
            .map(|r| r.position())
            .chain(crowns.iter().map(|c| c.centroid())),
    );

    let n = records.len();
    let m = crowns.len();
    // Any matching that uses one more real pair beats any total of real
    // distances, so cardinality dominates through the cost alone.
    let forbidden = (n.max(m) as f64 + 1.0) * cap_m + 1.0;
    let mut cost = vec![vec![forbidden; m]; n];
    for (ri, &r_idx) in record_order.iter().enumerate() {
        let rp = records[r_idx].position();
        for (ci, &c_idx) in crown_order.iter().enumerate() {
            let d = proj.distance_m(rp, crowns[c_idx].centroid());
            if d <= cap_m {
                cost[ri][ci] = d;
            }
        }
    }

    let assignment = solve_min_cost_assignment(&cost);

    let mut pairs = Vec::new();
    let mut matched_records = vec![false; n];
    let mut matched_crowns = vec![false; m];
    let mut total = KahanSum::new();
    for (ri, ci) in assignment.into_iter().enumerate() {
        let Some(ci) = ci else { continue };
        if cost[ri][ci] >= forbidden {
            continue; // padding-induced pairing across the cap
        }
        matched_records[ri] = true;
        matched_crowns[ci] = true;
        pairs.push(MatchedPair {
            tree_id: records[record_order[ri]].tree_id.clone(),
            crown_id: crowns[crown_order[ci]].crown_id.clone(),
            distance_m: cost[ri][ci],
        });
    }
    pairs.sort_by(|a, b| (&a.tree_id, &a.crown_id).cmp(&(&b.tree_id, &b.crown_id)));
    for p in &pairs {
        total.add(p.distance_m);
    }

    Ok(MatchResult {
        unmatched_records: record_order
            .iter()
            .enumerate()
            .filter(|(ri, _)| !matched_records[*ri])
            .map(|(_, &i)| records[i].tree_id.clone())
            .collect(),
        unmatched_crowns: crown_order
            .iter()
            .enumerate()
            .filter(|(ci, _)| !matched_crowns[*ci])
            .map(|(_, &j)| crowns[j].crown_id.clone())
            .collect(),
        total_distance_m: total.value(),
        pairs,
        cap_m,
    })
}

/// Exact rectangular min-cost assignment via successive shortest augmenting
/// paths with potentials (O(n^2 m)). Returns, for each row, the assigned
/// column. All rows are assigned when `rows <= cols` and vice versa.
fn solve_min_cost_assignment(cost: &[Vec<f64>]) -> Vec<Option<usize>> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    if m == 0 {
        return vec![None; n];
    }
    let transposed = n > m;
    let (rows, cols) = if transposed { (m, n) } else { (n, m) };
    let at = |i: usize, j: usize| -> f64 {
        if transposed {
            cost[j][i]
        } else {
            cost[i][j]
        }
    };

    // 1-based arrays, column 0 is the virtual source.
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut row_of = vec![0usize; cols + 1]; // row matched to each column
    let mut way = vec![0usize; cols + 1];

    for i in 1..=rows {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut result = vec![None; n];
    for j in 1..=cols {
        let i = row_of[j];
        if i == 0 {
            continue;
        }
        if transposed {
            result[j - 1] = Some(i - 1);
        } else {
            result[i - 1] = Some(j - 1);
        }
    }
    result
}

/// AGB per matched crown, sorted by crown_id. Unmatched crowns are absent.
pub fn per_crown_agb(
    matches: &MatchResult,
    records: &[TreeRecord],
    mapping: &FamilyMapping,
) -> Result<Vec<(String, f64)>, MatchError> {
    let by_id: BTreeMap<&str, &TreeRecord> =
        records.iter().map(|r| (r.tree_id.as_str(), r)).collect();
    let mut out = Vec::with_capacity(matches.pairs.len());
    for pair in &matches.pairs {
        let record = by_id.get(pair.tree_id.as_str()).ok_or_else(|| {
            MatchError::BadCrown {
                crown_id: pair.crown_id.clone(),
                reason: format!("matched record {:?} not found", pair.tree_id),
            }
        })?;
        let family = record_family(record, mapping)?;
        let agb = crate::allometry::tree_agb(family, record.dbh_cm).map_err(|source| {
            MatchError::CrownAgb {
                crown_id: pair.crown_id.clone(),
                source,
            }
        })?;
        out.push((pair.crown_id.clone(), agb));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

const CROWN_COLUMNS: [&str; 5] = ["crown_id", "min_lon", "min_lat", "max_lon", "max_lat"];

/// Parses crowns from CSV: `crown_id,min_lon,min_lat,max_lon,max_lat[,confidence]`.
pub fn parse_crowns_csv(text: &str) -> Result<Vec<CrownBox>, MatchError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();
    for (i, want) in CROWN_COLUMNS.iter().enumerate() {
        match headers.get(i) {
            Some(got) if got == want => {}
            Some(got) => return Err(MatchError::UnexpectedColumn(got.clone())),
            None => return Err(MatchError::MissingColumn(want)),
        }
    }
    let confidence_idx = match headers.get(CROWN_COLUMNS.len()) {
        None => None,
        Some(h) if h == "confidence" => Some(CROWN_COLUMNS.len()),
        Some(h) => return Err(MatchError::UnexpectedColumn(h.clone())),
    };
    if headers.len() > CROWN_COLUMNS.len() + 1 {
        return Err(MatchError::UnexpectedColumn(
            headers[CROWN_COLUMNS.len() + 1].clone(),
        ));
    }

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (row_idx, row) in reader.records().enumerate() {
        let line = row_idx + 2;
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("").trim();
        let num = |i: usize, name: &str| -> Result<f64, MatchError> {
            field(i).parse::<f64>().map_err(|_| MatchError::Row {
                line,
                reason: format!(
                    "column {name:?} has unparseable numeric value {:?}",
                    field(i)
                ),
            })
        };
        let crown_id = field(0).to_string();
        if crown_id.is_empty() {
            return Err(MatchError::Row {
                line,
                reason: "empty crown_id".into(),
            });
        }
        if !seen.insert(crown_id.clone()) {
            return Err(MatchError::DuplicateCrownId(crown_id));
        }
        let confidence = match confidence_idx {
            Some(i) if !field(i).is_empty() => Some(num(i, "confidence")?),
            _ => None,
        };
        out.push(CrownBox::new(
            crown_id,
            num(1, "min_lon")?,
            num(2, "min_lat")?,
            num(3, "max_lon")?,
            num(4, "max_lat")?,
            confidence,
        )?);
    }
    Ok(out)
}

/// Parses crowns from a GeoJSON FeatureCollection of rectangles carrying a
/// `crown_id` property; each geometry is reduced to its bounding box.
pub fn parse_crowns_geojson(text: &str) -> Result<Vec<CrownBox>, MatchError> {
    let gj = |msg: String| MatchError::GeoJson(msg);
    let root: serde_json::Value =
        serde_json::from_str(text).map_err(|e| gj(format!("invalid JSON: {e}")))?;
    if root.get("type").and_then(|t| t.as_str()) != Some("FeatureCollection") {
        return Err(gj("crowns file must be a GeoJSON FeatureCollection".into()));
    }
    let features = root
        .get("features")
        .and_then(|f| f.as_array())
        .ok_or_else(|| gj("FeatureCollection has no features array".into()))?;

    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(features.len());
    for (i, feature) in features.iter().enumerate() {
        let crown_id = feature
            .get("properties")
            .and_then(|p| p.get("crown_id"))
            .and_then(|s| s.as_str())
            .ok_or_else(|| gj(format!("feature {i} has no string property \"crown_id\"")))?
            .to_string();
        if !seen.insert(crown_id.clone()) {
            return Err(MatchError::DuplicateCrownId(crown_id));
        }
        let confidence = feature
            .get("properties")
            .and_then(|p| p.get("confidence"))
            .and_then(|c| c.as_f64());
        let geometry = feature
            .get("geometry")
            .ok_or_else(|| gj(format!("crown {crown_id:?} has no geometry")))?;
        let poly = crate::zonal::polygon_from_geojson(geometry, false)
            .map_err(|e| gj(format!("crown {crown_id:?}: {e}")))?;
        let b = poly.bbox();
        out.push(CrownBox::new(
            crown_id, b.min_lon, b.min_lat, b.max_lon, b.max_lat, confidence,
        )?);
    }
    Ok(out)
}
