//! Per-site and batch audit orchestration: ground truth from field
//! measurements, filtered raster estimate, overestimation factor, and
//! deterministic report serialization.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::allometry::{FamilyClass, FamilyMapping};
use crate::fielddata::{self, FieldDataError, SiteDefinition};
use crate::raster::{GeoGrid, KERNEL_NAME};
use crate::zonal::{self, GeometryError, ZonalError, ZonalResult};

pub const DEFAULT_TARGET_PIXEL_M: f64 = 1.0;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("ground-truth density must be > 0 to form a ratio, got {0}")]
    NonPositiveGroundTruth(f64),
    #[error("filtered estimate must be >= 0, got {0}")]
    NegativeFiltered(f64),
    #[error("site {site_id:?}: {source}")]
    Site {
        site_id: String,
        #[source]
        source: SiteAuditError,
    },
    #[error("no sites to audit")]
    NoSites,
    #[error("all {0} sites failed")]
    AllSitesFailed(usize),
}

#[derive(Debug, Error)]
pub enum SiteAuditError {
    #[error(transparent)]
    Field(#[from] FieldDataError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Zonal(#[from] ZonalError),
    #[error("site polygon area is {0} ha; cannot form a density")]
    DegenerateArea(f64),
    #[error(transparent)]
    Ratio(#[from] Box<AuditError>),
}

/// Options controlling one audit run.
#[derive(Debug, Clone)]
pub struct AuditOptions {
    /// Interpolation target resolution in meters.
    pub target_pixel_m: f64,
    /// Crown-matching cap recorded in run metadata.
    pub cap_m: f64,
    /// Maximum number of sites audited concurrently.
    pub concurrency: usize,
    /// Accept MultiPolygon site geometries (first polygon wins).
    pub allow_multipolygon: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            target_pixel_m: DEFAULT_TARGET_PIXEL_M,
            cap_m: crate::crownmatch::DEFAULT_CAP_M,
            concurrency: 1,
            allow_multipolygon: false,
        }
    }
}

/// Audit outcome for one site.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteResult {
    pub site_id: String,
    /// Field-measurement density, t/ha (total AGB over polygon area).
    pub ground_truth_t_ha: f64,
    /// Polygon-filtered interpolated raster mean, t/ha.
    pub filtered_t_ha: f64,
    /// filtered / ground truth, full precision.
    pub overestimation_factor: f64,
    /// The factor rounded half-away-from-zero to one decimal, as reported.
    pub factor_rounded: f64,
    pub total_agb_t: f64,
    pub per_family_t: BTreeMap<FamilyClass, f64>,
    pub zonal: ZonalResult,
    pub warnings: Vec<String>,
}

/// One entry of the batch report: a result or a recorded failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SiteOutcome {
    Ok(SiteResult),
    Failed { site_id: String, error: String },
}

impl SiteOutcome {
    pub fn site_id(&self) -> &str {
        match self {
            SiteOutcome::Ok(r) => &r.site_id,
            SiteOutcome::Failed { site_id, .. } => site_id,
        }
    }

    pub fn as_ok(&self) -> Option<&SiteResult> {
        match self {
            SiteOutcome::Ok(r) => Some(r),
            SiteOutcome::Failed { .. } => None,
        }
    }
}

/// Digest of one input file, recorded so reports are self-describing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_bytes(path: impl Into<String>, bytes: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let sha256 = digest.iter().fold(String::new(), |mut acc, b| {
            acc.push_str(&format!("{b:02x}"));
            acc
        });
        InputDigest {
            path: path.into(),
            sha256,
        }
    }
}

/// Everything needed to reproduce a run bit-exactly from the same inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub kernel: String,
    pub target_pixel_m: f64,
    pub cap_m: f64,
    pub input_digests: Vec<InputDigest>,
    /// Off by default so reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunMetadata {
    pub fn new(options: &AuditOptions) -> Self {
        RunMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            kernel: KERNEL_NAME.to_string(),
            target_pixel_m: options.target_pixel_m,
            cap_m: options.cap_m,
            input_digests: Vec::new(),
            timestamp: None,
        }
    }
}

/// The full batch report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub metadata: RunMetadata,
    pub sites: Vec<SiteOutcome>,
}

/// filtered / ground_truth.
pub fn overestimation_factor(filtered: f64, ground_truth: f64) -> Result<f64, AuditError> {
    if !(ground_truth.is_finite() && ground_truth > 0.0) {
        return Err(AuditError::NonPositiveGroundTruth(ground_truth));
    }
    if !(filtered.is_finite() && filtered >= 0.0) {
        return Err(AuditError::NegativeFiltered(filtered));
    }
    Ok(filtered / ground_truth)
}

/// Round half-away-from-zero to one decimal, the presentation used in the
/// report's rounded-factor column.
pub fn round_factor(factor: f64) -> f64 {
    (factor * 10.0).round() / 10.0
}

/// Audits one site against the raster: composes ground truth, the zonal
/// filtered mean and the overestimation factor, attaching all warnings.
pub fn run_site_audit(
    site: &SiteDefinition,
    grid: &GeoGrid,
    mapping: &FamilyMapping,
    options: &AuditOptions,
) -> Result<SiteResult, SiteAuditError> {
    let totals = fielddata::site_total_agb(site, mapping)?;

    let area_ha = zonal::polygon_area_ha(&site.boundary)?;
    if area_ha <= 0.0 {
        return Err(SiteAuditError::DegenerateArea(area_ha));
    }
    let ground_truth = totals.clone().with_area(area_ha)?;

    let zr = zonal::zonal_filtered_mean(grid, &site.boundary, options.target_pixel_m)?;
    let factor = overestimation_factor(zr.mean_t_per_ha, ground_truth.density_t_per_ha)
        .map_err(Box::new)?;

    let mut warnings = site.boundary_warnings();
    if let Some(declared) = site.declared_area_ha {
        warnings.push(format!(
            "declared area {declared} ha vs polygon-derived {area_ha:.6} ha (polygon value used)"
        ));
    }
    if zr.nodata_count > 0 {
        warnings.push(format!(
            "{} interpolated cells inside the polygon are nodata and were excluded",
            zr.nodata_count
        ));
    }
    let small_timber: Vec<&str> = site
        .records
        .iter()
        .filter(|r| {
            fielddata::record_family(r, mapping)
                .map(|f| crate::allometry::timber_small_dbh(f, r.dbh_cm))
                .unwrap_or(false)
        })
        .map(|r| r.tree_id.as_str())
        .collect();
    if !small_timber.is_empty() {
        warnings.push(format!(
            "timber equation evaluated below its monotonic range (dbh < {} cm) for: {}",
            crate::allometry::TIMBER_SMALL_DBH_CM,
            small_timber.join(", ")
        ));
    }

    Ok(SiteResult {
        site_id: site.site_id.clone(),
        ground_truth_t_ha: ground_truth.density_t_per_ha,
        filtered_t_ha: zr.mean_t_per_ha,
        overestimation_factor: factor,
        factor_rounded: round_factor(factor),
        total_agb_t: ground_truth.total_agb_t,
        per_family_t: ground_truth.per_family_t,
        zonal: zr,
        warnings,
    })
}

/// A site queued for auditing: either ready to run, or already failed
/// upstream (bad geometry, missing field file) with the failure preserved so
/// the batch isolates it instead of aborting.
#[derive(Debug, Clone)]
pub enum SiteEntry {
    Ready(SiteDefinition),
    Invalid { site_id: String, error: String },
}

impl SiteEntry {
    pub fn site_id(&self) -> &str {
        match self {
            SiteEntry::Ready(s) => &s.site_id,
            SiteEntry::Invalid { site_id, .. } => site_id,
        }
    }
}

/// Audits every site, recording per-site failures without aborting the
/// batch. Sites are processed concurrently up to `options.concurrency`;
/// results are returned in input order regardless.
pub fn run_audit(
    sites: &[SiteDefinition],
    grid: &GeoGrid,
    mapping: &FamilyMapping,
    options: &AuditOptions,
) -> Result<AuditReport, AuditError> {
    let entries: Vec<SiteEntry> = sites.iter().cloned().map(SiteEntry::Ready).collect();
    run_audit_entries(&entries, grid, mapping, options)
}

/// [`run_audit`] over pre-screened entries; upstream failures flow into the
/// report as recorded per-site failures.
pub fn run_audit_entries(
    entries: &[SiteEntry],
    grid: &GeoGrid,
    mapping: &FamilyMapping,
    options: &AuditOptions,
) -> Result<AuditReport, AuditError> {
    if entries.is_empty() {
        return Err(AuditError::NoSites);
    }

    let outcomes: Mutex<Vec<Option<SiteOutcome>>> = Mutex::new(vec![None; entries.len()]);
    let cursor = AtomicUsize::new(0);
    let workers = options.concurrency.clamp(1, entries.len());

    let work = |_worker: usize| loop {
        let idx = cursor.fetch_add(1, Ordering::Relaxed);
        if idx >= entries.len() {
            break;
        }
        let outcome = match &entries[idx] {
            SiteEntry::Invalid { site_id, error } => SiteOutcome::Failed {
                site_id: site_id.clone(),
                error: error.clone(),
            },
            SiteEntry::Ready(site) => match run_site_audit(site, grid, mapping, options) {
                Ok(result) => SiteOutcome::Ok(result),
                Err(source) => SiteOutcome::Failed {
                    site_id: site.site_id.clone(),
                    error: AuditError::Site {
                        site_id: site.site_id.clone(),
                        source,
                    }
                    .to_string(),
                },
            },
        };
        outcomes.lock().expect("poisoned outcome store")[idx] = Some(outcome);
    };

    if workers == 1 {
        work(0);
    } else {
        std::thread::scope(|scope| {
            for w in 0..workers {
                scope.spawn(move || work(w));
            }
        });
    }

    let sites_out: Vec<SiteOutcome> = outcomes
        .into_inner()
        .expect("poisoned outcome store")
        .into_iter()
        .map(|o| o.expect("every index processed"))
        .collect();
    if sites_out.iter().all(|o| o.as_ok().is_none()) {
        return Err(AuditError::AllSitesFailed(sites_out.len()));
    }
    Ok(AuditReport {
        metadata: RunMetadata::new(options),
        sites: sites_out,
    })
}

impl AuditReport {
    pub fn ok_count(&self) -> usize {
        self.sites.iter().filter(|s| s.as_ok().is_some()).count()
    }

    pub fn failed_count(&self) -> usize {
        self.sites.len() - self.ok_count()
    }

    /// Canonical JSON form: fixed field order, two-space indentation, UTF-8,
    /// trailing newline. Byte-identical for identical inputs.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// CSV mirror of the per-site comparison columns. Failed sites are
    /// omitted (they are in the JSON report and the exit status).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "site_id,ground_truth_t_ha,filtered_t_ha,overestimation_factor,factor_rounded\n",
        );
        for site in self.sites.iter().filter_map(|s| s.as_ok()) {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                site.site_id,
                site.ground_truth_t_ha,
                site.filtered_t_ha,
                site.overestimation_factor,
                site.factor_rounded
            ));
        }
        out
    }
}
