//! Filesystem ingestion shared by the CLI and the C API: raster loading
//! with format sniffing, family-map and crown files, and assembly of audit
//! site entries from a sites GeoJSON plus per-site field CSVs.
//!
//! Field CSVs attach to sites by file stem: `<site_id>.csv`.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::allometry::FamilyMapping;
use crate::audit::{InputDigest, SiteEntry};
use crate::crownmatch::{parse_crowns_csv, parse_crowns_geojson, CrownBox, MatchError};
use crate::fielddata::{parse_field_csv, parse_sites_geojson, SiteDefinition, TreeRecord};
use crate::raster::{parse_esri_ascii, parse_geotiff_subset, GeoGrid, RasterError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8 text")]
    Utf8 { path: String },
    #[error("cannot parse raster {path}: {source}")]
    Raster {
        path: String,
        #[source]
        source: RasterError,
    },
    #[error("cannot parse sites file {path}: {source}")]
    Sites {
        path: String,
        #[source]
        source: crate::fielddata::FieldDataError,
    },
    #[error("bad family mapping {path}: {source}")]
    FamilyMap {
        path: String,
        #[source]
        source: crate::allometry::AllometryError,
    },
    #[error("cannot parse crowns file {path}: {source}")]
    Crowns {
        path: String,
        #[source]
        source: MatchError,
    },
    #[error("field file {path} has no usable file stem")]
    BadFieldStem { path: String },
    #[error("two field files share the stem {stem:?}")]
    DuplicateFieldStem { stem: String },
    #[error("field file stem {stem:?} matches no site_id in the sites file")]
    UnmatchedFieldStem { stem: String },
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, InputError> {
    std::fs::read(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, InputError> {
    String::from_utf8(read_bytes(path)?).map_err(|_| InputError::Utf8 {
        path: path.display().to_string(),
    })
}

/// Loads a raster file, deciding the format by extension and, failing that,
/// by sniffing the TIFF byte-order mark.
pub fn load_raster_file(path: &Path) -> Result<GeoGrid, InputError> {
    let bytes = read_bytes(path)?;
    let raster_err = |source| InputError::Raster {
        path: path.display().to_string(),
        source,
    };
    let extension = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match extension.as_deref() {
        Some("tif") | Some("tiff") => parse_geotiff_subset(&bytes).map_err(raster_err),
        Some("asc") | Some("txt") => {
            let text = std::str::from_utf8(&bytes).map_err(|_| InputError::Utf8 {
                path: path.display().to_string(),
            })?;
            parse_esri_ascii(text).map_err(raster_err)
        }
        _ if bytes.starts_with(b"II") || bytes.starts_with(b"MM") => {
            parse_geotiff_subset(&bytes).map_err(raster_err)
        }
        _ => {
            let text = std::str::from_utf8(&bytes).map_err(|_| InputError::Utf8 {
                path: path.display().to_string(),
            })?;
            parse_esri_ascii(text).map_err(raster_err)
        }
    }
}

/// Built-in family mapping, optionally extended by an override file.
pub fn load_family_mapping_file(path: Option<&Path>) -> Result<FamilyMapping, InputError> {
    match path {
        Some(p) => FamilyMapping::with_overrides(&read_text(p)?).map_err(|source| {
            InputError::FamilyMap {
                path: p.display().to_string(),
                source,
            }
        }),
        None => Ok(FamilyMapping::builtin()),
    }
}

/// Loads crown boxes from CSV or GeoJSON (by extension).
pub fn load_crowns_file(path: &Path) -> Result<Vec<CrownBox>, InputError> {
    let text = read_text(path)?;
    let crowns_err = |source| InputError::Crowns {
        path: path.display().to_string(),
        source,
    };
    match path.extension().and_then(|e| e.to_str()) {
        Some("geojson") | Some("json") => parse_crowns_geojson(&text).map_err(crowns_err),
        _ => parse_crowns_csv(&text).map_err(crowns_err),
    }
}

/// Everything an audit run needs, loaded from disk and content-hashed.
#[derive(Debug)]
pub struct LoadedAudit {
    pub entries: Vec<SiteEntry>,
    pub grid: GeoGrid,
    pub mapping: FamilyMapping,
    /// Digests of every input file, sorted by path.
    pub digests: Vec<InputDigest>,
}

/// Reads the sites file, raster, family map and field CSVs, attaching field
/// files to sites by stem. Per-site problems (bad geometry, missing or
/// malformed field CSV) become `SiteEntry::Invalid` so one bad site cannot
/// poison the batch; file-level problems are hard errors.
pub fn load_audit_inputs(
    sites_path: &Path,
    field_paths: &[PathBuf],
    raster_path: &Path,
    family_map_path: Option<&Path>,
    allow_multipolygon: bool,
) -> Result<LoadedAudit, InputError> {
    let mut digests = Vec::new();

    let sites_text = read_text(sites_path)?;
    digests.push(InputDigest::of_bytes(
        sites_path.display().to_string(),
        sites_text.as_bytes(),
    ));
    let raster_bytes = read_bytes(raster_path)?;
    digests.push(InputDigest::of_bytes(
        raster_path.display().to_string(),
        &raster_bytes,
    ));
    if let Some(p) = family_map_path {
        digests.push(InputDigest::of_bytes(
            p.display().to_string(),
            read_bytes(p)?.as_slice(),
        ));
    }

    let mapping = load_family_mapping_file(family_map_path)?;
    let grid = load_raster_file(raster_path)?;
    let features =
        parse_sites_geojson(&sites_text, allow_multipolygon).map_err(|source| {
            InputError::Sites {
                path: sites_path.display().to_string(),
                source,
            }
        })?;

    let mut field_by_site: std::collections::BTreeMap<String, Result<Vec<TreeRecord>, String>> =
        std::collections::BTreeMap::new();
    for path in field_paths {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| InputError::BadFieldStem {
                path: path.display().to_string(),
            })?
            .to_string();
        if field_by_site.contains_key(&stem) {
            return Err(InputError::DuplicateFieldStem { stem });
        }
        let text = read_text(path)?;
        digests.push(InputDigest::of_bytes(
            path.display().to_string(),
            text.as_bytes(),
        ));
        field_by_site.insert(stem, parse_field_csv(&text).map_err(|e| e.to_string()));
    }
    digests.sort_by(|a, b| a.path.cmp(&b.path));

    for stem in field_by_site.keys() {
        if !features.iter().any(|f| &f.site_id == stem) {
            return Err(InputError::UnmatchedFieldStem { stem: stem.clone() });
        }
    }

    let entries: Vec<SiteEntry> = features
        .into_iter()
        .map(|feature| {
            let site_id = feature.site_id.clone();
            let fail = |error: String| SiteEntry::Invalid {
                site_id: site_id.clone(),
                error: format!("site {site_id:?}: {error}"),
            };
            let (boundary, declared_area_ha) = match feature.geometry {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            let records = match field_by_site.get(&feature.site_id) {
                Some(Ok(records)) => records.clone(),
                Some(Err(e)) => return fail(format!("field CSV: {e}")),
                None => return fail("no field CSV provided (expected <site_id>.csv)".into()),
            };
            SiteEntry::Ready(SiteDefinition {
                site_id: feature.site_id,
                boundary,
                records,
                declared_area_ha,
            })
        })
        .collect();

    Ok(LoadedAudit {
        entries,
        grid,
        mapping,
        digests,
    })
}
