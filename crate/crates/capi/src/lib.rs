//! C ABI for the carbon-audit library.
//!
//! Conventions: every fallible call returns a [`CaStatus`]; out-parameters
//! are written only on `CA_STATUS_OK` (plus the report on partial audit
//! success). On any other status a human-readable message is available from
//! [`ca_last_error_message`] until the next failing call on the same thread.
//! Heap objects cross the boundary as opaque handles with explicit `_free`
//! functions; strings returned by the library are released with
//! [`ca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::path::{Path, PathBuf};

use carbon_audit::allometry::{self, AllometryError, FamilyClass, FamilyMapping};
use carbon_audit::audit::{run_audit_entries, AuditError, AuditOptions};
use carbon_audit::inputs::{load_audit_inputs, load_raster_file, InputError};
use carbon_audit::raster::{bicubic_sample, GeoGrid, RasterError};

/// Status code of every fallible C-API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaStatus {
    /// Success.
    Ok = 0,
    /// The audit ran and produced a report, but some sites failed.
    PartialFailure = 1,
    /// A required pointer argument was null.
    NullPointer = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
    /// An argument was out of range or inconsistent.
    InvalidArgument = 4,
    /// A file could not be read.
    IoError = 5,
    /// A file could not be parsed.
    ParseError = 6,
    /// The raster is outside the supported format subset.
    UnsupportedFormat = 7,
    /// A numeric precondition was violated (non-positive DBH, area, ...).
    DomainError = 8,
    /// A species string could not be classified.
    ClassificationError = 9,
    /// Every site in the batch failed.
    AuditFailed = 10,
    /// Internal error (panic trapped at the boundary).
    InternalError = 11,
}

/// Species family selector for the allometric equations.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaFamily {
    Fruit = 0,
    Musacea = 1,
    Cacao = 2,
    Timber = 3,
}

impl From<CaFamily> for FamilyClass {
    fn from(f: CaFamily) -> Self {
        match f {
            CaFamily::Fruit => FamilyClass::Fruit,
            CaFamily::Musacea => FamilyClass::Musacea,
            CaFamily::Cacao => FamilyClass::Cacao,
            CaFamily::Timber => FamilyClass::Timber,
        }
    }
}

impl From<FamilyClass> for CaFamily {
    fn from(f: FamilyClass) -> Self {
        match f {
            FamilyClass::Fruit => CaFamily::Fruit,
            FamilyClass::Musacea => CaFamily::Musacea,
            FamilyClass::Cacao => CaFamily::Cacao,
            FamilyClass::Timber => CaFamily::Timber,
        }
    }
}

/// An opened raster grid (opaque).
pub struct CaGrid {
    inner: GeoGrid,
}

/// Shape and georeferencing of an opened grid.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CaGridInfo {
    pub ncols: usize,
    pub nrows: usize,
    pub origin_lon: f64,
    pub origin_lat: f64,
    pub pixel_width_deg: f64,
    pub pixel_height_deg: f64,
    pub has_nodata: bool,
    /// Meaningful only when `has_nodata` is true.
    pub nodata: f64,
}

/// Options for [`ca_audit_run`]; obtain defaults from
/// [`ca_audit_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CaAuditOptions {
    /// Interpolation target resolution in meters (default 1.0).
    pub target_pixel_m: f64,
    /// Crown-match distance cap recorded in metadata (default 3.0).
    pub cap_m: f64,
    /// Concurrent sites; 0 means one per available core.
    pub concurrency: usize,
    pub allow_multipolygon: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl AsRef<str>) {
    let sanitized: String = message
        .as_ref()
        .chars()
        .map(|c| if c == '\0' { ' ' } else { c })
        .collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: CaStatus, message: impl AsRef<str>) -> CaStatus {
    set_error(message);
    status
}

fn input_error_status(e: &InputError) -> CaStatus {
    match e {
        InputError::Io { .. } => CaStatus::IoError,
        InputError::Utf8 { .. } => CaStatus::InvalidUtf8,
        InputError::Raster {
            source: RasterError::Unsupported(_),
            ..
        } => CaStatus::UnsupportedFormat,
        InputError::Raster { .. } | InputError::Sites { .. } | InputError::Crowns { .. } => {
            CaStatus::ParseError
        }
        InputError::FamilyMap { .. } => CaStatus::ParseError,
        InputError::BadFieldStem { .. }
        | InputError::DuplicateFieldStem { .. }
        | InputError::UnmatchedFieldStem { .. } => CaStatus::InvalidArgument,
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated C string.
unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, CaStatus> {
    if ptr.is_null() {
        return Err(fail(CaStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(CaStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn ca_version_string() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Defaults for [`CaAuditOptions`].
#[no_mangle]
pub extern "C" fn ca_audit_options_default() -> CaAuditOptions {
    CaAuditOptions {
        target_pixel_m: 1.0,
        cap_m: carbon_audit::crownmatch::DEFAULT_CAP_M,
        concurrency: 0,
        allow_multipolygon: false,
    }
}

/// Per-tree aboveground biomass in kilograms for a family and DBH (cm).
///
/// # Safety
/// `out_agb_kg` must point to writable memory for one f64.
#[no_mangle]
pub unsafe extern "C" fn ca_tree_agb(
    family: CaFamily,
    dbh_cm: f64,
    out_agb_kg: *mut f64,
) -> CaStatus {
    if out_agb_kg.is_null() {
        return fail(CaStatus::NullPointer, "out_agb_kg is null");
    }
    match allometry::tree_agb(family.into(), dbh_cm) {
        Ok(v) => {
            *out_agb_kg = v;
            CaStatus::Ok
        }
        Err(e) => fail(CaStatus::DomainError, e.to_string()),
    }
}

/// Classifies a species string through the built-in family mapping.
///
/// # Safety
/// `species` must be a NUL-terminated C string; `out_family` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ca_classify_family(
    species: *const c_char,
    out_family: *mut CaFamily,
) -> CaStatus {
    if out_family.is_null() {
        return fail(CaStatus::NullPointer, "out_family is null");
    }
    let species = match utf8_arg(species, "species") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match FamilyMapping::builtin().classify(species) {
        Ok(f) => {
            *out_family = f.into();
            CaStatus::Ok
        }
        Err(e @ AllometryError::UnmappedSpecies(_))
        | Err(e @ AllometryError::AmbiguousSpecies { .. })
        | Err(e @ AllometryError::EmptySpecies) => {
            fail(CaStatus::ClassificationError, e.to_string())
        }
        Err(e) => fail(CaStatus::InvalidArgument, e.to_string()),
    }
}

/// Opens a raster file (GeoTIFF subset or ESRI ASCII, by extension or byte
/// sniffing) into an opaque grid handle.
///
/// # Safety
/// `path` must be a NUL-terminated C string; `out_grid` must be writable.
/// The returned handle is released with [`ca_grid_free`].
#[no_mangle]
pub unsafe extern "C" fn ca_grid_open(path: *const c_char, out_grid: *mut *mut CaGrid) -> CaStatus {
    if out_grid.is_null() {
        return fail(CaStatus::NullPointer, "out_grid is null");
    }
    let path = match utf8_arg(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    match load_raster_file(Path::new(path)) {
        Ok(grid) => {
            *out_grid = Box::into_raw(Box::new(CaGrid { inner: grid }));
            CaStatus::Ok
        }
        Err(e) => fail(input_error_status(&e), e.to_string()),
    }
}

/// Shape and georeferencing of an opened grid.
///
/// # Safety
/// `grid` must be a live handle from [`ca_grid_open`]; `out_info` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_grid_info(grid: *const CaGrid, out_info: *mut CaGridInfo) -> CaStatus {
    if grid.is_null() || out_info.is_null() {
        return fail(CaStatus::NullPointer, "grid or out_info is null");
    }
    let g = &(*grid).inner;
    *out_info = CaGridInfo {
        ncols: g.ncols(),
        nrows: g.nrows(),
        origin_lon: g.origin_lon(),
        origin_lat: g.origin_lat(),
        pixel_width_deg: g.pixel_width_deg(),
        pixel_height_deg: g.pixel_height_deg(),
        has_nodata: g.nodata().is_some(),
        nodata: g.nodata().unwrap_or(0.0),
    };
    CaStatus::Ok
}

/// Cubic-convolution sample of the grid at a lon/lat position.
/// `*out_is_nodata` is set to 1 when the sample is nodata (then `*out_value`
/// is 0), otherwise 0.
///
/// # Safety
/// `grid` must be a live handle; `out_value` and `out_is_nodata` writable.
#[no_mangle]
pub unsafe extern "C" fn ca_grid_sample(
    grid: *const CaGrid,
    lon: f64,
    lat: f64,
    out_value: *mut f64,
    out_is_nodata: *mut c_int,
) -> CaStatus {
    if grid.is_null() || out_value.is_null() || out_is_nodata.is_null() {
        return fail(CaStatus::NullPointer, "grid or out pointer is null");
    }
    match bicubic_sample(&(*grid).inner, lon, lat) {
        Ok(Some(v)) => {
            *out_value = v;
            *out_is_nodata = 0;
            CaStatus::Ok
        }
        Ok(None) => {
            *out_value = 0.0;
            *out_is_nodata = 1;
            CaStatus::Ok
        }
        Err(e) => fail(CaStatus::DomainError, e.to_string()),
    }
}

/// Releases a grid handle. Null is a no-op.
///
/// # Safety
/// `grid` must be null or an unreleased handle from [`ca_grid_open`].
#[no_mangle]
pub unsafe extern "C" fn ca_grid_free(grid: *mut CaGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or an unreleased string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the full audit from input files and returns the JSON report.
///
/// Returns `CA_STATUS_OK` when every site succeeded and
/// `CA_STATUS_PARTIAL_FAILURE` when some sites failed (the report still
/// carries their failure records). On both, `*out_report_json` receives a
/// NUL-terminated JSON document to release with [`ca_string_free`].
///
/// # Safety
/// Path arguments must be NUL-terminated C strings (`family_map_path` and
/// `options` may be null); `field_csv_paths` must point to `n_field_paths`
/// valid C strings; `out_report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_audit_run(
    sites_geojson_path: *const c_char,
    field_csv_paths: *const *const c_char,
    n_field_paths: usize,
    raster_path: *const c_char,
    family_map_path: *const c_char,
    options: *const CaAuditOptions,
    out_report_json: *mut *mut c_char,
) -> CaStatus {
    if out_report_json.is_null() {
        return fail(CaStatus::NullPointer, "out_report_json is null");
    }
    if n_field_paths > 0 && field_csv_paths.is_null() {
        return fail(CaStatus::NullPointer, "field_csv_paths is null");
    }
    let sites = match utf8_arg(sites_geojson_path, "sites_geojson_path") {
        Ok(s) => PathBuf::from(s),
        Err(status) => return status,
    };
    let raster = match utf8_arg(raster_path, "raster_path") {
        Ok(s) => PathBuf::from(s),
        Err(status) => return status,
    };
    let family_map = if family_map_path.is_null() {
        None
    } else {
        match utf8_arg(family_map_path, "family_map_path") {
            Ok(s) => Some(PathBuf::from(s)),
            Err(status) => return status,
        }
    };
    let mut fields = Vec::with_capacity(n_field_paths);
    for i in 0..n_field_paths {
        let ptr = *field_csv_paths.add(i);
        match utf8_arg(ptr, "field_csv_paths[i]") {
            Ok(s) => fields.push(PathBuf::from(s)),
            Err(status) => return status,
        }
    }
    let opts = if options.is_null() {
        ca_audit_options_default()
    } else {
        *options
    };
    if !(opts.target_pixel_m.is_finite() && opts.target_pixel_m > 0.0) {
        return fail(
            CaStatus::InvalidArgument,
            format!("target_pixel_m must be > 0, got {}", opts.target_pixel_m),
        );
    }
    if !(opts.cap_m.is_finite() && opts.cap_m > 0.0) {
        return fail(
            CaStatus::InvalidArgument,
            format!("cap_m must be > 0, got {}", opts.cap_m),
        );
    }

    let run = std::panic::catch_unwind(move || -> Result<(String, bool), (CaStatus, String)> {
        let loaded = load_audit_inputs(
            &sites,
            &fields,
            &raster,
            family_map.as_deref(),
            opts.allow_multipolygon,
        )
        .map_err(|e| (input_error_status(&e), e.to_string()))?;
        let concurrency = if opts.concurrency == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            opts.concurrency
        };
        let audit_options = AuditOptions {
            target_pixel_m: opts.target_pixel_m,
            cap_m: opts.cap_m,
            concurrency,
            allow_multipolygon: opts.allow_multipolygon,
        };
        let mut report =
            run_audit_entries(&loaded.entries, &loaded.grid, &loaded.mapping, &audit_options)
                .map_err(|e| match e {
                    AuditError::AllSitesFailed(_) | AuditError::NoSites => {
                        (CaStatus::AuditFailed, e.to_string())
                    }
                    other => (CaStatus::InternalError, other.to_string()),
                })?;
        report.metadata.input_digests = loaded.digests;
        Ok((report.to_json(), report.failed_count() > 0))
    });

    match run {
        Ok(Ok((json, partial))) => {
            let Ok(cstring) = CString::new(json) else {
                return fail(CaStatus::InternalError, "report contained a NUL byte");
            };
            *out_report_json = cstring.into_raw();
            if partial {
                set_error("some sites failed; see the report's failure records");
                CaStatus::PartialFailure
            } else {
                CaStatus::Ok
            }
        }
        Ok(Err((status, message))) => fail(status, message),
        Err(_) => fail(CaStatus::InternalError, "panic inside ca_audit_run"),
    }
}
