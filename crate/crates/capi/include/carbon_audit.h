/* C interface to the carbon-audit forest-carbon auditing library. */

#ifndef CARBON_AUDIT_H
#define CARBON_AUDIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible C-API call.
 */
typedef enum {
  /**
   * Success.
   */
  CA_STATUS_OK = 0,
  /**
   * The audit ran and produced a report, but some sites failed.
   */
  CA_STATUS_PARTIAL_FAILURE = 1,
  /**
   * A required pointer argument was null.
   */
  CA_STATUS_NULL_POINTER = 2,
  /**
   * A string argument was not valid UTF-8.
   */
  CA_STATUS_INVALID_UTF8 = 3,
  /**
   * An argument was out of range or inconsistent.
   */
  CA_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A file could not be read.
   */
  CA_STATUS_IO_ERROR = 5,
  /**
   * A file could not be parsed.
   */
  CA_STATUS_PARSE_ERROR = 6,
  /**
   * The raster is outside the supported format subset.
   */
  CA_STATUS_UNSUPPORTED_FORMAT = 7,
  /**
   * A numeric precondition was violated (non-positive DBH, area, ...).
   */
  CA_STATUS_DOMAIN_ERROR = 8,
  /**
   * A species string could not be classified.
   */
  CA_STATUS_CLASSIFICATION_ERROR = 9,
  /**
   * Every site in the batch failed.
   */
  CA_STATUS_AUDIT_FAILED = 10,
  /**
   * Internal error (panic trapped at the boundary).
   */
  CA_STATUS_INTERNAL_ERROR = 11,
} CaStatus;

/**
 * Species family selector for the allometric equations.
 */
typedef enum {
  CA_FAMILY_FRUIT = 0,
  CA_FAMILY_MUSACEA = 1,
  CA_FAMILY_CACAO = 2,
  CA_FAMILY_TIMBER = 3,
} CaFamily;

/**
 * An opened raster grid (opaque).
 */
typedef struct CaGrid CaGrid;

/**
 * Options for [`ca_audit_run`]; obtain defaults from
 * [`ca_audit_options_default`].
 */
typedef struct {
  /**
   * Interpolation target resolution in meters (default 1.0).
   */
  double target_pixel_m;
  /**
   * Crown-match distance cap recorded in metadata (default 3.0).
   */
  double cap_m;
  /**
   * Concurrent sites; 0 means one per available core.
   */
  size_t concurrency;
  bool allow_multipolygon;
} CaAuditOptions;

/**
 * Shape and georeferencing of an opened grid.
 */
typedef struct {
  size_t ncols;
  size_t nrows;
  double origin_lon;
  double origin_lat;
  double pixel_width_deg;
  double pixel_height_deg;
  bool has_nodata;
  /**
   * Meaningful only when `has_nodata` is true.
   */
  double nodata;
} CaGridInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; never freed.
 */
const char *ca_version_string(void);

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ca_last_error_message(void);

/**
 * Defaults for [`CaAuditOptions`].
 */
CaAuditOptions ca_audit_options_default(void);

/**
 * Per-tree aboveground biomass in kilograms for a family and DBH (cm).
 *
 * # Safety
 * `out_agb_kg` must point to writable memory for one f64.
 */
CaStatus ca_tree_agb(CaFamily family, double dbh_cm, double *out_agb_kg);

/**
 * Classifies a species string through the built-in family mapping.
 *
 * # Safety
 * `species` must be a NUL-terminated C string; `out_family` must be
 * writable.
 */
CaStatus ca_classify_family(const char *species, CaFamily *out_family);

/**
 * Opens a raster file (GeoTIFF subset or ESRI ASCII, by extension or byte
 * sniffing) into an opaque grid handle.
 *
 * # Safety
 * `path` must be a NUL-terminated C string; `out_grid` must be writable.
 * The returned handle is released with [`ca_grid_free`].
 */
CaStatus ca_grid_open(const char *path, CaGrid **out_grid);

/**
 * Shape and georeferencing of an opened grid.
 *
 * # Safety
 * `grid` must be a live handle from [`ca_grid_open`]; `out_info` writable.
 */
CaStatus ca_grid_info(const CaGrid *grid, CaGridInfo *out_info);

/**
 * Cubic-convolution sample of the grid at a lon/lat position.
 * `*out_is_nodata` is set to 1 when the sample is nodata (then `*out_value`
 * is 0), otherwise 0.
 *
 * # Safety
 * `grid` must be a live handle; `out_value` and `out_is_nodata` writable.
 */
CaStatus ca_grid_sample(const CaGrid *grid,
                        double lon,
                        double lat,
                        double *out_value,
                        int *out_is_nodata);

/**
 * Releases a grid handle. Null is a no-op.
 *
 * # Safety
 * `grid` must be null or an unreleased handle from [`ca_grid_open`].
 */
void ca_grid_free(CaGrid *grid);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or an unreleased string returned by this library.
 */
void ca_string_free(char *s);

/**
 * Runs the full audit from input files and returns the JSON report.
 *
 * Returns `CA_STATUS_OK` when every site succeeded and
 * `CA_STATUS_PARTIAL_FAILURE` when some sites failed (the report still
 * carries their failure records). On both, `*out_report_json` receives a
 * NUL-terminated JSON document to release with [`ca_string_free`].
 *
 * # Safety
 * Path arguments must be NUL-terminated C strings (`family_map_path` and
 * `options` may be null); `field_csv_paths` must point to `n_field_paths`
 * valid C strings; `out_report_json` must be writable.
 */
CaStatus ca_audit_run(const char *sites_geojson_path,
                      const char *const *field_csv_paths,
                      size_t n_field_paths,
                      const char *raster_path,
                      const char *family_map_path,
                      const CaAuditOptions *options,
                      char **out_report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARBON_AUDIT_H */
