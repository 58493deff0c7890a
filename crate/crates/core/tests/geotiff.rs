//! Conformance tests for the GeoTIFF subset decoder against committed
//! fixtures. The fixtures are authored by an independent Python script
//! (`fixtures/geotiff/make_fixtures.py`); the expected cell values below are
//! frozen copies of what that script writes.

use carbon_audit::raster::{parse_geotiff_subset, RasterError};

const F32_PLAIN: &[u8] = include_bytes!("fixtures/geotiff/f32_plain.tif");
const F32_DEFLATE: &[u8] = include_bytes!("fixtures/geotiff/f32_deflate.tif");
const U16_PLAIN: &[u8] = include_bytes!("fixtures/geotiff/u16_plain.tif");
const U16_DEFLATE: &[u8] = include_bytes!("fixtures/geotiff/u16_deflate.tif");
const TILED: &[u8] = include_bytes!("fixtures/geotiff/tiled.tif");
const BIG_ENDIAN: &[u8] = include_bytes!("fixtures/geotiff/big_endian.tif");
const LZW: &[u8] = include_bytes!("fixtures/geotiff/lzw.tif");
const NO_GEOREF: &[u8] = include_bytes!("fixtures/geotiff/no_georef.tif");
const BIGTIFF: &[u8] = include_bytes!("fixtures/geotiff/bigtiff.tif");

fn f32_expected() -> Vec<f64> {
    vec![
        1.5, 2.5, 3.5, //
        4.25, 5.25, 6.25, //
        7.125, -9999.0, 9.125,
    ]
}

fn u16_expected() -> Vec<f64> {
    vec![
        0.0, 7.0, 14.0, 21.0, //
        1000.0, 1007.0, 1014.0, 1021.0, //
        2000.0, 2007.0, 2014.0, 65535.0,
    ]
}

#[test]
fn float32_uncompressed_decodes_exactly() {
    let g = parse_geotiff_subset(F32_PLAIN).unwrap();
    assert_eq!((g.ncols(), g.nrows()), (3, 3));
    assert_eq!(g.values(), f32_expected().as_slice());
    assert_eq!(g.origin_lon(), -80.5);
    assert_eq!(g.origin_lat(), -1.1);
    assert_eq!(g.pixel_width_deg(), 0.00027);
    assert_eq!(g.pixel_height_deg(), 0.00027);
    assert_eq!(g.nodata(), Some(-9999.0));
    assert_eq!(g.get(1, 2), None, "nodata cell maps to None");
}

#[test]
fn float32_deflate_matches_uncompressed() {
    let plain = parse_geotiff_subset(F32_PLAIN).unwrap();
    let deflate = parse_geotiff_subset(F32_DEFLATE).unwrap();
    assert_eq!(plain, deflate);
}

#[test]
fn uint16_uncompressed_decodes_exactly() {
    let g = parse_geotiff_subset(U16_PLAIN).unwrap();
    assert_eq!((g.ncols(), g.nrows()), (4, 3));
    assert_eq!(g.values(), u16_expected().as_slice());
    assert_eq!(g.origin_lon(), -79.9);
    assert_eq!(g.origin_lat(), -1.3);
    // Non-square pixels are fine for GeoTIFF input.
    assert_eq!(g.pixel_width_deg(), 0.00025);
    assert_eq!(g.pixel_height_deg(), 0.0003);
    assert_eq!(g.nodata(), None);
}

#[test]
fn uint16_multistrip_deflate_decodes_exactly() {
    let g = parse_geotiff_subset(U16_DEFLATE).unwrap();
    assert_eq!((g.ncols(), g.nrows()), (4, 3));
    assert_eq!(g.values(), u16_expected().as_slice());
}

#[test]
fn tiled_layout_is_named_in_the_error() {
    match parse_geotiff_subset(TILED) {
        Err(RasterError::Unsupported(msg)) => assert!(msg.contains("tiled"), "{msg}"),
        other => panic!("expected unsupported-format error, got {other:?}"),
    }
}

#[test]
fn big_endian_is_named_in_the_error() {
    match parse_geotiff_subset(BIG_ENDIAN) {
        Err(RasterError::Unsupported(msg)) => assert!(msg.contains("big-endian"), "{msg}"),
        other => panic!("expected unsupported-format error, got {other:?}"),
    }
}

#[test]
fn lzw_compression_is_named_in_the_error() {
    match parse_geotiff_subset(LZW) {
        Err(RasterError::Unsupported(msg)) => {
            assert!(msg.contains("compression 5") && msg.contains("LZW"), "{msg}")
        }
        other => panic!("expected unsupported-format error, got {other:?}"),
    }
}

#[test]
fn missing_georeferencing_is_named_in_the_error() {
    match parse_geotiff_subset(NO_GEOREF) {
        Err(RasterError::Unsupported(msg)) => {
            assert!(msg.contains("georeferencing"), "{msg}")
        }
        other => panic!("expected unsupported-format error, got {other:?}"),
    }
}

#[test]
fn bigtiff_is_rejected() {
    match parse_geotiff_subset(BIGTIFF) {
        Err(RasterError::Unsupported(msg)) => assert!(msg.contains("BigTIFF"), "{msg}"),
        other => panic!("expected unsupported-format error, got {other:?}"),
    }
}

#[test]
fn truncated_file_is_a_parse_error() {
    for cut in [0, 1, 4, 8, 40, F32_PLAIN.len() - 10] {
        let r = parse_geotiff_subset(&F32_PLAIN[..cut]);
        assert!(r.is_err(), "no error at cut {cut}");
    }
}

#[test]
fn garbage_bytes_are_a_parse_error() {
    assert!(matches!(
        parse_geotiff_subset(b"PNG not a tiff at all"),
        Err(RasterError::Parse(_))
    ));
}
