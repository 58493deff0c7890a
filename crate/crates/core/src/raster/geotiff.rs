//! Minimal GeoTIFF decoder for the raster subset this tool consumes:
//! little-endian classic TIFF, single band, strip-organized, uncompressed or
//! Deflate, georeferenced through ModelPixelScale + ModelTiepoint. Anything
//! else fails loudly with the offending feature named.

use std::collections::HashMap;
use std::io::Read;

use flate2::read::ZlibDecoder;

use super::{GeoGrid, RasterError};

const TAG_IMAGE_WIDTH: u16 = 256;
const TAG_IMAGE_LENGTH: u16 = 257;
const TAG_BITS_PER_SAMPLE: u16 = 258;
const TAG_COMPRESSION: u16 = 259;
const TAG_STRIP_OFFSETS: u16 = 273;
const TAG_SAMPLES_PER_PIXEL: u16 = 277;
const TAG_ROWS_PER_STRIP: u16 = 278;
const TAG_STRIP_BYTE_COUNTS: u16 = 279;
const TAG_PREDICTOR: u16 = 317;
const TAG_TILE_WIDTH: u16 = 322;
const TAG_TILE_LENGTH: u16 = 323;
const TAG_TILE_OFFSETS: u16 = 324;
const TAG_TILE_BYTE_COUNTS: u16 = 325;
const TAG_SAMPLE_FORMAT: u16 = 339;
const TAG_MODEL_PIXEL_SCALE: u16 = 33550;
const TAG_MODEL_TIEPOINT: u16 = 33922;
const TAG_GDAL_NODATA: u16 = 42113;

struct IfdEntry {
    field_type: u16,
    data: Vec<u8>,
}

fn parse_err(msg: impl Into<String>) -> RasterError {
    RasterError::Parse(msg.into())
}

fn read_u16(bytes: &[u8], off: usize) -> Result<u16, RasterError> {
    let s: [u8; 2] = bytes
        .get(off..off + 2)
        .ok_or_else(|| parse_err(format!("truncated TIFF: read past end at offset {off}")))?
        .try_into()
        .expect("slice length checked");
    Ok(u16::from_le_bytes(s))
}

fn read_u32(bytes: &[u8], off: usize) -> Result<u32, RasterError> {
    let s: [u8; 4] = bytes
        .get(off..off + 4)
        .ok_or_else(|| parse_err(format!("truncated TIFF: read past end at offset {off}")))?
        .try_into()
        .expect("slice length checked");
    Ok(u32::from_le_bytes(s))
}

fn type_size(field_type: u16) -> Result<usize, RasterError> {
    Ok(match field_type {
        1 | 2 | 6 | 7 => 1,
        3 | 8 => 2,
        4 | 9 | 11 => 4,
        5 | 10 | 12 => 8,
        other => return Err(parse_err(format!("unknown TIFF field type {other}"))),
    })
}

impl IfdEntry {
    fn as_u32s(&self, tag: u16) -> Result<Vec<u32>, RasterError> {
        match self.field_type {
            3 => Ok(self
                .data
                .chunks_exact(2)
                .map(|c| u16::from_le_bytes(c.try_into().expect("chunk")) as u32)
                .collect()),
            4 => Ok(self
                .data
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().expect("chunk")))
                .collect()),
            t => Err(parse_err(format!(
                "tag {tag} has field type {t}, expected SHORT or LONG"
            ))),
        }
    }

    fn as_f64s(&self, tag: u16) -> Result<Vec<f64>, RasterError> {
        if self.field_type != 12 {
            return Err(parse_err(format!(
                "tag {tag} has field type {}, expected DOUBLE",
                self.field_type
            )));
        }
        Ok(self
            .data
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk")))
            .collect())
    }

    fn as_ascii(&self, tag: u16) -> Result<String, RasterError> {
        if self.field_type != 2 {
            return Err(parse_err(format!(
                "tag {tag} has field type {}, expected ASCII",
                self.field_type
            )));
        }
        let end = self.data.iter().position(|&b| b == 0).unwrap_or(self.data.len());
        String::from_utf8(self.data[..end].to_vec())
            .map_err(|_| parse_err(format!("tag {tag} holds non-UTF8 ASCII data")))
    }

    fn single_u32(&self, tag: u16) -> Result<u32, RasterError> {
        let v = self.as_u32s(tag)?;
        v.first()
            .copied()
            .ok_or_else(|| parse_err(format!("tag {tag} has no values")))
    }
}

fn compression_name(code: u32) -> String {
    let name = match code {
        2 => " (CCITT RLE)",
        5 => " (LZW)",
        6 | 7 => " (JPEG)",
        32773 => " (PackBits)",
        32946 => " (legacy Deflate)",
        34712 => " (JPEG2000)",
        _ => "",
    };
    format!("compression {code}{name}")
}

/// Decodes the supported GeoTIFF subset into a [`GeoGrid`]. Integer samples
/// are widened to f64; georeferencing is taken as encoded (WGS84 degrees).
pub fn parse_geotiff_subset(bytes: &[u8]) -> Result<GeoGrid, RasterError> {
    match bytes.get(0..2) {
        Some(b"II") => {}
        Some(b"MM") => {
            return Err(RasterError::Unsupported(
                "big-endian byte order (only little-endian TIFFs are supported)".into(),
            ))
        }
        _ => return Err(parse_err("not a TIFF file: bad byte-order mark")),
    }
    match read_u16(bytes, 2)? {
        42 => {}
        43 => return Err(RasterError::Unsupported("BigTIFF".into())),
        other => return Err(parse_err(format!("bad TIFF magic number {other}"))),
    }

    // First IFD only; extra pages are ignored.
    let ifd_offset = read_u32(bytes, 4)? as usize;
    let mut entries: HashMap<u16, IfdEntry> = HashMap::new();
    let n_entries = read_u16(bytes, ifd_offset)? as usize;
    for i in 0..n_entries {
        let base = ifd_offset + 2 + 12 * i;
        let tag = read_u16(bytes, base)?;
        let field_type = read_u16(bytes, base + 2)?;
        let count = read_u32(bytes, base + 4)?;
        let total = type_size(field_type)? * count as usize;
        let data = if total <= 4 {
            bytes
                .get(base + 8..base + 8 + total)
                .ok_or_else(|| parse_err("truncated TIFF: IFD entry value"))?
                .to_vec()
        } else {
            let off = read_u32(bytes, base + 8)? as usize;
            bytes
                .get(off..off + total)
                .ok_or_else(|| {
                    parse_err(format!("truncated TIFF: tag {tag} data at offset {off}"))
                })?
                .to_vec()
        };
        entries.insert(
            tag,
            IfdEntry { field_type, data },
        );
    }

    for tile_tag in [
        TAG_TILE_WIDTH,
        TAG_TILE_LENGTH,
        TAG_TILE_OFFSETS,
        TAG_TILE_BYTE_COUNTS,
    ] {
        if entries.contains_key(&tile_tag) {
            return Err(RasterError::Unsupported(
                "tiled layout (only strip-organized TIFFs are supported)".into(),
            ));
        }
    }

    let require = |tag: u16, name: &str| -> Result<&IfdEntry, RasterError> {
        entries
            .get(&tag)
            .ok_or_else(|| parse_err(format!("missing required tag {tag} ({name})")))
    };

    let ncols = require(TAG_IMAGE_WIDTH, "ImageWidth")?.single_u32(TAG_IMAGE_WIDTH)? as usize;
    let nrows = require(TAG_IMAGE_LENGTH, "ImageLength")?.single_u32(TAG_IMAGE_LENGTH)? as usize;

    let samples_per_pixel = match entries.get(&TAG_SAMPLES_PER_PIXEL) {
        Some(e) => e.single_u32(TAG_SAMPLES_PER_PIXEL)?,
        None => 1,
    };
    if samples_per_pixel != 1 {
        return Err(RasterError::Unsupported(format!(
            "{samples_per_pixel} samples per pixel (only single-band rasters are supported)"
        )));
    }

    let bits = require(TAG_BITS_PER_SAMPLE, "BitsPerSample")?
        .single_u32(TAG_BITS_PER_SAMPLE)?;
    let sample_format = match entries.get(&TAG_SAMPLE_FORMAT) {
        Some(e) => e.single_u32(TAG_SAMPLE_FORMAT)?,
        None => 1,
    };

    enum SampleType {
        F32,
        U8,
        U16,
    }
    let sample_type = match (sample_format, bits) {
        (3, 32) => SampleType::F32,
        (1, 8) => SampleType::U8,
        (1, 16) => SampleType::U16,
        (fmt, b) => {
            return Err(RasterError::Unsupported(format!(
                "sample format {fmt} with {b} bits per sample \
                 (supported: 32-bit float, 8/16-bit unsigned)"
            )))
        }
    };
    let bytes_per_sample = (bits / 8) as usize;

    let compression = match entries.get(&TAG_COMPRESSION) {
        Some(e) => e.single_u32(TAG_COMPRESSION)?,
        None => 1,
    };
    if compression != 1 && compression != 8 {
        return Err(RasterError::Unsupported(compression_name(compression)));
    }
    if let Some(e) = entries.get(&TAG_PREDICTOR) {
        let p = e.single_u32(TAG_PREDICTOR)?;
        if p != 1 {
            return Err(RasterError::Unsupported(format!("predictor {p}")));
        }
    }

    let scale_entry = entries.get(&TAG_MODEL_PIXEL_SCALE);
    let tiepoint_entry = entries.get(&TAG_MODEL_TIEPOINT);
    let (scale_entry, tiepoint_entry) = match (scale_entry, tiepoint_entry) {
        (Some(s), Some(t)) => (s, t),
        _ => {
            return Err(RasterError::Unsupported(
                "missing georeferencing tags (ModelPixelScale 33550 + ModelTiepoint 33922)"
                    .into(),
            ))
        }
    };
    let scale = scale_entry.as_f64s(TAG_MODEL_PIXEL_SCALE)?;
    let tiepoint = tiepoint_entry.as_f64s(TAG_MODEL_TIEPOINT)?;
    if scale.len() < 2 {
        return Err(parse_err("ModelPixelScale must hold at least 2 doubles"));
    }
    if tiepoint.len() < 6 {
        return Err(parse_err("ModelTiepoint must hold at least 6 doubles"));
    }
    if tiepoint[0] != 0.0 || tiepoint[1] != 0.0 {
        return Err(RasterError::Unsupported(format!(
            "model tiepoint anchored at raster ({}, {}) instead of (0, 0)",
            tiepoint[0], tiepoint[1]
        )));
    }

    let nodata = match entries.get(&TAG_GDAL_NODATA) {
        Some(e) => {
            let text = e.as_ascii(TAG_GDAL_NODATA)?;
            let trimmed = text.trim();
            Some(trimmed.parse::<f64>().map_err(|_| {
                parse_err(format!("unparseable GDAL_NODATA value {trimmed:?}"))
            })?)
        }
        None => None,
    };

    let strip_offsets = require(TAG_STRIP_OFFSETS, "StripOffsets")?.as_u32s(TAG_STRIP_OFFSETS)?;
    let strip_byte_counts =
        require(TAG_STRIP_BYTE_COUNTS, "StripByteCounts")?.as_u32s(TAG_STRIP_BYTE_COUNTS)?;
    if strip_offsets.len() != strip_byte_counts.len() {
        return Err(parse_err(format!(
            "StripOffsets holds {} entries but StripByteCounts holds {}",
            strip_offsets.len(),
            strip_byte_counts.len()
        )));
    }
    let rows_per_strip = match entries.get(&TAG_ROWS_PER_STRIP) {
        Some(e) => e.single_u32(TAG_ROWS_PER_STRIP)? as usize,
        None => nrows,
    };
    if rows_per_strip == 0 {
        return Err(parse_err("RowsPerStrip is zero"));
    }
    let expected_strips = nrows.div_ceil(rows_per_strip);
    if strip_offsets.len() != expected_strips {
        return Err(parse_err(format!(
            "expected {expected_strips} strips for {nrows} rows at {rows_per_strip} rows/strip, \
             found {}",
            strip_offsets.len()
        )));
    }

    let mut values: Vec<f64> = Vec::with_capacity(ncols * nrows);
    for (strip_idx, (&off, &len)) in strip_offsets.iter().zip(&strip_byte_counts).enumerate() {
        let rows_here = rows_per_strip.min(nrows - strip_idx * rows_per_strip);
        let expected_bytes = rows_here * ncols * bytes_per_sample;
        let raw = bytes
            .get(off as usize..off as usize + len as usize)
            .ok_or_else(|| parse_err(format!("truncated TIFF: strip {strip_idx} data")))?;
        let decoded: Vec<u8> = match compression {
            1 => raw.to_vec(),
            8 => {
                let mut out = vec![0u8; expected_bytes];
                let mut dec = ZlibDecoder::new(raw);
                dec.read_exact(&mut out).map_err(|e| {
                    parse_err(format!("Deflate strip {strip_idx} decode failed: {e}"))
                })?;
                out
            }
            _ => unreachable!("compression validated above"),
        };
        if decoded.len() < expected_bytes {
            return Err(parse_err(format!(
                "strip {strip_idx} holds {} bytes, expected {expected_bytes}",
                decoded.len()
            )));
        }
        let payload = &decoded[..expected_bytes];
        match sample_type {
            SampleType::F32 => values.extend(
                payload
                    .chunks_exact(4)
                    .map(|c| f32::from_le_bytes(c.try_into().expect("chunk")) as f64),
            ),
            SampleType::U8 => values.extend(payload.iter().map(|&b| b as f64)),
            SampleType::U16 => values.extend(
                payload
                    .chunks_exact(2)
                    .map(|c| u16::from_le_bytes(c.try_into().expect("chunk")) as f64),
            ),
        }
    }

    GeoGrid::new(
        ncols,
        nrows,
        tiepoint[3],
        tiepoint[4],
        scale[0],
        scale[1],
        nodata,
        values,
    )
}
