//! carbon-audit: compares field-measured aboveground biomass against a
//! satellite-derived density raster, site by site.
//!
//! Exit codes: 0 full success, 1 fatal error (including usage errors),
//! 2 partial success (some sites failed, results for the rest were written).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use carbon_audit::allometry::{tree_agb, FamilyClass};
use carbon_audit::audit::{
    run_audit_entries, AuditOptions, AuditReport, SiteEntry,
};
use carbon_audit::crownmatch::{match_records_to_crowns, DEFAULT_CAP_M};
use carbon_audit::fielddata::{parse_field_csv, parse_sites_geojson, record_family};
use carbon_audit::inputs::{
    load_audit_inputs, load_crowns_file, load_family_mapping_file, load_raster_file,
};
use carbon_audit::raster::GeoGrid;
use carbon_audit::render::render_heatmap_svg;
use carbon_audit::zonal::{regrid_for_polygon, GeoPolygon};

const THREADS_ENV: &str = "CARBON_AUDIT_THREADS";

#[derive(Parser)]
#[command(
    name = "carbon-audit",
    version,
    about = "Audit forest-carbon estimates: field ground truth vs raster-derived density"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full per-site audit and write JSON/CSV reports.
    Audit(AuditArgs),
    /// Evaluate the allometric equations for one tree or a field CSV.
    Allometry(AllometryArgs),
    /// Match field records to detected crown boxes.
    Match(MatchArgs),
    /// Render an SVG heatmap of the interpolated raster with overlays.
    Render(RenderArgs),
}

#[derive(Args)]
struct AuditArgs {
    /// Sites GeoJSON FeatureCollection (site_id property per feature).
    #[arg(long)]
    sites: PathBuf,
    /// Field-measurement CSV, one per site; the file stem must equal the
    /// site_id. Repeatable.
    #[arg(long = "field", required = true)]
    field: Vec<PathBuf>,
    /// AGB-density raster (GeoTIFF subset or ESRI ASCII grid).
    #[arg(long)]
    raster: PathBuf,
    /// Output directory for report files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Interpolation target resolution in meters (default 1.0).
    #[arg(long)]
    target_pixel_m: Option<f64>,
    /// Crown-match distance cap in meters, recorded in metadata (default 3.0).
    #[arg(long)]
    cap_m: Option<f64>,
    /// Species-to-family mapping override file (keyword=family lines).
    #[arg(long)]
    family_map: Option<PathBuf>,
    /// Report formats to write (default both).
    #[arg(long, value_enum)]
    formats: Option<Formats>,
    /// Also render one SVG heatmap per successful site.
    #[arg(long)]
    render: bool,
    /// Accept MultiPolygon site geometries (first polygon is used).
    #[arg(long)]
    allow_multipolygon: bool,
    /// Maximum number of sites audited concurrently (capped by the
    /// CARBON_AUDIT_THREADS environment variable).
    #[arg(long)]
    threads: Option<usize>,
    /// Plain-text key=value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Embed a wall-clock timestamp in report metadata (off by default so
    /// repeated runs are byte-identical).
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct AllometryArgs {
    /// Family class: fruit, musacea, cacao or timber.
    #[arg(long)]
    family: Option<String>,
    /// Diameter at breast height in centimeters.
    #[arg(long)]
    dbh: Option<f64>,
    /// Batch mode: field CSV whose rows get an agb_kg column appended.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Species-to-family mapping override file for batch mode.
    #[arg(long)]
    family_map: Option<PathBuf>,
    /// Output file for batch mode (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    /// Field-measurement CSV.
    #[arg(long)]
    field: PathBuf,
    /// Crown boxes, CSV or GeoJSON (by extension).
    #[arg(long)]
    crowns: PathBuf,
    /// Matching distance cap in meters (default 3.0).
    #[arg(long)]
    cap_m: Option<f64>,
    /// Output directory (default current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// AGB-density raster (GeoTIFF subset or ESRI ASCII grid).
    #[arg(long)]
    raster: PathBuf,
    /// Sites GeoJSON; the polygon to overlay comes from here.
    #[arg(long)]
    sites: PathBuf,
    /// Which site to render (default: the first feature).
    #[arg(long)]
    site_id: Option<String>,
    /// Optional crown boxes to overlay (CSV or GeoJSON).
    #[arg(long)]
    crowns: Option<PathBuf>,
    /// Interpolation target resolution in meters (default 1.0).
    #[arg(long, default_value_t = 1.0)]
    target_pixel_m: f64,
    /// Accept MultiPolygon site geometries.
    #[arg(long)]
    allow_multipolygon: bool,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Formats {
    Json,
    Csv,
    Both,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outputs; everything else is a
            // usage error and exits 1 per the CLI contract.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Audit(args) => cmd_audit(args),
        Command::Allometry(args) => cmd_allometry(args).map(|()| ExitCode::SUCCESS),
        Command::Match(args) => cmd_match(args).map(|()| ExitCode::SUCCESS),
        Command::Render(args) => cmd_render(args).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Plain-text key=value configuration, merged under the flags.
#[derive(Debug, Default)]
struct FileConfig {
    target_pixel_m: Option<f64>,
    cap_m: Option<f64>,
    family_map: Option<PathBuf>,
    out: Option<PathBuf>,
    formats: Option<Formats>,
    render: Option<bool>,
    allow_multipolygon: Option<bool>,
    threads: Option<usize>,
}

fn parse_config(text: &str, path: &Path) -> Result<FileConfig> {
    let mut cfg = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{line_no}: expected key=value", path.display()))?;
        let key = key.trim();
        let value = value.trim();
        let bad = || anyhow!("{}:{line_no}: invalid value {value:?} for {key}", path.display());
        match key {
            "target_pixel_m" => cfg.target_pixel_m = Some(value.parse().map_err(|_| bad())?),
            "cap_m" => cfg.cap_m = Some(value.parse().map_err(|_| bad())?),
            "family_map" => cfg.family_map = Some(PathBuf::from(value)),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "formats" => {
                cfg.formats = Some(match value {
                    "json" => Formats::Json,
                    "csv" => Formats::Csv,
                    "both" => Formats::Both,
                    _ => return Err(bad()),
                })
            }
            "render" => cfg.render = Some(value.parse().map_err(|_| bad())?),
            "allow_multipolygon" => {
                cfg.allow_multipolygon = Some(value.parse().map_err(|_| bad())?)
            }
            "threads" => cfg.threads = Some(value.parse().map_err(|_| bad())?),
            other => bail!("{}:{line_no}: unknown config key {other:?}", path.display()),
        }
    }
    Ok(cfg)
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn effective_threads(requested: Option<usize>) -> usize {
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    let requested = requested.unwrap_or(default).max(1);
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(cap) if cap >= 1 => requested.min(cap),
        _ => requested,
    }
}

fn sanitize_file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn cmd_audit(args: AuditArgs) -> Result<ExitCode> {
    let cfg = match &args.config {
        Some(path) => parse_config(&read_to_string(path)?, path)?,
        None => FileConfig::default(),
    };
    let out_dir = args
        .out
        .or(cfg.out)
        .ok_or_else(|| anyhow!("missing --out directory (flag or config file)"))?;
    let target_pixel_m = args.target_pixel_m.or(cfg.target_pixel_m).unwrap_or(1.0);
    let cap_m = args.cap_m.or(cfg.cap_m).unwrap_or(DEFAULT_CAP_M);
    let formats = args.formats.or(cfg.formats).unwrap_or(Formats::Both);
    let render = args.render || cfg.render.unwrap_or(false);
    let allow_multipolygon = args.allow_multipolygon || cfg.allow_multipolygon.unwrap_or(false);
    let family_map_path = args.family_map.or(cfg.family_map);
    if !(target_pixel_m.is_finite() && target_pixel_m > 0.0) {
        bail!("--target-pixel-m must be > 0, got {target_pixel_m}");
    }
    if !(cap_m.is_finite() && cap_m > 0.0) {
        bail!("--cap-m must be > 0, got {cap_m}");
    }

    let options = AuditOptions {
        target_pixel_m,
        cap_m,
        concurrency: effective_threads(args.threads.or(cfg.threads)),
        allow_multipolygon,
    };

    let loaded = load_audit_inputs(
        &args.sites,
        &args.field,
        &args.raster,
        family_map_path.as_deref(),
        allow_multipolygon,
    )?;
    let (entries, grid, mapping) = (loaded.entries, loaded.grid, loaded.mapping);

    let mut report = run_audit_entries(&entries, &grid, &mapping, &options)?;
    report.metadata.input_digests = loaded.digests;
    if args.timestamp {
        let unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report.metadata.timestamp = Some(format!("unix:{unix}"));
    }

    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    if matches!(formats, Formats::Json | Formats::Both) {
        let path = out_dir.join("report.json");
        std::fs::write(&path, report.to_json())
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    if matches!(formats, Formats::Csv | Formats::Both) {
        let path = out_dir.join("report.csv");
        std::fs::write(&path, report.to_csv())
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    if render {
        render_site_maps(&report, &entries, &grid, target_pixel_m, &out_dir)?;
    }

    for outcome in &report.sites {
        match outcome.as_ok() {
            Some(r) => println!(
                "site {}: ground truth {:.3} t/ha, filtered {:.3} t/ha, factor x{}",
                r.site_id, r.ground_truth_t_ha, r.filtered_t_ha, r.factor_rounded
            ),
            None => {
                if let carbon_audit::audit::SiteOutcome::Failed { site_id, error } = outcome {
                    eprintln!("site {site_id} failed: {error}");
                }
            }
        }
    }

    Ok(if report.failed_count() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn render_site_maps(
    report: &AuditReport,
    entries: &[SiteEntry],
    grid: &GeoGrid,
    target_pixel_m: f64,
    out_dir: &Path,
) -> Result<()> {
    let polygons: BTreeMap<&str, &GeoPolygon> = entries
        .iter()
        .filter_map(|e| match e {
            SiteEntry::Ready(s) => Some((s.site_id.as_str(), &s.boundary)),
            SiteEntry::Invalid { .. } => None,
        })
        .collect();
    for result in report.sites.iter().filter_map(|o| o.as_ok()) {
        let Some(poly) = polygons.get(result.site_id.as_str()) else {
            continue;
        };
        let fine = regrid_for_polygon(grid, poly, target_pixel_m)?;
        let svg = render_heatmap_svg(&fine, poly, None)?;
        let path = out_dir.join(format!("site_{}.svg", sanitize_file_stem(&result.site_id)));
        std::fs::write(&path, svg).with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_allometry(args: AllometryArgs) -> Result<()> {
    match (&args.family, args.dbh, &args.field) {
        (Some(family), Some(dbh), None) => {
            let family: FamilyClass = family
                .parse()
                .map_err(|e: carbon_audit::allometry::AllometryError| anyhow!(e))?;
            let agb = tree_agb(family, dbh)?;
            println!("{agb}");
            Ok(())
        }
        (None, None, Some(field)) => {
            let mapping = load_family_mapping_file(args.family_map.as_deref())?;
            let text = read_to_string(field)?;
            let records = parse_field_csv(&text)?;
            // Echo the input schema (including optional columns when any
            // record uses them) and append the computed agb_kg column.
            let with_family = records.iter().any(|r| r.family.is_some());
            let with_height = records.iter().any(|r| r.height_m.is_some());
            let mut out = String::from("tree_id,lat,lon,species,dbh_cm");
            if with_family {
                out.push_str(",family");
            }
            if with_height {
                out.push_str(",height_m");
            }
            out.push_str(",agb_kg\n");
            for r in &records {
                let family = record_family(r, &mapping)?;
                let agb = tree_agb(family, r.dbh_cm)?;
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
                out.push_str(&format!(",{agb}\n"));
            }
            match &args.out {
                Some(path) => {
                    std::fs::write(path, out)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
                None => print!("{out}"),
            }
            Ok(())
        }
        _ => bail!("pass either --family with --dbh, or --field for batch mode"),
    }
}

fn cmd_match(args: MatchArgs) -> Result<()> {
    let cap_m = args.cap_m.unwrap_or(DEFAULT_CAP_M);
    let records = parse_field_csv(&read_to_string(&args.field)?)?;
    let crowns = load_crowns_file(&args.crowns)?;
    let result = match_records_to_crowns(&records, &crowns, cap_m)?;

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create output directory {}", args.out.display()))?;
    let mut matches_csv = String::from("tree_id,crown_id,distance_m\n");
    for p in &result.pairs {
        matches_csv.push_str(&format!("{},{},{}\n", p.tree_id, p.crown_id, p.distance_m));
    }
    let mut unmatched_records = String::from("tree_id\n");
    for id in &result.unmatched_records {
        unmatched_records.push_str(id);
        unmatched_records.push('\n');
    }
    let mut unmatched_crowns = String::from("crown_id\n");
    for id in &result.unmatched_crowns {
        unmatched_crowns.push_str(id);
        unmatched_crowns.push('\n');
    }
    for (name, content) in [
        ("matches.csv", matches_csv),
        ("unmatched_records.csv", unmatched_records),
        ("unmatched_crowns.csv", unmatched_crowns),
    ] {
        let path = args.out.join(name);
        std::fs::write(&path, content)
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    println!(
        "matched {} of {} records ({} crowns unmatched), total distance {:.3} m",
        result.pairs.len(),
        records.len(),
        result.unmatched_crowns.len(),
        result.total_distance_m
    );
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    if !(args.target_pixel_m.is_finite() && args.target_pixel_m > 0.0) {
        bail!("--target-pixel-m must be > 0, got {}", args.target_pixel_m);
    }
    let grid = load_raster_file(&args.raster)?;
    let features = parse_sites_geojson(&read_to_string(&args.sites)?, args.allow_multipolygon)?;
    let feature = match &args.site_id {
        Some(id) => features
            .iter()
            .find(|f| &f.site_id == id)
            .ok_or_else(|| anyhow!("site_id {id:?} not found in {}", args.sites.display()))?,
        None => features
            .first()
            .ok_or_else(|| anyhow!("sites file {} has no features", args.sites.display()))?,
    };
    let (poly, _) = feature
        .geometry
        .as_ref()
        .map_err(|e| anyhow!("site {:?}: {e}", feature.site_id))?;
    let crowns = match &args.crowns {
        Some(path) => Some(load_crowns_file(path)?),
        None => None,
    };
    let fine = regrid_for_polygon(&grid, poly, args.target_pixel_m)?;
    let svg = render_heatmap_svg(&fine, poly, crowns.as_deref())?;
    std::fs::write(&args.out, svg)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(())
}
