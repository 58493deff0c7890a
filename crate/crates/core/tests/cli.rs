//! End-to-end tests of the carbon-audit binary: exit-code contract, file
//! outputs, determinism, and per-subcommand behavior.

use std::path::{Path, PathBuf};
use std::process::Command;

use carbon_audit::zonal::{LocalProjection, LonLat};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_carbon-audit")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(exe());
    cmd.args(args).current_dir(dir).env_remove("CARBON_AUDIT_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

const LON0: f64 = -80.4;
const LAT0: f64 = -1.2;

fn proj_at(lon0: f64, lat0: f64) -> LocalProjection {
    LocalProjection::new(lon0, lat0)
}

fn square_ring(lon0: f64, lat0: f64, side_m: f64) -> Vec<LonLat> {
    let proj = proj_at(lon0, lat0);
    let h = side_m / 2.0;
    vec![
        proj.unproject(-h, -h),
        proj.unproject(h, -h),
        proj.unproject(h, h),
        proj.unproject(-h, h),
    ]
}

fn feature_json(site_id: &str, ring: &[LonLat], declared: Option<f64>) -> serde_json::Value {
    let mut coords: Vec<[f64; 2]> = ring.iter().map(|p| [p.lon, p.lat]).collect();
    coords.push(coords[0]);
    let mut props = serde_json::json!({"site_id": site_id});
    if let Some(a) = declared {
        props["declared_area_ha"] = serde_json::json!(a);
    }
    serde_json::json!({
        "type": "Feature",
        "properties": props,
        "geometry": {"type": "Polygon", "coordinates": [coords]}
    })
}

fn write_sites(path: &Path, features: &[serde_json::Value]) {
    let fc = serde_json::json!({"type": "FeatureCollection", "features": features});
    std::fs::write(path, fc.to_string()).unwrap();
}

fn write_field_csv(path: &Path, lon0: f64, lat0: f64, n: usize) {
    let proj = proj_at(lon0, lat0);
    let mut csv = String::from("tree_id,lat,lon,species,dbh_cm\n");
    for i in 0..n {
        let p = proj.unproject(((i % 5) as f64 - 2.0) * 8.0, ((i / 5) as f64 - 2.0) * 8.0);
        csv.push_str(&format!(
            "t{i:03},{},{},cacao,{}\n",
            p.lat,
            p.lon,
            6.0 + i as f64 * 0.25
        ));
    }
    std::fs::write(path, csv).unwrap();
}

fn write_raster(path: &Path) {
    // 40x40 cells of ~30 m centered near (LON0, LAT0); covers all six sites.
    let cell = 0.00027;
    let mut text = format!(
        "ncols 40\nnrows 40\nxllcorner {}\nyllcorner {}\ncellsize {cell}\n",
        LON0 - 20.0 * cell,
        LAT0 - 20.0 * cell
    );
    for r in 0..40 {
        let row: Vec<String> = (0..40)
            .map(|c| format!("{}", 80.0 + c as f64 * 1.5 + r as f64 * 0.75))
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

/// Six sites in a row along the raster, field CSVs named <site_id>.csv.
fn six_site_bundle(base: &Path) -> (PathBuf, Vec<String>, PathBuf) {
    let mut features = Vec::new();
    let mut fields = Vec::new();
    for i in 0..6 {
        let lon0 = LON0 + (i as f64 - 2.5) * 0.0015;
        let site_id = format!("site{}", i + 1);
        features.push(feature_json(&site_id, &square_ring(lon0, LAT0, 60.0), None));
        let csv = base.join(format!("{site_id}.csv"));
        write_field_csv(&csv, lon0, LAT0, 20);
        fields.push(csv.display().to_string());
    }
    let sites = base.join("sites.geojson");
    write_sites(&sites, &features);
    let raster = base.join("agb.asc");
    write_raster(&raster);
    (sites, fields, raster)
}

fn audit_args<'a>(
    sites: &'a str,
    fields: &'a [String],
    raster: &'a str,
    out: &'a str,
) -> Vec<&'a str> {
    let mut args = vec!["audit", "--sites", sites, "--raster", raster, "--out", out];
    for f in fields {
        args.push("--field");
        args.push(f);
    }
    args
}

#[test]
fn audit_six_sites_writes_six_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (sites, fields, raster) = six_site_bundle(dir.path());
    let sites = sites.display().to_string();
    let raster = raster.display().to_string();
    let r = run_in(dir.path(), &audit_args(&sites, &fields, &raster, "out"), &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);

    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 7, "{csv}");
    assert_eq!(
        lines[0],
        "site_id,ground_truth_t_ha,filtered_t_ha,overestimation_factor,factor_rounded"
    );
    for i in 0..6 {
        assert!(lines[i + 1].starts_with(&format!("site{}", i + 1)), "{csv}");
    }
    assert!(dir.path().join("out/report.json").exists());
}

#[test]
fn audit_missing_raster_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(
        dir.path(),
        &["audit", "--sites", "sites.geojson", "--field", "a.csv", "--out", "out"],
        &[],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--raster"), "{}", r.stderr);
}

#[test]
fn audit_isolates_one_bad_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let (sites_path, mut fields, raster) = six_site_bundle(dir.path());

    // Replace site4's geometry with a degenerate ring.
    let mut fc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sites_path).unwrap()).unwrap();
    fc["features"][3]["geometry"] = serde_json::json!({
        "type": "Polygon",
        "coordinates": [[[0.0, 0.0], [1.0, 1.0]]]
    });
    std::fs::write(&sites_path, fc.to_string()).unwrap();
    // Its field file is still present and valid.
    fields.sort();

    let sites = sites_path.display().to_string();
    let raster = raster.display().to_string();
    let r = run_in(dir.path(), &audit_args(&sites, &fields, &raster, "out"), &[]);
    assert_eq!(r.code, 2, "stdout: {}\nstderr: {}", r.stdout, r.stderr);

    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6, "five data rows: {csv}");
    assert!(!csv.contains("site4"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    let sites = json["sites"].as_array().unwrap();
    assert_eq!(sites.len(), 6);
    assert_eq!(sites[3]["status"], "failed");
    assert!(sites[3]["error"].as_str().unwrap().contains("site4"));
}

#[test]
fn audit_accepts_geotiff_and_warns_on_nodata() {
    let dir = tempfile::tempdir().unwrap();
    // The committed 3x3 f32 fixture sits at (-80.5, -1.1) with one nodata
    // cell; put a small site inside it.
    let tif_src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/geotiff/f32_plain.tif");
    let raster = dir.path().join("patch.tif");
    std::fs::copy(tif_src, &raster).unwrap();

    let center_lon = -80.5 + 1.5 * 0.00027;
    let center_lat = -1.1 - 1.5 * 0.00027;
    let features = vec![feature_json(
        "patch",
        &square_ring(center_lon, center_lat, 55.0),
        None,
    )];
    let sites = dir.path().join("sites.geojson");
    write_sites(&sites, &features);
    let field = dir.path().join("patch.csv");
    write_field_csv(&field, center_lon, center_lat, 5);

    let sites = sites.display().to_string();
    let raster = raster.display().to_string();
    let fields = vec![field.display().to_string()];
    let r = run_in(dir.path(), &audit_args(&sites, &fields, &raster, "out"), &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    let site = &json["sites"][0];
    assert_eq!(site["status"], "ok");
    assert!(site["zonal"]["nodata_count"].as_u64().unwrap() > 0);
    let warnings = site["warnings"].as_array().unwrap();
    assert!(
        warnings.iter().any(|w| w.as_str().unwrap().contains("nodata")),
        "{warnings:?}"
    );
}

#[test]
fn audit_render_flag_writes_stable_svgs() {
    let dir = tempfile::tempdir().unwrap();
    let (sites, fields, raster) = six_site_bundle(dir.path());
    let sites = sites.display().to_string();
    let raster = raster.display().to_string();

    let mut args1 = audit_args(&sites, &fields, &raster, "out1");
    args1.push("--render");
    let r = run_in(dir.path(), &args1, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let mut args2 = audit_args(&sites, &fields, &raster, "out2");
    args2.push("--render");
    let r = run_in(dir.path(), &args2, &[]);
    assert_eq!(r.code, 0);

    for i in 1..=6 {
        let a = std::fs::read(dir.path().join(format!("out1/site_site{i}.svg"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("out2/site_site{i}.svg"))).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "site{i} SVG differs between runs");
    }
}

#[test]
fn audit_config_file_provides_defaults_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let (sites, fields, raster) = six_site_bundle(dir.path());
    let sites = sites.display().to_string();
    let raster = raster.display().to_string();

    std::fs::write(
        dir.path().join("run.conf"),
        "# run defaults\nout = cfg_out\ntarget_pixel_m = 2.0\nformats = csv\n",
    )
    .unwrap();

    // Config supplies --out and formats.
    let mut args = vec!["audit", "--sites", &sites, "--raster", &raster, "--config", "run.conf"];
    for f in &fields {
        args.push("--field");
        args.push(f);
    }
    let r = run_in(dir.path(), &args, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(dir.path().join("cfg_out/report.csv").exists());
    assert!(!dir.path().join("cfg_out/report.json").exists(), "formats=csv");

    // Flag overrides the config's out dir.
    let mut args = vec![
        "audit", "--sites", &sites, "--raster", &raster, "--config", "run.conf", "--out",
        "flag_out",
    ];
    for f in &fields {
        args.push("--field");
        args.push(f);
    }
    let r = run_in(dir.path(), &args, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(dir.path().join("flag_out/report.csv").exists());

    // target_pixel_m from the config lands in the report metadata.
    let mut args = vec![
        "audit", "--sites", &sites, "--raster", &raster, "--config", "run.conf", "--out",
        "meta_out", "--formats", "json",
    ];
    for f in &fields {
        args.push("--field");
        args.push(f);
    }
    let r = run_in(dir.path(), &args, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("meta_out/report.json")).unwrap())
            .unwrap();
    assert_eq!(json["metadata"]["target_pixel_m"], 2.0);
}

#[test]
fn audit_env_thread_cap_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let (sites, fields, raster) = six_site_bundle(dir.path());
    let sites = sites.display().to_string();
    let raster = raster.display().to_string();
    let r = run_in(
        dir.path(),
        &audit_args(&sites, &fields, &raster, "out"),
        &[("CARBON_AUDIT_THREADS", "2")],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
}

#[test]
fn allometry_single_tree_values() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["allometry", "--family", "musacea", "--dbh", "10"], &[]);
    assert_eq!(r.code, 0);
    let v: f64 = r.stdout.trim().parse().unwrap();
    assert!((v - 4.046888647774961).abs() / 4.046888647774961 < 1e-12, "{v}");

    let r = run_in(dir.path(), &["allometry", "--family", "cacao", "--dbh", "1"], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.trim(), "0.1208");
}

#[test]
fn allometry_unknown_family_lists_classes() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["allometry", "--family", "oak", "--dbh", "10"], &[]);
    assert_eq!(r.code, 1);
    for class in ["fruit", "musacea", "cacao", "timber"] {
        assert!(r.stderr.contains(class), "{}", r.stderr);
    }
}

#[test]
fn allometry_batch_appends_agb_column() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("trees.csv"),
        "tree_id,lat,lon,species,dbh_cm\nt1,-1.2,-80.4,Musaceae,10\nt2,-1.2,-80.4,cacao,1\n",
    )
    .unwrap();
    let r = run_in(dir.path(), &["allometry", "--field", "trees.csv"], &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "tree_id,lat,lon,species,dbh_cm,agb_kg");
    assert!(lines[1].starts_with("t1,-1.2,-80.4,Musaceae,10,"), "{}", lines[1]);
    let agb: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((agb - 4.046888647774961).abs() / 4.046888647774961 < 1e-12, "{agb}");
    assert!(lines[2].starts_with("t2,") && lines[2].ends_with(",cacao,1,0.1208"));
}

#[test]
fn allometry_batch_honors_family_map_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("trees.csv"),
        "tree_id,lat,lon,species,dbh_cm\ng1,-1.2,-80.4,Guaba,10\n",
    )
    .unwrap();
    // Unmapped species fails loudly without the override file.
    let r = run_in(dir.path(), &["allometry", "--field", "trees.csv"], &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("Guaba"), "{}", r.stderr);

    std::fs::write(dir.path().join("families.map"), "# shade trees\nguaba = Timber\n").unwrap();
    let r = run_in(
        dir.path(),
        &["allometry", "--field", "trees.csv", "--family-map", "families.map"],
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    // Timber at dbh 10: 21.3 - 69.5 + 74.0.
    let agb: f64 = r.stdout.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((agb - 25.8).abs() < 1e-9, "{agb}");
}

fn write_crowns_csv(path: &Path, centers_m: &[(f64, f64)]) {
    let proj = proj_at(LON0, LAT0);
    let mut text = String::from("crown_id,min_lon,min_lat,max_lon,max_lat\n");
    for (i, &(x, y)) in centers_m.iter().enumerate() {
        let sw = proj.unproject(x - 1.0, y - 1.0);
        let ne = proj.unproject(x + 1.0, y + 1.0);
        text.push_str(&format!(
            "c{i},{},{},{},{}\n",
            sw.lon, sw.lat, ne.lon, ne.lat
        ));
    }
    std::fs::write(path, text).unwrap();
}

fn write_records_csv(path: &Path, centers_m: &[(f64, f64)]) {
    let proj = proj_at(LON0, LAT0);
    let mut text = String::from("tree_id,lat,lon,species,dbh_cm\n");
    for (i, &(x, y)) in centers_m.iter().enumerate() {
        let p = proj.unproject(x, y);
        text.push_str(&format!("t{i},{},{},cacao,8.0\n", p.lat, p.lon));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn match_single_pair() {
    let dir = tempfile::tempdir().unwrap();
    write_records_csv(&dir.path().join("f.csv"), &[(0.0, 0.0)]);
    write_crowns_csv(&dir.path().join("c.csv"), &[(0.5, 0.0)]);
    let r = run_in(
        dir.path(),
        &["match", "--field", "f.csv", "--crowns", "c.csv", "--out", "m"],
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let matches = std::fs::read_to_string(dir.path().join("m/matches.csv")).unwrap();
    let lines: Vec<&str> = matches.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("t0,c0,0.5"), "{matches}");
}

#[test]
fn match_crossing_layout_is_optimal() {
    let dir = tempfile::tempdir().unwrap();
    write_records_csv(&dir.path().join("f.csv"), &[(0.0, 0.0), (2.0, 0.0)]);
    write_crowns_csv(&dir.path().join("c.csv"), &[(1.1, 0.0), (3.0, 0.0)]);
    let r = run_in(
        dir.path(),
        &["match", "--field", "f.csv", "--crowns", "c.csv", "--out", "m"],
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let matches = std::fs::read_to_string(dir.path().join("m/matches.csv")).unwrap();
    let lines: Vec<&str> = matches.lines().collect();
    assert_eq!(lines.len(), 3, "{matches}");
    assert!(lines[1].starts_with("t0,c0,"), "{matches}");
    assert!(lines[2].starts_with("t1,c1,"), "{matches}");
    assert!(r.stdout.contains("total distance 2.100"), "{}", r.stdout);
}

#[test]
fn match_empty_crowns_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_records_csv(&dir.path().join("f.csv"), &[(0.0, 0.0), (5.0, 0.0)]);
    std::fs::write(
        dir.path().join("c.csv"),
        "crown_id,min_lon,min_lat,max_lon,max_lat\n",
    )
    .unwrap();
    let r = run_in(
        dir.path(),
        &["match", "--field", "f.csv", "--crowns", "c.csv", "--out", "m"],
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let unmatched = std::fs::read_to_string(dir.path().join("m/unmatched_records.csv")).unwrap();
    assert_eq!(unmatched, "tree_id\nt0\nt1\n");
    let matches = std::fs::read_to_string(dir.path().join("m/matches.csv")).unwrap();
    assert_eq!(matches.lines().count(), 1, "header only");
}

#[test]
fn match_accepts_geojson_crowns() {
    let dir = tempfile::tempdir().unwrap();
    write_records_csv(&dir.path().join("f.csv"), &[(0.0, 0.0)]);
    let proj = proj_at(LON0, LAT0);
    let sw = proj.unproject(-0.6, -0.6);
    let ne = proj.unproject(0.6, 0.6);
    let fc = serde_json::json!({
        "type": "FeatureCollection",
        "features": [{
            "type": "Feature",
            "properties": {"crown_id": "k0"},
            "geometry": {"type": "Polygon", "coordinates": [[
                [sw.lon, sw.lat], [ne.lon, sw.lat], [ne.lon, ne.lat], [sw.lon, ne.lat], [sw.lon, sw.lat]
            ]]}
        }]
    });
    std::fs::write(dir.path().join("c.geojson"), fc.to_string()).unwrap();
    let r = run_in(
        dir.path(),
        &["match", "--field", "f.csv", "--crowns", "c.geojson", "--out", "m"],
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let matches = std::fs::read_to_string(dir.path().join("m/matches.csv")).unwrap();
    assert!(matches.contains("t0,k0,"), "{matches}");
}

#[test]
fn render_command_is_digest_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (sites, _fields, raster) = six_site_bundle(dir.path());
    let sites = sites.display().to_string();
    let raster = raster.display().to_string();
    let mk = |out: &str| {
        let r = run_in(
            dir.path(),
            &[
                "render", "--raster", &raster, "--sites", &sites, "--site-id", "site2",
                "--target-pixel-m", "4.0", "--out", out,
            ],
            &[],
        );
        assert_eq!(r.code, 0, "stderr: {}", r.stderr);
        std::fs::read(dir.path().join(out)).unwrap()
    };
    let a = mk("a.svg");
    let b = mk("b.svg");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("class=\"cell\""));
    assert_eq!(text.matches("class=\"site\"").count(), 1);
}

#[test]
fn help_lists_every_flag_per_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        (
            "audit",
            &[
                "--sites", "--field", "--raster", "--out", "--target-pixel-m", "--cap-m",
                "--family-map", "--formats", "--render", "--allow-multipolygon", "--threads",
                "--config", "--timestamp",
            ],
        ),
        ("allometry", &["--family", "--dbh", "--field", "--family-map", "--out"]),
        ("match", &["--field", "--crowns", "--cap-m", "--out"]),
        (
            "render",
            &[
                "--raster", "--sites", "--site-id", "--crowns", "--target-pixel-m",
                "--allow-multipolygon", "--out",
            ],
        ),
    ];
    for (sub, flags) in cases {
        let r = run_in(dir.path(), &[sub, "--help"], &[]);
        assert_eq!(r.code, 0);
        for flag in flags {
            assert!(r.stdout.contains(flag), "{sub} --help missing {flag}");
        }
    }
}
