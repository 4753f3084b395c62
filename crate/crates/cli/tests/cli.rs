use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fatoulab_cli::config::{Config, ConfigError, ALL_SECTIONS};
use fatoulab_cli::render::{postcritical_hits, render_julia, render_postcritical, Coloring, MapFamily, RenderJob, Viewport};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fatoulab"));
    c.env_remove("SOURCE_DATE_EPOCH").env_remove("FATOULAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let v = jsonschema::validator_for(&schema(schema_name)).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn cf_command_emits_the_document() {
    let out = run(&["cf", "--alpha", "0.41421356237309504880168872420969807856967187537694", "--depth", "6"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid("cf_document.v1.json", &doc);
    assert_eq!(doc["a"][6], "2");
    assert_eq!(doc["q"][4], "29");

    let out = run(&["cf", "--cf", "0,3,50,1", "--depth", "3"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["q"][2], "151");
    assert_eq!(run(&["cf"]).status.code(), Some(2));
}

#[test]
fn brjuno_command() {
    let out = run(&["brjuno", "--cf", "0,2,2,2,2"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let b1 = doc["partial_sums"][1].as_f64().unwrap();
    assert!((b1 - (2f64.ln() + 5f64.ln() / 2.0)).abs() < 1e-12);
}

#[test]
fn orbit_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    assert!(run(&["orbit", "--alpha", "0.3", "-n", "10", "--out", csv.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 12);
    // Row 0 is the critical value −λ²/4.
    let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').skip(1).take(2).map(|t| t.parse().unwrap()).collect();
    let lam = num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * 0.3);
    let cv = -lam * lam / 4.0;
    assert!((first[0] - cv.re).abs() < 1e-15 && (first[1] - cv.im).abs() < 1e-15);

    let out = run(&["orbit", "--alpha", "0.3", "--z0", "10,0", "-n", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().ends_with(",1"));

    let json = dir.path().join("o.json");
    assert!(run(&["orbit", "--alpha", "0.3", "-n", "10", "--out", json.to_str().unwrap()]).status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_valid("orbit.v1.json", &doc);
    assert_eq!(doc["points"].as_array().unwrap().len(), 11);
    let csv_rows: Vec<f64> = text_col(&std::fs::read_to_string(&csv).unwrap(), 1);
    let json_rows: Vec<f64> = doc["points"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    assert_eq!(csv_rows, json_rows);
}

fn text_col(csv: &str, col: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

fn job(max_iter: u32) -> RenderJob {
    RenderJob {
        map: MapFamily::Quadratic,
        alpha: std::f64::consts::SQRT_2 - 1.0,
        viewport: Viewport::new(0.0, 0.0, 4.0),
        resolution: 64,
        max_iter,
        escape_radius: 4.0,
        coloring: Coloring::EscapeTime,
    }
}

#[test]
fn julia_render_examples() {
    assert!(render_julia(&job(0)).unwrap().is_uniform());
    let img = render_julia(&job(500)).unwrap();
    assert!(!img.is_uniform());
    // The pixel nearest 0 lies in the Siegel disk and never escapes.
    let idx = (32 * 64 + 32) * 3;
    assert_eq!(&img.rgb[idx..idx + 3], &[12, 12, 28]);
    assert_eq!(img, render_julia(&job(500)).unwrap());
    assert!(img.to_ppm().starts_with(b"P6\n64 64\n255\n"));
    let trap = render_julia(&RenderJob { coloring: Coloring::OrbitTrapOrigin, ..job(100) }).unwrap();
    assert_ne!(trap, img);
    assert!(render_julia(&RenderJob { resolution: 0, ..job(1) }).is_err());
}

#[test]
fn postcritical_render_examples() {
    let v = Viewport::new(0.0, 0.0, 1.5);
    let one = render_postcritical(0.3, 1, &v, 64).unwrap();
    assert_eq!(postcritical_hits(&one), 1);
    let many = render_postcritical(0.3, 10_000, &v, 64).unwrap();
    assert!(postcritical_hits(&many) > 1);
    assert!(render_postcritical(0.3, 200_000_000, &v, 64).is_err());
}

#[test]
fn render_commands_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    for p in [&a, &b] {
        let out = run(&["render-julia", "--alpha", "0.2", "--res", "48", "--max-iter", "100", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let png = dir.path().join("pc.png");
    let out = run(&["render-pc", "--cf", "0,3,50", "--budget", "1000", "--res", "32", "--out", png.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read(&png).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn default_config_has_every_section() {
    let cfg = Config::default();
    assert!(cfg.sections.len() >= 7);
    assert_eq!(cfg.sections, ALL_SECTIONS.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    assert!(cfg.validate().is_ok());
}

#[test]
fn config_errors_name_the_key() {
    let err = Config::from_toml_str("seed = 3\nbogus_key = 1\n").unwrap_err();
    assert!(matches!(&err, ConfigError::UnknownKey { key, line: 2 } if key == "bogus_key"), "{err}");
    let err = Config::from_toml_str("cf_depth = \"deep\"\n").unwrap_err();
    assert!(matches!(&err, ConfigError::BadValue { key, .. } if key == "cf_depth"), "{err}");
    let err = Config::from_toml_str("[table]\nx = 1\n").unwrap_err();
    assert!(matches!(&err, ConfigError::NotFlat { key, .. } if key == "table"), "{err}");
    let err = Config::from_toml_str("sections = [\"nope\"]\n").unwrap_err();
    assert!(err.to_string().contains("sections"));
    let err = Config::from_toml_str("seed = = 1\n").unwrap_err();
    assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
}

#[test]
fn config_hash_ignores_key_order() {
    let a = Config::from_toml_str("seed = 3\ncf_depth = 12\n").unwrap();
    let b = Config::from_toml_str("cf_depth = 12\nseed = 3\n").unwrap();
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), Config::default().hash());
    assert_eq!(a.hash().len(), 64);
}

#[test]
fn verify_single_section_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "sections = [\"sector_count\"]\nsector_triples = 200\n");
    let out_path = dir.path().join("bundle.json");
    let out = bin()
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .args(["verify", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_valid("report_bundle.v1.json", &doc);
    assert_eq!(doc["sections"].as_array().unwrap().len(), 1);
    assert_eq!(doc["started"], 1_700_000_000u64);
    assert_eq!(doc["pass"], true);
}

#[test]
fn failing_report_sets_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "sections = [\"cf_roundtrip\"]\ncf_samples = 5\ncf_error_log2 = -1000\n");
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["pass"], false);
    assert_eq!(summary["failed"][0]["section"], "cf_roundtrip");

    let bad = write(dir.path(), "bad.toml", "not_a_key = 1\n");
    let out = run(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_key"));
}

#[test]
fn check_commands_produce_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "semiconjugacy_grid = 10\nabel_points = 10\nrotation_steps = 5\nsecant_angles = 2\n");
    let out = run(&["fatou-check", "--alpha", "0.01", "--map", "cubic", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = doc["sections"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["semiconjugacy", "near_translation", "abel"]);

    let out = run(&["renorm-check", "--alpha", "0.24", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["sections"][0]["name"], "rotation");
}
