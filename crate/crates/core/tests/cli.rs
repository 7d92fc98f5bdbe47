use std::path::Path;
use std::process::{Command, Output};

use hullmeans::report::from_csv;

fn hullmeans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hullmeans"))
        .args(args)
        .env(
            "HULLMEANS_DATA_DIR",
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
        )
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = hullmeans(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn report(dir: &Path, args: &[&str]) -> hullmeans::report::BenchReport {
    let prefix = dir.join("r");
    let mut all = args.to_vec();
    all.extend(["--out", prefix.to_str().unwrap()]);
    ok(&all);
    let rows = from_csv(&std::fs::read_to_string(dir.join("r.csv")).unwrap()).unwrap();
    let json = hullmeans::report::from_json(&std::fs::read_to_string(dir.join("r.json")).unwrap()).unwrap();
    assert_eq!(rows, json);
    assert_eq!(rows.len(), 1);
    rows.into_iter().next().unwrap()
}

#[test]
fn cluster_reference_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(dir.path(), &["cluster", "--dataset", "ruspini", "--k", "4", "--init", "proposed"]);
    assert_eq!((r.error_percent, r.rand_score), (Some(0.0), Some(1.0)));

    let r = report(dir.path(), &["cluster", "--dataset", "iris", "--k", "3", "--init", "proposed"]);
    assert_eq!(r.misclassified, Some(11.0));
    assert_eq!(r.columns, "1;3");

    let r = report(
        dir.path(),
        &["cluster", "--dataset", "blobs", "--seed", "7", "--k", "6", "--std", "0.75", "--n", "300", "--init", "proposed"],
    );
    assert!(r.error_percent.unwrap() <= 2.0);
    assert_eq!(r.dataset, "blobs:n=300,k=6,std=0.75,dim=2,seed=7");
}

#[test]
fn report_rows_replay() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "cluster", "--dataset", "wine", "--init", "random", "--restarts", "3", "--seed", "9", "--standardize", "false",
    ];
    let first = report(dir.path(), &args);
    assert_eq!(first.restarts, 3);
    assert!(!first.standardized);
    let m = first.m_policy.clone();
    let k = first.k.to_string();
    let seed = first.seed.to_string();
    let restarts = first.restarts.to_string();
    let pca = first.pca.unwrap().to_string();
    let replay = report(
        dir.path(),
        &[
            "cluster", "--dataset", &first.dataset, "--k", &k, "--init", "random", "--m", &m, "--seed", &seed,
            "--restarts", &restarts, "--pca", &pca, "--standardize", "false", "--init-space", "reduced",
            "--lloyd-space", "reduced",
        ],
    );
    assert_eq!(first, replay);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# iris with a fixed M\ndataset = iris\nm = 20\ninit = random\nrestarts = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let r = report(dir.path(), &["cluster", "--config", cfg]);
    assert_eq!((r.m_policy.as_str(), r.restarts), ("20", 2));
    let r = report(dir.path(), &["cluster", "--config", cfg, "--init", "proposed", "--m", "30"]);
    assert_eq!((r.m_policy.as_str(), r.m), ("30", Some(30)));
}

#[test]
fn exit_codes_and_error_names() {
    let out = hullmeans(&["cluster", "--dataset", "iris", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: Usage:"));

    let out = hullmeans(&["cluster", "--dataset", "/nonexistent/x.csv", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("IoError"));

    let out = hullmeans(&["cluster", "--dataset", "ruspini", "--m", "40"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidM"));

    let out = hullmeans(&["gen", "--n", "3", "--k", "5", "--std", "1", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&["bench", "--restarts", "1", "--seed", "5", "--out-dir", out.to_str().unwrap()]);
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["bench.csv", "bench.json", "bench.txt"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let rows = from_csv(&std::fs::read_to_string(a.join("bench.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 8);
    let letter = rows
        .iter()
        .find(|r| r.dataset == "letter" && r.init == hullmeans::pipeline::InitMethod::Proposed)
        .unwrap();
    assert!((letter.error_percent.unwrap() - 7.90).abs() <= 0.6);
}

#[test]
fn bench_lists_missing_datasets() {
    let empty = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hullmeans"))
        .args(["bench", "--datasets", "iris,ruspini"])
        .env("HULLMEANS_DATA_DIR", empty.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("iris.data") && err.contains("ruspini.csv"), "{err}");
}

#[test]
fn plot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("ruspini.svg");
    ok(&["plot", "--dataset", "ruspini", "--out", svg.to_str().unwrap(), "--draw-hull", "--timestamp", "false"]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches(r#"class="centroid""#).count(), 4);
    assert_eq!(text.matches(r#"class="seed""#).count(), 4);
    let colors: std::collections::BTreeSet<&str> = text
        .lines()
        .filter(|l| l.starts_with("<circle cx"))
        .filter_map(|l| l.split("fill=\"").nth(1))
        .collect();
    assert_eq!(colors.len(), 4);

    let data = hullmeans::data::Builtin::Ruspini.load().unwrap();
    let hull = hullmeans::geometry::convex_hull_2d(&data).unwrap();
    let ids: Vec<String> = hull.vertices.iter().map(|v| v.to_string()).collect();
    assert!(text.contains(&format!(r#"data-vertices="{}""#, ids.join(" "))));

    let again = dir.path().join("again.svg");
    ok(&["plot", "--dataset", "ruspini", "--out", again.to_str().unwrap(), "--draw-hull", "--timestamp", "false"]);
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&again).unwrap());

    let wine = dir.path().join("wine.svg");
    let out = hullmeans(&["plot", "--dataset", "wine", "--pca", "none", "--out", wine.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DimensionError"));
    assert!(!wine.exists());

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let never = dir.path().join("never.svg");
    let out = hullmeans(&["plot", "--dataset", empty.to_str().unwrap(), "--k", "2", "--out", never.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(!never.exists());
}

#[test]
fn gen_writes_blobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let stdout = ok(&["gen", "--n", "35", "--k", "5", "--std", "0.8", "--seed", "3", "--out", a.to_str().unwrap()]);
    assert!(stdout.contains("seed=3"));
    ok(&["gen", "--n", "35", "--k", "5", "--std", "0.8", "--seed", "3", "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let spec = hullmeans::data::DatasetSpec::csv(&a, hullmeans::data::LabelColumn::Last);
    let d = hullmeans::data::load_delimited(&spec).unwrap();
    assert_eq!((d.n_samples(), d.dim(), d.n_classes()), (35, 2, 5));
    assert!(d.labels().unwrap().chunks(7).enumerate().all(|(k, c)| c.iter().all(|&l| l == k)));
}
