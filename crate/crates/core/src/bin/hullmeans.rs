use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hullmeans::data::{self, BlobSpec, Builtin, DatasetSpec, LabelColumn};
use hullmeans::init::MPolicy;
use hullmeans::kmeans::update_centroids;
use hullmeans::matrix::CentroidSet;
use hullmeans::pipeline::{self, DatasetSource, InitMethod, PipelineConfig, RunOutcome, Space};
use hullmeans::report::{self, BenchReport};
use hullmeans::svg::{self, Layers, PlotOptions};
use hullmeans::{Error, Result};

/// K-means with convex-hull seeding: clustering, benchmarks, plots and
/// synthetic data.
#[derive(Parser, Debug)]
#[command(name = "hullmeans", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster one dataset and report scores.
    Cluster(ClusterArgs),
    /// Proposed vs random seeding on several built-in datasets.
    Bench(BenchArgs),
    /// Cluster a dataset and draw the result as SVG.
    Plot(PlotArgs),
    /// Write Gaussian blobs as CSV.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct ConfigArg {
    /// key=value file whose keys mirror the long flags; flags win.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Built-in name (iris, wine, letter, ruspini, synthetic1, synthetic2),
    /// `blobs`, or a path to a delimited file.
    #[arg(long)]
    dataset: String,
    /// Label column of a dataset file.
    #[arg(long, default_value = "last", value_parser = parse_label)]
    label: LabelColumn,
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// The dataset file starts with a header row.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false")]
    header: bool,
    /// Comma-separated class whitelist for dataset files.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<String>>,
    /// Blob sample count.
    #[arg(long, default_value_t = 300)]
    n: usize,
    /// Blob standard deviation.
    #[arg(long, default_value_t = 0.75)]
    std: f64,
    /// Blob dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Number of clusters; built-in datasets default to their class count.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "proposed")]
    init: InitMethod,
    /// Discard count: `auto` or an integer.
    #[arg(long)]
    m: Option<MPolicy>,
    /// Attribute subset (`all` or comma-separated 0-based indices).
    #[arg(long)]
    columns: Option<String>,
    /// Z-score every attribute before anything else.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    standardize: Option<bool>,
    /// PCA components (`none` or an integer).
    #[arg(long)]
    pca: Option<String>,
    #[arg(long)]
    init_space: Option<Space>,
    #[arg(long)]
    lloyd_space: Option<Space>,
    /// Random-init seed base; also the blob generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random-init restarts.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Use the convex hull to find the farthest pair of 2-D data.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    hull: Option<bool>,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Writes PREFIX.csv and PREFIX.json.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    /// Also draw the clustering (2-D seeding or iteration space only).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_delimiter = ',', default_value = "iris,wine,letter,ruspini")]
    datasets: Vec<String>,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    m: Option<MPolicy>,
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    out: PathBuf,
    /// Overlay the convex hull of the plotted points.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false")]
    draw_hull: bool,
    /// Embed a generation-time comment.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "true")]
    timestamp: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    std: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    low: f64,
    #[arg(long, default_value_t = 20.0)]
    high: f64,
    /// Minimum center distance in multiples of std.
    #[arg(long, default_value_t = 6.0)]
    min_separation: f64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_label(s: &str) -> std::result::Result<LabelColumn, String> {
    match s {
        "first" => Ok(LabelColumn::First),
        "last" => Ok(LabelColumn::Last),
        "none" => Ok(LabelColumn::None),
        _ => Err("expected first, last or none".into()),
    }
}

/// Turns `key = value` lines into `--key value` arguments.
fn config_args(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::IoError {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::ParseError {
                path: path.to_path_buf(),
                line: i + 1,
                message: "expected key=value".into(),
            });
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            continue;
        }
        args.push(format!("--{key}"));
        args.push(value.trim().to_string());
    }
    Ok(args)
}

/// Inserts config-file arguments ahead of the explicit ones so flags win.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else if a == "--config" {
            path = argv.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = path else { return Ok(argv) };
    if argv.len() < 2 {
        return Ok(argv);
    }
    let mut out = argv[..2].to_vec();
    out.extend(config_args(&path)?);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}

fn source(data: &DataArgs, k: Option<usize>, seed: u64) -> Result<DatasetSource> {
    if let Some(b) = Builtin::from_name(&data.dataset) {
        return Ok(DatasetSource::Builtin(b));
    }
    if data.dataset == "blobs" {
        let k = k.ok_or_else(|| Error::Usage("--k is required for blobs".into()))?;
        return Ok(DatasetSource::Blobs(BlobSpec {
            dim: data.dim,
            ..BlobSpec::new(data.n, k, data.std, seed)
        }));
    }
    let mut spec = DatasetSpec::csv(&data.dataset, data.label);
    if !data.delimiter.is_ascii() {
        return Err(Error::Usage("delimiter must be a single ASCII character".into()));
    }
    spec.delimiter = data.delimiter as u8;
    spec.has_header = data.header;
    spec.classes = data.classes.clone();
    Ok(DatasetSource::File(spec))
}

fn build_config(data: &DataArgs, run: &RunArgs) -> Result<PipelineConfig> {
    let src = source(data, run.k, run.seed)?;
    let mut cfg = match src {
        DatasetSource::Builtin(b) => PipelineConfig::preset(b),
        other => {
            let k = run.k.ok_or_else(|| Error::Usage("--k is required".into()))?;
            PipelineConfig::new(other, k)
        }
    };
    if let Some(k) = run.k {
        cfg.k = k;
    }
    cfg.init = run.init;
    cfg.seed = run.seed;
    cfg.restarts = run.restarts.unwrap_or(1);
    if let Some(m) = run.m {
        cfg.m = m;
    }
    if let Some(cols) = &run.columns {
        cfg.columns = if cols.trim() == "all" {
            None
        } else {
            let parsed: std::result::Result<Vec<usize>, _> = cols.split(',').map(|c| c.trim().parse()).collect();
            Some(parsed.map_err(|_| Error::Usage(format!("bad --columns `{cols}`")))?)
        };
    }
    if let Some(s) = run.standardize {
        cfg.standardize = s;
    }
    if let Some(p) = &run.pca {
        let had_pca = cfg.pca.is_some();
        cfg.pca = if p.trim() == "none" {
            None
        } else {
            Some(p.trim().parse().map_err(|_| Error::Usage(format!("bad --pca `{p}`")))?)
        };
        match (had_pca, cfg.pca.is_some()) {
            (false, true) => (cfg.init_space, cfg.lloyd_space) = (Space::Reduced, Space::Reduced),
            (true, false) => (cfg.init_space, cfg.lloyd_space) = (Space::Native, Space::Native),
            _ => {}
        }
    }
    if let Some(s) = run.init_space {
        cfg.init_space = s;
    }
    if let Some(s) = run.lloyd_space {
        cfg.lloyd_space = s;
    }
    if let Some(v) = run.max_iter {
        cfg.lloyd.max_iter = v;
    }
    if let Some(v) = run.tol {
        cfg.lloyd.tol = v;
    }
    if let Some(h) = run.hull {
        cfg.hull = h;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn lowest_cost(runs: &[RunOutcome]) -> &RunOutcome {
    runs.iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.model.cost.total_cmp(&b.model.cost).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one run")
}

fn draw(
    prep: &pipeline::Prepared,
    cfg: &PipelineConfig,
    run: &RunOutcome,
    path: &Path,
    hull: bool,
    timestamp: bool,
) -> Result<()> {
    let init_data = prep.space(cfg.init_space)?;
    let (space, data) = if init_data.dim() == 2 {
        (cfg.init_space, init_data)
    } else {
        (cfg.lloyd_space, prep.space(cfg.lloyd_space)?)
    };
    let seeds = CentroidSet::from_samples(data, &run.seeds)?;
    let centroids = if space == cfg.lloyd_space {
        run.model.centroids.clone()
    } else {
        update_centroids(data, &run.model.assignment, cfg.k)?
    };
    let opts = PlotOptions {
        title: Some(format!("{} K={} {}", cfg.dataset.label(), cfg.k, cfg.init)),
        hull,
        timestamp,
        ..Default::default()
    };
    let layers = Layers {
        assignment: Some(&run.model.assignment),
        centroids: Some(&centroids),
        seeds: Some(&seeds),
    };
    svg::write_svg(path, data, layers, &opts)
}

fn write_reports(prefix: &Path, rows: &[BenchReport]) -> Result<()> {
    let with_ext = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    report::write_text(&with_ext(".csv"), &report::to_csv(rows)?)?;
    report::write_text(&with_ext(".json"), &report::to_json(rows))
}

fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let cfg = build_config(&args.data, &args.run)?;
    let (prep, runs, row) = pipeline::cluster(&cfg)?;
    let rows = [row];
    print!("{}", report::to_table(&rows));
    if let Some(prefix) = &args.out {
        write_reports(prefix, &rows)?;
    }
    if let Some(path) = &args.svg {
        draw(&prep, &cfg, lowest_cost(&runs), path, false, false)?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let mut builtins = Vec::new();
    for name in &args.datasets {
        let b = Builtin::from_name(name.trim())
            .ok_or_else(|| Error::Usage(format!("unknown built-in dataset `{name}`")))?;
        builtins.push(b);
    }
    pipeline::check_builtin_files(&builtins)?;
    let mut rows = Vec::new();
    for b in builtins {
        let mut cfg = PipelineConfig::preset(b);
        cfg.restarts = args.restarts;
        cfg.seed = args.seed;
        if let Some(m) = args.m {
            cfg.m = m;
        }
        rows.extend(pipeline::bench_pair(&cfg)?);
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::IoError {
        path: args.out_dir.clone(),
        source: e,
    })?;
    let table = report::to_table(&rows);
    write_reports(&args.out_dir.join("bench"), &rows)?;
    report::write_text(&args.out_dir.join("bench.txt"), &table)?;
    print!("{table}");
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let cfg = build_config(&args.data, &args.run)?;
    let (prep, runs, _) = pipeline::cluster(&cfg)?;
    draw(&prep, &cfg, lowest_cost(&runs), &args.out, args.draw_hull, args.timestamp)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let spec = BlobSpec {
        n_samples: args.n,
        n_clusters: args.k,
        std: args.std,
        dim: args.dim,
        seed: args.seed,
        low: args.low,
        high: args.high,
        min_separation: args.min_separation,
    };
    let blobs = data::gen_blobs(&spec)?;
    data::save_csv(&blobs, &args.out)?;
    println!(
        "wrote {} samples to {}: k={} std={} dim={} box=[{}, {}] min_separation={} seed={}",
        spec.n_samples,
        args.out.display(),
        spec.n_clusters,
        spec.std,
        spec.dim,
        spec.low,
        spec.high,
        spec.min_separation,
        spec.seed
    );
    Ok(())
}

fn run(argv: Vec<String>) -> Result<()> {
    let argv = expand_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => {
            let text = e.render().to_string();
            let text = text.trim_end().trim_start_matches("error: ");
            return Err(Error::Usage(text.to_string()));
        }
    };
    match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
