//! End-to-end runs: load, preprocess, seed, iterate, score.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{gen_blobs, load_delimited, BlobSpec, Builtin, DatasetSpec};
use crate::error::{Error, Result};
use crate::init::{proposed_seeds, random_seeds, InitParams, MPolicy};
use crate::kmeans::{run_lloyd, ClusterModel, LloydParams};
use crate::matrix::{CentroidSet, DataMatrix};
use crate::metrics::{ccpi_paired, evaluate, MetricReport};
use crate::reduce::{pca_fit, pca_transform, standardize, PcaModel};
use crate::report::BenchReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    Proposed,
    Random,
}

/// Which representation a stage operates on: the (optionally standardized)
/// attributes, or their PCA projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Native,
    Reduced,
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $text:literal),* }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),* })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($ty::$variant),)*
                    other => Err(Error::Usage(format!(
                        concat!("unknown ", stringify!($ty), " `{}`; expected one of: ", $($text, " "),*),
                        other
                    ))),
                }
            }
        }
    };
}

keyword_enum!(InitMethod { Proposed => "proposed", Random => "random" });
keyword_enum!(Space { Native => "native", Reduced => "reduced" });

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Builtin(Builtin),
    File(DatasetSpec),
    Blobs(BlobSpec),
}

impl DatasetSource {
    /// Identifier recorded in reports; enough to regenerate the data.
    pub fn label(&self) -> String {
        match self {
            DatasetSource::Builtin(b) => b.name().to_string(),
            DatasetSource::File(spec) => spec.path.display().to_string(),
            DatasetSource::Blobs(b) => format!(
                "blobs:n={},k={},std={},dim={},seed={}",
                b.n_samples, b.n_clusters, b.std, b.dim, b.seed
            ),
        }
    }

    pub fn load(&self) -> Result<DataMatrix> {
        match self {
            DatasetSource::Builtin(b) => b.load(),
            DatasetSource::File(spec) => load_delimited(spec),
            DatasetSource::Blobs(spec) => gen_blobs(spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub dataset: DatasetSource,
    pub k: usize,
    pub init: InitMethod,
    pub m: MPolicy,
    /// Attribute subset applied right after loading.
    pub columns: Option<Vec<usize>>,
    pub standardize: bool,
    pub pca: Option<usize>,
    pub init_space: Space,
    pub lloyd_space: Space,
    pub seed: u64,
    /// Random-init restarts; restart `i` uses seed `seed + i`.
    pub restarts: usize,
    pub lloyd: LloydParams,
    pub hull: bool,
}

impl PipelineConfig {
    pub fn new(dataset: DatasetSource, k: usize) -> Self {
        Self {
            dataset,
            k,
            init: InitMethod::Proposed,
            m: MPolicy::Auto,
            columns: None,
            standardize: false,
            pca: None,
            init_space: Space::Native,
            lloyd_space: Space::Native,
            seed: 0,
            restarts: 20,
            lloyd: LloydParams::default(),
            hull: true,
        }
    }

    /// Reference settings per built-in dataset.
    ///
    /// Iris uses sepal width and petal width; Wine is standardized and both
    /// stages run on two principal components; Letter seeds on two principal
    /// components and iterates on all sixteen attributes.
    pub fn preset(builtin: Builtin) -> Self {
        let source = DatasetSource::Builtin(builtin);
        match builtin {
            Builtin::Iris => Self {
                columns: Some(vec![1, 3]),
                ..Self::new(source, 3)
            },
            Builtin::Wine => Self {
                standardize: true,
                pca: Some(2),
                init_space: Space::Reduced,
                lloyd_space: Space::Reduced,
                ..Self::new(source, 3)
            },
            Builtin::Letter => Self {
                pca: Some(2),
                init_space: Space::Reduced,
                lloyd_space: Space::Native,
                ..Self::new(source, 2)
            },
            Builtin::Ruspini => Self::new(source, 4),
            Builtin::Synthetic1 => Self::new(source, 5),
            Builtin::Synthetic2 => Self::new(source, 6),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pca.is_none() && (self.init_space == Space::Reduced || self.lloyd_space == Space::Reduced) {
            return Err(Error::Usage("reduced space requested without PCA components".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Usage("restarts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn columns_label(&self) -> String {
        match &self.columns {
            None => "all".into(),
            Some(c) => c.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        }
    }
}

/// Data in every representation a run may need.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub native: DataMatrix,
    pub reduced: Option<DataMatrix>,
    pub pca: Option<PcaModel>,
}

impl Prepared {
    pub fn space(&self, space: Space) -> Result<&DataMatrix> {
        match space {
            Space::Native => Ok(&self.native),
            Space::Reduced => self
                .reduced
                .as_ref()
                .ok_or_else(|| Error::Usage("reduced space requested without PCA components".into())),
        }
    }
}

pub fn prepare(raw: &DataMatrix, cfg: &PipelineConfig) -> Result<Prepared> {
    let mut native = match &cfg.columns {
        Some(cols) => raw.select_columns(cols)?,
        None => raw.clone(),
    };
    if cfg.standardize {
        native = standardize(&native)?;
    }
    let (reduced, pca) = match cfg.pca {
        Some(p) => {
            let model = pca_fit(&native, p)?;
            (Some(pca_transform(&model, &native)?), Some(model))
        }
        None => (None, None),
    };
    Ok(Prepared { native, reduced, pca })
}

/// One seeding followed by Lloyd iterations.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub init: InitMethod,
    pub seed: u64,
    /// Sample indices used as initial centroids, in selection order.
    pub seeds: Vec<usize>,
    /// Discard count, for the proposed method.
    pub m: Option<usize>,
    /// Initial centroids in the seeding space.
    pub initial: CentroidSet,
    pub model: ClusterModel,
    pub metrics: Option<MetricReport>,
}

pub fn run_single(prep: &Prepared, cfg: &PipelineConfig, init: InitMethod, seed: u64) -> Result<RunOutcome> {
    let seed_data = prep.space(cfg.init_space)?;
    let lloyd_data = prep.space(cfg.lloyd_space)?;
    let (seeds, m) = match init {
        InitMethod::Proposed => {
            let params = InitParams {
                hull_shortcut: cfg.hull,
                ..InitParams::new(cfg.k).with_m(cfg.m)
            };
            let s = proposed_seeds(seed_data, &params)?;
            (s.indices, Some(s.m))
        }
        InitMethod::Random => (random_seeds(seed_data.n_samples(), cfg.k, seed)?, None),
    };
    let initial = CentroidSet::from_samples(seed_data, &seeds)?;
    let start = CentroidSet::from_samples(lloyd_data, &seeds)?;
    let model = run_lloyd(lloyd_data, &start, cfg.lloyd)?;

    let metrics = match lloyd_data.labels() {
        Some(truth) => {
            let ccpi = seed_data
                .class_means()
                .filter(|actual| actual.k() == cfg.k)
                .and_then(|actual| ccpi_paired(&actual, &initial).ok());
            Some(evaluate(&model.assignment, truth, ccpi)?)
        }
        None => None,
    };
    Ok(RunOutcome {
        init,
        seed,
        seeds,
        m,
        initial,
        model,
        metrics,
    })
}

/// Runs the configured method: once for the proposed initializer,
/// `cfg.restarts` times for random seeding.
pub fn run_config(prep: &Prepared, cfg: &PipelineConfig) -> Result<Vec<RunOutcome>> {
    cfg.validate()?;
    match cfg.init {
        InitMethod::Proposed => Ok(vec![run_single(prep, cfg, InitMethod::Proposed, cfg.seed)?]),
        InitMethod::Random => (0..cfg.restarts as u64)
            .map(|i| run_single(prep, cfg, InitMethod::Random, cfg.seed.wrapping_add(i)))
            .collect(),
    }
}

/// Loads, prepares, runs and summarises one configuration.
pub fn cluster(cfg: &PipelineConfig) -> Result<(Prepared, Vec<RunOutcome>, BenchReport)> {
    cfg.validate()?;
    let raw = cfg.dataset.load()?;
    let prep = prepare(&raw, cfg)?;
    let runs = run_config(&prep, cfg)?;
    let report = BenchReport::summarise(cfg, prep.native.n_samples(), &runs);
    Ok((prep, runs, report))
}

/// The proposed run and the random-restart summary for one dataset.
pub fn bench_pair(cfg: &PipelineConfig) -> Result<[BenchReport; 2]> {
    cfg.validate()?;
    let raw = cfg.dataset.load()?;
    let prep = prepare(&raw, cfg)?;
    let proposed_cfg = PipelineConfig {
        init: InitMethod::Proposed,
        ..cfg.clone()
    };
    let random_cfg = PipelineConfig {
        init: InitMethod::Random,
        ..cfg.clone()
    };
    let n = prep.native.n_samples();
    let proposed = run_config(&prep, &proposed_cfg)?;
    let random = run_config(&prep, &random_cfg)?;
    Ok([
        BenchReport::summarise(&proposed_cfg, n, &proposed),
        BenchReport::summarise(&random_cfg, n, &random),
    ])
}

/// Fails with the full list of missing files, if any.
pub fn check_builtin_files(builtins: &[Builtin]) -> Result<()> {
    let dir = crate::data::data_dir();
    let missing: Vec<String> = builtins
        .iter()
        .map(|b| b.spec(&dir).path)
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingData(missing.join(", ")))
    }
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}
