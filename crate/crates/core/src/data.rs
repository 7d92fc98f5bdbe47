//! Dataset ingestion and synthetic blob generation.
//!
//! Built-in datasets are read from a data directory resolved in this order:
//! the `HULLMEANS_DATA_DIR` environment variable, `./data` when it exists,
//! and finally the `data/` directory of the source checkout.
//!
//! | name      | file                      | label column | attributes |
//! |-----------|---------------------------|--------------|------------|
//! | iris      | `iris.data`               | last         | 4          |
//! | wine      | `wine.data`               | first        | 13         |
//! | letter    | `letter-recognition.data` | first        | 16         |
//! | ruspini   | `ruspini.csv`             | last         | 2          |
//! | synthetic1| `synthetic1.csv`          | last         | 2          |
//! | synthetic2| `synthetic2.csv`          | last         | 2          |

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

pub const DATA_DIR_ENV: &str = "HULLMEANS_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    First,
    Last,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub name: String,
    pub path: PathBuf,
    pub delimiter: u8,
    pub label: LabelColumn,
    pub has_header: bool,
    /// Keep only rows whose label is listed.
    pub classes: Option<Vec<String>>,
}

impl DatasetSpec {
    pub fn csv(path: impl Into<PathBuf>, label: LabelColumn) -> Self {
        let path = path.into();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self {
            name,
            path,
            delimiter: b',',
            label,
            has_header: false,
            classes: None,
        }
    }

    pub fn with_classes(mut self, classes: &[&str]) -> Self {
        self.classes = Some(classes.iter().map(|s| s.to_string()).collect());
        self
    }
}

/// Reads a delimited numeric table. Rows are kept in file order; labels are
/// numbered in order of first appearance among the kept rows.
pub fn load_delimited(spec: &DatasetSpec) -> Result<DataMatrix> {
    let file = std::fs::File::open(&spec.path).map_err(|e| Error::io(&spec.path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let parse_err = |line: u64, message: String| Error::ParseError {
        path: spec.path.clone(),
        line: line as usize,
        message,
    };

    let mut width = None;
    let mut values = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(parse_err(line, format!("expected {w} fields, found {}", record.len())))
            }
            _ => {}
        }
        let fields: Vec<&str> = record.iter().collect();
        let (label, attrs) = match spec.label {
            LabelColumn::First => (fields.first().copied(), &fields[1..]),
            LabelColumn::Last => (fields.last().copied(), &fields[..fields.len() - 1]),
            LabelColumn::None => (None, &fields[..]),
        };
        if attrs.is_empty() {
            return Err(parse_err(line, "no attribute columns".into()));
        }
        if let (Some(keep), Some(l)) = (&spec.classes, label) {
            if !keep.iter().any(|k| k == l) {
                continue;
            }
        }
        for (col, field) in attrs.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("column {col}: `{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("column {col}: non-finite value")));
            }
            values.push(v);
        }
        if let Some(l) = label {
            let id = match names.iter().position(|n| n == l) {
                Some(id) => id,
                None => {
                    names.push(l.to_string());
                    names.len() - 1
                }
            };
            labels.push(id);
        }
    }

    let Some(width) = width else {
        return Err(Error::DegenerateInput(format!("{}: no samples", spec.path.display())));
    };
    if values.is_empty() {
        return Err(Error::DegenerateInput(format!(
            "{}: no rows left after class filter",
            spec.path.display()
        )));
    }
    let dim = if spec.label == LabelColumn::None { width } else { width - 1 };
    let labels = (spec.label != LabelColumn::None).then_some(labels);
    let matrix = DataMatrix::from_flat(spec.name.clone(), dim, values, labels)?;
    if matrix.labels().is_some() {
        matrix.with_class_names(names)
    } else {
        Ok(matrix)
    }
}

/// Writes comma-separated attributes with the class name in the last column.
pub fn save_csv(data: &DataMatrix, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    write_csv(data, &mut out).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn write_csv(data: &DataMatrix, out: &mut impl Write) -> std::io::Result<()> {
    for (i, row) in data.rows().enumerate() {
        let mut first = true;
        for v in row {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            write!(out, "{v}")?;
        }
        if let Some(labels) = data.labels() {
            write!(out, ",{}", data.class_names()[labels[i]])?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Iris,
    Wine,
    Letter,
    Ruspini,
    Synthetic1,
    Synthetic2,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::Iris,
        Builtin::Wine,
        Builtin::Letter,
        Builtin::Ruspini,
        Builtin::Synthetic1,
        Builtin::Synthetic2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Iris => "iris",
            Builtin::Wine => "wine",
            Builtin::Letter => "letter",
            Builtin::Ruspini => "ruspini",
            Builtin::Synthetic1 => "synthetic1",
            Builtin::Synthetic2 => "synthetic2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name().eq_ignore_ascii_case(name))
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Builtin::Iris => "iris.data",
            Builtin::Wine => "wine.data",
            Builtin::Letter => "letter-recognition.data",
            Builtin::Ruspini => "ruspini.csv",
            Builtin::Synthetic1 => "synthetic1.csv",
            Builtin::Synthetic2 => "synthetic2.csv",
        }
    }

    pub fn spec(self, dir: &Path) -> DatasetSpec {
        let label = match self {
            Builtin::Wine | Builtin::Letter => LabelColumn::First,
            _ => LabelColumn::Last,
        };
        let mut spec = DatasetSpec::csv(dir.join(self.file_name()), label);
        spec.name = self.name().to_string();
        if self == Builtin::Letter {
            spec = spec.with_classes(&["A", "D"]);
        }
        spec
    }

    pub fn load(self) -> Result<DataMatrix> {
        load_delimited(&self.spec(&data_dir()))
    }
}

pub fn data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("data");
    if local.join(Builtin::Iris.file_name()).exists() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Parameters for isotropic Gaussian blobs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub n_samples: usize,
    pub n_clusters: usize,
    pub std: f64,
    pub dim: usize,
    pub seed: u64,
    /// Centers are drawn uniformly from `[low, high]^dim`.
    pub low: f64,
    pub high: f64,
    /// Minimum center separation, in multiples of `std`.
    pub min_separation: f64,
}

impl BlobSpec {
    pub fn new(n_samples: usize, n_clusters: usize, std: f64, seed: u64) -> Self {
        Self {
            n_samples,
            n_clusters,
            std,
            dim: 2,
            seed,
            low: 0.0,
            high: 20.0,
            min_separation: 6.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Usage(format!("invalid blob spec: {msg}")));
        if self.n_clusters == 0 || self.n_samples < self.n_clusters {
            return bad("need 1 <= n_clusters <= n_samples");
        }
        if !(self.std > 0.0 && self.std.is_finite()) {
            return bad("std must be positive");
        }
        if self.dim == 0 {
            return bad("dim must be positive");
        }
        if !(self.low < self.high && self.low.is_finite() && self.high.is_finite()) {
            return bad("center box must satisfy low < high");
        }
        if self.min_separation.is_nan() || self.min_separation < 0.0 {
            return bad("min_separation must be non-negative");
        }
        Ok(())
    }
}

const MAX_CENTER_DRAWS: usize = 100_000;

fn draw_centers(spec: &BlobSpec, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    let min_d2 = (spec.min_separation * spec.std).powi(2);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(spec.n_clusters);
    for _ in 0..MAX_CENTER_DRAWS {
        if centers.len() == spec.n_clusters {
            return Ok(centers);
        }
        let c: Vec<f64> = (0..spec.dim).map(|_| rng.random_range(spec.low..=spec.high)).collect();
        if centers
            .iter()
            .all(|o| o.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() >= min_d2)
        {
            centers.push(c);
        }
    }
    if centers.len() == spec.n_clusters {
        return Ok(centers);
    }
    Err(Error::DegenerateInput(format!(
        "could not place {} centers {}·std apart in the box",
        spec.n_clusters, spec.min_separation
    )))
}

/// Generating centers of [`gen_blobs`], in cluster order.
pub fn blob_centers(spec: &BlobSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    draw_centers(spec, &mut ChaCha8Rng::seed_from_u64(spec.seed))
}

/// Balanced Gaussian blobs; earlier clusters absorb the remainder. Samples
/// are emitted cluster by cluster and labelled with their generating cluster.
pub fn gen_blobs(spec: &BlobSpec) -> Result<DataMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers = draw_centers(spec, &mut rng)?;

    let noise = Normal::new(0.0, spec.std).expect("validated std");
    let base = spec.n_samples / spec.n_clusters;
    let extra = spec.n_samples % spec.n_clusters;
    let mut values = Vec::with_capacity(spec.n_samples * spec.dim);
    let mut labels = Vec::with_capacity(spec.n_samples);
    for (k, center) in centers.iter().enumerate() {
        let size = base + usize::from(k < extra);
        for _ in 0..size {
            values.extend(center.iter().map(|c| c + noise.sample(&mut rng)));
            labels.push(k);
        }
    }
    let name = format!("blobs-n{}-k{}-s{}", spec.n_samples, spec.n_clusters, spec.seed);
    let names = (0..spec.n_clusters).map(|k| k.to_string()).collect();
    DataMatrix::from_flat(name, spec.dim, values, Some(labels))?.with_class_names(names)
}
