//! Standalone SVG scatter plots of 2-D data.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::geometry::convex_hull_2d;
use crate::matrix::{CentroidSet, DataMatrix};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub title: Option<String>,
    pub hull: bool,
    /// Adds a generation-time comment; the only non-deterministic output.
    pub timestamp: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            margin: 24.0,
            title: None,
            hull: false,
            timestamp: true,
        }
    }
}

/// What to draw on top of the samples.
#[derive(Debug, Clone, Copy, Default)]
pub struct Layers<'a> {
    /// Cluster per sample; colors the points.
    pub assignment: Option<&'a [usize]>,
    /// Final centers, drawn as circles with a cross.
    pub centroids: Option<&'a CentroidSet>,
    /// Initial centers, drawn as squares.
    pub seeds: Option<&'a CentroidSet>,
}

struct Frame {
    min: [f64; 2],
    scale: f64,
    opts: (f64, f64, f64),
}

impl Frame {
    fn new(data: &DataMatrix, opts: &PlotOptions) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for row in data.rows() {
            for a in 0..2 {
                min[a] = min[a].min(row[a]);
                max[a] = max[a].max(row[a]);
            }
        }
        let span_x = (max[0] - min[0]).max(f64::MIN_POSITIVE);
        let span_y = (max[1] - min[1]).max(f64::MIN_POSITIVE);
        let inner_w = opts.width - 2.0 * opts.margin;
        let inner_h = opts.height - 2.0 * opts.margin;
        let scale = (inner_w / span_x).min(inner_h / span_y);
        Self {
            min,
            scale,
            opts: (opts.margin, opts.height, opts.margin),
        }
    }

    fn map(&self, p: &[f64]) -> (f64, f64) {
        let (left, height, bottom) = self.opts;
        (
            left + (p[0] - self.min[0]) * self.scale,
            height - bottom - (p[1] - self.min[1]) * self.scale,
        )
    }
}

fn check_2d(found: usize) -> Result<()> {
    if found != 2 {
        return Err(Error::DimensionError { expected: 2, found });
    }
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(data: &DataMatrix, layers: Layers<'_>, opts: &PlotOptions) -> Result<String> {
    check_2d(data.dim())?;
    if data.n_samples() == 0 {
        return Err(Error::DegenerateInput("nothing to plot".into()));
    }
    if let Some(a) = layers.assignment {
        if a.len() != data.n_samples() {
            return Err(Error::ShapeError(format!(
                "{} assignments for {} samples",
                a.len(),
                data.n_samples()
            )));
        }
    }
    for set in [layers.centroids, layers.seeds].into_iter().flatten() {
        check_2d(set.dim())?;
    }
    let hull = if opts.hull { Some(convex_hull_2d(data)?) } else { None };

    let frame = Frame::new(data, opts);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = opts.width,
        h = opts.height
    );
    if opts.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let _ = writeln!(s, "<!-- generated at unix time {secs} -->");
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(title) = &opts.title {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="16" font-family="sans-serif" font-size="13">{}</text>"#,
            opts.margin,
            escape(title)
        );
    }
    if let Some(hull) = &hull {
        let pts: Vec<String> = hull
            .vertices
            .iter()
            .map(|&i| {
                let (x, y) = frame.map(data.row(i));
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let ids: Vec<String> = hull.vertices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            s,
            r##"<polygon class="hull" data-vertices="{}" points="{}" fill="none" stroke="#444" stroke-dasharray="4 3"/>"##,
            ids.join(" "),
            pts.join(" ")
        );
    }
    let _ = writeln!(s, r#"<g class="samples">"#);
    for (i, row) in data.rows().enumerate() {
        let (x, y) = frame.map(row);
        let color = layers.assignment.map_or("#333333", |a| PALETTE[a[i] % PALETTE.len()]);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{color}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    if let Some(seeds) = layers.seeds {
        let _ = writeln!(s, r#"<g class="seeds">"#);
        for c in seeds.centers() {
            let (x, y) = frame.map(c);
            let _ = writeln!(
                s,
                r#"<rect class="seed" x="{:.3}" y="{:.3}" width="10" height="10" fill="none" stroke="black" stroke-width="1.5"/>"#,
                x - 5.0,
                y - 5.0
            );
        }
        let _ = writeln!(s, "</g>");
    }
    if let Some(centroids) = layers.centroids {
        let _ = writeln!(s, r#"<g class="centroids">"#);
        for (j, c) in centroids.centers().enumerate() {
            let (x, y) = frame.map(c);
            let color = PALETTE[j % PALETTE.len()];
            let _ = writeln!(
                s,
                r#"<circle class="centroid" cx="{x:.3}" cy="{y:.3}" r="7" fill="{color}" stroke="black" stroke-width="2"/>"#
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Renders fully before touching the filesystem, so errors leave no file.
pub fn write_svg(path: &Path, data: &DataMatrix, layers: Layers<'_>, opts: &PlotOptions) -> Result<()> {
    let svg = render_svg(data, layers, opts)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
