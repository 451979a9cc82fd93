//! Run configuration: tolerances, grid specification and point sampling.

use anyhow::{bail, Context, Result};
use hkahler_core::ChartPoint64;

pub const DEFAULT_GRID: &str = "0.1:1:5,-0.5:0.5:5,-0.7:0.7:5,-0.7:0.7:5";

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerance: f64,
    pub jet_order: usize,
    pub seed: u64,
    pub rho: Vec<f64>,
    pub jobs: usize,
    pub grid: GridSpec,
    pub grid_text: String,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance <= 0.0 || self.tolerance.is_nan() {
            bail!("tolerance must be positive");
        }
        if self.jet_order < 4 {
            bail!("jet order must be at least 4");
        }
        if self.grid.is_empty() {
            bail!("grid is empty");
        }
        if self.rho.is_empty() {
            bail!("rho list is empty");
        }
        Ok(())
    }
}

/// Either an axis-aligned box product or an explicit point list.
#[derive(Debug, Clone)]
pub enum GridSpec {
    Box { axes: [Axis; 4] },
    Explicit(Vec<ChartPoint64>),
}

#[derive(Debug, Clone, Copy)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.lo + step * k as f64).collect()
    }
}

impl GridSpec {
    /// Parses `lo:hi:n,lo:hi:n,lo:hi:n,lo:hi:n` over (Re z¹, Im z¹, Re z², Im z²).
    pub fn parse(text: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            bail!("grid spec needs four comma-separated axes, got {}", parts.len());
        }
        let mut axes = [Axis { lo: 0.0, hi: 0.0, count: 1 }; 4];
        for (i, part) in parts.iter().enumerate() {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() != 3 {
                bail!("axis `{part}` must be lo:hi:count");
            }
            let lo: f64 = fields[0].parse().with_context(|| format!("axis `{part}`"))?;
            let hi: f64 = fields[1].parse().with_context(|| format!("axis `{part}`"))?;
            let count: usize = fields[2].parse().with_context(|| format!("axis `{part}`"))?;
            if count == 0 {
                bail!("axis `{part}` has zero points");
            }
            axes[i] = Axis { lo, hi, count };
        }
        Ok(GridSpec::Box { axes })
    }

    pub fn from_points(points: Vec<ChartPoint64>) -> GridSpec {
        GridSpec::Explicit(points)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            GridSpec::Box { axes } => axes.iter().any(|a| a.count == 0),
            GridSpec::Explicit(points) => points.is_empty(),
        }
    }

    /// Row-major enumeration (Re z¹ outermost, Im z² innermost).
    pub fn points(&self) -> Vec<ChartPoint64> {
        match self {
            GridSpec::Explicit(points) => points.clone(),
            GridSpec::Box { axes } => {
                let [a, b, c, d] = axes;
                let mut out =
                    Vec::with_capacity(a.count * b.count * c.count * d.count);
                for re1 in a.values() {
                    for im1 in b.values() {
                        for re2 in c.values() {
                            for im2 in d.values() {
                                out.push(ChartPoint64::from_f64(re1, im1, re2, im2));
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

/// Parses `re1,im1,re2,im2`.
pub fn parse_point(text: &str) -> Result<ChartPoint64> {
    let fields: Vec<&str> = text.split(',').collect();
    if fields.len() != 4 {
        bail!("point `{text}` must be re1,im1,re2,im2");
    }
    let mut vals = [0.0f64; 4];
    for (i, f) in fields.iter().enumerate() {
        vals[i] = f.trim().parse().with_context(|| format!("point `{text}`"))?;
    }
    Ok(ChartPoint64::from_f64(vals[0], vals[1], vals[2], vals[3]))
}

/// Parses a comma list of reals (for `--rho`).
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .with_context(|| format!("bad real `{f}`"))
        })
        .collect()
}
