//! Job files: the symbol `b`, the pair `(u, φ)`, and run options.

use std::path::Path;

use dbr::funcexpr::parse_expr;
use dbr::hb::HbSpace;
use dbr::wco::{AnalysisOptions, SweepOptions};
use dbr::{Complex64, Expr64, HbSpace64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `b` as an expression or as numerator and denominator coefficients.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Symbol {
    Expr(String),
    Coeffs { num: Vec<[f64; 2]>, den: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobOptions {
    pub max_level_k: u32,
    pub angles: usize,
    /// Initial boundary nodes; the sweep grid starts from `quad_points / 64`
    /// cells.
    pub quad_points: usize,
    pub matrix_sizes: Vec<usize>,
    pub delta: f64,
    pub seed: u64,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            max_level_k: 12,
            angles: 64,
            quad_points: 4096,
            matrix_sizes: vec![16, 32, 64, 128],
            delta: 0.05,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub b: Symbol,
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub options: JobOptions,
}

/// Command-line overrides of the job options.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub levels: Option<u32>,
    pub angles: Option<usize>,
    pub quad: Option<usize>,
    pub seed: Option<u64>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read job file {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("job file {}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: Overrides) {
        let opts = &mut self.options;
        opts.max_level_k = o.levels.unwrap_or(opts.max_level_k);
        opts.angles = o.angles.unwrap_or(opts.angles);
        opts.quad_points = o.quad.unwrap_or(opts.quad_points);
        opts.seed = o.seed.unwrap_or(opts.seed);
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let o = &self.options;
        let bad = |m: &str| Err(CliError::Invalid(m.to_string()));
        if o.max_level_k == 0 || o.max_level_k > 40 {
            return bad("max_level_k must lie in 1..=40");
        }
        if o.angles == 0 {
            return bad("angles must be positive");
        }
        if o.quad_points < 256 || !o.quad_points.is_multiple_of(256) {
            return bad("quad_points must be a positive multiple of 256");
        }
        if o.matrix_sizes.is_empty() || o.matrix_sizes.contains(&0) {
            return bad("matrix_sizes must be a nonempty list of positive sizes");
        }
        if !(o.delta > 0.0 && o.delta < 1.0) {
            return bad("delta must lie in (0, 1)");
        }
        Ok(())
    }

    pub fn space(&self) -> Result<HbSpace64, CliError> {
        let invalid = |e: dbr::Error| CliError::Invalid(format!("b: {e}"));
        match &self.b {
            Symbol::Expr(s) => HbSpace::from_expr(&parse(s, "b")?).map_err(invalid),
            Symbol::Coeffs { num, den } => {
                let c = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                HbSpace::from_coeffs(c(num), c(den)).map_err(invalid)
            }
        }
    }

    /// `(u, φ)`; both are required by every subcommand except `mate`.
    pub fn pair(&self) -> Result<(Expr64, Expr64), CliError> {
        let get = |v: &Option<String>, name: &str| {
            v.as_deref().ok_or_else(|| CliError::Invalid(format!("job file has no `{name}`"))).and_then(|s| parse(s, name))
        };
        Ok((get(&self.u, "u")?, get(&self.phi, "phi")?))
    }

    pub fn analysis_options(&self) -> AnalysisOptions<f64> {
        let o = &self.options;
        let mut sweep = SweepOptions { levels: o.max_level_k, angles: o.angles, ..SweepOptions::default() };
        sweep.grid.base_cells = o.quad_points / 64;
        AnalysisOptions { sweep, matrix_sizes: o.matrix_sizes.clone(), delta: o.delta }
    }
}

fn parse(s: &str, name: &str) -> Result<Expr64, CliError> {
    parse_expr(s).map_err(|e| CliError::Invalid(format!("{name}: {e}")))
}
