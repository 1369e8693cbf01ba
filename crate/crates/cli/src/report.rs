//! The `report.json` document.

use dbr::hardy::MembershipVerdict;
use dbr::hb::BoundaryZero;
use dbr::wco::{
    AnalysisReport, CaratheodoryCheck, CompactVerdict, CriterionVerdict, DecisionInputs, EssentialBound,
    GridStats, HsResult, NcVerdict, NormEstimate, SweepTable, SymbolProfile, Verdict,
};
use dbr::{Complex64, HbSpace64, Poly64};
use serde::Serialize;

use crate::job::{JobConfig, JobOptions, Symbol};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Serialize)]
pub struct Inputs<'a> {
    pub b: &'a Symbol,
    pub u: &'a str,
    pub phi: &'a str,
    pub options: &'a JobOptions,
}

#[derive(Serialize)]
pub struct Rational {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

#[derive(Serialize)]
pub struct HbSection<'a> {
    /// Reduced `b`.
    pub b: Rational,
    pub mate: Rational,
    /// Coefficients of `a = ∏(z - ζᵢ)^{mᵢ}`.
    pub a: Vec<Complex64>,
    pub zeros: &'a [BoundaryZero<f64>],
    pub n: usize,
}

impl<'a> HbSection<'a> {
    pub fn new(space: &'a HbSpace64) -> Self {
        let c = |p: &Poly64| p.coeffs().to_vec();
        HbSection {
            b: Rational { num: c(&space.b.num), den: c(&space.b.den) },
            mate: Rational { num: c(&space.mate.num), den: c(&space.mate.den) },
            a: c(&space.a),
            zeros: &space.zeros,
            n: space.n,
        }
    }
}

#[derive(Serialize)]
pub struct WeightSection {
    pub w: String,
    pub w_tilde: String,
    pub q: Vec<Complex64>,
}

#[derive(Serialize)]
pub struct Verdicts {
    pub bounded: Verdict,
    pub compact: Verdict,
    pub hilbert_schmidt: Verdict,
}

#[derive(Serialize)]
pub struct RowSummary {
    pub k: u32,
    pub r: f64,
    pub max: f64,
    pub argmax: usize,
    pub failed: bool,
}

#[derive(Serialize)]
pub struct SweepSummary<V> {
    pub verdict: Option<V>,
    pub levels: usize,
    pub angles: usize,
    pub rows: Vec<RowSummary>,
    pub grid: GridStats<f64>,
}

impl<V> SweepSummary<V> {
    pub fn new(table: &SweepTable<f64>, verdict: Option<V>) -> Self {
        SweepSummary {
            verdict,
            levels: table.rows.len(),
            angles: table.angles,
            rows: table
                .rows
                .iter()
                .map(|r| RowSummary { k: r.k, r: r.r, max: r.max, argmax: r.argmax, failed: r.failed })
                .collect(),
            grid: table.grid,
        }
    }
}

#[derive(Serialize)]
pub struct HsSection<'a> {
    /// The integral when it converged.
    pub value: Option<f64>,
    /// `S_{n-1}` after the last term.
    pub series_value: Option<f64>,
    #[serde(flatten)]
    pub result: &'a HsResult<f64>,
}

impl<'a> HsSection<'a> {
    pub fn new(result: &'a HsResult<f64>) -> Self {
        HsSection { value: result.integral, series_value: result.series.last().copied(), result }
    }
}

#[derive(Serialize)]
pub struct Evidence<'a> {
    pub decision_inputs: DecisionInputs,
    pub nc: Option<NcVerdict>,
    pub caratheodory: &'a [CaratheodoryCheck<f64>],
    pub w_in_h2: Option<&'a MembershipVerdict<f64>>,
    pub w_in_hinf: Option<&'a MembershipVerdict<f64>>,
    pub u_in_hinf: Option<&'a MembershipVerdict<f64>>,
    pub criterion_sweep: Option<SweepSummary<CriterionVerdict>>,
    pub compactness_sweep: Option<SweepSummary<CompactVerdict>>,
    pub essential_bound: Option<&'a EssentialBound<f64>>,
    pub hs: Option<HsSection<'a>>,
    pub matrix: Option<&'a NormEstimate<f64>>,
}

#[derive(Serialize)]
pub struct ReportFile<'a> {
    pub schema_version: &'static str,
    pub inputs: Inputs<'a>,
    pub hb: HbSection<'a>,
    pub profile: Option<&'a SymbolProfile<f64>>,
    pub weight: Option<WeightSection>,
    pub verdicts: Verdicts,
    pub evidence: Evidence<'a>,
    pub notes: &'a [String],
}

impl<'a> ReportFile<'a> {
    pub fn new(job: &'a JobConfig, space: &'a HbSpace64, rep: &'a AnalysisReport<f64>) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            inputs: Inputs {
                b: &job.b,
                u: job.u.as_deref().unwrap_or_default(),
                phi: job.phi.as_deref().unwrap_or_default(),
                options: &job.options,
            },
            hb: HbSection::new(space),
            profile: rep.profile.as_ref(),
            weight: rep.weight.as_ref().map(|w| WeightSection {
                w: w.w.to_string(),
                w_tilde: w.w_tilde.to_string(),
                q: w.q.coeffs().to_vec(),
            }),
            verdicts: Verdicts { bounded: rep.bounded, compact: rep.compact, hilbert_schmidt: rep.hilbert_schmidt },
            evidence: Evidence {
                decision_inputs: rep.decision_inputs(),
                nc: rep.nc,
                caratheodory: &rep.caratheodory,
                w_in_h2: rep.w_in_h2.as_ref(),
                w_in_hinf: rep.w_in_hinf.as_ref(),
                u_in_hinf: rep.u_in_hinf.as_ref(),
                criterion_sweep: rep.criterion.as_ref().map(|t| SweepSummary::new(t, rep.criterion_verdict)),
                compactness_sweep: rep.criterion.as_ref().map(|t| SweepSummary::new(t, rep.compactness_verdict)),
                essential_bound: rep.essential_bound.as_ref(),
                hs: rep.hs.as_ref().map(HsSection::new),
                matrix: rep.matrix.as_ref(),
            },
            notes: &rep.notes,
        }
    }
}

/// Output of `dbr mate`.
#[derive(Serialize)]
pub struct MateReport<'a> {
    pub schema_version: &'static str,
    pub hb: HbSection<'a>,
}
