//! Weighted composition operators `W_{u,φ} f = u·(f∘φ)` on H(b).
//!
//! Boundedness, compactness and the Hilbert–Schmidt property are decided
//! from the transferred H² weight `w` and cross-checked against finite
//! truncations of the operator matrix in an orthonormal basis of H(b).

mod adc;
mod hs;
mod matrix;
mod profile;
mod sweep;
mod weight;

pub use adc::{adc_quotient, check_caratheodory, AdcResult, CaratheodoryCheck, ConstraintOutcome};
pub use hs::{hilbert_schmidt_test, HsResult, SumStatus, HS_SERIES_TERMS};
pub use matrix::{
    norm_trend, operator_norm_estimate, operator_norm_estimate_h2, wco_matrix, wco_matrix_h2, MatrixTrend, NormEstimate,
    OperatorMatrix, DEFAULT_MATRIX_SIZES,
};
pub use profile::{check_nc, check_self_map, symbol_profile, NcVerdict, SymbolProfile, UOrder, ZetaClass, ZetaRecord};
pub use sweep::{
    compactness_sweep, compactness_verdict, criterion_sweep, criterion_verdict, essential_bound_check, sweep_table,
    CompactVerdict, CriterionVerdict, EssentialBound, GridStats, SweepOptions, SweepRow, SweepTable,
};
pub use weight::{build_weight, weight_in_h2, Weight};

use serde::{Deserialize, Serialize};

use crate::funcexpr::Expr;
use crate::hardy::{hinf_sup, Membership, MembershipVerdict};
use crate::hb::HbSpace;
use crate::scalar::{cst, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions<T> {
    pub sweep: SweepOptions<T>,
    pub matrix_sizes: Vec<usize>,
    /// `δ` of the essential-bound set `{|φ| ≥ 1 - δ}`.
    pub delta: T,
}

impl<T: Real> Default for AnalysisOptions<T> {
    fn default() -> Self {
        AnalysisOptions { sweep: SweepOptions::default(), matrix_sizes: DEFAULT_MATRIX_SIZES.to_vec(), delta: cst(0.05) }
    }
}

/// Evidence gathered by [`classify`] and the verdicts drawn from it.
#[derive(Clone, Debug)]
pub struct AnalysisReport<T> {
    /// `None` when `φ` is not a self-map of the disk.
    pub profile: Option<SymbolProfile<T>>,
    pub nc: Option<NcVerdict>,
    pub caratheodory: Vec<CaratheodoryCheck<T>>,
    pub weight: Option<Weight<T>>,
    pub w_in_h2: Option<MembershipVerdict<T>>,
    pub w_in_hinf: Option<MembershipVerdict<T>>,
    pub u_in_hinf: Option<MembershipVerdict<T>>,
    pub criterion: Option<SweepTable<T>>,
    pub criterion_verdict: Option<CriterionVerdict>,
    pub compactness_verdict: Option<CompactVerdict>,
    pub essential_bound: Option<EssentialBound<T>>,
    pub hs: Option<HsResult<T>>,
    pub matrix: Option<NormEstimate<T>>,
    pub bounded: Verdict,
    pub compact: Verdict,
    pub hilbert_schmidt: Verdict,
    pub notes: Vec<String>,
}

impl<T> AnalysisReport<T> {
    fn empty() -> Self {
        AnalysisReport {
            profile: None,
            nc: None,
            caratheodory: Vec::new(),
            weight: None,
            w_in_h2: None,
            w_in_hinf: None,
            u_in_hinf: None,
            criterion: None,
            criterion_verdict: None,
            compactness_verdict: None,
            essential_bound: None,
            hs: None,
            matrix: None,
            bounded: Verdict::Inconclusive,
            compact: Verdict::Inconclusive,
            hilbert_schmidt: Verdict::Inconclusive,
            notes: Vec::new(),
        }
    }

    pub fn is_conclusive(&self) -> bool {
        [self.bounded, self.compact, self.hilbert_schmidt].iter().all(|v| *v != Verdict::Inconclusive)
    }
}

/// Inputs of the decision function, all taken from the evidence tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionInputs {
    pub u_is_zero: bool,
    pub self_map: bool,
    /// Some necessary condition for boundedness failed.
    pub necessary_failure: bool,
    pub criterion: Option<CriterionVerdict>,
    pub matrix: Option<MatrixTrend>,
    pub compactness: Option<CompactVerdict>,
    pub hs: Option<Verdict>,
}

/// `(bounded, compact, hilbert_schmidt)`.
pub fn decide(d: &DecisionInputs) -> (Verdict, Verdict, Verdict) {
    use Verdict::*;
    if !d.self_map {
        return (Inconclusive, Inconclusive, Inconclusive);
    }
    if d.u_is_zero {
        return (Yes, Yes, Yes);
    }
    let bounded = if d.necessary_failure {
        No
    } else {
        match (d.criterion, d.matrix) {
            (Some(CriterionVerdict::Bounded), Some(MatrixTrend::BoundedConsistent)) => Yes,
            (Some(CriterionVerdict::Unbounded), Some(MatrixTrend::UnboundedConsistent)) => No,
            _ => Inconclusive,
        }
    };
    if bounded == No {
        return (No, No, No);
    }
    let hs = d.hs.unwrap_or(Inconclusive);
    let compact = match d.compactness {
        Some(CompactVerdict::Compact) => Yes,
        Some(CompactVerdict::NotCompact) => No,
        _ if hs == Yes => Yes,
        _ => Inconclusive,
    };
    (bounded, compact, hs)
}

impl<T: Real> AnalysisReport<T> {
    pub fn decision_inputs(&self) -> DecisionInputs {
        let necessary_failure = self.nc == Some(NcVerdict::Fail)
            || self.caratheodory.iter().any(|c| c.outcome == ConstraintOutcome::Violation)
            || self.w_in_h2.as_ref().is_some_and(|v| v.status == Membership::Outside)
            || self.profile.as_ref().is_some_and(|p| {
                p.h1.status == Membership::Outside || p.h2.status == Membership::Outside
            });
        DecisionInputs {
            u_is_zero: self.profile.as_ref().is_some_and(|p| p.u_is_zero),
            self_map: self.profile.is_some(),
            necessary_failure,
            criterion: self.criterion_verdict,
            matrix: self.matrix.as_ref().map(|m| m.trend),
            compactness: self.compactness_verdict,
            hs: self.hs.as_ref().map(|h| h.verdict),
        }
    }
}

/// Run the full pipeline: profile, necessary conditions, weight, criterion
/// sweep, matrix oracle, then compactness and Hilbert–Schmidt tests.
pub fn classify<T: Real>(space: &HbSpace<T>, u: &Expr<T>, phi: &Expr<T>, opts: &AnalysisOptions<T>) -> AnalysisReport<T> {
    let mut rep = AnalysisReport::empty();
    let profile = match symbol_profile(space, u, phi) {
        Ok(p) => p,
        Err(e) => {
            rep.notes.push(format!("phi rejected: {e}"));
            return rep;
        }
    };
    if profile.u_is_zero {
        rep.notes.push("u is identically zero: W is the zero operator".into());
        rep.profile = Some(profile);
        finish(&mut rep);
        return rep;
    }
    for (name, v) in [("u", &profile.h1), ("u*phi", &profile.h2)] {
        match v.status {
            Membership::Outside => rep.notes.push(format!("{name} is not in H(b)")),
            Membership::Inconclusive => rep.notes.push(format!("membership of {name} in H(b) is inconclusive")),
            Membership::Inside => {}
        }
    }
    let nc = check_nc(&profile);
    if nc == NcVerdict::Fail {
        rep.notes.push("condition (NC) fails: phi maps a boundary zero to the circle outside Z(a)".into());
    }
    rep.nc = Some(nc);
    rep.caratheodory = check_caratheodory(space, &profile, phi);
    if rep.caratheodory.iter().any(|c| c.outcome == ConstraintOutcome::Violation) {
        rep.notes.push("angular-derivative constraint violated at a boundary zero".into());
    }

    let weight = build_weight(space, u, phi, &profile);
    let w_h2 = weight_in_h2(&weight.w);
    let u_inf = hinf_sup(u).unwrap_or_else(|e| MembershipVerdict::inconclusive(e.to_string()));
    if u_inf.status == Membership::Outside {
        rep.notes.push("u is not bounded".into());
    }
    rep.w_in_hinf = Some(hinf_sup(&weight.w).unwrap_or_else(|e| MembershipVerdict::inconclusive(e.to_string())));
    rep.u_in_hinf = Some(u_inf);
    let w_outside = w_h2.status == Membership::Outside;
    if w_outside {
        rep.notes.push("w is not in H2".into());
    }
    rep.w_in_h2 = Some(w_h2);
    rep.profile = Some(profile);

    if rep.decision_inputs().necessary_failure {
        rep.weight = Some(weight);
        finish(&mut rep);
        return rep;
    }

    let table = sweep_table(&weight.w, phi, &opts.sweep);
    rep.criterion_verdict = Some(criterion_verdict(&table));
    rep.essential_bound = Some(essential_bound_check(&weight.w, phi, opts.delta));
    let est = operator_norm_estimate(space, u, phi, &opts.matrix_sizes);
    rep.matrix = Some(est);
    let partial = rep.decision_inputs();
    let (bounded, _, _) = decide(&partial);
    if bounded == Verdict::Inconclusive {
        rep.notes.push(format!(
            "criterion verdict {:?} and matrix trend {:?} do not agree",
            rep.criterion_verdict.expect("set"),
            rep.matrix.as_ref().expect("set").trend
        ));
    }
    if bounded != Verdict::No {
        rep.compactness_verdict = Some(compactness_verdict(&table));
        rep.hs = Some(hilbert_schmidt_test(&weight.w, phi));
    }
    rep.criterion = Some(table);
    rep.weight = Some(weight);
    finish(&mut rep);
    rep
}

fn finish<T: Real>(rep: &mut AnalysisReport<T>) {
    let (b, c, h) = decide(&rep.decision_inputs());
    rep.bounded = b;
    rep.compact = c;
    rep.hilbert_schmidt = h;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn f1() -> HbSpace<f64> {
        HbSpace::from_expr(&parse_expr("(1+z)/2").unwrap()).unwrap()
    }

    fn run(u: &str, phi: &str) -> AnalysisReport<f64> {
        classify(&f1(), &parse_expr(u).unwrap(), &parse_expr(phi).unwrap(), &AnalysisOptions::default())
    }

    #[test]
    fn half_disk_is_hilbert_schmidt() {
        let r = run("z-1", "z/2");
        assert_eq!((r.bounded, r.compact, r.hilbert_schmidt), (Verdict::Yes, Verdict::Yes, Verdict::Yes), "{:?}", r.notes);
    }

    #[test]
    fn reflection_is_unbounded() {
        let r = run("1", "-z");
        assert_eq!(r.bounded, Verdict::No);
        assert_eq!(r.nc, Some(NcVerdict::Fail));
    }

    #[test]
    fn zero_weight_short_circuits() {
        let r = run("0", "z");
        assert_eq!((r.bounded, r.compact, r.hilbert_schmidt), (Verdict::Yes, Verdict::Yes, Verdict::Yes));
    }

    #[test]
    fn non_self_map_is_inconclusive() {
        let r = run("1", "2*z");
        assert_eq!(r.bounded, Verdict::Inconclusive);
        assert!(r.profile.is_none() && !r.notes.is_empty());
    }

    #[test]
    fn decision_table() {
        let base = DecisionInputs {
            u_is_zero: false,
            self_map: true,
            necessary_failure: false,
            criterion: Some(CriterionVerdict::Bounded),
            matrix: Some(MatrixTrend::BoundedConsistent),
            compactness: Some(CompactVerdict::NotCompact),
            hs: Some(Verdict::No),
        };
        assert_eq!(decide(&base), (Verdict::Yes, Verdict::No, Verdict::No));
        let d = DecisionInputs { matrix: Some(MatrixTrend::Inconclusive), ..base };
        assert_eq!(decide(&d).0, Verdict::Inconclusive);
        let d = DecisionInputs { necessary_failure: true, ..base };
        assert_eq!(decide(&d), (Verdict::No, Verdict::No, Verdict::No));
    }
}
