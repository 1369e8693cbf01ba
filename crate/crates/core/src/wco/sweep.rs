use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::funcexpr::Expr;
use crate::hardy::{BoundaryGrid, GridOptions};
use crate::scalar::{cis, cst, dyadic_radius, from_usize, two_pi, Real, C};

const STABLE_REL: f64 = 0.05;
const GROWTH: f64 = 1.5;
const DECAY: f64 = 1e-3;
const FLOOR: f64 = 1e-6;
/// Dropped boundary measure above which rows are flagged.
const FAILED_MEASURE: f64 = 1e-9;

/// Radius levels and angles of the `λ` grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions<T> {
    pub levels: u32,
    pub angles: usize,
    pub grid: GridOptions<T>,
}

impl<T: Real> Default for SweepOptions<T> {
    fn default() -> Self {
        SweepOptions { levels: 12, angles: 64, grid: GridOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub k: u32,
    pub r: T,
    /// Criterion integral at `λ = r·e^{2πij/angles}`.
    pub values: Vec<T>,
    pub max: T,
    pub argmax: usize,
    /// Set when the boundary grid dropped more than `1e-9` of the circle or
    /// ran out of node budget.
    pub failed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridStats<T> {
    pub nodes: usize,
    pub cells: usize,
    pub max_depth: u32,
    pub failed_measure: T,
    pub budget_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable<T> {
    pub angles: usize,
    pub rows: Vec<SweepRow<T>>,
    pub grid: GridStats<T>,
}

impl<T: Real> SweepTable<T> {
    /// `max_{i ≤ k} row_i`.
    pub fn running_sup(&self) -> Vec<T> {
        let mut s = T::zero();
        self.rows
            .iter()
            .map(|r| {
                s = s.max(r.max);
                s
            })
            .collect()
    }

    pub fn sup(&self) -> T {
        self.running_sup().last().copied().unwrap_or_else(T::zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionVerdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactVerdict {
    Compact,
    NotCompact,
    Inconclusive,
}

/// `(1 - |λ|²) ∫ |w|²/|1 - λ̄φ|² dm` on `λ = (1 - 2^{-k}) e^{iθ}`.
pub fn sweep_table<T: Real>(w: &Expr<T>, phi: &Expr<T>, opts: &SweepOptions<T>) -> SweepTable<T> {
    let mut gopts = opts.grid;
    gopts.kernel_floor = gopts.kernel_floor.min(cst(2f64.powi(-(opts.levels as i32))));
    let grid = BoundaryGrid::build(w, phi, &gopts);
    let failed = grid.failed_measure > cst(FAILED_MEASURE) || grid.budget_hit;
    let dt = two_pi::<T>() / from_usize(opts.angles);
    let rows = (1..=opts.levels)
        .into_par_iter()
        .map(|k| {
            let r = dyadic_radius::<T>(k);
            let values: Vec<T> = (0..opts.angles)
                .map(|j| grid.criterion_integral(cis(dt * from_usize(j)) * r))
                .collect();
            let (argmax, max) = values
                .iter()
                .copied()
                .enumerate()
                .fold((0, T::zero()), |(ai, am), (i, v)| if v > am { (i, v) } else { (ai, am) });
            SweepRow { k, r, values, max, argmax, failed }
        })
        .collect();
    SweepTable {
        angles: opts.angles,
        rows,
        grid: GridStats {
            nodes: grid.len(),
            cells: grid.cells,
            max_depth: grid.max_depth,
            failed_measure: grid.failed_measure,
            budget_hit: grid.budget_hit,
        },
    }
}

/// Bounded when the running sup moves by less than 5% over the last three
/// levels; unbounded when the row maximum grows by a factor of at least 1.5
/// at each of the last three levels.
pub fn criterion_verdict<T: Real>(table: &SweepTable<T>) -> CriterionVerdict {
    let rows = &table.rows;
    let n = rows.len();
    if n < 4 {
        return CriterionVerdict::Inconclusive;
    }
    let sup = table.running_sup();
    let top = rows.iter().enumerate().fold(0, |b, (i, r)| if r.max > rows[b].max { i } else { b });
    if rows[top].failed {
        return CriterionVerdict::Inconclusive;
    }
    let growing = (n - 3..n).all(|i| rows[i].max >= cst::<T>(GROWTH) * rows[i - 1].max && rows[i].max > T::zero());
    if growing {
        return CriterionVerdict::Unbounded;
    }
    if sup[n - 1] <= T::zero() || sup[n - 1] - sup[n - 4] < cst::<T>(STABLE_REL) * sup[n - 1] {
        return CriterionVerdict::Bounded;
    }
    CriterionVerdict::Inconclusive
}

/// Compact when the row maxima are nonincreasing and the last one is below
/// `1e-3` of the first; not compact when the last three agree within 5% and
/// exceed `1e-6`.
pub fn compactness_verdict<T: Real>(table: &SweepTable<T>) -> CompactVerdict {
    let rows = &table.rows;
    let n = rows.len();
    if n < 3 {
        return CompactVerdict::Inconclusive;
    }
    if rows.iter().any(|r| r.failed) {
        return CompactVerdict::Inconclusive;
    }
    let (first, last) = (rows[0].max, rows[n - 1].max);
    if first <= T::zero() && last <= T::zero() {
        return CompactVerdict::Compact;
    }
    let slack = T::one() + cst(1e-9);
    let monotone = rows.windows(2).all(|w| w[1].max <= w[0].max * slack);
    if monotone && last < cst::<T>(DECAY) * first {
        return CompactVerdict::Compact;
    }
    let tail = &rows[n - 3..];
    let hi = tail.iter().fold(T::zero(), |m, r| m.max(r.max));
    let lo = tail.iter().fold(T::infinity(), |m, r| m.min(r.max));
    if lo > cst(FLOOR) && hi - lo < cst::<T>(STABLE_REL) * hi {
        return CompactVerdict::NotCompact;
    }
    CompactVerdict::Inconclusive
}

pub fn criterion_sweep<T: Real>(w: &Expr<T>, phi: &Expr<T>, opts: &SweepOptions<T>) -> (SweepTable<T>, CriterionVerdict) {
    let t = sweep_table(w, phi, opts);
    let v = criterion_verdict(&t);
    (t, v)
}

pub fn compactness_sweep<T: Real>(w: &Expr<T>, phi: &Expr<T>, opts: &SweepOptions<T>) -> (SweepTable<T>, CompactVerdict) {
    let t = sweep_table(w, phi, opts);
    let v = compactness_verdict(&t);
    (t, v)
}

/// `sup |w|` over boundary samples with `|φ| ≥ 1 - δ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EssentialBound<T> {
    pub delta: T,
    /// `None` when the set is empty on every grid.
    pub sup: Option<T>,
    /// `(grid size, sup on that grid)`.
    pub evidence: Vec<(usize, Option<T>)>,
    pub samples_in_set: usize,
    /// The last two grid sups agree within 1%.
    pub stabilized: bool,
    pub vacuous: bool,
}

/// Sup of `|w|` on `A_δ = {ζ : |φ(ζ)| ≥ 1 - δ}` over offset uniform grids of
/// `2^10 .. 2^16` points; nodes where `w` or `φ` fail to evaluate are skipped.
pub fn essential_bound_check<T: Real>(w: &Expr<T>, phi: &Expr<T>, delta: T) -> EssentialBound<T> {
    let threshold = T::one() - delta;
    let sizes = [1usize << 10, 1 << 12, 1 << 14, 1 << 16];
    let evidence: Vec<(usize, Option<T>, usize)> = sizes
        .par_iter()
        .map(|&n| {
            let step = two_pi::<T>() / from_usize(n);
            let mut sup: Option<T> = None;
            let mut count = 0;
            for j in 0..n {
                let z: C<T> = cis(step * (from_usize::<T>(j) + cst(0.5)));
                let (Ok(p), Ok(wv)) = (phi.eval(z), w.eval(z)) else { continue };
                if p.norm() >= threshold {
                    count += 1;
                    sup = Some(sup.map_or(wv.norm(), |s: T| s.max(wv.norm())));
                }
            }
            (n, sup, count)
        })
        .collect();
    let samples_in_set = evidence.last().map_or(0, |e| e.2);
    let sups: Vec<Option<T>> = evidence.iter().map(|e| e.1).collect();
    let vacuous = sups.iter().all(Option::is_none);
    let sup = sups.iter().flatten().fold(None, |m: Option<T>, &s| Some(m.map_or(s, |m| m.max(s))));
    let stabilized = match (sups[sups.len() - 2], sups[sups.len() - 1]) {
        (Some(a), Some(b)) => b.is_finite() && (b - a).abs() <= cst::<T>(0.01) * b.max(T::min_positive_value()),
        (None, None) => true,
        _ => false,
    };
    EssentialBound {
        delta,
        sup,
        evidence: evidence.into_iter().map(|(n, s, _)| (n, s)).collect(),
        samples_in_set,
        stabilized,
        vacuous,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    fn e(s: &str) -> Expr<f64> {
        parse_expr(s).unwrap()
    }

    #[test]
    fn identity_rows_are_one() {
        let (t, v) = criterion_sweep(&e("1"), &e("z"), &SweepOptions::default());
        assert_eq!(t.rows.len(), 12);
        for row in &t.rows {
            assert_eq!(row.values.len(), 64);
            assert!(row.values.iter().all(|x| (x - 1.0).abs() < 1e-6), "k = {}", row.k);
        }
        assert_eq!(v, CriterionVerdict::Bounded);
        assert_eq!(compactness_verdict(&t), CompactVerdict::NotCompact);
    }

    #[test]
    fn unbounded_example() {
        let (_, v) = criterion_sweep(&e("(1-z)^(-1/2)"), &e("1-(1-z)^(1/2)"), &SweepOptions::default());
        assert_eq!(v, CriterionVerdict::Unbounded);
    }

    #[test]
    fn constant_weight_is_compact() {
        let (t, v) = compactness_sweep(&e("-0.7"), &e("0.3"), &SweepOptions::default());
        let want = |r: f64| 0.49 * (1.0 - r * r) / (1.0 - 0.3 * r).powi(2);
        for row in &t.rows {
            assert!((row.max - want(row.r)).abs() < 1e-12 * want(row.r).max(1.0));
        }
        assert_eq!(v, CompactVerdict::Compact);
        let (_, v) = compactness_sweep(&e("0"), &e("0.3"), &SweepOptions::default());
        assert_eq!(v, CompactVerdict::Compact);
    }

    #[test]
    fn essential_bound_examples() {
        let b = essential_bound_check(&e("((1-z)/(1+z))^(1/4)"), &e("1-(1-z)^(1/2)"), 0.1);
        assert!(b.sup.unwrap().is_finite() && b.stabilized && !b.vacuous);
        let b = essential_bound_check(&e("z"), &e("0"), 0.5);
        assert!(b.vacuous && b.sup.is_none());
        let b = essential_bound_check(&e("1"), &e("z"), 0.01);
        assert!((b.sup.unwrap() - 1.0).abs() < 1e-15);
    }
}
