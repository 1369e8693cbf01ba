//! Quadrature on the unit circle with respect to normalized arc length.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcexpr::Expr;
use crate::scalar::{cis, cst, from_usize, to_f64, two_pi, Real, C};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Gauss–Kronrod nodes of `[a, b]` with Kronrod and Gauss weights
/// (Gauss weight zero at the Kronrod-only nodes).
pub(crate) fn gk15<T: Real>(a: T, b: T) -> [(T, T, T); 15] {
    let c = (a + b) * cst(0.5);
    let h = (b - a) * cst(0.5);
    let mut out = [(T::zero(), T::zero(), T::zero()); 15];
    for i in 0..7 {
        let dx = h * cst::<T>(XGK[i]);
        let wg = if i % 2 == 1 { h * cst::<T>(WG[i / 2]) } else { T::zero() };
        let wk = h * cst::<T>(WGK[i]);
        out[2 * i] = (c - dx, wk, wg);
        out[2 * i + 1] = (c + dx, wk, wg);
    }
    out[14] = (c, h * cst::<T>(WGK[7]), h * cst::<T>(WG[3]));
    out
}

#[derive(Clone, Copy, Debug)]
struct Cell<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

impl<T: Real> PartialEq for Cell<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Real> Eq for Cell<T> {}
impl<T: Real> PartialOrd for Cell<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Cell<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err
            .partial_cmp(&o.err)
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn gk_cell<T: Real, F: Fn(T) -> Result<T>>(f: &F, a: T, b: T) -> Result<Cell<T>> {
    let (mut k, mut g) = (T::zero(), T::zero());
    for (x, wk, wg) in gk15(a, b) {
        let v = f(x)?;
        k = k + wk * v;
        g = g + wg * v;
    }
    Ok(Cell { a, b, value: k, err: (k - g).abs() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveResult<T> {
    pub value: T,
    pub error: T,
    pub cells: usize,
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of a real function on
/// `[a, b]`, starting from `base_cells` equal cells.
pub fn integrate_adaptive<T: Real, F: Fn(T) -> Result<T>>(
    f: F,
    a: T,
    b: T,
    base_cells: usize,
    rel_tol: T,
    max_cells: usize,
) -> Result<AdaptiveResult<T>> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Cell<T>> = Vec::new();
    let n0 = base_cells.max(1);
    let h = (b - a) / from_usize(n0);
    for i in 0..n0 {
        let lo = a + h * from_usize(i);
        let hi = if i + 1 == n0 { b } else { lo + h };
        heap.push(gk_cell(&f, lo, hi)?);
    }
    let min_width = (b - a).abs() * cst(1e-15);
    let mut total: T = heap.iter().map(|c| c.value).sum();
    let mut err: T = heap.iter().map(|c| c.err).sum();
    while err > rel_tol * total.abs() && heap.len() + done.len() < max_cells {
        let Some(worst) = heap.pop() else { break };
        if (worst.b - worst.a).abs() <= min_width {
            done.push(worst);
            continue;
        }
        let mid = (worst.a + worst.b) * cst(0.5);
        let left = gk_cell(&f, worst.a, mid)?;
        let right = gk_cell(&f, mid, worst.b)?;
        total = total - worst.value + left.value + right.value;
        err = err - worst.err + left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    let mut cells: Vec<Cell<T>> = heap.into_vec();
    cells.extend(done);
    cells.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    Ok(AdaptiveResult {
        value: cells.iter().map(|c| c.value).sum(),
        error: cells.iter().map(|c| c.err).sum(),
        cells: cells.len(),
    })
}

/// Mean of `f` over the circle `|z| = r` by adaptive Gauss–Kronrod.
pub fn circle_mean<T: Real, F: Fn(C<T>) -> Result<T>>(f: F, r: T, rel_tol: T) -> Result<T> {
    let res = integrate_adaptive(|t: T| f(cis(t) * r), T::zero(), two_pi(), 64, rel_tol, 20_000)?;
    Ok(res.value / two_pi())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: C<T>,
    /// Base cells that were flagged and refined.
    pub refined_cells: usize,
    /// Largest refinement depth used (a depth `d` cell holds `2^d` points).
    pub max_depth: u32,
}

/// `∫_T f dm` by the periodic trapezoidal rule on `base_points` offset nodes,
/// with dyadic refinement of cells whose midpoint satisfies `refine_near`.
/// Refinement of a cell stops when two successive levels agree to `1e-12`
/// relative or at `max_depth`.
///
/// Unrefined cells keep the one-point rule, which is spectrally accurate only
/// when no cell is refined; next to a refined block its error is `O(h²)`, so
/// `base_points` must resolve `f` away from the refined set.
pub fn quadrature_t<T, F, P>(f: F, base_points: usize, refine_near: P, max_depth: u32) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(C<T>) -> Result<C<T>> + Sync,
    P: Fn(C<T>) -> bool + Sync,
{
    if base_points == 0 || !base_points.is_power_of_two() {
        return Err(Error::InvalidArgument("base_points must be a power of two".into()));
    }
    let m: T = from_usize(base_points);
    let width = two_pi::<T>() / m;
    let cells: Vec<(C<T>, bool, u32)> = (0..base_points)
        .into_par_iter()
        .map(|j| {
            let lo = width * from_usize(j);
            let mid = cis(lo + width * cst(0.5));
            if !refine_near(mid) {
                return Ok((f(mid)?, false, 0));
            }
            let (v, d) = refine_cell(&f, lo, width, max_depth)?;
            Ok((v, true, d))
        })
        .collect::<Result<_>>()?;
    let value = cells.iter().fold(C::zero(), |acc, c| acc + c.0) / m;
    Ok(QuadratureResult {
        value,
        refined_cells: cells.iter().filter(|c| c.1).count(),
        max_depth: cells.iter().map(|c| c.2).max().unwrap_or(0),
    })
}

/// Cell average of `f` on `[lo, lo + width]` by midpoint sums on `2^d` points.
fn refine_cell<T: Real, F: Fn(C<T>) -> Result<C<T>>>(f: &F, lo: T, width: T, max_depth: u32) -> Result<(C<T>, u32)> {
    let mut prev: C<T> = f(cis(lo + width * cst(0.5)))?;
    for d in 1..=max_depth {
        let n = 1usize << d;
        let h = width / from_usize(n);
        let mut s: C<T> = C::zero();
        for i in 0..n {
            let t = lo + h * (from_usize::<T>(i) + cst(0.5));
            s = s + f(cis(t)).map_err(|e| Error::Quadrature(format!("node theta = {}: {e}", to_f64(t))))?;
        }
        let cur: C<T> = s / from_usize::<T>(n);
        if (cur - prev).norm() <= cst::<T>(1e-12) * T::one().max(cur.norm()) {
            return Ok((cur, d));
        }
        prev = cur;
    }
    Ok((prev, max_depth))
}

/// Options for [`BoundaryGrid::build`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridOptions<T> {
    /// Equal cells the circle starts from; multiples of 4 keep `±1, ±i` on
    /// cell boundaries.
    pub base_cells: usize,
    /// Smallest `1 - |λ|` the grid must resolve.
    pub kernel_floor: T,
    /// Allowed change of `φ` across a cell, in units of `1 - |φ| + kernel_floor`.
    pub phi_resolution: T,
    /// Relative Kronrod error target for `∫|w|²` per cell.
    pub weight_tol: T,
    pub max_depth: u32,
    pub max_nodes: usize,
}

impl<T: Real> Default for GridOptions<T> {
    fn default() -> Self {
        GridOptions {
            base_cells: 64,
            kernel_floor: cst(2f64.powi(-12)),
            phi_resolution: cst(2.0),
            weight_tol: cst(1e-9),
            max_depth: 40,
            max_nodes: 4_000_000,
        }
    }
}

/// Boundary nodes with normalized weights and cached `|w|²` and `φ`, refined
/// so that `|w|²·K(φ)` is resolved for every kernel `K` in the Poisson-type
/// family `(1 - |λ|²)/|1 - λ̄φ|²` with `1 - |λ| ≥ kernel_floor`.
#[derive(Clone, Debug)]
pub struct BoundaryGrid<T> {
    pub theta: Vec<T>,
    pub weight: Vec<T>,
    pub phi: Vec<C<T>>,
    pub w2: Vec<T>,
    /// Cells dropped because `w` or `φ` failed to evaluate at a node.
    pub failed_cells: usize,
    /// Total normalized measure of the dropped cells.
    pub failed_measure: T,
    pub cells: usize,
    pub max_depth: u32,
    pub budget_hit: bool,
}

struct GridCell<T> {
    a: T,
    b: T,
    depth: u32,
}

impl<T: Real> BoundaryGrid<T> {
    pub fn build(w: &Expr<T>, phi: &Expr<T>, opts: &GridOptions<T>) -> Self {
        let tau = two_pi::<T>();
        let eval = |a: T, b: T| -> Option<Vec<(T, T, T, T, C<T>)>> {
            gk15(a, b)
                .into_iter()
                .map(|(x, wk, wg)| {
                    let z = cis(x);
                    let wv = w.eval(z).ok()?;
                    let pv = phi.eval(z).ok()?;
                    let w2 = wv.norm_sqr();
                    (w2.is_finite() && pv.norm().is_finite()).then_some((x, wk, wg, w2, pv))
                })
                .collect()
        };

        let n0 = opts.base_cells.max(4);
        let h0 = tau / from_usize(n0);
        let base: Vec<GridCell<T>> = (0..n0)
            .map(|i| GridCell {
                a: h0 * from_usize(i),
                b: if i + 1 == n0 { tau } else { h0 * from_usize(i + 1) },
                depth: 0,
            })
            .collect();
        // Scale for the |w|² error test.
        let total_w2: T = base
            .iter()
            .filter_map(|c| eval(c.a, c.b))
            .map(|nodes| nodes.iter().map(|n| n.1 * n.3).sum::<T>())
            .sum::<T>()
            / tau;
        let w_tol = opts.weight_tol * total_w2;

        let mut grid = BoundaryGrid {
            theta: Vec::new(),
            weight: Vec::new(),
            phi: Vec::new(),
            w2: Vec::new(),
            failed_cells: 0,
            failed_measure: T::zero(),
            cells: 0,
            max_depth: 0,
            budget_hit: false,
        };
        let mut queue: VecDeque<GridCell<T>> = base.into();
        let mut leaves: Vec<(T, Vec<(T, T, T, T, C<T>)>)> = Vec::new();
        let mut nodes_planned = 0usize;
        while let Some(cell) = queue.pop_front() {
            let Some(nodes) = eval(cell.a, cell.b) else {
                grid.failed_cells += 1;
                grid.failed_measure = grid.failed_measure + (cell.b - cell.a) / tau;
                continue;
            };
            let split = cell.depth < opts.max_depth && needs_split(&nodes, opts, w_tol, tau);
            if split && nodes_planned + queue.len() * 15 + 30 <= opts.max_nodes {
                let mid = (cell.a + cell.b) * cst(0.5);
                queue.push_back(GridCell { a: cell.a, b: mid, depth: cell.depth + 1 });
                queue.push_back(GridCell { a: mid, b: cell.b, depth: cell.depth + 1 });
            } else {
                if split {
                    grid.budget_hit = true;
                }
                grid.max_depth = grid.max_depth.max(cell.depth);
                nodes_planned += 15;
                leaves.push((cell.a, nodes));
            }
        }
        leaves.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
        grid.cells = leaves.len();
        for (_, nodes) in leaves {
            for (x, wk, _, w2, pv) in nodes {
                grid.theta.push(x);
                grid.weight.push(wk / tau);
                grid.w2.push(w2);
                grid.phi.push(pv);
            }
        }
        grid
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// `(1 - |λ|²) ∫ |w|² / |1 - λ̄φ|² dm`.
    pub fn criterion_integral(&self, lambda: C<T>) -> T {
        let lc = lambda.conj();
        let scale = T::one() - lambda.norm_sqr();
        let s: T = self
            .weight
            .iter()
            .zip(&self.w2)
            .zip(&self.phi)
            .map(|((&wt, &w2), &p)| wt * w2 / (C::new(T::one(), T::zero()) - lc * p).norm_sqr())
            .sum();
        scale * s
    }

    /// `∫ g(|w|², φ) dm` for a caller-supplied integrand.
    pub fn integrate<G: Fn(T, C<T>) -> T>(&self, g: G) -> T {
        self.weight
            .iter()
            .zip(&self.w2)
            .zip(&self.phi)
            .map(|((&wt, &w2), &p)| wt * g(w2, p))
            .sum()
    }
}

fn needs_split<T: Real>(nodes: &[(T, T, T, T, C<T>)], opts: &GridOptions<T>, w_tol: T, tau: T) -> bool {
    let center = nodes[14].4;
    let max_phi = nodes.iter().fold(T::zero(), |m, n| m.max(n.4.norm()));
    let spread = nodes.iter().fold(T::zero(), |m, n| m.max((n.4 - center).norm())) * cst(2.0);
    if spread > cst(0.25) {
        return true;
    }
    if max_phi > cst(0.9) {
        let gap = (T::one() - max_phi).max(T::zero()) + opts.kernel_floor;
        if spread > opts.phi_resolution * gap {
            return true;
        }
    }
    let (k, g) = nodes
        .iter()
        .fold((T::zero(), T::zero()), |(k, g), n| (k + n.1 * n.3, g + n.2 * n.3));
    (k - g).abs() / tau > w_tol && w_tol > T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::parse_expr;

    #[test]
    fn quadrature_examples() {
        let never = |_: C<f64>| false;
        let r = quadrature_t(|_| Ok(C::new(1.0, 0.0)), 4096, never, 6).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14);
        let r = quadrature_t(|z: C<f64>| Ok(C::new((z / 2.0 - 1.0).norm_sqr(), 0.0)), 4096, never, 6).unwrap();
        assert!((r.value.re - 1.25).abs() < 1e-14);
        for rr in [0.5, 0.9, 0.99] {
            let poisson = |z: C<f64>| Ok(C::new((1.0 - rr * rr) / (1.0 - z * rr).norm_sqr(), 0.0));
            let r = quadrature_t(poisson, 4096, never, 6).unwrap();
            assert!((r.value.re - 1.0).abs() < 1e-8, "r = {rr}");
        }
    }

    #[test]
    fn refinement_resolves_narrow_peaks() {
        let rr = 1.0 - 2f64.powi(-12);
        let poisson = |z: C<f64>| Ok(C::new((1.0 - rr * rr) / (1.0 - z * rr).norm_sqr(), 0.0));
        let near_one = |z: C<f64>| (z - 1.0).norm() < 0.01;
        let coarse = quadrature_t(poisson, 4096, |_| false, 6).unwrap();
        let fine = quadrature_t(poisson, 4096, near_one, 6).unwrap();
        assert!((coarse.value.re - 1.0).abs() > 1e-2);
        assert!((fine.value.re - 1.0).abs() < 1e-4, "{}", fine.value.re - 1.0);
        assert!(fine.refined_cells > 0);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate_adaptive(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, 4, 1e-10, 5000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn identity_grid_reproduces_poisson_normalization() {
        let w: Expr<f64> = parse_expr("1").unwrap();
        let phi: Expr<f64> = parse_expr("z").unwrap();
        let grid = BoundaryGrid::build(&w, &phi, &GridOptions::default());
        assert!(!grid.budget_hit);
        let total: f64 = grid.weight.iter().sum();
        assert!((total - 1.0).abs() < 1e-11);
        for k in 1..=12 {
            let r = 1.0 - 2f64.powi(-k);
            for j in 0..8 {
                let lam = cis(2.0 * std::f64::consts::PI * j as f64 / 8.0 + 0.1) * r;
                assert!((grid.criterion_integral(lam) - 1.0).abs() < 1e-9, "k={k}");
            }
        }
    }
}
