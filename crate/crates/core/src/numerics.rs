//! Tolerance policy, complex scalars and the small numerical kernels the rest
//! of the crate is built on: a one-dimensional kernel solve, a shifted power
//! iteration and a seeded multi-start Levenberg-Marquardt root finder.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// `e^{iπ·x}`.
pub fn phase(turns_of_pi: f64) -> C64 {
    C64::from_polar(1.0, std::f64::consts::PI * turns_of_pi)
}

/// Thresholds shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Two scalars are equal, a residual passes.
    pub eq_tol: f64,
    /// Two solver roots are the same root.
    pub dedup_tol: f64,
    /// Residual norm a solver root must reach.
    pub solver_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_tol: 1e-9,
            dedup_tol: 1e-6,
            solver_tol: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, dedup_tol: f64, solver_tol: f64) -> Result<Self> {
        let tol = Tolerance {
            eq_tol,
            dedup_tol,
            solver_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Default tolerances with `eq_tol` replaced.
    pub fn with_eq_tol(eq_tol: f64) -> Result<Self> {
        let d = Tolerance::default();
        Tolerance::new(eq_tol, d.dedup_tol, d.solver_tol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.solver_tol > 0.0
            && self.solver_tol <= self.eq_tol
            && self.eq_tol <= self.dedup_tol
            && self.dedup_tol < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(format!(
                "need 0 < solver_tol ({:e}) <= eq_tol ({:e}) <= dedup_tol ({:e}) < 1",
                self.solver_tol, self.eq_tol, self.dedup_tol
            )))
        }
    }
}

/// Singular values (descending) and the right-singular basis of `m`, padded
/// with zero rows so that the full null space is available.
fn full_svd(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = DMatrix::<C64>::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap_or(Ordering::Equal)
    });
    let sv = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v_t = DMatrix::from_fn(order.len(), cols, |r, c| v_t[(order[r], c)]);
    (sv, v_t)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    full_svd(m).0[0]
}

/// Smallest and largest singular values of a square matrix.
pub fn singular_value_range(m: &DMatrix<C64>) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let (sv, _) = full_svd(m);
    (*sv.last().unwrap(), sv[0])
}

fn kernel_threshold(norm: f64, tol: &Tolerance) -> f64 {
    tol.eq_tol * (1.0 + norm)
}

/// Orthonormal basis of the numerical null space of `m`.
pub fn kernel_basis(m: &DMatrix<C64>, tol: &Tolerance) -> Vec<DVector<C64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..cols)
            .map(|i| DVector::from_fn(cols, |r, _| if r == i { ONE } else { ZERO }))
            .collect();
    }
    let (sv, v_t) = full_svd(m);
    let thr = kernel_threshold(sv[0], tol);
    let rank = sv.iter().filter(|&&s| s > thr).count();
    (rank..cols)
        .map(|r| DVector::from_fn(cols, |c, _| v_t[(r, c)].conj()))
        .collect()
}

/// The unique (up to scale) vector `v` with `m·v = 0`, scaled so that
/// `v[pivot] = 1`. `m` may be rectangular.
pub fn kernel_vector(m: &DMatrix<C64>, pivot: usize, tol: &Tolerance) -> Result<DVector<C64>> {
    let cols = m.ncols();
    if pivot >= cols {
        return Err(Error::LabelOutOfRange(pivot));
    }
    let norm = spectral_norm(m);
    let basis = kernel_basis(m, tol);
    let v = match basis.len() {
        0 => {
            let (smallest, _) = singular_value_range(m);
            return Err(Error::NoKernel(smallest));
        }
        1 => &basis[0],
        k => return Err(Error::AmbiguousKernel(k)),
    };
    let p = v[pivot];
    if p.norm() <= kernel_threshold(norm, tol) {
        return Err(Error::PivotVanishes(pivot));
    }
    Ok(v.map(|x| x / p))
}

/// Perron-Frobenius eigenpair of an entrywise nonnegative matrix.
///
/// Power iteration runs on `M + I`: for nonnegative `M` the shifted matrix has
/// `ρ(M) + 1` as its only eigenvalue of maximal modulus, so periodic matrices
/// (permutations) converge too.
pub fn dominant_eigenpair(m: &DMatrix<f64>, max_iter: usize) -> Result<(f64, DVector<f64>)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "dominant_eigenpair needs a square matrix");
    if n == 0 {
        return Ok((0.0, DVector::zeros(0)));
    }
    let shifted = m + DMatrix::<f64>::identity(n, n);
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w = &shifted * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::NonConvergence(0));
        }
        let next = w / norm;
        lambda = next.dot(&(&shifted * &next));
        let delta = (&next - &v).amax();
        v = next;
        if delta <= 1e-15 * (n as f64) {
            return Ok((lambda - 1.0, normalize_first(v)));
        }
    }
    // A tiny oscillation floor can stall the step test; accept if the
    // eigen-residual itself is at round-off level.
    let residual = (&shifted * &v - &v * lambda).amax();
    if residual <= 1e-12 * lambda.max(1.0) {
        return Ok((lambda - 1.0, normalize_first(v)));
    }
    Err(Error::NonConvergence(max_iter))
}

fn normalize_first(v: DVector<f64>) -> DVector<f64> {
    if v[0].abs() > 1e-12 {
        let f = v[0];
        v / f
    } else {
        let norm = v.norm();
        v / norm
    }
}

pub const DEFAULT_POWER_ITERATIONS: usize = 100_000;

const LM_MAX_ITER: usize = 400;

/// Orders complex vectors lexicographically by `(re, im)` of each coordinate,
/// treating differences below `eps` as ties.
pub fn cmp_complex_vectors(a: &[C64], b: &[C64], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > eps {
                return p.partial_cmp(&q).unwrap_or(Ordering::Equal);
            }
        }
    }
    a.len().cmp(&b.len())
}

pub fn max_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Drops near-duplicates (max coordinate distance ≤ `dedup_tol`, first one
/// wins) and sorts the survivors.
pub fn dedup_and_sort(mut roots: Vec<Vec<C64>>, tol: &Tolerance) -> Vec<Vec<C64>> {
    let mut kept: Vec<Vec<C64>> = Vec::new();
    for r in roots.drain(..) {
        if !kept.iter().any(|k| max_distance(k, &r) <= tol.dedup_tol) {
            kept.push(r);
        }
    }
    kept.sort_by(|a, b| cmp_complex_vectors(a, b, tol.eq_tol));
    kept
}

fn unpack(x: &DVector<f64>) -> Vec<C64> {
    x.as_slice()
        .chunks(2)
        .map(|p| C64::new(p[0], p[1]))
        .collect()
}

fn eval<F>(residual: &F, x: &DVector<f64>) -> Option<DVector<f64>>
where
    F: Fn(&[C64]) -> Vec<f64>,
{
    let r = DVector::from_vec(residual(&unpack(x)));
    r.iter().all(|v| v.is_finite()).then_some(r)
}

fn jacobian<F>(residual: &F, x: &DVector<f64>, r0_len: usize) -> Option<DMatrix<f64>>
where
    F: Fn(&[C64]) -> Vec<f64>,
{
    let n = x.len();
    let mut jac = DMatrix::<f64>::zeros(r0_len, n);
    for j in 0..n {
        let h = 1e-7 * x[j].abs().max(1.0);
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let rp = eval(residual, &xp)?;
        let rm = eval(residual, &xm)?;
        jac.set_column(j, &((rp - rm) / (2.0 * h)));
    }
    Some(jac)
}

/// Damped Gauss-Newton from a single start. Returns the final point and its
/// residual norm.
fn levenberg_marquardt<F>(residual: &F, start: DVector<f64>, target: f64) -> Option<(DVector<f64>, f64)>
where
    F: Fn(&[C64]) -> Vec<f64>,
{
    let mut x = start;
    let mut r = eval(residual, &x)?;
    let mut cost = r.norm();
    let mut damping = 1e-3;
    for _ in 0..LM_MAX_ITER {
        if cost <= target {
            break;
        }
        let jac = jacobian(residual, &x, r.len())?;
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &r;
        let mut improved = false;
        while damping < 1e12 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += damping * (1.0 + jtj[(i, i)]);
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => {
                    damping *= 4.0;
                    continue;
                }
            };
            let trial = &x + &step;
            if let Some(rt) = eval(residual, &trial) {
                let trial_cost = rt.norm();
                if trial_cost < cost {
                    x = trial;
                    r = rt;
                    cost = trial_cost;
                    damping = (damping / 3.0).max(1e-15);
                    improved = true;
                    break;
                }
            }
            damping *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Some((x, cost))
}

/// Seeded multi-start least-squares root finder over complex unknowns.
///
/// Each start draws every coordinate uniformly on the unit circle. Roots with
/// residual norm ≤ `solver_tol` are kept, deduplicated and sorted, so the output
/// depends only on `(starts, seed, tol)`.
pub fn multistart_root_solve<F>(
    residual: F,
    n_unknowns: usize,
    starts: usize,
    seed: u64,
    tol: &Tolerance,
) -> Vec<Vec<C64>>
where
    F: Fn(&[C64]) -> Vec<f64>,
{
    if n_unknowns == 0 {
        let r: f64 = residual(&[]).iter().map(|v| v * v).sum::<f64>().sqrt();
        return if r <= tol.solver_tol { vec![Vec::new()] } else { Vec::new() };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::new();
    for _ in 0..starts {
        let start = DVector::from_iterator(
            2 * n_unknowns,
            (0..n_unknowns).flat_map(|_| {
                let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                [t.cos(), t.sin()]
            }),
        );
        // Aim below the acceptance threshold so accepted roots are not marginal.
        if let Some((x, cost)) = levenberg_marquardt(&residual, start, tol.solver_tol * 1e-2) {
            if cost <= tol.solver_tol {
                roots.push(unpack(&x));
            }
        }
    }
    dedup_and_sort(roots, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[C64]) -> DMatrix<C64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn tolerance_ordering_enforced() {
        assert!(Tolerance::default().validate().is_ok());
        assert!(Tolerance::new(1e-13, 1e-6, 1e-12).is_err());
        assert!(Tolerance::new(1e-5, 1e-6, 1e-12).is_err());
        assert!(Tolerance::with_eq_tol(1e-8).is_ok());
    }

    #[test]
    fn kernel_of_diagonal() {
        let m = cm(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        let v = kernel_vector(&m, 0, &Tolerance::default()).unwrap();
        assert!((v[0] - ONE).norm() < 1e-15);
        assert!(v[1].norm() < 1e-15);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = DMatrix::<C64>::identity(2, 2);
        assert!(matches!(
            kernel_vector(&m, 0, &Tolerance::default()),
            Err(Error::NoKernel(_))
        ));
    }

    #[test]
    fn kernel_of_zero_is_ambiguous() {
        let m = DMatrix::<C64>::zeros(2, 2);
        assert_eq!(
            kernel_vector(&m, 0, &Tolerance::default()),
            Err(Error::AmbiguousKernel(2))
        );
    }

    #[test]
    fn kernel_pivot_vanishes() {
        // kernel is spanned by (0, 1)
        let m = cm(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(
            kernel_vector(&m, 0, &Tolerance::default()),
            Err(Error::PivotVanishes(0))
        );
    }

    #[test]
    fn kernel_single_equation_fibonacci_dimension() {
        // (θ_τ - R_τ)·d_τ - R_1·d_1 = 0 with d_1 the pivot
        let theta = phase(0.8);
        let r_tau = phase(0.6);
        let r_one = phase(-0.8);
        let m = cm(1, 2, &[theta - r_tau, -r_one]);
        let v = kernel_vector(&m, 1, &Tolerance::default()).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((v[0] - C64::new(golden, 0.0)).norm() < 1e-12, "{}", v[0]);
    }

    #[test]
    fn dominant_eigenpair_examples() {
        let (l, v) = dominant_eigenpair(&DMatrix::from_row_slice(1, 1, &[2.0]), 1000).unwrap();
        assert!((l - 2.0).abs() < 1e-12 && (v[0] - 1.0).abs() < 1e-12);

        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let (l, v) =
            dominant_eigenpair(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 1.0]), 1000)
                .unwrap();
        assert!((l - golden).abs() < 1e-12);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - golden).abs() < 1e-12);

        let (l, v) =
            dominant_eigenpair(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]), 1000)
                .unwrap();
        assert!((l - 1.0).abs() < 1e-12);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dominant_eigenpair_nonconvergence() {
        // Jordan block: convergence is only O(1/k)
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert_eq!(dominant_eigenpair(&m, 50), Err(Error::NonConvergence(50)));
    }

    #[test]
    fn multistart_real_quadratic() {
        let tol = Tolerance::default();
        let roots = multistart_root_solve(
            |x| {
                let r = x[0] * x[0] - ONE;
                vec![r.re, r.im]
            },
            1,
            16,
            7,
            &tol,
        );
        assert_eq!(roots.len(), 2);
        assert!((roots[0][0] + ONE).norm() < 1e-9);
        assert!((roots[1][0] - ONE).norm() < 1e-9);
    }

    #[test]
    fn multistart_complex_quadratic() {
        let tol = Tolerance::default();
        let roots = multistart_root_solve(
            |x| {
                let r = x[0] * x[0] + ONE;
                vec![r.re, r.im]
            },
            1,
            16,
            7,
            &tol,
        );
        assert_eq!(roots.len(), 2);
        // sorted by (re, im): -i before i
        assert!((roots[0][0] + C64::i()).norm() < 1e-9);
        assert!((roots[1][0] - C64::i()).norm() < 1e-9);
    }

    #[test]
    fn multistart_is_deterministic() {
        let tol = Tolerance::default();
        let f = |x: &[C64]| {
            let r = x[0] * x[0] * x[0] - ONE;
            let s = x[1] * x[0] - C64::i();
            vec![r.re, r.im, s.re, s.im]
        };
        let a = multistart_root_solve(f, 2, 24, 99, &tol);
        let b = multistart_root_solve(f, 2, 24, 99, &tol);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for r in &a {
            let res: f64 = f(r).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(res <= tol.solver_tol);
        }
    }

    #[test]
    fn dedup_merges_close_roots() {
        let tol = Tolerance::default();
        let roots = vec![vec![ONE], vec![C64::new(1.0 + 1e-8, 0.0)], vec![-ONE]];
        let out = dedup_and_sort(roots, &tol);
        assert_eq!(out, vec![vec![-ONE], vec![ONE]]);
    }
}
