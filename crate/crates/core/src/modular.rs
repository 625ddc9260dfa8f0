//! Unnormalized S-matrix, T-matrix and the non-degeneracy verdict of a
//! ribbon structure.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::fusion_ring::FusionRing;
use crate::numerics::{singular_value_range, Tolerance, C64};
use crate::ribbon::RibbonStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Modular,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    pub s_tilde: DMatrix<C64>,
    pub t: DMatrix<C64>,
    /// `Σ_a |d_a|²`
    pub total_dim_sq: f64,
    pub verdict: Verdict,
}

/// `S̃_{ab} = (θ_a θ_b)^{-1} Σ_c N^{a*b}_c θ_c d_c`.
pub fn s_matrix(ring: &FusionRing, rib: &RibbonStructure) -> DMatrix<C64> {
    let n = ring.rank();
    let th = &rib.twist.theta;
    DMatrix::from_fn(n, n, |a, b| {
        let sum: C64 = ring
            .fuse(ring.dual(a), b)
            .iter()
            .map(|&c| th[c] * rib.dims[c])
            .sum();
        sum / (th[a] * th[b])
    })
}

pub fn t_matrix(rib: &RibbonStructure) -> DMatrix<C64> {
    let n = rib.twist.theta.len();
    DMatrix::from_fn(n, n, |a, b| if a == b { rib.twist.theta[a] } else { C64::default() })
}

/// Modular iff the smallest singular value of `S̃` exceeds `eq_tol·‖S̃‖`.
pub fn is_modular(s_tilde: &DMatrix<C64>, tol: &Tolerance) -> Verdict {
    let (smallest, largest) = singular_value_range(s_tilde);
    if smallest > tol.eq_tol * largest {
        Verdict::Modular
    } else {
        Verdict::Degenerate
    }
}

pub fn modular_data(ring: &FusionRing, rib: &RibbonStructure, tol: &Tolerance) -> ModularData {
    let s_tilde = s_matrix(ring, rib);
    let verdict = is_modular(&s_tilde, tol);
    ModularData {
        t: t_matrix(rib),
        total_dim_sq: rib.dims.iter().map(|d| d.norm_sqr()).sum(),
        s_tilde,
        verdict,
    }
}

impl ModularData {
    /// `‖S S† − I‖_max` for `S = S̃ / √(Σ d²)`.
    pub fn s_unitarity_defect(&self) -> f64 {
        let n = self.s_tilde.nrows();
        let s = &self.s_tilde / C64::new(self.total_dim_sq.sqrt(), 0.0);
        (&s * s.adjoint() - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.s_tilde - self.s_tilde.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}
