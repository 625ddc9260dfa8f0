//! Multiplicity-free fusion rings: labels, duals, fusion rules and
//! Frobenius-Perron dimensions.
//!
//! Labels are addressed by their position in the ring; index 0 is always the
//! unit object.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{dominant_eigenpair, kernel_vector, Tolerance, C64, DEFAULT_POWER_ITERATIONS};

pub const UNIT: usize = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct FusionRing {
    names: Vec<String>,
    dual: Vec<usize>,
    /// `n^3` flags, `mult[(a * n + b) * n + c] = N^{ab}_c`.
    mult: Vec<bool>,
    /// Outcomes of `a ⊗ b` in label order.
    products: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

/// A violated fusion-ring axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingViolation {
    Unit { a: usize, b: usize },
    Duality { a: usize, b: usize },
    DualInvolution { a: usize },
    Associativity { a: usize, b: usize, c: usize, d: usize },
}

impl RingViolation {
    pub fn describe(&self, ring: &FusionRing) -> String {
        let n = |i: &usize| ring.name(*i);
        match self {
            RingViolation::Unit { a, b } => format!(
                "unit axiom fails: N^(1,{0})_{1} / N^({0},1)_{1} inconsistent with [{0} = {1}]",
                n(a),
                n(b)
            ),
            RingViolation::Duality { a, b } => format!(
                "duality axiom fails: N^({},{})_1 inconsistent with dual map",
                n(a),
                n(b)
            ),
            RingViolation::DualInvolution { a } => {
                format!("dual map is not an involution fixing the unit at `{}`", n(a))
            }
            RingViolation::Associativity { a, b, c, d } => format!(
                "associativity fails for ({}, {}, {}) -> {}",
                n(a),
                n(b),
                n(c),
                n(d)
            ),
        }
    }
}

impl FusionRing {
    /// Builds a ring from label names, the dual map and the admissible triples.
    /// No axioms are checked here; see [`FusionRing::validate`].
    pub fn new<S: Into<String>>(
        names: Vec<S>,
        dual: Vec<usize>,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        if dual.len() != n {
            return Err(Error::Validation(vec![format!(
                "dual map has {} entries for {} labels",
                dual.len(),
                n
            )]));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= n) {
            return Err(Error::LabelOutOfRange(bad));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Validation(vec![format!("duplicate label `{name}`")]));
            }
        }
        let mut mult = vec![false; n * n * n];
        for (a, b, c) in triples {
            for x in [a, b, c] {
                if x >= n {
                    return Err(Error::LabelOutOfRange(x));
                }
            }
            mult[(a * n + b) * n + c] = true;
        }
        let mut ring = FusionRing {
            names,
            dual,
            mult,
            products: Vec::new(),
            index,
        };
        ring.products = (0..n * n)
            .map(|ab| (0..n).filter(|&c| ring.mult[ab * n + c]).collect())
            .collect();
        Ok(ring)
    }

    /// Same as [`FusionRing::new`] but adds the unit rules `1⊗a = a⊗1 = a`.
    pub fn with_unit_rules<S: Into<String>>(
        names: Vec<S>,
        dual: Vec<usize>,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let n = names.len();
        let unit = (0..n).flat_map(|a| [(UNIT, a, a), (a, UNIT, a)]);
        Self::new(names, dual, triples.into_iter().chain(unit))
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> std::ops::Range<usize> {
        0..self.rank()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    /// `N^{ab}_c` as 0 or 1.
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.admissible(a, b, c) as u32
    }

    pub fn admissible(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.rank();
        self.mult[(a * n + b) * n + c]
    }

    /// Outcomes `c` with `N^{ab}_c = 1`.
    pub fn fuse(&self, a: usize, b: usize) -> &[usize] {
        &self.products[a * self.rank() + b]
    }

    /// All `(a, b, c)` with `N^{ab}_c = 1`, in lexicographic order.
    pub fn admissible_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.labels().flat_map(move |a| {
            self.labels()
                .flat_map(move |b| self.fuse(a, b).iter().map(move |&c| (a, b, c)))
        })
    }

    /// All `(a,b,c,d,e,f)` with `N^{ab}_e N^{ec}_d N^{bc}_f N^{af}_d = 1`, in
    /// lexicographic order.
    pub fn admissible_sextuples(&self) -> Vec<[usize; 6]> {
        let mut out = Vec::new();
        for a in self.labels() {
            for b in self.labels() {
                for c in self.labels() {
                    for d in self.labels() {
                        for &e in self.fuse(a, b) {
                            if !self.admissible(e, c, d) {
                                continue;
                            }
                            for &f in self.fuse(b, c) {
                                if self.admissible(a, f, d) {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_pointed(&self) -> bool {
        self.labels()
            .all(|a| self.labels().all(|b| self.fuse(a, b).len() <= 1))
    }

    /// Checks the unit, duality and associativity axioms exhaustively.
    pub fn validate(&self) -> Vec<RingViolation> {
        let mut out = Vec::new();
        if self.rank() == 0 {
            return out;
        }
        for a in self.labels() {
            let d = self.dual(a);
            if self.dual(d) != a || (a == UNIT && d != UNIT) {
                out.push(RingViolation::DualInvolution { a });
            }
        }
        for a in self.labels() {
            for b in self.labels() {
                let expect = a == b;
                if self.admissible(UNIT, a, b) != expect || self.admissible(a, UNIT, b) != expect {
                    out.push(RingViolation::Unit { a, b });
                }
                if self.admissible(a, b, UNIT) != (b == self.dual(a)) {
                    out.push(RingViolation::Duality { a, b });
                }
            }
        }
        for a in self.labels() {
            for b in self.labels() {
                for c in self.labels() {
                    for d in self.labels() {
                        let left: u32 = self.labels().map(|e| self.n(a, b, e) * self.n(e, c, d)).sum();
                        let right: u32 = self.labels().map(|f| self.n(b, c, f) * self.n(a, f, d)).sum();
                        if left != right {
                            out.push(RingViolation::Associativity { a, b, c, d });
                        }
                    }
                }
            }
        }
        out
    }

    /// `(N_a)_{b,c} = N^{ab}_c`.
    pub fn fusion_matrix(&self, a: usize) -> Result<DMatrix<u32>> {
        if a >= self.rank() {
            return Err(Error::LabelOutOfRange(a));
        }
        let n = self.rank();
        Ok(DMatrix::from_fn(n, n, |b, c| self.n(a, b, c)))
    }

    pub fn fusion_matrix_by_name(&self, name: &str) -> Result<DMatrix<u32>> {
        self.fusion_matrix(self.label(name)?)
    }

    pub fn fp_dimensions(&self) -> Result<Vec<f64>> {
        self.labels()
            .map(|a| {
                let m = self.fusion_matrix(a)?.map(f64::from);
                let (lambda, _) = dominant_eigenpair(&m, DEFAULT_POWER_ITERATIONS)?;
                Ok(lambda)
            })
            .collect()
    }

    /// All ring characters `χ` (`χ(a)χ(b) = Σ_c N^{ab}_c χ(c)`, `χ(1) = 1`).
    ///
    /// Characters are the simultaneous right eigenvectors of the fusion
    /// matrices; they are read off from a generic real combination of them.
    /// Requires a commutative ring, which every braided ring is.
    pub fn characters(&self, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
        let n = self.rank();
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut generic = DMatrix::<C64>::zeros(n, n);
        for a in self.labels() {
            // irrational weights keep distinct characters apart
            let w = ((a + 2) as f64).ln() + (a as f64 * 0.7548776662466927).fract();
            generic += self.fusion_matrix(a)?.map(|x| C64::new(w * f64::from(x), 0.0));
        }
        let eigenvalues = generic
            .clone()
            .schur()
            .eigenvalues()
            .ok_or(Error::NonConvergence(0))?;
        let mut out: Vec<Vec<C64>> = Vec::new();
        for lambda in eigenvalues.iter() {
            let shifted = &generic - DMatrix::<C64>::identity(n, n) * *lambda;
            // eigenvalues are only accurate to round-off; loosen the kernel cut
            let loose = Tolerance {
                eq_tol: tol.eq_tol.max(1e-8),
                ..*tol
            };
            let v: DVector<C64> = kernel_vector(&shifted, UNIT, &loose)?;
            let chi: Vec<C64> = v.iter().copied().collect();
            if !out
                .iter()
                .any(|c| c.iter().zip(&chi).all(|(x, y)| (x - y).norm() <= tol.dedup_tol))
            {
                out.push(chi);
            }
        }
        out.sort_by(|a, b| crate::numerics::cmp_complex_vectors(b, a, tol.eq_tol));
        Ok(out)
    }

    /// Max deviation of `d_a d_b = Σ_c N^{ab}_c d_c` over all pairs.
    pub fn multiplicativity_defect(&self, dims: &[C64]) -> f64 {
        let mut worst: f64 = 0.0;
        for a in self.labels() {
            for b in self.labels() {
                let sum: C64 = self.fuse(a, b).iter().map(|&c| dims[c]).sum();
                worst = worst.max((dims[a] * dims[b] - sum).norm());
            }
        }
        worst
    }
}

impl fmt::Display for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.labels() {
            for b in self.labels() {
                if a == UNIT || b == UNIT || b < a {
                    continue;
                }
                let outs: Vec<&str> = self.fuse(a, b).iter().map(|&c| self.name(c)).collect();
                writeln!(f, "{} x {} = {}", self.name(a), self.name(b), outs.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn fibonacci_ring() -> FusionRing {
        FusionRing::with_unit_rules(vec!["1", "tau"], vec![0, 1], [(1, 1, 0), (1, 1, 1)]).unwrap()
    }

    pub fn ising_ring() -> FusionRing {
        FusionRing::with_unit_rules(
            vec!["1", "psi", "sigma"],
            vec![0, 1, 2],
            [(1, 1, 0), (1, 2, 2), (2, 1, 2), (2, 2, 0), (2, 2, 1)],
        )
        .unwrap()
    }

    pub fn z3_ring() -> FusionRing {
        let triples = (1..3).flat_map(|a| (1..3).map(move |b| (a, b, (a + b) % 3)));
        FusionRing::with_unit_rules(vec!["1", "z", "z2"], vec![0, 2, 1], triples).unwrap()
    }

    #[test]
    fn fibonacci_and_trivial_are_valid() {
        assert!(fibonacci_ring().validate().is_empty());
        let trivial = FusionRing::with_unit_rules(vec!["1"], vec![0], []).unwrap();
        assert!(trivial.validate().is_empty());
        assert!(ising_ring().validate().is_empty());
        assert!(z3_ring().validate().is_empty());
    }

    #[test]
    fn broken_unit_rule_reported() {
        // N^{1,tau}_tau = 0
        let ring = FusionRing::new(
            vec!["1", "tau"],
            vec![0, 1],
            [(0, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)],
        )
        .unwrap();
        let v = ring.validate();
        assert!(v.iter().any(|x| matches!(x, RingViolation::Unit { a: 1, b: 1 })), "{v:?}");
    }

    #[test]
    fn broken_associativity_reported() {
        // (b⊗a)⊗a = a⊗a = 1 while b⊗(a⊗a) = b
        let ring = FusionRing::with_unit_rules(
            vec!["1", "a", "b"],
            vec![0, 1, 2],
            [(1, 1, 0), (2, 2, 0), (1, 2, 2), (2, 1, 1)],
        )
        .unwrap();
        let v = ring.validate();
        assert!(v.iter().any(|x| matches!(x, RingViolation::Associativity { .. })));
    }

    #[test]
    fn fusion_matrices() {
        let trivial = FusionRing::with_unit_rules(vec!["1"], vec![0], []).unwrap();
        assert_eq!(trivial.fusion_matrix(0).unwrap(), DMatrix::from_row_slice(1, 1, &[1]));
        assert_eq!(
            fibonacci_ring().fusion_matrix_by_name("tau").unwrap(),
            DMatrix::from_row_slice(2, 2, &[0, 1, 1, 1])
        );
        assert_eq!(
            ising_ring().fusion_matrix_by_name("sigma").unwrap(),
            DMatrix::from_row_slice(3, 3, &[0, 0, 1, 0, 0, 1, 1, 1, 0])
        );
        assert_eq!(
            fibonacci_ring().fusion_matrix_by_name("nope"),
            Err(Error::UnknownLabel("nope".into()))
        );
    }

    #[test]
    fn fp_dimensions_examples() {
        let d = z3_ring().fp_dimensions().unwrap();
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let d = fibonacci_ring().fp_dimensions().unwrap();
        assert!((d[1] - 1.618_033_988_749_895).abs() < 1e-12);
        let d = ising_ring().fp_dimensions().unwrap();
        assert!((d[2] - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn characters_of_small_rings() {
        let tol = Tolerance::default();
        let chars = fibonacci_ring().characters(&tol).unwrap();
        assert_eq!(chars.len(), 2);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((chars[0][1].re - golden).abs() < 1e-10);
        assert!((chars[1][1].re - (1.0 - golden)).abs() < 1e-10);

        let chars = z3_ring().characters(&tol).unwrap();
        assert_eq!(chars.len(), 3);
        for chi in &chars {
            assert!(z3_ring().multiplicativity_defect(chi) < 1e-10);
        }
        let chars = ising_ring().characters(&tol).unwrap();
        assert_eq!(chars.len(), 3);
    }

    #[test]
    fn pointedness() {
        assert!(z3_ring().is_pointed());
        assert!(!fibonacci_ring().is_pointed());
    }

    #[test]
    fn sextuples_of_fibonacci() {
        let s = fibonacci_ring().admissible_sextuples();
        // 4 entries in the tau,tau,tau,tau block, 1 in tau,tau,tau,1, plus unit-indexed ones
        let full: Vec<_> = s.iter().filter(|t| t[0] == 1 && t[1] == 1 && t[2] == 1).collect();
        assert_eq!(full.len(), 5);
    }
}
