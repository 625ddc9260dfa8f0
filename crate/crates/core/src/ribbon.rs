//! Twists, ribbon structures and the action of sign characters on them.
//!
//! Quantum dimensions of a ribbon structure come from the twist-trace system
//! `Σ_c N^{aa}_c R^{aa}_c d_c = θ_a d_a`, normalized by `d_1 = 1`. Flipping a
//! ribbon structure by a sign character `γ` flips its dimensions by the same
//! signs, so at most one structure in a torsor has all dimensions positive.

use nalgebra::DMatrix;

use crate::braiding::RSymbolTable;
use crate::error::{Error, Result};
use crate::fusion_ring::{FusionRing, UNIT};
use crate::numerics::{kernel_vector, spectral_norm, Tolerance, C64, ONE};

/// One scalar `θ_a` per label.
#[derive(Debug, Clone, PartialEq)]
pub struct Twist {
    pub theta: Vec<C64>,
}

impl Twist {
    pub fn new(theta: Vec<C64>) -> Result<Self> {
        if theta.first().is_some_and(|t| *t != ONE) {
            return Err(Error::Validation(vec!["twist of the unit must be 1".into()]));
        }
        if theta.iter().any(|t| t.norm() == 0.0 || !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::Validation(vec!["twists must be finite and nonzero".into()]));
        }
        Ok(Twist { theta })
    }

    pub fn scaled(&self, gamma: &SignCharacter) -> Twist {
        Twist {
            theta: self
                .theta
                .iter()
                .zip(&gamma.gamma)
                .map(|(t, &s)| t * f64::from(s))
                .collect(),
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.theta.iter().map(|t| (t.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// A `{±1}`-valued character of the fusion ring that is constant on dual pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignCharacter {
    pub gamma: Vec<i8>,
}

impl SignCharacter {
    pub fn trivial(rank: usize) -> Self {
        SignCharacter { gamma: vec![1; rank] }
    }

    pub fn is_trivial(&self) -> bool {
        self.gamma.iter().all(|&s| s == 1)
    }

    /// Pointwise product.
    pub fn compose(&self, other: &SignCharacter) -> SignCharacter {
        SignCharacter {
            gamma: self.gamma.iter().zip(&other.gamma).map(|(a, b)| a * b).collect(),
        }
    }

    /// Labels where the character is −1.
    pub fn flipped<'a>(&self, ring: &'a FusionRing) -> Vec<&'a str> {
        self.gamma
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .map(|(a, _)| ring.name(a))
            .collect()
    }

    fn satisfies(&self, ring: &FusionRing) -> bool {
        let g = &self.gamma;
        g[UNIT] == 1
            && ring.labels().all(|a| g[ring.dual(a)] == g[a])
            && ring
                .admissible_triples()
                .all(|(a, b, c)| g[a] * g[b] == g[c])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RibbonStructure {
    pub twist: Twist,
    pub dims: Vec<C64>,
    /// Character relating this structure to the seed it was enumerated from.
    pub sign: SignCharacter,
}

/// `max |θ_c − θ_a θ_b R^{ba}_c R^{ab}_c|` over admissible triples.
pub fn check_balancing(ring: &FusionRing, r: &RSymbolTable, t: &Twist) -> f64 {
    let th = &t.theta;
    ring.admissible_triples()
        .map(|(a, b, c)| (th[c] - th[a] * th[b] * r.get(b, a, c) * r.get(a, b, c)).norm())
        .fold(0.0, f64::max)
}

/// `max |θ_{a*} − θ_a|`.
pub fn check_ribbon_condition(ring: &FusionRing, t: &Twist) -> f64 {
    ring.labels()
        .map(|a| (t.theta[ring.dual(a)] - t.theta[a]).norm())
        .fold(0.0, f64::max)
}

/// Every sign character, trivial first.
pub fn sign_characters(ring: &FusionRing) -> Vec<SignCharacter> {
    let n = ring.rank();
    if n == 0 {
        return Vec::new();
    }
    let free = n - 1;
    assert!(free < 31, "sign-character enumeration is exhaustive; rank {n} is too large");
    let mut out: Vec<SignCharacter> = (0u32..1 << free)
        .map(|bits| {
            let mut gamma = vec![1i8; n];
            for (i, g) in gamma.iter_mut().skip(1).enumerate() {
                if bits >> i & 1 == 1 {
                    *g = -1;
                }
            }
            SignCharacter { gamma }
        })
        .filter(|g| g.satisfies(ring))
        .collect();
    // +1 sorts before −1 at each label
    out.sort_by(|a, b| b.gamma.cmp(&a.gamma));
    out
}

/// `M_{a,c} = N^{aa}_c R^{aa}_c − θ_a δ_{ac}`; dimension vectors are its kernel.
fn twist_trace_matrix(ring: &FusionRing, r: &RSymbolTable, t: &Twist) -> DMatrix<C64> {
    let n = ring.rank();
    DMatrix::from_fn(n, n, |a, c| {
        let braid = if ring.admissible(a, a, c) { r.get(a, a, c) } else { C64::default() };
        if a == c {
            braid - t.theta[a]
        } else {
            braid
        }
    })
}

fn dims_defect(ring: &FusionRing, dims: &[C64]) -> f64 {
    let duality = ring
        .labels()
        .map(|a| (dims[ring.dual(a)] - dims[a]).norm())
        .fold(0.0, f64::max);
    ring.multiplicativity_defect(dims).max(duality)
}

fn dims_scale(dims: &[C64]) -> f64 {
    let m = dims.iter().map(|d| d.norm()).fold(1.0, f64::max);
    m * m
}

/// Quantum dimensions of the ribbon structure `(r, t)`.
///
/// When the twist-trace kernel is more than one-dimensional (pointed rings
/// with non-self-dual labels couple `d_a` and `d_{a*}` only), the solution is
/// taken among the ring characters lying in that kernel.
pub fn quantum_dims(ring: &FusionRing, r: &RSymbolTable, t: &Twist, tol: &Tolerance) -> Result<Vec<C64>> {
    if ring.rank() == 0 {
        return Ok(Vec::new());
    }
    let m = twist_trace_matrix(ring, r, t);
    let dims: Vec<C64> = match kernel_vector(&m, UNIT, tol) {
        Ok(v) => v.iter().copied().collect(),
        Err(Error::AmbiguousKernel(k)) => {
            let cut = tol.eq_tol * (1.0 + spectral_norm(&m));
            let inside: Vec<Vec<C64>> = ring
                .characters(tol)?
                .into_iter()
                .filter(|chi| {
                    let v = nalgebra::DVector::from_column_slice(chi);
                    (&m * v).camax() <= cut * dims_scale(chi).sqrt()
                })
                .collect();
            match inside.len() {
                1 => inside.into_iter().next().unwrap(),
                0 => return Err(Error::NoKernel(0.0)),
                _ => return Err(Error::AmbiguousKernel(k)),
            }
        }
        Err(e) => return Err(e),
    };
    let defect = dims_defect(ring, &dims);
    if defect > tol.eq_tol * dims_scale(&dims) {
        return Err(Error::MultiplicativityViolation(defect));
    }
    Ok(dims)
}

fn twist_from_dims(ring: &FusionRing, r: &RSymbolTable, dims: &[C64]) -> Option<Twist> {
    let mut theta = Vec::with_capacity(ring.rank());
    for a in ring.labels() {
        if a == UNIT {
            theta.push(ONE);
            continue;
        }
        let trace: C64 = ring.fuse(a, a).iter().map(|&c| r.get(a, a, c) * dims[c]).sum();
        let t = trace / dims[a];
        if !(t.re.is_finite() && t.im.is_finite()) || t.norm() == 0.0 {
            return None;
        }
        theta.push(t);
    }
    Some(Twist { theta })
}

/// The canonical ribbon twist of a braiding.
///
/// Each ring character `χ` (the Frobenius-Perron one first) is tried as the
/// dimension function in `θ_a = Σ_c N^{aa}_c R^{aa}_c χ_c / χ_a`; the first
/// candidate passing balancing and the ribbon condition wins. For unitary data
/// that is the Frobenius-Perron character.
pub fn canonical_twist(ring: &FusionRing, r: &RSymbolTable, tol: &Tolerance) -> Result<Twist> {
    if ring.rank() == 0 {
        return Ok(Twist { theta: Vec::new() });
    }
    let fp: Vec<f64> = ring.fp_dimensions()?;
    let mut candidates = ring.characters(tol)?;
    let distance = |chi: &Vec<C64>| {
        chi.iter()
            .zip(&fp)
            .map(|(x, d)| (x - d).norm())
            .fold(0.0, f64::max)
    };
    // stable sort keeps the deterministic character order among the rest
    candidates.sort_by(|a, b| {
        let (da, db) = (distance(a), distance(b));
        let close_a = da <= tol.dedup_tol;
        let close_b = db <= tol.dedup_tol;
        close_b.cmp(&close_a)
    });
    let mut best = (f64::INFINITY, f64::INFINITY);
    for chi in &candidates {
        if chi.iter().any(|x| x.norm() <= tol.eq_tol) {
            continue;
        }
        let Some(twist) = twist_from_dims(ring, r, chi) else {
            continue;
        };
        let balancing = check_balancing(ring, r, &twist);
        let ribbon = check_ribbon_condition(ring, &twist);
        if balancing <= tol.eq_tol && ribbon <= tol.eq_tol {
            return Ok(twist);
        }
        if balancing.max(ribbon) < best.0.max(best.1) {
            best = (balancing, ribbon);
        }
    }
    Err(Error::NoConsistentTwist {
        balancing: best.0,
        ribbon: best.1,
    })
}

/// All ribbon structures `seed·γ`, one per sign character, in sign-character
/// order (so the seed itself comes first).
pub fn enumerate_ribbon_structures(
    ring: &FusionRing,
    r: &RSymbolTable,
    seed: &Twist,
    tol: &Tolerance,
) -> Result<Vec<RibbonStructure>> {
    let balancing = check_balancing(ring, r, seed);
    let ribbon = check_ribbon_condition(ring, seed);
    if balancing > tol.eq_tol || ribbon > tol.eq_tol {
        return Err(Error::InvalidSeed { balancing, ribbon });
    }
    sign_characters(ring)
        .into_iter()
        .map(|sign| {
            let twist = seed.scaled(&sign);
            let dims = quantum_dims(ring, r, &twist, tol)?;
            Ok(RibbonStructure { twist, dims, sign })
        })
        .collect()
}

/// Whether every twist is unimodular and every dimension real and positive.
pub fn is_unitary_ribbon(rib: &RibbonStructure, ring: &FusionRing, tol: &Tolerance) -> Result<bool> {
    for (a, d) in rib.dims.iter().enumerate() {
        if d.re.abs() <= tol.eq_tol && d.im.abs() <= tol.eq_tol {
            return Err(Error::DegenerateDimension(ring.name(a).to_string()));
        }
    }
    let positive = rib.dims.iter().all(|d| d.im.abs() <= tol.eq_tol && d.re > tol.eq_tol);
    Ok(positive && rib.twist.unitarity_defect() <= tol.eq_tol)
}

/// Picks the unique unitary ribbon structure, returning its index.
///
/// With unitary F-data the absence of a unitary ribbon structure is reported
/// as a theorem violation rather than an ordinary negative result.
pub fn select_unitary_ribbon(
    ring: &FusionRing,
    structures: &[RibbonStructure],
    f_unitary: bool,
    tol: &Tolerance,
) -> Result<usize> {
    let mut survivors = Vec::new();
    for (i, s) in structures.iter().enumerate() {
        if is_unitary_ribbon(s, ring, tol)? {
            survivors.push(i);
        }
    }
    match survivors.len() {
        1 => Ok(survivors[0]),
        0 if f_unitary => Err(Error::TheoremViolation(
            "unitary F-data but no ribbon structure with unimodular twists and positive dimensions".into(),
        )),
        0 => Err(Error::NoUnitaryRibbon),
        k => Err(Error::MultipleUnitaryRibbons(k)),
    }
}
