//! Braiding data: R-symbol tables, the two hexagon families, numerical
//! enumeration of all braidings compatible with a fixed F, and the
//! unitarity check on braidings.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fsymbols::{fmt3, FSymbolTable, GaugeTransformation};
use crate::fusion_ring::{FusionRing, UNIT};
use crate::numerics::{cmp_complex_vectors, dedup_and_sort, multistart_root_solve, phase, Tolerance, C64, ONE};

/// `R^{ab}_c` for every admissible triple.
#[derive(Debug, Clone, PartialEq)]
pub struct RSymbolTable {
    ring: Arc<FusionRing>,
    entries: BTreeMap<[usize; 3], C64>,
}

impl RSymbolTable {
    /// Unit triples default to 1; every other admissible triple is required
    /// and must be nonzero.
    pub fn new(ring: Arc<FusionRing>, given: impl IntoIterator<Item = ([usize; 3], C64)>) -> Result<Self> {
        let mut problems = Vec::new();
        let mut entries = BTreeMap::new();
        for ([a, b, c], v) in given {
            if [a, b, c].iter().any(|&x| x >= ring.rank()) {
                return Err(Error::LabelOutOfRange(a.max(b).max(c)));
            }
            let name = fmt3(&ring, a, b, c);
            if !ring.admissible(a, b, c) {
                problems.push(format!("inadmissible R entry {name}"));
            } else if !(v.re.is_finite() && v.im.is_finite()) {
                problems.push(format!("non-finite R entry {name}"));
            } else if v.norm() == 0.0 {
                problems.push(format!("R entry {name} is zero"));
            } else if (a == UNIT || b == UNIT) && v != ONE {
                problems.push(format!("unit R entry {name} must be 1"));
            } else {
                entries.insert([a, b, c], v);
            }
        }
        for (a, b, c) in ring.admissible_triples() {
            if entries.contains_key(&[a, b, c]) {
                continue;
            }
            if a == UNIT || b == UNIT {
                entries.insert([a, b, c], ONE);
            } else {
                problems.push(format!("missing R entry {}", fmt3(&ring, a, b, c)));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(RSymbolTable { ring, entries })
    }

    pub fn ring(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    /// The entry; inadmissible triples read as zero.
    pub fn get(&self, a: usize, b: usize, c: usize) -> C64 {
        self.entries.get(&[a, b, c]).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &C64)> {
        self.entries.iter()
    }

    /// Entries with both `a` and `b` non-unit, in triple order.
    pub fn free_entries(&self) -> Vec<C64> {
        self.entries
            .iter()
            .filter(|(k, _)| k[0] != UNIT && k[1] != UNIT)
            .map(|(_, v)| *v)
            .collect()
    }

    /// Double braiding `R^{ba}_c R^{ab}_c`.
    pub fn monodromy(&self, a: usize, b: usize, c: usize) -> Result<C64> {
        if a.max(b).max(c) >= self.ring.rank() || !self.ring.admissible(a, b, c) {
            return Err(Error::InadmissibleTriple(format!("({a},{b};{c})")));
        }
        Ok(self.get(b, a, c) * self.get(a, b, c))
    }

    /// `max | |R^{ab}_c| − 1 |`.
    pub fn check_braiding_unitarity(&self) -> f64 {
        self.entries
            .values()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `R'^{ab}_c = g^{ab}_c / g^{ba}_c · R^{ab}_c`, the action that matches
    /// [`FSymbolTable::apply_gauge`] on the hexagons.
    pub fn apply_gauge(&self, g: &GaugeTransformation) -> Result<RSymbolTable> {
        let mut entries = BTreeMap::new();
        for (&[a, b, c], &v) in &self.entries {
            let factor = g.get(&self.ring, a, b, c)? / g.get(&self.ring, b, a, c)?;
            entries.insert([a, b, c], factor * v);
        }
        Ok(RSymbolTable {
            ring: self.ring.clone(),
            entries,
        })
    }

    /// The reverse braiding `R^{ab}_c ↦ 1 / R^{ba}_c`.
    pub fn reverse(&self) -> RSymbolTable {
        let entries = self
            .entries
            .keys()
            .map(|&[a, b, c]| ([a, b, c], self.get(b, a, c).inv()))
            .collect();
        RSymbolTable {
            ring: self.ring.clone(),
            entries,
        }
    }

    fn from_free(ring: Arc<FusionRing>, keys: &[[usize; 3]], values: &[C64]) -> Result<Self> {
        Self::new(ring, keys.iter().copied().zip(values.iter().copied()))
    }
}

/// One hexagon equation `R(x)·F·R(y) = Σ coef·R(z)`, or its inverse-braiding
/// counterpart where every R is replaced by its reciprocal.
#[derive(Debug, Clone)]
struct HexagonEquation {
    inverse: bool,
    first: [usize; 3],
    second: [usize; 3],
    lhs_coef: C64,
    terms: Vec<(C64, [usize; 3])>,
}

impl HexagonEquation {
    fn residual(&self, r: impl Fn([usize; 3]) -> C64) -> C64 {
        if self.inverse {
            let lhs = self.lhs_coef / (r(self.first) * r(self.second));
            let rhs: C64 = self.terms.iter().map(|(c, k)| c / r(*k)).sum();
            lhs - rhs
        } else {
            let lhs = r(self.first) * self.lhs_coef * r(self.second);
            let rhs: C64 = self.terms.iter().map(|(c, k)| c * r(*k)).sum();
            lhs - rhs
        }
    }

    fn keys(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        [self.first, self.second]
            .into_iter()
            .chain(self.terms.iter().map(|(_, k)| *k))
    }
}

/// Both hexagon families for a fixed F:
///
/// `R^{ca}_e [F^{acb}_d]_{eg} R^{cb}_g = Σ_f [F^{cab}_d]_{ef} R^{cf}_d [F^{abc}_d]_{fg}`
///
/// and the same identity with `R^{xy}_z` replaced by `(R^{yx}_z)^{-1}`.
#[derive(Debug, Clone)]
pub struct HexagonSystem {
    equations: Vec<HexagonEquation>,
}

impl HexagonSystem {
    pub fn new(f: &FSymbolTable) -> Self {
        let r = f.ring();
        let mut equations = Vec::new();
        for a in r.labels() {
            for b in r.labels() {
                for c in r.labels() {
                    for d in r.labels() {
                        for &e in r.fuse(a, c) {
                            if !r.admissible(e, b, d) {
                                continue;
                            }
                            for &g in r.fuse(c, b) {
                                if !r.admissible(a, g, d) {
                                    continue;
                                }
                                let lhs_coef = f.get(a, c, b, d, e, g);
                                let channels: Vec<usize> = r
                                    .fuse(a, b)
                                    .iter()
                                    .copied()
                                    .filter(|&x| r.admissible(c, x, d))
                                    .collect();
                                let coef = |x: usize| f.get(c, a, b, d, e, x) * f.get(a, b, c, d, x, g);
                                equations.push(HexagonEquation {
                                    inverse: false,
                                    first: [c, a, e],
                                    second: [c, b, g],
                                    lhs_coef,
                                    terms: channels.iter().map(|&x| (coef(x), [c, x, d])).collect(),
                                });
                                equations.push(HexagonEquation {
                                    inverse: true,
                                    first: [a, c, e],
                                    second: [b, c, g],
                                    lhs_coef,
                                    terms: channels.iter().map(|&x| (coef(x), [x, c, d])).collect(),
                                });
                            }
                        }
                    }
                }
            }
        }
        HexagonSystem { equations }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn max_residual(&self, r: &RSymbolTable) -> f64 {
        self.equations
            .iter()
            .map(|eq| eq.residual(|[a, b, c]| r.get(a, b, c)).norm())
            .fold(0.0, f64::max)
    }
}

/// Max deviation over both hexagon families.
pub fn check_hexagons(f: &FSymbolTable, r: &RSymbolTable) -> f64 {
    HexagonSystem::new(f).max_residual(r)
}

/// Non-unit admissible triples, the unknowns of the hexagon system.
fn unknown_keys(ring: &FusionRing) -> Vec<[usize; 3]> {
    ring.admissible_triples()
        .filter(|&(a, b, _)| a != UNIT && b != UNIT)
        .map(|(a, b, c)| [a, b, c])
        .collect()
}

fn lookup<'a>(index: &'a BTreeMap<[usize; 3], usize>, x: &'a [C64]) -> impl Fn([usize; 3]) -> C64 + 'a {
    move |k: [usize; 3]| {
        if k[0] == UNIT || k[1] == UNIT {
            ONE
        } else {
            x[index[&k]]
        }
    }
}

/// Enumerates braidings compatible with `f`.
///
/// Pointed rings are searched exhaustively over `2n`-th roots of unity with
/// hexagon pruning; everything else goes through seeded multi-start descent.
/// Every returned table satisfies both hexagon families to `solver_tol`.
pub fn solve_braidings(f: &FSymbolTable, starts: usize, seed: u64, tol: &Tolerance) -> Vec<RSymbolTable> {
    let ring = f.ring().clone();
    let keys = unknown_keys(&ring);
    let system = HexagonSystem::new(f);
    let roots = if ring.is_pointed() {
        grid_roots(&ring, &keys, &system, tol)
    } else {
        let index: BTreeMap<[usize; 3], usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let found = multistart_root_solve(
            |x: &[C64]| {
                let r = lookup(&index, x);
                system
                    .equations
                    .iter()
                    .flat_map(|eq| {
                        let z = eq.residual(&r);
                        [z.re, z.im]
                    })
                    .collect()
            },
            keys.len(),
            starts,
            seed,
            tol,
        );
        // the reverse of a braiding is a braiding
        let reversed = found.iter().map(|x| {
            keys.iter()
                .map(|&[a, b, c]| x[index[&[b, a, c]]].inv())
                .collect::<Vec<C64>>()
        });
        let closed: Vec<Vec<C64>> = found.iter().cloned().chain(reversed).collect();
        dedup_and_sort(closed, tol)
    };
    roots
        .into_iter()
        .filter_map(|x| RSymbolTable::from_free(ring.clone(), &keys, &x).ok())
        .filter(|r| system.max_residual(r) <= tol.solver_tol)
        .collect()
}

/// Depth-first search over roots of unity of order `2·rank`, checking each
/// hexagon equation as soon as all of its unknowns are assigned.
fn grid_roots(
    ring: &FusionRing,
    keys: &[[usize; 3]],
    system: &HexagonSystem,
    tol: &Tolerance,
) -> Vec<Vec<C64>> {
    let order = 2 * ring.rank();
    let grid: Vec<C64> = (0..order).map(|k| phase(2.0 * k as f64 / order as f64)).collect();
    let index: BTreeMap<[usize; 3], usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();

    // equations bucketed by the last unknown they depend on
    let mut ready: Vec<Vec<&HexagonEquation>> = vec![Vec::new(); keys.len()];
    let mut constant = Vec::new();
    for eq in &system.equations {
        match eq.keys().filter_map(|k| index.get(&k).copied()).max() {
            Some(i) => ready[i].push(eq),
            None => constant.push(eq),
        }
    }
    let no_unknowns: [C64; 0] = [];
    if constant
        .iter()
        .any(|eq| eq.residual(lookup(&index, &no_unknowns)).norm() > tol.eq_tol)
    {
        return Vec::new();
    }
    if keys.is_empty() {
        return vec![Vec::new()];
    }

    let mut out = Vec::new();
    let mut assignment = vec![ONE; keys.len()];
    fn descend(
        depth: usize,
        assignment: &mut Vec<C64>,
        grid: &[C64],
        ready: &[Vec<&HexagonEquation>],
        index: &BTreeMap<[usize; 3], usize>,
        tol: &Tolerance,
        out: &mut Vec<Vec<C64>>,
    ) {
        if depth == assignment.len() {
            out.push(assignment.clone());
            return;
        }
        for &z in grid {
            assignment[depth] = z;
            let ok = ready[depth]
                .iter()
                .all(|eq| eq.residual(lookup(index, assignment)).norm() <= tol.eq_tol);
            if ok {
                descend(depth + 1, assignment, grid, ready, index, tol, out);
            }
        }
    }
    descend(0, &mut assignment, &grid, &ready, &index, tol, &mut out);
    out.sort_by(|a, b| cmp_complex_vectors(a, b, tol.eq_tol));
    out
}
