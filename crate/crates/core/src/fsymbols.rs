//! Associativity data: F-symbol tables, the pentagon check, F-unitarity and
//! gauge transformations of fusion-space bases.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fusion_ring::{FusionRing, UNIT};
use crate::numerics::{phase, singular_value_range, Tolerance, C64, ONE, ZERO};

/// `[F^{abc}_d]_{e,f}` for every admissible `(a,b,c,d,e,f)`.
///
/// `e` labels the channel of `a⊗b`, `f` the channel of `b⊗c`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSymbolTable {
    ring: Arc<FusionRing>,
    entries: BTreeMap<[usize; 6], C64>,
}

fn fmt6(ring: &FusionRing, t: &[usize; 6]) -> String {
    let n: Vec<&str> = t.iter().map(|&i| ring.name(i)).collect();
    format!("F[{},{},{};{}]({},{})", n[0], n[1], n[2], n[3], n[4], n[5])
}

pub(crate) fn fmt3(ring: &FusionRing, a: usize, b: usize, c: usize) -> String {
    format!("({},{};{})", ring.name(a), ring.name(b), ring.name(c))
}

impl FSymbolTable {
    /// Builds a table from explicit entries. Unit-indexed entries (`a`, `b` or
    /// `c` the unit) default to 1; every other admissible entry must be given.
    pub fn new(
        ring: Arc<FusionRing>,
        given: impl IntoIterator<Item = ([usize; 6], C64)>,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        let mut entries = BTreeMap::new();
        for (t, v) in given {
            if t.iter().any(|&x| x >= ring.rank()) {
                return Err(Error::LabelOutOfRange(*t.iter().max().unwrap()));
            }
            let [a, b, c, d, e, f] = t;
            let ok = ring.admissible(a, b, e)
                && ring.admissible(e, c, d)
                && ring.admissible(b, c, f)
                && ring.admissible(a, f, d);
            if !ok {
                problems.push(format!("inadmissible entry {}", fmt6(&ring, &t)));
                continue;
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                problems.push(format!("non-finite entry {}", fmt6(&ring, &t)));
                continue;
            }
            if (a == UNIT || b == UNIT || c == UNIT) && v != ONE {
                problems.push(format!("unit-indexed entry {} must be 1", fmt6(&ring, &t)));
                continue;
            }
            entries.insert(t, v);
        }
        for t in ring.admissible_sextuples() {
            if entries.contains_key(&t) {
                continue;
            }
            if t[0] == UNIT || t[1] == UNIT || t[2] == UNIT {
                entries.insert(t, ONE);
            } else {
                problems.push(format!("missing entry {}", fmt6(&ring, &t)));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(FSymbolTable { ring, entries })
    }

    /// All-ones table, the associator of a pointed category with trivial cocycle.
    pub fn trivial(ring: Arc<FusionRing>) -> Result<Self> {
        let all = ring.admissible_sextuples().into_iter().map(|t| (t, ONE)).collect::<Vec<_>>();
        Self::new(ring, all)
    }

    pub fn ring(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    /// The entry, or zero for inadmissible indices.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        self.entries.get(&[a, b, c, d, e, f]).copied().unwrap_or(ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 6], &C64)> {
        self.entries.iter()
    }

    /// The matrix `[F^{abc}_d]` with its row labels `e` and column labels `f`.
    pub fn block(&self, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>, DMatrix<C64>) {
        let r = &self.ring;
        let es: Vec<usize> = r.fuse(a, b).iter().copied().filter(|&e| r.admissible(e, c, d)).collect();
        let fs: Vec<usize> = r.fuse(b, c).iter().copied().filter(|&f| r.admissible(a, f, d)).collect();
        let m = DMatrix::from_fn(es.len(), fs.len(), |i, j| self.get(a, b, c, d, es[i], fs[j]));
        (es, fs, m)
    }

    fn blocks(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.ring.rank();
        (0..n).flat_map(move |a| {
            (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d))))
        })
    }

    /// Blocks that are not square or numerically singular.
    pub fn singular_blocks(&self, tol: &Tolerance) -> Vec<String> {
        let mut out = Vec::new();
        for (a, b, c, d) in self.blocks() {
            let (es, fs, m) = self.block(a, b, c, d);
            if es.is_empty() && fs.is_empty() {
                continue;
            }
            let r = &self.ring;
            let name = format!("F[{},{},{};{}]", r.name(a), r.name(b), r.name(c), r.name(d));
            if es.len() != fs.len() {
                out.push(format!("{name} is {}x{}", es.len(), fs.len()));
                continue;
            }
            let (smallest, largest) = singular_value_range(&m);
            if smallest <= tol.eq_tol * largest.max(1.0) {
                out.push(format!("{name} is singular"));
            }
        }
        out
    }

    /// Max deviation of the pentagon identity
    /// `[F^{fcd}_e]_{gl}[F^{abl}_e]_{fk} = Σ_h [F^{abc}_g]_{fh}[F^{ahd}_e]_{gk}[F^{bcd}_k]_{hl}`.
    pub fn check_pentagon(&self) -> f64 {
        let r = &self.ring;
        let mut worst: f64 = 0.0;
        for a in r.labels() {
            for b in r.labels() {
                for c in r.labels() {
                    for d in r.labels() {
                        for e in r.labels() {
                            for &f in r.fuse(a, b) {
                                for &g in r.fuse(f, c) {
                                    if !r.admissible(g, d, e) {
                                        continue;
                                    }
                                    for &l in r.fuse(c, d) {
                                        for &k in r.fuse(b, l) {
                                            if !r.admissible(a, k, e) {
                                                continue;
                                            }
                                            let lhs = self.get(f, c, d, e, g, l) * self.get(a, b, l, e, f, k);
                                            let rhs: C64 = r
                                                .fuse(b, c)
                                                .iter()
                                                .map(|&h| {
                                                    self.get(a, b, c, g, f, h)
                                                        * self.get(a, h, d, e, g, k)
                                                        * self.get(b, c, d, k, h, l)
                                                })
                                                .sum();
                                            worst = worst.max((lhs - rhs).norm());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// `max_{abcd} ‖F F† − I‖_max`.
    pub fn check_f_unitarity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b, c, d) in self.blocks() {
            let (es, fs, m) = self.block(a, b, c, d);
            if es.is_empty() {
                continue;
            }
            if es.len() != fs.len() {
                return f64::INFINITY;
            }
            let prod = &m * m.adjoint();
            let dev = (prod - DMatrix::<C64>::identity(es.len(), es.len()))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
        }
        worst
    }

    pub fn is_unitary_gauge(&self, tol: &Tolerance) -> bool {
        self.check_f_unitarity() <= tol.eq_tol
    }

    /// `[F'^{abc}_d]_{ef} = g^{ab}_e g^{ec}_d / (g^{bc}_f g^{af}_d) · [F^{abc}_d]_{ef}`.
    pub fn apply_gauge(&self, g: &GaugeTransformation) -> Result<FSymbolTable> {
        let mut entries = BTreeMap::new();
        for (&t, &v) in &self.entries {
            let [a, b, c, d, e, f] = t;
            let factor = g.get(&self.ring, a, b, e)? * g.get(&self.ring, e, c, d)?
                / (g.get(&self.ring, b, c, f)? * g.get(&self.ring, a, f, d)?);
            entries.insert(t, factor * v);
        }
        Ok(FSymbolTable {
            ring: self.ring.clone(),
            entries,
        })
    }
}

/// A rescaling `g^{ab}_c` of every fusion space; trivial on unit triples.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransformation {
    g: BTreeMap<[usize; 3], C64>,
}

impl GaugeTransformation {
    pub fn identity(ring: &FusionRing) -> Self {
        GaugeTransformation {
            g: ring.admissible_triples().map(|(a, b, c)| ([a, b, c], ONE)).collect(),
        }
    }

    /// Builds a gauge from explicit values. Unit triples are forced to 1,
    /// missing non-unit triples are an error.
    pub fn new(ring: &FusionRing, values: impl IntoIterator<Item = ([usize; 3], C64)>) -> Result<Self> {
        let mut g: BTreeMap<[usize; 3], C64> = values.into_iter().collect();
        for (a, b, c) in ring.admissible_triples() {
            if a == UNIT || b == UNIT {
                g.insert([a, b, c], ONE);
            } else {
                match g.get(&[a, b, c]) {
                    None => return Err(Error::MissingGaugeEntry(fmt3(ring, a, b, c))),
                    Some(v) if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() => {
                        return Err(Error::Validation(vec![format!(
                            "gauge entry {} must be finite and nonzero",
                            fmt3(ring, a, b, c)
                        )]))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(GaugeTransformation { g })
    }

    /// Random gauge; unimodular entries, or moduli in `[1/2, 2]` otherwise.
    pub fn random<R: Rng>(ring: &FusionRing, rng: &mut R, unimodular: bool) -> Self {
        let g = ring
            .admissible_triples()
            .map(|(a, b, c)| {
                let v = if a == UNIT || b == UNIT {
                    ONE
                } else {
                    let modulus = if unimodular { 1.0 } else { rng.random_range(0.5..2.0) };
                    phase(rng.random_range(-1.0..1.0)) * modulus
                };
                ([a, b, c], v)
            })
            .collect();
        GaugeTransformation { g }
    }

    /// Gauge values that are symmetric, `g^{ab}_c = g^{ba}_c`.
    pub fn symmetrized(&self) -> Self {
        let mut g = self.g.clone();
        for (&[a, b, c], v) in g.iter_mut() {
            if b < a {
                *v = self.g[&[b, a, c]];
            }
        }
        GaugeTransformation { g }
    }

    pub fn inverse(&self) -> Self {
        GaugeTransformation {
            g: self.g.iter().map(|(&k, v)| (k, v.inv())).collect(),
        }
    }

    pub fn get(&self, ring: &FusionRing, a: usize, b: usize, c: usize) -> Result<C64> {
        self.g
            .get(&[a, b, c])
            .copied()
            .ok_or_else(|| Error::MissingGaugeEntry(fmt3(ring, a, b, c)))
    }

    pub fn is_unimodular(&self, eps: f64) -> bool {
        self.g.values().all(|v| (v.norm() - 1.0).abs() <= eps)
    }
}
