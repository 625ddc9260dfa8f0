//! JSON model files.
//!
//! ```json
//! {
//!   "name": "fibonacci",
//!   "labels": ["1", "tau"],
//!   "dual": {"1": "1", "tau": "tau"},
//!   "fusion": [{"a": "tau", "b": "tau", "c": "1"}, {"a": "tau", "b": "tau", "c": "tau"}],
//!   "F": [{"a": "tau", "b": "tau", "c": "tau", "d": "tau", "e": "1", "f": "1", "re": 0.618, "im": 0.0}],
//!   "R": [{"a": "tau", "b": "tau", "c": "1", "re": -0.809, "im": -0.588}],
//!   "twist": {"tau": {"re": -0.809, "im": 0.588}}
//! }
//! ```
//!
//! The first label is the unit. Unit fusion rules and unit-indexed F and R
//! entries are implied and may be omitted; every other admissible entry is
//! required. `R` and `twist` are optional.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::braiding::RSymbolTable;
use crate::error::{Error, Result};
use crate::fsymbols::FSymbolTable;
use crate::fusion_ring::{FusionRing, UNIT};
use crate::numerics::{Tolerance, C64, ONE};
use crate::ribbon::Twist;

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexRecord> for C64 {
    fn from(c: ComplexRecord) -> Self {
        C64::new(c.re, c.im)
    }
}

impl From<C64> for ComplexRecord {
    fn from(z: C64) -> Self {
        ComplexRecord { re: z.re, im: z.im }
    }
}

/// On-disk form of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub labels: Vec<String>,
    pub dual: IndexMap<String, String>,
    pub fusion: Vec<FusionRecord>,
    #[serde(rename = "F")]
    pub f: Vec<FRecord>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<RRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<IndexMap<String, ComplexRecord>>,
}

/// A validated model.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub ring: Arc<FusionRing>,
    pub f: FSymbolTable,
    pub r: Option<RSymbolTable>,
    pub twist: Option<Twist>,
}

struct Labels<'a> {
    ring_names: &'a [String],
    problems: Vec<String>,
}

impl Labels<'_> {
    fn get(&mut self, name: &str, context: &str) -> Option<usize> {
        let found = self.ring_names.iter().position(|n| n == name);
        if found.is_none() {
            self.problems.push(format!("unknown label `{name}` in {context}"));
        }
        found
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files always serialize");
        s.push('\n');
        s
    }

    /// Validates everything and collects every problem found.
    pub fn into_model(self) -> Result<Model> {
        if self.labels.is_empty() {
            return Err(Error::Validation(vec!["model has no labels".into()]));
        }
        for rec in &self.fusion {
            if rec.n > 1 {
                return Err(Error::MultiplicityUnsupported {
                    a: rec.a.clone(),
                    b: rec.b.clone(),
                    c: rec.c.clone(),
                    mult: rec.n,
                });
            }
        }
        let mut labels = Labels {
            ring_names: &self.labels,
            problems: Vec::new(),
        };

        let mut dual = vec![usize::MAX; self.labels.len()];
        for (a, b) in &self.dual {
            if let (Some(i), Some(j)) = (labels.get(a, "dual"), labels.get(b, "dual")) {
                dual[i] = j;
            }
        }
        for (i, d) in dual.iter_mut().enumerate() {
            if *d == usize::MAX {
                labels.problems.push(format!("dual of `{}` not given", self.labels[i]));
                *d = i;
            }
        }
        let mut triples = Vec::new();
        for rec in self.fusion.iter().filter(|r| r.n == 1) {
            let ctx = format!("fusion ({}, {}, {})", rec.a, rec.b, rec.c);
            let t = (labels.get(&rec.a, &ctx), labels.get(&rec.b, &ctx), labels.get(&rec.c, &ctx));
            if let (Some(a), Some(b), Some(c)) = t {
                triples.push((a, b, c));
            }
        }
        let mut f_entries = Vec::new();
        for rec in &self.f {
            let ctx = "F record";
            let idx = [&rec.a, &rec.b, &rec.c, &rec.d, &rec.e, &rec.f].map(|n| labels.get(n, ctx));
            if idx.iter().all(Option::is_some) {
                f_entries.push((idx.map(Option::unwrap), C64::new(rec.re, rec.im)));
            }
        }
        let mut r_entries = Vec::new();
        for rec in self.r.iter().flatten() {
            let idx = [&rec.a, &rec.b, &rec.c].map(|n| labels.get(n, "R record"));
            if idx.iter().all(Option::is_some) {
                r_entries.push((idx.map(Option::unwrap), C64::new(rec.re, rec.im)));
            }
        }
        let mut theta = vec![None; self.labels.len()];
        for (name, value) in self.twist.iter().flatten() {
            if let Some(i) = labels.get(name, "twist") {
                theta[i] = Some(C64::from(*value));
            }
        }
        let mut problems = labels.problems;
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }

        let ring = FusionRing::with_unit_rules(self.labels.clone(), dual, triples)?;
        let violations = ring.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations.iter().map(|v| v.describe(&ring)).collect()));
        }
        let ring = Arc::new(ring);

        let f = match FSymbolTable::new(ring.clone(), f_entries) {
            Ok(f) => {
                problems.extend(f.singular_blocks(&Tolerance::default()));
                Some(f)
            }
            Err(Error::Validation(v)) => {
                problems.extend(v);
                None
            }
            Err(e) => return Err(e),
        };
        let r = match &self.r {
            None => None,
            Some(_) => match RSymbolTable::new(ring.clone(), r_entries) {
                Ok(r) => Some(r),
                Err(Error::Validation(v)) => {
                    problems.extend(v);
                    None
                }
                Err(e) => return Err(e),
            },
        };
        let twist = match &self.twist {
            None => None,
            Some(_) => {
                theta[UNIT].get_or_insert(ONE);
                let missing: Vec<String> = theta
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.is_none())
                    .map(|(i, _)| format!("twist of `{}` not given", ring.name(i)))
                    .collect();
                if missing.is_empty() {
                    match Twist::new(theta.into_iter().map(Option::unwrap).collect()) {
                        Ok(t) => Some(t),
                        Err(Error::Validation(v)) => {
                            problems.extend(v);
                            None
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    problems.extend(missing);
                    None
                }
            }
        };
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(Model {
            name: self.name,
            ring,
            f: f.expect("no problems means F was built"),
            r,
            twist,
        })
    }
}

pub fn parse_model(text: &str) -> Result<Model> {
    ModelFile::from_json(text)?.into_model()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    parse_model(&text)
}

impl Model {
    /// Canonical on-disk form: implied unit data omitted, records in label order.
    pub fn to_file(&self) -> ModelFile {
        let ring = &self.ring;
        let name = |i: usize| ring.name(i).to_string();
        let fusion = ring
            .admissible_triples()
            .filter(|&(a, b, _)| a != UNIT && b != UNIT)
            .map(|(a, b, c)| FusionRecord {
                a: name(a),
                b: name(b),
                c: name(c),
                n: 1,
            })
            .collect();
        let f = self
            .f
            .entries()
            .filter(|(t, _)| !t[..3].contains(&UNIT))
            .map(|(t, v)| FRecord {
                a: name(t[0]),
                b: name(t[1]),
                c: name(t[2]),
                d: name(t[3]),
                e: name(t[4]),
                f: name(t[5]),
                re: v.re,
                im: v.im,
            })
            .collect();
        let r = self.r.as_ref().map(|r| {
            r.entries()
                .filter(|(t, _)| t[0] != UNIT && t[1] != UNIT)
                .map(|(t, v)| RRecord {
                    a: name(t[0]),
                    b: name(t[1]),
                    c: name(t[2]),
                    re: v.re,
                    im: v.im,
                })
                .collect()
        });
        let twist = self.twist.as_ref().map(|t| {
            ring.labels()
                .map(|a| (name(a), ComplexRecord::from(t.theta[a])))
                .collect()
        });
        ModelFile {
            name: self.name.clone(),
            labels: ring.names().to_vec(),
            dual: ring.labels().map(|a| (name(a), name(ring.dual(a)))).collect(),
            fusion,
            f,
            r,
            twist,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }
}
