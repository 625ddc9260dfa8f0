//! End-to-end verification pipeline and its report.
//!
//! validate → pentagon → F-unitarity → braidings → canonical twist → ribbon
//! structures → unitary selection → S/T. Stage failures are recorded in the
//! report and later stages run on whatever survived.

use std::fmt::Write as _;

use serde::Serialize;

use crate::braiding::{check_hexagons, solve_braidings, RSymbolTable};
use crate::error::Error;
use crate::fusion_ring::{FusionRing, UNIT};
use crate::model::{Model, RRecord};
use crate::modular::{modular_data, Verdict};
use crate::numerics::{max_distance, Tolerance, C64};
use crate::ribbon::{
    canonical_twist, check_balancing, check_ribbon_condition, enumerate_ribbon_structures, is_unitary_ribbon,
    select_unitary_ribbon, Twist,
};

/// Braidings of unitary F-data must be unitary to this deviation.
pub const BRAIDING_THEOREM_TOL: f64 = 1e-6;

pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_SEED: u64 = 20_130_722;

/// Last pipeline stage to run; each CLI verb maps to one prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum Stage {
    /// Ring axioms, pentagon, F-unitarity, and hexagons of the file's own R.
    Validate,
    /// Adds braiding enumeration.
    Braid,
    /// Adds twists, ribbon structures and unitary selection.
    Ribbons,
    /// Adds S/T and the modularity verdict.
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub starts: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub stage: Stage,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            starts: DEFAULT_STARTS,
            seed: DEFAULT_SEED,
            tol: Tolerance::default(),
            stage: Stage::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    NoUnitaryRibbon,
    CoherenceFailure,
    TheoremViolation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Passed => 0,
            Outcome::CoherenceFailure => 1,
            Outcome::NoUnitaryRibbon => 2,
            Outcome::TheoremViolation => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageError {
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braiding: Option<String>,
    pub message: String,
    #[serde(skip)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitarityReport {
    pub deviation: f64,
    pub unitary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RibbonReport {
    pub sign: Vec<i8>,
    pub flipped: Vec<String>,
    pub twist: Vec<[f64; 2]>,
    pub dims: Vec<[f64; 2]>,
    pub balancing_residual: f64,
    pub unitary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularReport {
    /// Index into the braiding's ribbon list.
    pub ribbon: usize,
    pub s_tilde: Vec<Vec<[f64; 2]>>,
    pub t: Vec<[f64; 2]>,
    pub total_dim_sq: f64,
    pub verdict: Verdict,
    pub s_unitarity_defect: f64,
    pub s_symmetry_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BraidingReport {
    pub id: String,
    pub r: Vec<RRecord>,
    pub hexagon_residual: f64,
    pub unitarity: UnitarityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_solver: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_twist: Option<Vec<[f64; 2]>>,
    pub ribbons: Vec<RibbonReport>,
    pub unitary_ribbon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model: String,
    pub labels: Vec<String>,
    pub tolerances: Tolerance,
    pub starts: usize,
    pub seed: u64,
    #[serde(skip)]
    pub stage: Stage,
    pub ring_violations: Vec<String>,
    pub fp_dimensions: Vec<f64>,
    pub pentagon_residual: f64,
    pub f_unitarity: UnitarityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_braiding: Option<BraidingReport>,
    pub braidings: Vec<BraidingReport>,
    pub errors: Vec<StageError>,
    pub outcome: Outcome,
    pub exit_code: i32,
}

/// Rounds to 12 significant digits so the printed form is stable.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Rounded complex value with round-off noise below 1e-13 cleared.
fn cnum(z: C64) -> [f64; 2] {
    let clean = |v: f64| if v.abs() < 1e-13 { 0.0 } else { sig12(v) };
    [clean(z.re), clean(z.im)]
}

fn r_records(ring: &FusionRing, r: &RSymbolTable) -> Vec<RRecord> {
    r.entries()
        .filter(|(t, _)| t[0] != UNIT && t[1] != UNIT)
        .map(|(t, v)| {
            let [re, im] = cnum(*v);
            RRecord {
                a: ring.name(t[0]).into(),
                b: ring.name(t[1]).into(),
                c: ring.name(t[2]).into(),
                re,
                im,
            }
        })
        .collect()
}

struct Pipeline<'a> {
    model: &'a Model,
    opts: &'a RunOptions,
    f_unitary: bool,
    errors: Vec<StageError>,
}

impl Pipeline<'_> {
    fn fail(&mut self, stage: &str, braiding: Option<&str>, err: &Error) {
        let outcome = match err {
            Error::TheoremViolation(_) | Error::MultipleUnitaryRibbons(_) => Outcome::TheoremViolation,
            Error::NoUnitaryRibbon => Outcome::NoUnitaryRibbon,
            _ => Outcome::CoherenceFailure,
        };
        self.errors.push(StageError {
            stage: stage.into(),
            braiding: braiding.map(str::to_string),
            message: err.to_string(),
            outcome,
        });
    }

    fn braiding(&mut self, id: String, r: &RSymbolTable, seed: Option<&Twist>) -> BraidingReport {
        let ring = &*self.model.ring;
        let tol = &self.opts.tol;
        let hexagon_residual = check_hexagons(&self.model.f, r);
        let deviation = r.check_braiding_unitarity();
        let mut out = BraidingReport {
            id: id.clone(),
            r: r_records(ring, r),
            hexagon_residual: sig12(hexagon_residual),
            unitarity: UnitarityReport {
                deviation: sig12(deviation),
                unitary: deviation <= tol.eq_tol,
            },
            matches_solver: None,
            seed_twist: None,
            ribbons: Vec::new(),
            unitary_ribbon: None,
            modular: None,
        };
        if hexagon_residual > tol.eq_tol {
            let msg = format!("hexagon residual {hexagon_residual:e} exceeds {:e}", tol.eq_tol);
            self.fail("hexagons", Some(&id), &Error::Validation(vec![msg]));
            return out;
        }
        if self.f_unitary && deviation > BRAIDING_THEOREM_TOL {
            let msg = format!("braiding of unitary F-data has unitarity deviation {deviation:e}");
            self.fail("braiding_unitarity", Some(&id), &Error::TheoremViolation(msg));
        }
        if self.opts.stage < Stage::Ribbons {
            return out;
        }

        let seed = match seed {
            Some(t) => t.clone(),
            None => match canonical_twist(ring, r, tol) {
                Ok(t) => t,
                Err(e) => {
                    self.fail("canonical_twist", Some(&id), &e);
                    return out;
                }
            },
        };
        out.seed_twist = Some(seed.theta.iter().map(|z| cnum(*z)).collect());
        let structures = match enumerate_ribbon_structures(ring, r, &seed, tol) {
            Ok(s) => s,
            Err(e) => {
                self.fail("ribbon_structures", Some(&id), &e);
                return out;
            }
        };
        for s in &structures {
            out.ribbons.push(RibbonReport {
                sign: s.sign.gamma.clone(),
                flipped: s.sign.flipped(ring).into_iter().map(String::from).collect(),
                twist: s.twist.theta.iter().map(|z| cnum(*z)).collect(),
                dims: s.dims.iter().map(|z| cnum(*z)).collect(),
                balancing_residual: sig12(check_balancing(ring, r, &s.twist).max(check_ribbon_condition(ring, &s.twist))),
                unitary: is_unitary_ribbon(s, ring, tol).unwrap_or(false),
            });
        }
        let chosen = match select_unitary_ribbon(ring, &structures, self.f_unitary, tol) {
            Ok(i) => {
                out.unitary_ribbon = Some(i);
                i
            }
            Err(e) => {
                self.fail("unitary_ribbon", Some(&id), &e);
                0
            }
        };
        if self.opts.stage < Stage::Full {
            return out;
        }
        if let Some(rib) = structures.get(chosen) {
            let data = modular_data(ring, rib, tol);
            out.modular = Some(ModularReport {
                ribbon: chosen,
                s_tilde: data
                    .s_tilde
                    .row_iter()
                    .map(|row| row.iter().map(|z| cnum(*z)).collect())
                    .collect(),
                t: rib.twist.theta.iter().map(|z| cnum(*z)).collect(),
                total_dim_sq: sig12(data.total_dim_sq),
                verdict: data.verdict,
                s_unitarity_defect: sig12(data.s_unitarity_defect()),
                s_symmetry_defect: sig12(data.symmetry_defect()),
            });
        }
        out
    }
}

pub fn run_report(model: &Model, opts: &RunOptions) -> Report {
    let tol = &opts.tol;
    let ring = &*model.ring;
    let mut report = Report {
        model: model.name.clone(),
        labels: ring.names().to_vec(),
        tolerances: *tol,
        starts: opts.starts,
        seed: opts.seed,
        stage: opts.stage,
        ring_violations: ring.validate().iter().map(|v| v.describe(ring)).collect(),
        fp_dimensions: Vec::new(),
        pentagon_residual: 0.0,
        f_unitarity: UnitarityReport {
            deviation: 0.0,
            unitary: false,
        },
        model_braiding: None,
        braidings: Vec::new(),
        errors: Vec::new(),
        outcome: Outcome::Passed,
        exit_code: 0,
    };
    let mut pipe = Pipeline {
        model,
        opts,
        f_unitary: false,
        errors: Vec::new(),
    };
    if !report.ring_violations.is_empty() {
        pipe.fail("validate", None, &Error::Validation(report.ring_violations.clone()));
        return finish(report, pipe.errors);
    }
    match ring.fp_dimensions() {
        Ok(d) => report.fp_dimensions = d.into_iter().map(sig12).collect(),
        Err(e) => pipe.fail("fp_dimensions", None, &e),
    }
    let pentagon = model.f.check_pentagon();
    report.pentagon_residual = sig12(pentagon);
    if pentagon > tol.eq_tol {
        let msg = format!("pentagon residual {pentagon:e} exceeds {:e}", tol.eq_tol);
        pipe.fail("pentagon", None, &Error::Validation(vec![msg]));
        return finish(report, pipe.errors);
    }
    let f_dev = model.f.check_f_unitarity();
    pipe.f_unitary = f_dev <= tol.eq_tol;
    report.f_unitarity = UnitarityReport {
        deviation: sig12(f_dev),
        unitary: pipe.f_unitary,
    };

    let solved = if opts.stage >= Stage::Braid {
        solve_braidings(&model.f, opts.starts, opts.seed, tol)
    } else {
        Vec::new()
    };
    if solved.is_empty() && opts.stage >= Stage::Braid {
        pipe.fail(
            "solve_braidings",
            None,
            &Error::Validation(vec!["no braiding found; nothing to verify".into()]),
        );
    }
    if let Some(r) = &model.r {
        let mut b = pipe.braiding("model".into(), r, model.twist.as_ref());
        b.matches_solver = solved
            .iter()
            .position(|s| max_distance(&s.free_entries(), &r.free_entries()) <= tol.dedup_tol)
            .map(|i| format!("solver#{i}"));
        report.model_braiding = Some(b);
    } else if model.twist.is_some() {
        pipe.fail(
            "twist",
            None,
            &Error::Validation(vec!["model gives a twist without R-symbols".into()]),
        );
    }
    for (i, r) in solved.iter().enumerate() {
        let b = pipe.braiding(format!("solver#{i}"), r, None);
        report.braidings.push(b);
    }
    finish(report, pipe.errors)
}

fn finish(mut report: Report, errors: Vec<StageError>) -> Report {
    report.outcome = errors.iter().map(|e| e.outcome).max().unwrap_or(Outcome::Passed);
    report.exit_code = report.outcome.exit_code();
    report.errors = errors;
    report
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = |z: &[f64; 2]| {
            if z[1] == 0.0 {
                format!("{}", z[0])
            } else if z[0] == 0.0 {
                format!("{}i", z[1])
            } else {
                format!("{}{:+}i", z[0], z[1])
            }
        };
        let list = |v: &[[f64; 2]]| v.iter().map(c).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "model        {}", self.model);
        let _ = writeln!(s, "labels       {}", self.labels.join(", "));
        let _ = writeln!(
            s,
            "tolerances   eq {:e}, dedup {:e}, solver {:e}; starts {}, seed {}",
            self.tolerances.eq_tol, self.tolerances.dedup_tol, self.tolerances.solver_tol, self.starts, self.seed
        );
        if !self.ring_violations.is_empty() {
            let _ = writeln!(s, "ring         INVALID");
            for v in &self.ring_violations {
                let _ = writeln!(s, "  - {v}");
            }
        }
        let fp: Vec<String> = self.fp_dimensions.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "FP dims      {}", fp.join(", "));
        let _ = writeln!(s, "pentagon     {:e}", self.pentagon_residual);
        let _ = writeln!(
            s,
            "F-unitarity  {:e} ({})",
            self.f_unitarity.deviation,
            if self.f_unitarity.unitary { "unitary gauge" } else { "not unitary" }
        );
        let all = self.model_braiding.iter().chain(&self.braidings);
        if self.stage >= Stage::Braid {
            let _ = writeln!(s, "braidings    {} found by solver", self.braidings.len());
        }
        for b in all {
            let _ = writeln!(s);
            let _ = writeln!(s, "[{}]", b.id);
            for r in &b.r {
                let _ = writeln!(s, "  R[{},{};{}] = {}", r.a, r.b, r.c, c(&[r.re, r.im]));
            }
            let _ = writeln!(s, "  hexagons   {:e}", b.hexagon_residual);
            let _ = writeln!(
                s,
                "  unitarity  {:e} ({})",
                b.unitarity.deviation,
                if b.unitarity.unitary { "unitary" } else { "not unitary" }
            );
            if let Some(m) = &b.matches_solver {
                let _ = writeln!(s, "  same as    {m}");
            }
            for (i, rib) in b.ribbons.iter().enumerate() {
                let mark = if b.unitary_ribbon == Some(i) { "*" } else { " " };
                let flip = if rib.flipped.is_empty() { "seed".to_string() } else { format!("flip {}", rib.flipped.join(",")) };
                let _ = writeln!(s, "  {mark}ribbon {i} ({flip})");
                let _ = writeln!(s, "     theta  {}", list(&rib.twist));
                let _ = writeln!(s, "     dims   {}", list(&rib.dims));
            }
            if let Some(m) = &b.modular {
                let _ = writeln!(s, "  S~ (ribbon {})", m.ribbon);
                for row in &m.s_tilde {
                    let _ = writeln!(s, "     {}", list(row));
                }
                let _ = writeln!(s, "  T          {}", list(&m.t));
                let _ = writeln!(s, "  verdict    {:?}", m.verdict);
            }
        }
        let _ = writeln!(s);
        for e in &self.errors {
            let at = e.braiding.as_deref().map(|b| format!(" [{b}]")).unwrap_or_default();
            let _ = writeln!(s, "error {}{at}: {}", e.stage, e.message);
        }
        let _ = writeln!(s, "outcome      {:?} (exit {})", self.outcome, self.exit_code);
        s
    }
}
