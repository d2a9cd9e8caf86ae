//! Worked examples replayed end to end with their expected outcomes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::checks::{diexact_check, dpn_check, third_iso_check};
use crate::monoid::{cokernel_by_submonoid, FinMonoid, MonoidHom, Subset};
use crate::nsub::enumerate_nsub;
use crate::semilattice::{self, fixtures, principal_downset, quotient_by_downset, CoverGraph};
use crate::zexact::{Cmon, Ses};

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    /// Depth used by the scenarios that need short exact sequences; `0` skips them.
    pub ses_depth: usize,
    /// Replace the pentagon by a diamond carrying the same labels (negative control).
    pub corrupt_n5: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            ses_depth: 1,
            corrupt_n5: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepStatus {
    Ok,
    Mismatch(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub name: String,
    pub status: StepStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Reproduced,
    Mismatch { step: String, detail: String },
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub name: &'static str,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

impl ScenarioResult {
    pub fn reproduced(&self) -> bool {
        self.outcome == Outcome::Reproduced
    }
}

impl fmt::Display for ScenarioResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Reproduced => write!(f, "{}: reproduced", self.name)?,
            Outcome::Mismatch { step, detail } => write!(f, "{}: MISMATCH at step {step:?}: {detail}", self.name)?,
            Outcome::Skipped(why) => write!(f, "{}: skipped ({why})", self.name)?,
        }
        for s in &self.steps {
            let tag = match &s.status {
                StepStatus::Ok => "ok".to_string(),
                StepStatus::Mismatch(d) => format!("mismatch: {d}"),
                StepStatus::Skipped(d) => format!("skipped: {d}"),
            };
            write!(f, "\n  {} ... {tag}", s.name)?;
        }
        Ok(())
    }
}

/// Runs steps in order and stops at the first mismatch.
struct Runner {
    name: &'static str,
    steps: Vec<Step>,
    failed: Option<(String, String)>,
}

impl Runner {
    fn new(name: &'static str) -> Self {
        Runner {
            name,
            steps: Vec::new(),
            failed: None,
        }
    }

    fn step(&mut self, name: &str, f: impl FnOnce() -> Result<(), String>) {
        if self.failed.is_some() {
            return;
        }
        let status = match f() {
            Ok(()) => StepStatus::Ok,
            Err(d) => {
                self.failed = Some((name.to_string(), d.clone()));
                StepStatus::Mismatch(d)
            }
        };
        self.steps.push(Step {
            name: name.to_string(),
            status,
        });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.steps.push(Step {
            name: name.to_string(),
            status: StepStatus::Skipped(why.to_string()),
        });
    }

    fn finish(self) -> ScenarioResult {
        let outcome = if let Some((step, detail)) = self.failed {
            Outcome::Mismatch { step, detail }
        } else if let Some(s) = self.steps.iter().find(|s| matches!(s.status, StepStatus::Skipped(_))) {
            let StepStatus::Skipped(why) = &s.status else { unreachable!() };
            Outcome::Skipped(why.clone())
        } else {
            Outcome::Reproduced
        };
        ScenarioResult {
            name: self.name,
            steps: self.steps,
            outcome,
        }
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn element(m: &FinMonoid, label: &str) -> Result<usize, String> {
    m.index_of(label).ok_or_else(|| format!("no element labelled {label}"))
}

/// The pentagon, or under corruption a diamond whose elements carry the pentagon's labels.
fn pentagon(corrupt: bool) -> FinMonoid {
    if !corrupt {
        return fixtures::n5();
    }
    semilattice::semilattice_from_covers(&CoverGraph::named(
        &["0", "C", "B", "D", "A"],
        &[("0", "C"), ("0", "B"), ("0", "D"), ("C", "A"), ("B", "A"), ("D", "A")],
    ))
    .expect("diamond")
}

/// `↓a ↪ L ↠ ↑k` as an explicit map, with the members of `↓a` in increasing order.
fn down_to_up(l: &Arc<FinMonoid>, a: usize, k: usize) -> (Vec<usize>, MonoidHom) {
    let down = principal_downset(l, a);
    let (_, proj) = quotient_by_downset(l, k);
    (down.iter().collect(), proj.after(&MonoidHom::inclusion(l, down)))
}

fn pentagon_dpn(cfg: &ScenarioConfig) -> ScenarioResult {
    let mut r = Runner::new("pentagon-dpn");
    let n5 = Arc::new(pentagon(cfg.corrupt_n5));
    r.step("dpn fails on N5 with witness (↓B,↓D)", || {
        let lat = enumerate_nsub(&Cmon, &n5).map_err(|e| e.to_string())?;
        let rep = dpn_check(&Cmon, &lat, "N5");
        ensure(!rep.passed(), || "dpn_check passed".into())?;
        let first = &rep.witnesses[0].names;
        ensure(first == &["↓B", "↓D"], || format!("first witness is ({})", first.join(",")))
    });
    r.step("↓D → ↑B is an isomorphism", || {
        let (_, f) = down_to_up(&n5, element(&n5, "D")?, element(&n5, "B")?);
        ensure(f.is_injective() && f.is_surjective(), || format!("map {:?} is not bijective", f.map()))
    });
    r.step("↓B → ↑D sends 0 to D and both B and C to A", || {
        let (members, f) = down_to_up(&n5, element(&n5, "B")?, element(&n5, "D")?);
        let table: BTreeSet<(String, String)> =
            members.iter().enumerate().map(|(i, &x)| (n5.label(x), f.cod().label(f.apply(i)))).collect();
        let expected: BTreeSet<(String, String)> =
            [("0", "D"), ("C", "A"), ("B", "A")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        ensure(table == expected, || format!("image table {table:?}"))
    });
    r.step("third isomorphism property holds on N5 at depth 0", || {
        let lat = enumerate_nsub(&Cmon, &n5).map_err(|e| e.to_string())?;
        let rep = third_iso_check(&Cmon, &lat, "N5");
        ensure(rep.passed(), || rep.text())
    });
    r.finish()
}

fn l6_quotient() -> ScenarioResult {
    let mut r = Runner::new("l6-quotient");
    let l6 = Arc::new(fixtures::l6());
    let classes_of = |proj: &MonoidHom| -> BTreeSet<BTreeSet<String>> {
        let mut by_image = std::collections::BTreeMap::<usize, BTreeSet<String>>::new();
        for x in l6.elements() {
            by_image.entry(proj.apply(x)).or_default().insert(l6.label(x));
        }
        by_image.into_values().collect()
    };
    r.step("L6 / ↓E has classes {A,B}, {C,D}, {E,0}", || {
        let e = element(&l6, "E")?;
        let (_, proj) = cokernel_by_submonoid(&l6, principal_downset(&l6, e)).map_err(|e| e.to_string())?;
        let expected: BTreeSet<BTreeSet<String>> = [["A", "B"], ["C", "D"], ["E", "0"]]
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect();
        let got = classes_of(&proj);
        ensure(got == expected, || format!("classes {got:?}"))
    });
    r.step("the ∨E shortcut gives the same classes", || {
        let e = element(&l6, "E")?;
        let (_, general) = cokernel_by_submonoid(&l6, principal_downset(&l6, e)).map_err(|e| e.to_string())?;
        let (_, shortcut) = quotient_by_downset(&l6, e);
        ensure(classes_of(&general) == classes_of(&shortcut), || "partitions differ".into())
    });
    r.step("quotient order is A > C > E", || {
        let e = element(&l6, "E")?;
        let (q, proj) = cokernel_by_submonoid(&l6, principal_downset(&l6, e)).map_err(|e| e.to_string())?;
        let [a, c, e] = [element(&l6, "A")?, element(&l6, "C")?, e].map(|x| proj.apply(x));
        let strictly = |x: usize, y: usize| x != y && semilattice::leq(&q, x, y);
        ensure(q.size() == 3 && strictly(e, c) && strictly(c, a), || "quotient is not the chain E < C < A".into())
    });
    r.finish()
}

fn pentagon_ses_hsd(cfg: &ScenarioConfig) -> ScenarioResult {
    let mut r = Runner::new("pentagon-ses-hsd");
    let name = "third isomorphism fails over (N5,↓D) on (↓C,0) ⩽ (↓B,0), left square not a pullback";
    if cfg.ses_depth == 0 {
        r.skip(name, "ses depth is 0");
        return r.finish();
    }
    let n5 = Arc::new(pentagon(cfg.corrupt_n5));
    r.step(name, || {
        let ctx = Ses::new(Cmon);
        let objects = ctx.objects_over(&[("N5".to_string(), n5.clone())]);
        let (id, obj) = objects
            .iter()
            .find(|(id, _)| id == "(N5,↓D)")
            .ok_or_else(|| "no ses object (N5,↓D)".to_string())?;
        let lat = enumerate_nsub(&ctx, obj).map_err(|e| e.to_string())?;
        let rep = third_iso_check(&ctx, &lat, id);
        let w = rep
            .witnesses
            .iter()
            .find(|w| w.names == ["(↓C,0)", "(↓B,0)"])
            .ok_or_else(|| format!("no failure on the expected pair: {}", rep.text()))?;
        ensure(w.condition.contains("left square is not a pullback"), || w.condition.clone())
    });
    r.finish()
}

fn klein_diexact(cfg: &ScenarioConfig) -> ScenarioResult {
    let mut r = Runner::new("klein-diexact");
    let v4 = Arc::new(fixtures::v4());
    r.step("V4 is di-exact at depth 0", || {
        let lat = enumerate_nsub(&Cmon, &v4).map_err(|e| e.to_string())?;
        let rep = diexact_check(&Cmon, &lat, "V4").map_err(|e| e.to_string())?;
        ensure(rep.passed(), || rep.text())
    });
    r.step("nsub(V4) is the diamond: modular, not distributive", || {
        let lat = enumerate_nsub(&Cmon, &v4).map_err(|e| e.to_string())?;
        let modular = lat.lattice.is_modular().map_err(|e| e.to_string())?.0;
        let distributive = lat.lattice.is_distributive().map_err(|e| e.to_string())?.0;
        let diamond = lat.lattice.find_diamond().is_some();
        ensure(modular && !distributive && diamond && lat.len() == 5, || {
            format!("modular={modular} distributive={distributive} diamond={diamond}")
        })
    });
    let fails = "di-exactness fails over (V4,G) on the pair H, K: left square not a pullback";
    let dpn = "dpn holds on every ses object over V4";
    if cfg.ses_depth == 0 {
        r.skip(fails, "ses depth is 0");
        r.skip(dpn, "ses depth is 0");
        return r.finish();
    }
    let ctx = Ses::new(Cmon);
    let objects = ctx.objects_over(&[("V4".to_string(), v4.clone())]);
    let sub = |labels: &[&str]| -> String {
        let s: Subset = labels.iter().map(|l| v4.index_of(l).expect("V4 label")).collect();
        v4.describe_subset(s)
    };
    r.step(fails, || {
        let target = format!("(V4,{})", sub(&["0", "g"]));
        let (id, obj) = objects
            .iter()
            .find(|(id, _)| *id == target)
            .ok_or_else(|| format!("no ses object {target}"))?;
        let lat = enumerate_nsub(&ctx, obj).map_err(|e| e.to_string())?;
        let rep = diexact_check(&ctx, &lat, id).map_err(|e| e.to_string())?;
        let pair = [format!("({},0)", sub(&["0", "h"])), format!("({},0)", sub(&["0", "k"]))];
        let w = rep
            .witnesses
            .iter()
            .find(|w| w.names == pair)
            .ok_or_else(|| format!("no failure on the expected pair: {}", rep.text()))?;
        ensure(w.condition.contains("left square is not a pullback"), || w.condition.clone())
    });
    r.step(dpn, || {
        for (id, obj) in &objects {
            let lat = enumerate_nsub(&ctx, obj).map_err(|e| e.to_string())?;
            let rep = dpn_check(&ctx, &lat, id);
            ensure(rep.passed(), || rep.text())?;
        }
        Ok(())
    });
    r.finish()
}

/// All four scenarios in a fixed order.
pub fn run_all(cfg: &ScenarioConfig) -> Vec<ScenarioResult> {
    vec![pentagon_dpn(cfg), l6_quotient(), pentagon_ses_hsd(cfg), klein_diexact(cfg)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reproduce() {
        for s in run_all(&ScenarioConfig::default()) {
            assert!(s.reproduced(), "{s}");
        }
    }

    #[test]
    fn corrupted_pentagon_diverges_at_dpn() {
        let cfg = ScenarioConfig {
            corrupt_n5: true,
            ..Default::default()
        };
        let first = &run_all(&cfg)[0];
        match &first.outcome {
            Outcome::Mismatch { step, .. } => assert!(step.starts_with("dpn"), "{step}"),
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn depth_zero_skips_ses_scenarios() {
        let cfg = ScenarioConfig {
            ses_depth: 0,
            ..Default::default()
        };
        let out = run_all(&cfg);
        assert!(out[0].reproduced() && out[1].reproduced());
        assert!(matches!(out[2].outcome, Outcome::Skipped(_)));
        assert!(matches!(out[3].outcome, Outcome::Skipped(_)));
    }
}
