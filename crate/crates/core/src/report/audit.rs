//! Hypothesis audit of an action file.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use super::file::{ActionFile, ActionKind, Payload, SCHEMA_VERSION};
use crate::actions::{
    is_totally_reducible_graded, is_totally_reducible_rational, matrix_is_semisimple, minimal_polynomial,
    GradedAlgebraAction, RationalSubspace, TotalReducibility,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::modulus::Verdict3;
use crate::exactnum::rational::format_rational;
use crate::linalg::{IntMatrix, QMat};
use crate::weyl::{
    anosov_in_every_chamber, complementary_splitting, fast_stable_element, is_tns, lyapunov_data, stable_set,
    weyl_chambers, ChamberDecomposition, LyapunovData, LyapunovFunctional, Side,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    True,
    False,
    Undecided { precision_bits: u32 },
    NotEvaluated,
}

impl From<Verdict3> for Status {
    fn from(v: Verdict3) -> Self {
        match v {
            Verdict3::True => Status::True,
            Verdict3::False => Status::False,
            Verdict3::Undecided { precision_bits } => Status::Undecided { precision_bits },
        }
    }
}

impl Status {
    fn from_bool(b: bool) -> Self {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub verdict: Status,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(verdict: Status, evidence: Value) -> Self {
        Check {
            verdict,
            evidence,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn skipped(reason: &str) -> Self {
        Check::new(Status::NotEvaluated, Value::Null).with_note(reason)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypotheses {
    pub commuting: Check,
    pub unimodular: Check,
    pub semisimple: Check,
    pub totally_reducible: Check,
    pub tns: Check,
    pub anosov_in_every_chamber: Check,
}

impl Hypotheses {
    fn all(&self) -> [&Check; 6] {
        [
            &self.commuting,
            &self.unimodular,
            &self.semisimple,
            &self.totally_reducible,
            &self.tns,
            &self.anosov_in_every_chamber,
        ]
    }

    /// False dominates, then Undecided; a skipped check counts as undecided.
    pub fn aggregate(&self) -> Status {
        let mut undecided: Option<u32> = None;
        for c in self.all() {
            match c.verdict {
                Status::False => return Status::False,
                Status::Undecided { precision_bits } => {
                    undecided = Some(undecided.map_or(precision_bits, |u| u.max(precision_bits)))
                }
                Status::NotEvaluated => undecided = Some(undecided.unwrap_or(0)),
                Status::True => {}
            }
        }
        match undecided {
            Some(precision_bits) => Status::Undecided { precision_bits },
            None => Status::True,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusSummary {
    /// Squarefree integer polynomial with `|λ|²` as a root.
    pub squared_modulus_root_of: String,
    pub modulus: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalSummary {
    /// `log|λ|` on each generator, 12 decimals.
    pub values: Vec<String>,
    pub multiplicity: usize,
    pub components: Vec<usize>,
    /// Index into `generator_moduli[i]` for each generator `i`.
    pub class_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSummary {
    pub members: Vec<usize>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChamberSummary {
    pub witness: Vec<i64>,
    pub class_signs: Vec<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anosov: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arrangement {
    pub generator_moduli: Vec<Vec<ModulusSummary>>,
    pub functionals: Vec<FunctionalSummary>,
    pub classes: Vec<ClassSummary>,
    /// Each hyperplane lists its classes with their sign relative to the first.
    pub hyperplanes: Vec<Vec<(usize, i32)>>,
    pub chambers: Vec<ChamberSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FastStableSummary {
    pub element: Vec<i64>,
    pub min_gap: String,
    pub max_target: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingSummary {
    pub target: usize,
    pub plane: [Vec<i64>; 2],
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub a1: Vec<i64>,
    pub c1: Vec<i64>,
    pub a2: Vec<i64>,
    pub c2: Vec<i64>,
    /// Stable sets of the four witnesses match `e1 ∪ {target}`, `e1`,
    /// `e2 ∪ {target}`, `e2`.
    pub stable_sets_verified: bool,
    pub fast_stable_e1: std::result::Result<FastStableSummary, String>,
    pub fast_stable_e2: std::result::Result<FastStableSummary, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub name: String,
    pub kind: ActionKind,
    pub dim: usize,
    pub rank: usize,
    pub config: Config,
    pub hypotheses: Hypotheses,
    pub theorem_hypotheses: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<Arrangement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub splittings: Vec<std::result::Result<SplittingSummary, String>>,
    pub notes: Vec<String>,
}

impl AuditReport {
    /// 0 when every hypothesis holds, 1 when one fails, 2 when undecided.
    pub fn exit_code(&self) -> i32 {
        match self.theorem_hypotheses {
            Status::True => 0,
            Status::False => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

const LINEARIZATION_NOTE: &str = "All checks concern the linear action; its Lyapunov hyperplanes and Weyl chambers \
                                  are those of any action with this linearization.";

fn fmt12(x: f64) -> String {
    format!("{x:.12}")
}

fn q_rows(v: &[Vec<crate::exactnum::rational::Q>]) -> Value {
    Value::from(
        v.iter()
            .map(|r| Value::from(r.iter().map(format_rational).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    )
}

fn subspace_json(u: &RationalSubspace) -> Value {
    q_rows(u.basis())
}

/// Integer generators of the file, or an input error.
pub(crate) fn integer_generators(file: &ActionFile) -> Result<Vec<IntMatrix>> {
    match &file.payload {
        Payload::Torus(p) => {
            if p.generators.is_empty() {
                return Err(Error::ShapeMismatch("at least one generator is required".into()));
            }
            Ok(p.generators.clone())
        }
        Payload::Graded(p) => {
            let n: usize = p.grading.iter().sum();
            if p.generators.is_empty() {
                return Err(Error::ShapeMismatch("at least one generator is required".into()));
            }
            p.generators
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let m = g.to_qmat()?;
                    if m.nrows() != n {
                        return Err(Error::ShapeMismatch(format!("generator {i} is not {n}x{n}")));
                    }
                    m.to_int()
                        .ok_or_else(|| Error::InvalidInput(format!("generator {i} is not integral on the lattice basis")))
                })
                .collect()
        }
    }
}

fn check_unimodular(gens: &[IntMatrix]) -> Check {
    let dets: Vec<String> = gens.iter().map(|g| g.det().to_string()).collect();
    let ok = dets.iter().all(|d| d == "1" || d == "-1");
    Check::new(Status::from_bool(ok), json!({ "determinants": dets }))
}

fn check_commuting(gens: &[IntMatrix]) -> Check {
    let mut checked = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].mul(&gens[j]) != gens[j].mul(&gens[i]) {
                return Check::new(Status::False, json!({ "non_commuting_pair": [i, j] }));
            }
            checked.push([i, j]);
        }
    }
    Check::new(Status::True, json!({ "pairs_checked": checked }))
}

fn check_semisimple(gens: &[IntMatrix]) -> Check {
    let per: Vec<Value> = gens
        .iter()
        .map(|g| {
            json!({
                "minimal_polynomial": minimal_polynomial(g).to_string(),
                "squarefree": matrix_is_semisimple(&g.to_q()),
            })
        })
        .collect();
    let ok = per.iter().all(|v| v["squarefree"] == Value::Bool(true));
    Check::new(Status::from_bool(ok), Value::from(per))
}

fn reducibility_json(t: &TotalReducibility) -> Value {
    if let Some((i, u)) = &t.obstruction {
        json!({ "generator": i, "invariant_subspace_without_complement": subspace_json(u) })
    } else {
        Value::from(
            t.witness
                .iter()
                .map(|c| {
                    json!({
                        "dim": c.dim(),
                        "factors": c.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "basis": q_rows(&c.basis.columns()),
                    })
                })
                .collect::<Vec<_>>(),
        )
    }
}

fn check_totally_reducible_torus(gens: &[QMat]) -> Check {
    let t = is_totally_reducible_rational(gens);
    let c = Check::new(Status::from_bool(t.totally_reducible), reducibility_json(&t));
    if t.obstruction.is_some() {
        c.with_note("the kernel of the squarefree part of a minimal polynomial is a proper invariant subspace with no invariant complement")
    } else {
        c
    }
}

fn check_totally_reducible_graded(action: &GradedAlgebraAction) -> Check {
    let r = is_totally_reducible_graded(action);
    Check::new(
        Status::from_bool(r.totally_reducible),
        json!({
            "abelianization": reducibility_json(&r.quotient),
            "abelianization_totally_reducible": r.quotient.totally_reducible,
            "derived_dim": r.derived.dimension(),
            "derived_complement": r.derived_complement.as_ref().map(subspace_json),
        }),
    )
}

fn error_check(e: &Error, cfg: &Config) -> Check {
    let verdict = match e {
        Error::UndecidedProportionality(_, _, bits) | Error::PrecisionExhausted(bits) | Error::LpInfeasibleAtPrecision(bits) => {
            Status::Undecided { precision_bits: *bits }
        }
        _ => Status::Undecided {
            precision_bits: cfg.precision_cap_bits,
        },
    };
    let evidence = match e {
        Error::UndecidedProportionality(i, j, _) => json!({ "undecided_pair": [i, j] }),
        _ => Value::Null,
    };
    Check::new(verdict, evidence).with_note(e.to_string())
}

fn summarize_functionals(data: &LyapunovData) -> (Vec<Vec<ModulusSummary>>, Vec<FunctionalSummary>) {
    let moduli = data
        .classes
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| ModulusSummary {
                    squared_modulus_root_of: c.exact_backing().to_string(),
                    modulus: fmt12(c.squared_enclosure().to_f64_mid().sqrt()),
                    multiplicity: c.multiplicity(),
                })
                .collect()
        })
        .collect();
    let fs = data
        .functionals
        .iter()
        .map(|f| FunctionalSummary {
            values: f.approx().into_iter().map(fmt12).collect(),
            multiplicity: f.multiplicity,
            components: f.origin.components.clone(),
            class_indices: f.origin.class_indices.clone(),
        })
        .collect();
    (moduli, fs)
}

fn class_members(dec: &ChamberDecomposition, classes: &BTreeSet<usize>, keep: &[usize]) -> BTreeSet<usize> {
    classes
        .iter()
        .flat_map(|&c| dec.classes[c].members.iter().map(|&m| keep[m]))
        .collect()
}

fn summarize_fast(r: Result<crate::weyl::FastStable>) -> std::result::Result<FastStableSummary, String> {
    r.map(|f| FastStableSummary {
        element: f.element,
        min_gap: fmt12(f.min_gap),
        max_target: fmt12(f.max_target),
    })
    .map_err(|e| e.to_string())
}

fn splittings(
    nonzero: &[LyapunovFunctional],
    all: &[LyapunovFunctional],
    keep: &[usize],
    dec: &ChamberDecomposition,
    cfg: &Config,
) -> Vec<std::result::Result<SplittingSummary, String>> {
    (0..dec.classes.len())
        .map(|target| {
            let s = complementary_splitting(nonzero, target, cfg).map_err(|e| e.to_string())?;
            let one = BTreeSet::from([target]);
            let with_target = |e: &BTreeSet<usize>| e.union(&one).copied().collect::<BTreeSet<usize>>();
            let expect = [
                (&s.a1, with_target(&s.e1)),
                (&s.c1, s.e1.clone()),
                (&s.a2, with_target(&s.e2)),
                (&s.c2, s.e2.clone()),
            ];
            let stable_sets_verified = expect.iter().all(|(b, classes)| {
                stable_set(all, b, cfg).is_ok_and(|got| got == class_members(dec, classes, keep))
            });
            Ok(SplittingSummary {
                target,
                plane: s.plane.clone(),
                e1: s.e1.iter().copied().collect(),
                e2: s.e2.iter().copied().collect(),
                a1: s.a1.clone(),
                c1: s.c1.clone(),
                a2: s.a2.clone(),
                c2: s.c2.clone(),
                stable_sets_verified,
                fast_stable_e1: summarize_fast(fast_stable_element(nonzero, &s, Side::E1, cfg)),
                fast_stable_e2: summarize_fast(fast_stable_element(nonzero, &s, Side::E2, cfg)),
            })
        })
        .collect()
}

struct Dynamics {
    tns: Check,
    anosov: Check,
    arrangement: Arrangement,
    splittings: Vec<std::result::Result<SplittingSummary, String>>,
}

fn dynamics(gens: &[IntMatrix], cfg: &Config) -> Dynamics {
    let rank = gens.len();
    let data = lyapunov_data(&gens.iter().map(|g| g.to_q()).collect::<Vec<_>>(), cfg.precision_cap_bits);
    let (generator_moduli, functionals) = summarize_functionals(&data);
    let keep: Vec<usize> = (0..data.functionals.len()).filter(|&i| !data.functionals[i].is_zero()).collect();
    let vanishing: Vec<usize> = (0..data.functionals.len()).filter(|i| !keep.contains(i)).collect();
    let nonzero: Vec<LyapunovFunctional> = keep.iter().map(|&i| data.functionals[i].clone()).collect();
    let mut arrangement = Arrangement {
        generator_moduli,
        functionals,
        classes: vec![],
        hyperplanes: vec![],
        chambers: vec![],
    };

    let tns = if nonzero.is_empty() {
        Check::new(Status::True, json!({ "witnesses": [] })).with_note("no nonzero Lyapunov functional")
    } else {
        match is_tns(&nonzero, cfg) {
            Ok(r) => {
                let evidence = match r.opposite_pair {
                    Some((i, j)) => json!({ "negatively_proportional_classes": [i, j] }),
                    None => json!({
                        "common_contraction": r.witnesses.iter().map(|((i, j), b)| json!({"classes": [i, j], "element": b})).collect::<Vec<_>>()
                    }),
                };
                Check::new(r.verdict.into(), evidence)
            }
            Err(e) => error_check(&e, cfg),
        }
    };

    let decomposition = if nonzero.is_empty() {
        None
    } else {
        Some(weyl_chambers(&nonzero, cfg))
    };
    let mut split = Vec::new();
    let anosov = match decomposition {
        None => {
            let mut e1 = vec![0i64; rank];
            e1[0] = 1;
            arrangement.chambers.push(ChamberSummary {
                witness: e1,
                class_signs: vec![],
                anosov: Some(false),
            });
            Check::new(Status::False, json!({ "vanishing_functionals": vanishing }))
                .with_note("every Lyapunov functional vanishes, so no element is hyperbolic")
        }
        Some(Err(e)) => error_check(&e, cfg),
        Some(Ok(dec)) => {
            let (all_anosov, per) = anosov_in_every_chamber(gens, &dec.chambers);
            arrangement.classes = dec
                .classes
                .iter()
                .map(|c| ClassSummary {
                    members: c.members.iter().map(|&m| keep[m]).collect(),
                    multiplicity: c.multiplicity,
                })
                .collect();
            arrangement.hyperplanes = dec.hyperplanes.iter().map(|h| h.classes.clone()).collect();
            arrangement.chambers = dec
                .chambers
                .iter()
                .zip(&per)
                .map(|(c, &a)| ChamberSummary {
                    witness: c.witness.clone(),
                    class_signs: c.class_signs.clone(),
                    anosov: Some(a),
                })
                .collect();
            if tns.verdict == Status::True && rank >= 2 {
                split = splittings(&nonzero, &data.functionals, &keep, &dec, cfg);
            }
            if vanishing.is_empty() {
                Check::new(Status::from_bool(all_anosov), json!({ "chamber_count": dec.chambers.len() }))
            } else {
                Check::new(Status::False, json!({ "vanishing_functionals": vanishing }))
                    .with_note("a Lyapunov functional vanishes identically, so no element is hyperbolic")
            }
        }
    };
    Dynamics {
        tns,
        anosov,
        arrangement,
        splittings: split,
    }
}

/// Run every hypothesis check on a parsed file.
///
/// Shape, parse and Lie-structure problems are errors; failing
/// commutativity or unimodularity yields a report with False verdicts.
pub fn analyze(file: &ActionFile, cfg: &Config) -> Result<AuditReport> {
    let gens = integer_generators(file)?;
    let dim = gens[0].nrows();
    for (i, g) in gens.iter().enumerate() {
        if g.nrows() != dim || !g.is_square() {
            return Err(Error::ShapeMismatch(format!("generator {i} is not {dim}x{dim}")));
        }
    }
    let commuting = check_commuting(&gens);
    let unimodular = check_unimodular(&gens);
    let mut notes = vec![LINEARIZATION_NOTE.to_string()];
    let valid = commuting.verdict == Status::True && unimodular.verdict == Status::True;
    let graded = match &file.payload {
        Payload::Graded(p) if valid => Some(GradedAlgebraAction::new(
            p.grading.clone(),
            p.structure_constants.clone(),
            gens.iter().map(|g| g.to_q()).collect(),
            &file.name,
        )?),
        _ => None,
    };
    let hypotheses;
    let mut arrangement = None;
    let mut splits = Vec::new();
    if valid {
        let semisimple = check_semisimple(&gens);
        let totally_reducible = match &graded {
            Some(a) => check_totally_reducible_graded(a),
            None => check_totally_reducible_torus(&gens.iter().map(|g| g.to_q()).collect::<Vec<_>>()),
        };
        let d = dynamics(&gens, cfg);
        arrangement = Some(d.arrangement);
        splits = d.splittings;
        hypotheses = Hypotheses {
            commuting,
            unimodular,
            semisimple,
            totally_reducible,
            tns: d.tns,
            anosov_in_every_chamber: d.anosov,
        };
    } else {
        let why = "generators do not form a unimodular commuting tuple";
        notes.push(why.to_string());
        hypotheses = Hypotheses {
            commuting,
            unimodular,
            semisimple: Check::skipped(why),
            totally_reducible: Check::skipped(why),
            tns: Check::skipped(why),
            anosov_in_every_chamber: Check::skipped(why),
        };
    }
    let theorem_hypotheses = hypotheses.aggregate();
    Ok(AuditReport {
        schema_version: SCHEMA_VERSION,
        name: file.name.clone(),
        kind: file.kind(),
        dim,
        rank: gens.len(),
        config: cfg.clone(),
        hypotheses,
        theorem_hypotheses,
        arrangement,
        splittings: splits,
        notes,
    })
}
