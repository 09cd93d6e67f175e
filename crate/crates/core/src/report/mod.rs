//! File formats, the hypothesis audit, lifts, chamber diagrams,
//! subresonance reports and the self-test.

pub mod audit;
pub mod chambers;
pub mod file;
pub mod normal;
pub mod selftest;

pub use audit::{analyze, AuditReport, Check, Hypotheses, Status};
pub use chambers::{chambers_report, ChambersReport};
pub use file::{is_spectrum_document, ActionFile, ActionKind, FileOptions, GradedPayload, Payload, RationalMatrix, SpectrumFile, TorusPayload};
pub use normal::{normal_forms_at_element, normal_forms_from_spectrum, NormalFormsReport};
pub use selftest::{selftest, SelftestLine};

use crate::actions::validate_named;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::freenil::free_nilpotent_lift;

/// Shipped example inputs.
pub mod fixtures {
    pub const BLOCK_UNIPOTENT: &str = include_str!("../../fixtures/block_unipotent.json");
    pub const FIBONACCI: &str = include_str!("../../fixtures/fibonacci.json");
    pub const CARTAN: &str = include_str!("../../fixtures/cartan.json");
    pub const SYMPLECTIC: &str = include_str!("../../fixtures/symplectic.json");
    pub const IDENTITY: &str = include_str!("../../fixtures/identity.json");
    pub const SPECTRUM: &str = include_str!("../../fixtures/spectrum.json");
}

/// Free `step`-step nilpotent lift of a torus file as a graded file, with
/// the audit of that file as re-read from its serialized form.
pub fn lift_file(file: &ActionFile, step: usize, cfg: &Config) -> Result<(ActionFile, AuditReport)> {
    let Payload::Torus(p) = &file.payload else {
        return Err(Error::InvalidInput("lift needs a torus-kind file".into()));
    };
    if step < 2 {
        return Err(Error::InvalidInput(format!("step must be at least 2, got {step}")));
    }
    let action = validate_named(p.generators.clone(), &file.name)?;
    let lift = free_nilpotent_lift(&action, step, cfg.size_cap)?;
    let lifted = ActionFile {
        name: format!("{} lifted to the free {step}-step nilpotent algebra", file.name),
        payload: Payload::Graded(GradedPayload {
            grading: lift.basis.dims.clone(),
            structure_constants: lift.brackets.clone(),
            generators: (0..action.rank())
                .map(|i| RationalMatrix::from_int(&lift.full_matrix(i)))
                .collect(),
        }),
        options: file.options.clone(),
    };
    let reread = ActionFile::parse(&lifted.to_json())?;
    let audit = analyze(&reread, cfg)?;
    Ok((reread, audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> AuditReport {
        analyze(&ActionFile::parse(text).unwrap(), &Config::default()).unwrap()
    }

    #[test]
    fn fixture_verdicts() {
        let r = run(fixtures::BLOCK_UNIPOTENT);
        assert_eq!(r.hypotheses.semisimple.verdict, Status::False);
        assert_eq!(r.hypotheses.totally_reducible.verdict, Status::False);
        assert_eq!(r.exit_code(), 1);

        let r = run(fixtures::CARTAN);
        assert_eq!(r.exit_code(), 0, "{}", r.to_json());
        let arr = r.arrangement.as_ref().unwrap();
        assert_eq!(arr.classes.len(), 3);
        assert_eq!(arr.chambers.len(), 6);
        assert_eq!(r.splittings.len(), 3);
        assert!(r.splittings.iter().all(|s| s.as_ref().unwrap().stable_sets_verified));

        let r = run(fixtures::SYMPLECTIC);
        assert_eq!(r.hypotheses.tns.verdict, Status::False);
        assert_eq!(r.exit_code(), 1);

        let r = run(fixtures::IDENTITY);
        assert_eq!(r.hypotheses.anosov_in_every_chamber.verdict, Status::False);
        assert_eq!(r.exit_code(), 1);

        let r = run(fixtures::FIBONACCI);
        assert_eq!(r.hypotheses.tns.verdict, Status::False);
        assert_eq!(r.hypotheses.anosov_in_every_chamber.verdict, Status::True);
    }

    #[test]
    fn non_commuting_input_is_a_false_verdict() {
        let f = ActionFile::torus(
            "shear pair",
            vec![
                crate::linalg::IntMatrix::from_i64(&[&[1, 1], &[0, 1]]),
                crate::linalg::IntMatrix::from_i64(&[&[1, 0], &[1, 1]]),
            ],
        );
        let r = analyze(&f, &Config::default()).unwrap();
        assert_eq!(r.hypotheses.commuting.verdict, Status::False);
        assert_eq!(r.hypotheses.tns.verdict, Status::NotEvaluated);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn lifts_round_trip() {
        let cfg = Config::default();
        let fib = ActionFile::parse(fixtures::FIBONACCI).unwrap();
        let (lifted, audit) = lift_file(&fib, 2, &cfg).unwrap();
        let Payload::Graded(g) = &lifted.payload else { panic!() };
        assert_eq!(g.grading, vec![2, 1]);
        assert_eq!(audit.hypotheses.anosov_in_every_chamber.verdict, Status::False);
        assert_eq!(analyze(&lifted, &cfg).unwrap().to_json(), audit.to_json());

        let cartan = ActionFile::parse(fixtures::CARTAN).unwrap();
        let (lifted, audit) = lift_file(&cartan, 2, &cfg).unwrap();
        let Payload::Graded(g) = &lifted.payload else { panic!() };
        assert_eq!(g.grading, vec![3, 3]);
        assert_eq!(ActionFile::parse(&lifted.to_json()).unwrap(), lifted);
        assert_eq!(audit.rank, 2);

        let id = ActionFile::parse(fixtures::IDENTITY).unwrap();
        let (_, audit) = lift_file(&id, 2, &cfg).unwrap();
        assert_eq!(audit.hypotheses.anosov_in_every_chamber.verdict, Status::False);
    }

    #[test]
    fn chamber_outputs() {
        let cfg = Config::default();
        let cartan = ActionFile::parse(fixtures::CARTAN).unwrap();
        let rep = chambers_report(&cartan, &cfg).unwrap();
        assert_eq!(rep.lines.len(), 3);
        assert_eq!(rep.chambers.len(), 6);
        let svg = rep.to_svg().unwrap();
        assert_eq!(svg.matches("<line ").count(), 3);
        assert_eq!(svg, chambers_report(&cartan, &cfg).unwrap().to_svg().unwrap());
        let fib = ActionFile::parse(fixtures::FIBONACCI).unwrap();
        let rep = chambers_report(&fib, &cfg).unwrap();
        assert_eq!(rep.chambers.len(), 2);
        assert!(matches!(rep.to_svg(), Err(Error::RankUnsupported(1))));
    }

    #[test]
    fn normal_form_reports() {
        let cfg = Config::default();
        let s = SpectrumFile::parse(fixtures::SPECTRUM).unwrap();
        assert_eq!(normal_forms_from_spectrum(&s, None, &cfg).unwrap().dimension, "3");
        let cartan = ActionFile::parse(fixtures::CARTAN).unwrap();
        let r = normal_forms_at_element(&cartan, 0, None, None, &cfg).unwrap();
        assert!(!r.exponents.is_empty());
    }

    #[test]
    fn selftest_passes() {
        for l in selftest(&Config::default()) {
            assert!(l.passed, "{}: {}", l.name, l.detail);
        }
    }
}
