//! End-to-end certification of `δ(S_n, ½W) > 1` at one `n`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::delta::{flag_report, s_invariant, FlagReport};
use crate::error::Result;
use crate::family::{
    build_sn, inequality_ledger, FamilyInstance, LedgerEntry, Quantity, F, L, O_0, O_1, O_Z, R, R0, R1, W,
};
use crate::link::{classify_smale, genus_branch_curve, smale_label, SmaleType, Torsion};
use crate::zariski::decompose_family;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagCheck {
    #[serde(flatten)]
    pub report: FlagReport,
    pub exceeds_lambda: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormCheck {
    pub item: String,
    pub quantity: Quantity,
    pub formula: String,
    pub expected: Rational,
    pub computed: Rational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCheck {
    pub genus: u64,
    pub smale: SmaleType,
    pub expected_label: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Failed { first_failure: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub n: u64,
    pub lambda: Rational,
    pub epsilon: Rational,
    pub flags: Vec<FlagCheck>,
    pub closed_forms: Vec<ClosedFormCheck>,
    pub ledger: Vec<LedgerEntry>,
    pub link: LinkCheck,
    pub verdict: Verdict,
}

fn check(item: &str, quantity: Quantity, n: u64, computed: Rational) -> ClosedFormCheck {
    let expected = quantity.eval(n);
    ClosedFormCheck {
        item: item.to_string(),
        quantity,
        formula: quantity.formula().to_string(),
        equal: expected == computed,
        expected,
        computed,
    }
}

fn singular_flags(inst: &FamilyInstance) -> Result<Vec<FlagCheck>> {
    [(L, O_Z), (R0, O_0), (R1, O_1)]
        .into_iter()
        .map(|(curve, point)| {
            let family = decompose_family(&inst.base, curve)?;
            let p = inst.base.point(curve, point)?;
            let report = flag_report(&inst.base, &family, p)?;
            Ok(FlagCheck {
                exceeds_lambda: report.delta_bound > inst.lambda,
                report,
            })
        })
        .collect()
}

fn closed_form_checks(inst: &FamilyInstance, flags: &[FlagCheck]) -> Result<Vec<ClosedFormCheck>> {
    let n = inst.n;
    let flag = |i: usize| &flags[i].report;
    let mut out = vec![
        check("S(L_xy)", Quantity::SL, n, flag(0).s_curve.clone()),
        check("S(W^L_xy;O_z)", Quantity::SFlagL, n, flag(0).s_flag.clone()),
        check("S(R0)", Quantity::SRi, n, flag(1).s_curve.clone()),
        check("S(R1)", Quantity::SRi, n, flag(2).s_curve.clone()),
        check("S(W^R0;O_0)", Quantity::SFlagRi, n, flag(1).s_flag.clone()),
        check("S(W^R1;O_1)", Quantity::SFlagRi, n, flag(2).s_flag.clone()),
        check("S(R)", Quantity::SR, n, s_invariant(&inst.enlarged, R)?),
        check("S(W)", Quantity::SW, n, s_invariant(&inst.base, W)?),
        check("S(F)", Quantity::SF, n, s_invariant(&inst.blowup, F)?),
        check("lambda", Quantity::Lambda, n, inst.lambda.clone()),
    ];
    for s in [&inst.base, &inst.enlarged, &inst.blowup] {
        out.push(check(
            &format!("A^2 on {}", s.name),
            Quantity::A2,
            n,
            s.volume_a2().clone(),
        ));
    }
    out.push(check("delta(O_z)", Quantity::DeltaOz, n, flag(0).delta_bound.clone()));
    out.push(check("delta(O_0)", Quantity::DeltaOi, n, flag(1).delta_bound.clone()));
    out.push(check("delta(O_1)", Quantity::DeltaOi, n, flag(2).delta_bound.clone()));
    Ok(out)
}

fn link_check(n: u64) -> Result<LinkCheck> {
    let smale = classify_smale(n as i64)?;
    let expected_label = smale_label(2, &Torsion::new(2, n));
    let genus = genus_branch_curve(n);
    Ok(LinkCheck {
        matches: genus == n && smale.b2 == 2 && smale.torsion == Torsion::new(2, n) && smale.label == expected_label,
        genus,
        smale,
        expected_label,
    })
}

fn verdict(flags: &[FlagCheck], forms: &[ClosedFormCheck], ledger: &[LedgerEntry], link: &LinkCheck) -> Verdict {
    let failure = flags
        .iter()
        .find(|f| !f.exceeds_lambda)
        .map(|f| {
            format!(
                "flag ({}, {}): bound {} does not exceed lambda",
                f.report.curve, f.report.point, f.report.delta_bound
            )
        })
        .or_else(|| {
            forms.iter().find(|c| !c.equal).map(|c| {
                format!(
                    "closed form {}: computed {}, expected {}",
                    c.item, c.computed, c.expected
                )
            })
        })
        .or_else(|| {
            ledger
                .iter()
                .find(|e| !e.pass)
                .map(|e| format!("ledger {}: {} {} {} fails", e.id, e.lhs, e.relation, e.rhs))
        })
        .or_else(|| (!link.matches).then(|| format!("link: {} (expected {})", link.smale.label, link.expected_label)));
    match failure {
        None => Verdict::Certified,
        Some(first_failure) => Verdict::Failed { first_failure },
    }
}

pub fn certify_instance(inst: &FamilyInstance, epsilon: &Rational) -> Result<CertificationReport> {
    let flags = singular_flags(inst)?;
    let closed_forms = closed_form_checks(inst, &flags)?;
    let ledger = inequality_ledger(inst, epsilon)?;
    let link = link_check(inst.n)?;
    let verdict = verdict(&flags, &closed_forms, &ledger, &link);
    Ok(CertificationReport {
        n: inst.n,
        lambda: inst.lambda.clone(),
        epsilon: epsilon.clone(),
        flags,
        closed_forms,
        ledger,
        link,
        verdict,
    })
}

pub fn certify_n(n: i64, epsilon: &Rational) -> Result<CertificationReport> {
    certify_instance(&build_sn(n)?, epsilon)
}

/// Certifies every `n` in order, one worker per `jobs` (`1` runs inline).
pub fn certify_range(ns: &[i64], epsilon: &Rational, jobs: usize) -> Result<Vec<CertificationReport>> {
    crate::par::map_with_jobs(ns, jobs, |&n| certify_n(n, epsilon))
        .into_iter()
        .collect()
}

/// One JSON object per line, in the order given.
pub fn to_json_lines(reports: &[CertificationReport]) -> String {
    reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("report serializes") + "\n")
        .collect()
}

pub fn from_json_lines(text: &str) -> std::result::Result<Vec<CertificationReport>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub fn markdown_summary(reports: &[CertificationReport]) -> String {
    let mut out = String::from("# Certification summary\n\n");
    let certified = reports.iter().filter(|r| r.verdict.is_certified()).count();
    let _ = writeln!(out, "{certified} of {} values of n certified.\n", reports.len());
    out.push_str("| n | lambda | delta(O_z) | delta(O_0) | delta(O_1) | ledger | link | verdict |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in reports {
        let passed = r.ledger.iter().filter(|e| e.pass).count();
        let verdict = match &r.verdict {
            Verdict::Certified => "certified".to_string(),
            Verdict::Failed { first_failure } => format!("failed: {first_failure}"),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {passed}/{} | {} | {verdict} |",
            r.n,
            r.lambda.to_markdown(),
            r.flags[0].report.delta_bound.to_markdown(),
            r.flags[1].report.delta_bound.to_markdown(),
            r.flags[2].report.delta_bound.to_markdown(),
            r.ledger.len(),
            r.link.smale.label,
        );
    }
    let failing: Vec<&LedgerEntry> = reports.iter().flat_map(|r| &r.ledger).filter(|e| !e.pass).collect();
    if !failing.is_empty() {
        out.push_str("\n## Failing ledger entries\n\n");
        for r in reports {
            for e in r.ledger.iter().filter(|e| !e.pass) {
                let limit = e
                    .eps_limit
                    .as_ref()
                    .map(|l| l.to_markdown())
                    .unwrap_or_else(|| "-".to_string());
                let _ = writeln!(
                    out,
                    "- n = {}, `{}`: {} {} {} (largest eps: {limit})",
                    r.n,
                    e.id,
                    e.lhs.to_markdown(),
                    e.relation,
                    e.rhs.to_markdown()
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::family::default_epsilon;

    #[test]
    fn n2_is_certified() {
        let r = certify_n(2, &default_epsilon()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert_eq!(r.flags[0].report.delta_bound, q(10, 7));
        assert_eq!(r.link.smale.label, "2M∞ # 2 M₂");
    }

    #[test]
    fn big_epsilon_fails_with_first_item() {
        let r = certify_n(2, &q(1, 4)).unwrap();
        let Verdict::Failed { first_failure } = r.verdict else {
            panic!("expected failure")
        };
        assert!(first_failure.starts_with("ledger a:"), "{first_failure}");
    }

    #[test]
    fn json_lines_round_trip() {
        let reports = certify_range(&[2, 3], &default_epsilon(), 1).unwrap();
        let text = to_json_lines(&reports);
        assert_eq!(from_json_lines(&text).unwrap(), reports);
        assert!(markdown_summary(&reports).contains("| 3 | 65/64 |"));
    }
}
