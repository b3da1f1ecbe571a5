//! Every arithmetic inequality the δ > 1 argument relies on, instantiated at
//! a concrete `n` with each bounded proof variable replaced by its bound.
//!
//! An entry reads `lhs REL rhs` with `lhs = base + eps_coeff·ε`. Invariants
//! enter through the engine (S-values, intersection numbers on the models),
//! never through their closed forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FamilyInstance, F, L, L_HAT, R, R0, R0_HAT, R1, R1_HAT, W};
use crate::algebra::Rational;
use crate::delta::fujita_mult_bound;
use crate::error::Result;
use crate::surface::{DivisorClass, LogDelPezzo};

pub fn default_epsilon() -> Rational {
    Rational::new(1, 1_000_000)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn strict(self) -> bool {
        matches!(self, Relation::Lt)
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerGroup {
    /// Bounds on the coefficients of `W`, `L_xy`, `R_i`, `R` in a basis-type divisor.
    Coefficients,
    /// Log canonicity at smooth points.
    SmoothPoints,
    /// Log canonicity at `O_w` through the weighted blow-up.
    PointOw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub group: LedgerGroup,
    pub id: String,
    pub description: String,
    pub relation: Relation,
    pub lhs: Rational,
    pub rhs: Rational,
    pub eps_coeff: Rational,
    pub substitutions: String,
    pub pass: bool,
    /// Largest ε the entry tolerates (exclusive for strict entries);
    /// absent when the entry does not involve ε.
    pub eps_limit: Option<Rational>,
}

struct Ledger<'a> {
    eps: &'a Rational,
    group: LedgerGroup,
    entries: Vec<LedgerEntry>,
}

impl Ledger<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push_eps(
        &mut self,
        id: &str,
        description: &str,
        base: Rational,
        eps_coeff: Rational,
        relation: Relation,
        rhs: Rational,
        substitutions: &str,
    ) {
        let lhs = &base + &(&eps_coeff * self.eps);
        let eps_limit = eps_coeff.is_positive().then(|| (&rhs - &base) / &eps_coeff);
        self.entries.push(LedgerEntry {
            group: self.group,
            id: id.to_string(),
            description: description.to_string(),
            pass: relation.holds(&lhs, &rhs),
            relation,
            lhs,
            rhs,
            eps_coeff,
            substitutions: substitutions.to_string(),
            eps_limit,
        });
    }

    fn push(
        &mut self,
        id: &str,
        description: &str,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
        substitutions: &str,
    ) {
        self.push_eps(id, description, lhs, Rational::zero(), relation, rhs, substitutions);
    }
}

fn dot(s: &LogDelPezzo, d: &DivisorClass, e: &DivisorClass) -> Result<Rational> {
    s.lattice.intersect(d, e)
}

fn class(s: &LogDelPezzo, name: &str) -> Result<DivisorClass> {
    s.lattice.class_of(name)
}

pub fn inequality_ledger(inst: &FamilyInstance, eps: &Rational) -> Result<Vec<LedgerEntry>> {
    let n = inst.n as i64;
    let k = 4 * n + 1;
    let r = Rational::new;
    let lambda = &inst.lambda;
    let inv_lambda = lambda.recip()?;
    let one = Rational::one();
    let half = r(1, 2);

    let mut ledger = Ledger {
        eps,
        group: LedgerGroup::Coefficients,
        entries: Vec::new(),
    };

    let s_w = fujita_mult_bound(&inst.base, W)?;
    let s_l = fujita_mult_bound(&inst.base, L)?;
    let s_ri = fujita_mult_bound(&inst.base, R0)?.max(fujita_mult_bound(&inst.base, R1)?);
    let s_r = fujita_mult_bound(&inst.enlarged, R)?;
    let s_f = fujita_mult_bound(&inst.blowup, F)?;

    let a_bound = r(1, 8 * n);
    let b_bound = r(3 * n + 2, 2 * (2 * n + 1));
    let bi_bound = r(8 * n * n + 6 * n + 3, 8 * n * (2 * n + 1));
    let c_bound = r(3, 10);
    ledger.push_eps(
        "a",
        "a <= S(W) + eps < 1/(8n)",
        s_w,
        one.clone(),
        Relation::Lt,
        a_bound.clone(),
        "S(W) on the base model",
    );
    ledger.push_eps(
        "b",
        "b <= S(L_xy) + eps < (3n+2)/(2(2n+1))",
        s_l,
        one.clone(),
        Relation::Lt,
        b_bound.clone(),
        "S(L_xy) on the base model",
    );
    ledger.push_eps(
        "b_i",
        "b_i <= S(R_i) + eps < (8n^2+6n+3)/(8n(2n+1))",
        s_ri,
        one.clone(),
        Relation::Lt,
        bi_bound.clone(),
        "max of S(R0), S(R1) on the base model",
    );
    ledger.push_eps(
        "c",
        "c <= S(R) + eps < 3/10",
        s_r,
        one.clone(),
        Relation::Lt,
        c_bound.clone(),
        "S(R) on the enlarged model",
    );

    // Smooth points.
    ledger.group = LedgerGroup::SmoothPoints;
    let b = r(4, 5);
    let bi = r(3, 5);
    let base = &inst.base;
    let big = &inst.enlarged;
    let mult = r(3, 4 * n);
    ledger.push(
        "b-corner",
        "(3n+2)/(2(2n+1)) <= 4/5",
        b_bound,
        Relation::Le,
        b.clone(),
        "",
    );
    ledger.push(
        "b_i-corner",
        "(8n^2+6n+3)/(8n(2n+1)) <= 3/5",
        bi_bound.clone(),
        Relation::Le,
        bi.clone(),
        "",
    );
    ledger.push(
        "lambda-b",
        "lambda b <= 1",
        lambda * &b,
        Relation::Le,
        one.clone(),
        "b = 4/5",
    );
    ledger.push(
        "lambda-b_i",
        "lambda b_i <= 1",
        lambda * &bi,
        Relation::Le,
        one.clone(),
        "b_i = 3/5",
    );

    let l = class(base, L)?;
    let d_minus_bl = &base.polarization - &l.scale(&b);
    let delta_l = dot(base, &d_minus_bl, &l)?;
    ledger.push(
        "delta.L_xy-display",
        "(D - bL_xy).L_xy = (3+2b(4n-1))/(4n(4n+1))",
        delta_l.clone(),
        Relation::Eq,
        r(15 + 8 * (4 * n - 1), 5 * 4 * n * k),
        "b = 4/5",
    );
    ledger.push(
        "delta.L_xy",
        "(D - bL_xy).L_xy < 1/lambda",
        delta_l,
        Relation::Lt,
        inv_lambda.clone(),
        "b = 4/5",
    );

    let r0 = class(base, R0)?;
    let delta_r = &dot(base, &base.polarization, &r0)? - &dot(base, &r0, &r0)?;
    ledger.push(
        "delta.R_i-display",
        "D.R_i - R_i^2 = (4n+5)/(4(4n+1))",
        delta_r.clone(),
        Relation::Eq,
        r(4 * n + 5, 4 * k),
        "",
    );
    ledger.push(
        "delta.R_i",
        "D.R_i - R_i^2 < 1/lambda",
        delta_r,
        Relation::Lt,
        inv_lambda.clone(),
        "",
    );
    ledger.push(
        "lambda-c",
        "lambda c <= 1",
        lambda * &c_bound,
        Relation::Le,
        one.clone(),
        "c = 3/10",
    );

    let rr = class(big, R)?;
    let d_r = dot(big, &big.polarization, &rr)?;
    let w_r = dot(big, &class(big, W)?, &rr)?;
    ledger.push(
        "D.R-display",
        "D.R = 3/(4n)",
        d_r.clone(),
        Relation::Eq,
        mult.clone(),
        "",
    );
    ledger.push(
        "Omega.R",
        "D.R <= 1/lambda",
        d_r.clone(),
        Relation::Le,
        inv_lambda.clone(),
        "",
    );
    ledger.push(
        "W.R-transversal",
        "1 <= W.R",
        one.clone(),
        Relation::Le,
        w_r.clone(),
        "",
    );
    ledger.push("W.R-tangential", "2 <= W.R", r(2, 1), Relation::Le, w_r, "");
    ledger.push(
        "transversal",
        "1/2 + lambda D.R < 1",
        &half + &(lambda * &d_r),
        Relation::Lt,
        one.clone(),
        "",
    );

    let subs = "a = 1/(8n), c = 3/10, mult_p = 3/(4n)";
    let a_plus_c = &a_bound + &c_bound;
    let lm = lambda * &mult;
    let d = &(lambda * &a_plus_c) + &lm - &half;
    ledger.push(
        "d",
        "d = lambda(a+c) + lambda mult_p - 1/2 <= 1",
        d.clone(),
        Relation::Le,
        one.clone(),
        subs,
    );
    ledger.push(
        "lambda-mult",
        "lambda mult_p <= 1",
        lm.clone(),
        Relation::Le,
        one.clone(),
        subs,
    );
    ledger.push(
        "e",
        "2 lambda (a + c + mult_p) - 1 <= 1",
        &(Rational::from(2) * lambda * (&a_plus_c + &mult)) - &one,
        Relation::Le,
        one.clone(),
        subs,
    );
    ledger.push(
        "F.Omega",
        "3 lambda/(4n) < 1",
        lm.clone(),
        Relation::Lt,
        one.clone(),
        subs,
    );
    ledger.push(
        "F.W",
        "(1/2 + lambda a) + 3 lambda/(4n) < 1",
        &(&half + &(lambda * &a_bound)) + &lm,
        Relation::Lt,
        one.clone(),
        subs,
    );
    ledger.push(
        "F.R",
        "lambda c + 3 lambda/(4n) < 1",
        &(lambda * &c_bound) + &lm,
        Relation::Lt,
        one.clone(),
        subs,
    );
    ledger.push(
        "F.E",
        "lambda(a+c) + 2 lambda mult_p - 1/2 < 1",
        &d + &lm,
        Relation::Lt,
        one.clone(),
        subs,
    );

    // O_w.
    ledger.group = LedgerGroup::PointOw;
    let disc = r(3 * n, k);
    ledger.push_eps(
        "theta",
        "3n/(4n+1) + lambda theta < 1, theta < S(F) + eps",
        &disc + &(lambda * &s_f),
        lambda.clone(),
        Relation::Lt,
        one.clone(),
        "theta = S(F) + eps, S(F) on the blow-up model",
    );
    ledger.push(
        "mu-generic",
        "3/4 + b_i/2 < n/lambda",
        &r(3, 4) + &(&bi_bound * &half),
        Relation::Lt,
        Rational::from(n) * &inv_lambda,
        "b_i = (8n^2+6n+3)/(8n(2n+1))",
    );

    // Λ̂·R̂_i as an affine function of (b, b_i, b_j, μ), checked at the unit points.
    let hat = &inst.blowup;
    let f = class(hat, F)?;
    let l_hat = class(hat, L_HAT)?;
    let ri_hat = class(hat, R0_HAT)?;
    let rj_hat = class(hat, R1_HAT)?;
    let pull_l = &l_hat + &f.scale(&r(1, k));
    let pull_ri = &ri_hat + &f.scale(&r(n, k));
    let pull_rj = &rj_hat + &f.scale(&r(n, k));
    let unit_points: [(&str, [i64; 4]); 5] = [
        ("0", [0, 0, 0, 0]),
        ("b", [1, 0, 0, 0]),
        ("b_i", [0, 1, 0, 0]),
        ("b_j", [0, 0, 1, 0]),
        ("mu", [0, 0, 0, 1]),
    ];
    for (label, [vb, vi, vj, vm]) in unit_points {
        let lam_hat = &(&(&(&hat.polarization - &pull_l.scale(&Rational::from(vb)))
            - &pull_ri.scale(&Rational::from(vi)))
            - &pull_rj.scale(&Rational::from(vj)))
            - &f.scale(&r(vm, k));
        let engine = dot(hat, &lam_hat, &ri_hat)?;
        let display = r(3, 4 * k) - r(vb, k) + r(vi * (2 * n + 1), 2 * k) - r(vj * n, k) - r(vm, k);
        ledger.push(
            &format!("Lambda.R_i@{label}"),
            "Lambda^.R_i^ = 3/(4(4n+1)) - b/(4n+1) + b_i(2n+1)/(2(4n+1)) - b_j n/(4n+1) - mu/(4n+1)",
            engine,
            Relation::Eq,
            display,
            &format!("unit point {label}"),
        );
    }

    let step = (&inv_lambda - &mult) * r(2 * n, 2 * n + 1);
    let step_display = r(80 * n * n - 44 * n - 15, 10 * (2 * n + 1) * k);
    ledger.push(
        "R_i-case-b_j",
        "(1/lambda - 3/(4n)) 2n/(2n+1) = (80n^2-44n-15)/(10(2n+1)(4n+1))",
        step.clone(),
        Relation::Eq,
        step_display,
        "",
    );
    let lower = &inv_lambda + &step;
    ledger.push(
        "R_i-case-sum",
        "1/lambda + (80n^2-44n-15)/(10(2n+1)(4n+1)) = (40n-7)/(20n+10)",
        lower.clone(),
        Relation::Eq,
        r(40 * n - 7, 20 * n + 10),
        "",
    );
    ledger.push_eps(
        "R_i-case",
        "(4n+3)/(4n) + ((4n+1)/n) eps <= (40n-7)/(20n+10)",
        &s_f * &r(k, n),
        r(k, n),
        Relation::Le,
        lower,
        "theta bound scaled by (4n+1)/n, S(F) on the blow-up model",
    );

    for (label, vb, vm) in [("0", 0, 0), ("b", 1, 0), ("mu", 0, 1)] {
        let (bb, mu) = (Rational::from(vb), Rational::from(vm));
        let sum = &bb + &mu;
        let lhs =
            (&(&bb + &(Rational::from(n) * (Rational::from(4) * &sum - Rational::from(3)))) + &mu) / Rational::from(k);
        ledger.push(
            &format!("L-case-identity@{label}"),
            "(b + n(4(b+mu)-3) + mu)/(4n+1) = (b+mu) - 3n/(4n+1)",
            lhs,
            Relation::Eq,
            &sum - &disc,
            &format!("unit point {label}"),
        );
    }
    let l_bound = &disc + &s_f;
    ledger.push(
        "L-case-sum",
        "3n/(4n+1) + S(F) = (16n+3)/(16n+4)",
        l_bound.clone(),
        Relation::Eq,
        r(16 * n + 3, 16 * n + 4),
        "S(F) on the blow-up model",
    );
    ledger.push_eps(
        "L-case",
        "(16n+3)/(16n+4) + eps <= 1/lambda",
        l_bound,
        one,
        Relation::Le,
        inv_lambda,
        "b + mu < 3n/(4n+1) + S(F) + eps",
    );

    Ok(ledger.entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::family::build_sn;

    fn entry<'a>(entries: &'a [LedgerEntry], id: &str) -> &'a LedgerEntry {
        entries
            .iter()
            .find(|e| e.id == id)
            .unwrap_or_else(|| panic!("no entry {id}"))
    }

    #[test]
    fn n2_values() {
        let inst = build_sn(2).unwrap();
        let entries = inequality_ledger(&inst, &default_epsilon()).unwrap();
        for e in &entries {
            assert!(e.pass, "{e:?}");
        }
        assert_eq!(entry(&entries, "delta.L_xy").lhs, q(71, 360));
        assert_eq!(entry(&entries, "b-corner").lhs, q(4, 5));
        assert_eq!(entry(&entries, "transversal").lhs, q(1, 2) + q(135, 352));
        assert_eq!(entry(&entries, "a").eps_limit, Some(q(1, 144)));
    }

    #[test]
    fn large_epsilon_breaks_tight_entries() {
        let inst = build_sn(2).unwrap();
        let entries = inequality_ledger(&inst, &q(1, 4)).unwrap();
        assert!(!entry(&entries, "a").pass);
        assert!(entry(&entries, "lambda-b").pass);
    }
}
