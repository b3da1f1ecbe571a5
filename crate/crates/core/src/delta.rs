//! Volumes, S-invariants, flag invariants and local δ lower bounds.

use serde::{Deserialize, Serialize};

use crate::algebra::{PiecewisePoly, Poly, Rational};
use crate::error::{Error, Result};
use crate::surface::{IntersectionLattice, LogDelPezzo, PointOnCurve};
use crate::zariski::{decompose_family, ZariskiFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagReport {
    pub curve: String,
    pub point: String,
    pub s_curve: Rational,
    pub s_flag: Rational,
    pub a_log: Rational,
    pub delta_bound: Rational,
    /// `ord_p(N(u)|_C)` is identically zero along the whole family.
    pub ord_term_vanishes: bool,
}

/// `vol(A - tC) = P(t)²` on `[0, τ]`, zero beyond.
pub fn volume_function(surface: &LogDelPezzo, curve: &str) -> Result<PiecewisePoly> {
    volume_of_family(surface, &decompose_family(surface, curve)?)
}

pub fn volume_of_family(surface: &LogDelPezzo, family: &ZariskiFamily) -> Result<PiecewisePoly> {
    let pieces = family
        .segments
        .iter()
        .map(|s| s.positive_square(&surface.lattice))
        .collect();
    PiecewisePoly::new(family.breakpoints(), pieces, true)
}

/// `S(C) = (1/A²) ∫ vol(A - tC) dt`.
pub fn s_invariant(surface: &LogDelPezzo, curve: &str) -> Result<Rational> {
    s_of_family(surface, &decompose_family(surface, curve)?)
}

pub fn s_of_family(surface: &LogDelPezzo, family: &ZariskiFamily) -> Result<Rational> {
    Ok(volume_of_family(surface, family)?.integral() / surface.volume_a2())
}

fn host_point<'a>(surface: &'a LogDelPezzo, curve: &str, point: &str) -> Result<&'a PointOnCurve> {
    surface.lattice.index_of(curve)?;
    surface
        .point(curve, point)
        .map_err(|err| match surface.points.iter().find(|p| p.name == point) {
            Some(p) => Error::PointCurveMismatch {
                point: point.to_string(),
                host: p.host.clone(),
                curve: curve.to_string(),
            },
            None => err,
        })
}

/// `h(u) = (P·C) ord_p(N|_C) + ½ (P·C)²`, with `ord_p` read from the
/// point's local orders.
pub fn h_function(surface: &LogDelPezzo, curve: &str, point: &str) -> Result<PiecewisePoly> {
    let p = host_point(surface, curve, point)?;
    h_of_family(surface, &decompose_family(surface, curve)?, p)
}

pub fn h_of_family(surface: &LogDelPezzo, family: &ZariskiFamily, point: &PointOnCurve) -> Result<PiecewisePoly> {
    let lattice = &surface.lattice;
    let c = lattice.index_of(&family.curve)?;
    let half = Rational::new(1, 2);
    let mut pieces = Vec::with_capacity(family.segments.len());
    for seg in &family.segments {
        if !seg.negative[c].is_zero() {
            return Err(Error::CurveInNegativePart(family.curve.clone()));
        }
        let pc = seg.positive_dot(lattice, c);
        let ord = ord_along(lattice, &seg.negative, point)?;
        pieces.push(&(&pc * &ord) + &(&pc * &pc).scale(&half));
    }
    PiecewisePoly::new(family.breakpoints(), pieces, true)
}

fn ord_along(lattice: &IntersectionLattice, negative: &[Poly], point: &PointOnCurve) -> Result<Poly> {
    point
        .in_negative_support
        .iter()
        .try_fold(Poly::zero(), |acc, (name, order)| {
            let k = lattice.index_of(name)?;
            Ok(&acc + &negative[k].scale(order))
        })
}

fn ord_vanishes(surface: &LogDelPezzo, family: &ZariskiFamily, point: &PointOnCurve) -> Result<bool> {
    for seg in &family.segments {
        if !ord_along(&surface.lattice, &seg.negative, point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S(W^C; p) = (2/A²) ∫ h(u) du`.
pub fn s_flag(surface: &LogDelPezzo, curve: &str, point: &str) -> Result<Rational> {
    let p = host_point(surface, curve, point)?;
    let family = decompose_family(surface, curve)?;
    s_flag_of_family(surface, &family, p)
}

fn s_flag_of_family(surface: &LogDelPezzo, family: &ZariskiFamily, point: &PointOnCurve) -> Result<Rational> {
    let integral = h_of_family(surface, family, point)?.integral();
    Ok(Rational::from(2) * integral / surface.volume_a2())
}

/// `A_{C,Δ}(p) = 1/r - (Ω·C)_p`.
pub fn log_discrepancy(surface: &LogDelPezzo, curve: &str, point: &str) -> Result<Rational> {
    discrepancy_at(curve, host_point(surface, curve, point)?)
}

fn discrepancy_at(curve: &str, p: &PointOnCurve) -> Result<Rational> {
    let value = Rational::new(1, p.sing.r.max(1) as i64) - &p.boundary_local;
    if value.is_negative() {
        return Err(Error::NegativeLogDiscrepancy {
            curve: curve.to_string(),
            point: p.name.clone(),
            value,
        });
    }
    Ok(value)
}

/// `δ_p ≥ min(1/S(C), A_{C,Δ}(p) / S(W^C; p))`; a vanishing flag invariant
/// leaves only the first term.
pub fn combine_bound(s_curve: &Rational, s_flag: &Rational, a_log: &Rational) -> Result<Rational> {
    let first = s_curve.recip()?;
    if s_flag.is_zero() {
        return Ok(first);
    }
    Ok(first.min(a_log / s_flag))
}

pub fn local_delta_bound(surface: &LogDelPezzo, curve: &str, point: &str) -> Result<FlagReport> {
    let p = host_point(surface, curve, point)?;
    let family = decompose_family(surface, curve)?;
    flag_report(surface, &family, p)
}

/// Flag report from an already computed family.
pub fn flag_report(surface: &LogDelPezzo, family: &ZariskiFamily, point: &PointOnCurve) -> Result<FlagReport> {
    let s_curve = s_of_family(surface, family)?;
    let s_flag = s_flag_of_family(surface, family, point)?;
    let a_log = discrepancy_at(&family.curve, point)?;
    let delta_bound = combine_bound(&s_curve, &s_flag, &a_log)?;
    Ok(FlagReport {
        curve: family.curve.clone(),
        point: point.name.clone(),
        ord_term_vanishes: ord_vanishes(surface, family, point)?,
        s_curve,
        s_flag,
        a_log,
        delta_bound,
    })
}

/// Asymptotic bound on `ord_C` of basis-type divisors: `S(C)`, to which the
/// ledger adds its ε.
pub fn fujita_mult_bound(surface: &LogDelPezzo, curve: &str) -> Result<Rational> {
    s_invariant(surface, curve)
}
