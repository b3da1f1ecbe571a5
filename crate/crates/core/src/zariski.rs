//! Zariski decomposition of `A - tC` on a numerical surface model.
//!
//! Two independent routes are provided. [`decompose_at`] runs the classical
//! support-growing algorithm at a fixed rational `t`. [`decompose_family`]
//! solves the same linear systems with `t` kept symbolic (every coefficient
//! is affine in `t`) and walks the chambers from `t = 0` to the
//! pseudoeffective threshold, so breakpoints are exact roots of affine
//! functions rather than bisection results.
//!
//! Pseudoeffectivity is decided inside the cone of tracked curves: once the
//! curves forced into the negative part stop spanning a negative definite
//! block, `A - tC` has left the pseudoeffective cone.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{solve_linear, Poly, Rational};
use crate::error::{Error, Result};
use crate::surface::{DivisorClass, IntersectionLattice, LogDelPezzo};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiPoint {
    pub t: Rational,
    pub positive: DivisorClass,
    pub negative: DivisorClass,
    /// Curves with a nonzero coefficient in the negative part.
    pub support: BTreeSet<String>,
}

impl ZariskiPoint {
    fn new(lattice: &IntersectionLattice, t: Rational, positive: DivisorClass, negative: DivisorClass) -> Self {
        let support = negative
            .support()
            .into_iter()
            .map(|i| lattice.name(i).to_string())
            .collect();
        ZariskiPoint {
            t,
            positive,
            negative,
            support,
        }
    }
}

/// One chamber `[lo, hi]` with a fixed support; coefficients are affine in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiSegment {
    pub lo: Rational,
    pub hi: Rational,
    /// Lattice indices of the curves allowed in the negative part.
    pub support: Vec<usize>,
    pub positive: Vec<Poly>,
    pub negative: Vec<Poly>,
}

impl ZariskiSegment {
    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn positive_at(&self, t: &Rational) -> DivisorClass {
        DivisorClass::new(self.positive.iter().map(|p| p.eval(t)).collect())
    }

    pub fn negative_at(&self, t: &Rational) -> DivisorClass {
        DivisorClass::new(self.negative.iter().map(|p| p.eval(t)).collect())
    }

    /// `P(t) · C_index` as a polynomial in `t`.
    pub fn positive_dot(&self, lattice: &IntersectionLattice, index: usize) -> Poly {
        dot_poly(&self.positive, lattice, index)
    }

    /// `P(t)²` as a polynomial in `t`.
    pub fn positive_square(&self, lattice: &IntersectionLattice) -> Poly {
        self.positive
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .fold(Poly::zero(), |acc, (i, p)| &acc + &(p * &self.positive_dot(lattice, i)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiFamily {
    pub curve: String,
    pub tau: Rational,
    pub segments: Vec<ZariskiSegment>,
}

impl ZariskiFamily {
    /// `[0, t_1, ..., tau]`.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.segments.iter().map(|s| s.lo.clone()).collect();
        out.push(self.tau.clone());
        out
    }

    /// First segment containing `t` (the left one at a breakpoint).
    pub fn segment_at(&self, t: &Rational) -> Option<&ZariskiSegment> {
        self.segments.iter().find(|s| s.contains(t))
    }

    pub fn eval(&self, lattice: &IntersectionLattice, t: &Rational) -> Result<ZariskiPoint> {
        let seg = self.segment_at(t).ok_or_else(|| Error::NotPseudoeffective {
            curve: self.curve.clone(),
            t: t.clone(),
        })?;
        Ok(ZariskiPoint::new(
            lattice,
            t.clone(),
            seg.positive_at(t),
            seg.negative_at(t),
        ))
    }

    /// Support sets grow weakly from one segment to the next.
    pub fn support_monotone(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[0].support.iter().all(|i| w[1].support.contains(i)))
    }

    /// Every negative-part coefficient is non-decreasing in `t`.
    pub fn negative_part_monotone(&self) -> bool {
        self.segments
            .iter()
            .all(|s| s.negative.iter().all(|p| !p.coeff(1).is_negative()))
    }

    /// Every segment's support spans a negative definite block.
    pub fn supports_negative_definite(&self, lattice: &IntersectionLattice) -> bool {
        self.segments
            .iter()
            .all(|s| s.support.is_empty() || lattice.gram().submatrix(&s.support).is_negative_definite())
    }
}

fn dot_poly(coeffs: &[Poly], lattice: &IntersectionLattice, index: usize) -> Poly {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .fold(Poly::zero(), |acc, (j, p)| &acc + &p.scale(&lattice.gram()[(j, index)]))
}

/// Zariski decomposition of `A - tC` at a fixed `t`.
pub fn decompose_at(surface: &LogDelPezzo, curve: &str, t: &Rational) -> Result<ZariskiPoint> {
    let lattice = &surface.lattice;
    let not_pseff = || Error::NotPseudoeffective {
        curve: curve.to_string(),
        t: t.clone(),
    };
    if t.is_negative() {
        return Err(not_pseff());
    }
    let divisor = &surface.polarization - &lattice.class_of(curve)?.scale(t);

    let mut support: Vec<usize> = Vec::new();
    // Each pass adds at least one curve, so `len + 1` passes is a hard cap.
    for _ in 0..=lattice.len() {
        let mut negative = DivisorClass::zero(lattice.len());
        if !support.is_empty() {
            let block = lattice.gram().submatrix(&support);
            if !block.is_negative_definite() {
                return Err(not_pseff());
            }
            let rhs: Vec<Rational> = support.iter().map(|&k| lattice.dot_curve(&divisor, k)).collect();
            let x = solve_linear(&block, &rhs)?;
            if x.iter().any(Rational::is_negative) {
                return Err(not_pseff());
            }
            let mut v = vec![Rational::zero(); lattice.len()];
            for (&k, xk) in support.iter().zip(x) {
                v[k] = xk;
            }
            negative = DivisorClass::new(v);
        }
        let positive = &divisor - &negative;
        let violating: Vec<usize> = (0..lattice.len())
            .filter(|k| !support.contains(k))
            .filter(|&k| lattice.dot_curve(&positive, k).is_negative())
            .collect();
        if violating.is_empty() {
            return Ok(ZariskiPoint::new(lattice, t.clone(), positive, negative));
        }
        support.extend(violating);
        support.sort_unstable();
    }
    Err(Error::NonConvergence {
        curve: curve.to_string(),
        t: t.clone(),
    })
}

/// Negative-part coefficients `x(t)` on a fixed support, symbolic in `t`.
struct ChamberSolution {
    positive: Vec<Poly>,
    negative: Vec<Poly>,
    dots: Vec<Poly>,
}

fn solve_chamber(lattice: &IntersectionLattice, base: &[Poly], support: &[usize]) -> Result<ChamberSolution> {
    let len = lattice.len();
    let mut negative = vec![Poly::zero(); len];
    if !support.is_empty() {
        let block = lattice.gram().submatrix(support);
        let rhs: Vec<Poly> = support.iter().map(|&k| dot_poly(base, lattice, k)).collect();
        let constant: Vec<Rational> = rhs.iter().map(|p| p.coeff(0)).collect();
        let slope: Vec<Rational> = rhs.iter().map(|p| p.coeff(1)).collect();
        let x0 = solve_linear(&block, &constant)?;
        let x1 = solve_linear(&block, &slope)?;
        for ((&k, a), b) in support.iter().zip(x0).zip(x1) {
            negative[k] = Poly::linear(a, b);
        }
    }
    let positive: Vec<Poly> = base.iter().zip(&negative).map(|(a, n)| a - n).collect();
    let dots = (0..len).map(|k| dot_poly(&positive, lattice, k)).collect();
    Ok(ChamberSolution {
        positive,
        negative,
        dots,
    })
}

/// Negative immediately to the right of `t`: value below zero, or zero with a
/// negative slope.
fn turns_negative(p: &Poly, t: &Rational) -> bool {
    let v = p.eval(t);
    v.is_negative() || (v.is_zero() && p.derivative().eval(t).is_negative())
}

/// Piecewise Zariski decomposition of `A - tC` on `[0, tau]`.
pub fn decompose_family(surface: &LogDelPezzo, curve: &str) -> Result<ZariskiFamily> {
    let lattice = &surface.lattice;
    let c = lattice.index_of(curve)?;
    let base: Vec<Poly> = surface
        .polarization
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let slope = if i == c { -Rational::one() } else { Rational::zero() };
            Poly::linear(a.clone(), slope)
        })
        .collect();

    let mut segments = Vec::new();
    let mut start = Rational::zero();
    let mut support: Vec<usize> = Vec::new();
    loop {
        // Settle the support valid just to the right of `start`.
        let solution = loop {
            if !support.is_empty() && !lattice.gram().submatrix(&support).is_negative_definite() {
                if segments.is_empty() {
                    return Err(Error::NotPseudoeffective {
                        curve: curve.to_string(),
                        t: start,
                    });
                }
                return Ok(ZariskiFamily {
                    curve: curve.to_string(),
                    tau: start,
                    segments,
                });
            }
            let sol = solve_chamber(lattice, &base, &support)?;
            if support.iter().any(|&k| turns_negative(&sol.negative[k], &start)) {
                return Err(Error::NonMonotoneSupport(curve.to_string()));
            }
            let entering: Vec<usize> = (0..lattice.len())
                .filter(|k| !support.contains(k))
                .filter(|&k| turns_negative(&sol.dots[k], &start))
                .collect();
            if entering.is_empty() {
                break sol;
            }
            support.extend(entering);
            support.sort_unstable();
        };

        // The chamber ends where the first nonnegative pairing crosses zero.
        let end = (0..lattice.len())
            .filter(|k| !support.contains(k))
            .map(|k| &solution.dots[k])
            .filter(|p| p.coeff(1).is_negative())
            .map(|p| -p.coeff(0) / p.coeff(1))
            .min()
            .ok_or_else(|| Error::UnboundedThreshold(curve.to_string()))?;

        segments.push(ZariskiSegment {
            lo: start.clone(),
            hi: end.clone(),
            support: support.clone(),
            positive: solution.positive,
            negative: solution.negative,
        });
        start = end;
    }
}

/// Largest `t` with `A - tC` pseudoeffective in the tracked cone.
pub fn pseff_threshold(surface: &LogDelPezzo, curve: &str) -> Result<Rational> {
    Ok(decompose_family(surface, curve)?.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Matrix};
    use crate::surface::{IntersectionLattice, LogDelPezzo};

    /// Gram data for the degree-2(2n+1) surface at n = 2, curves W, L, R0, R1.
    fn sn2() -> LogDelPezzo {
        let g = |a, b| q(a, b);
        let gram = Matrix::from_rows(vec![
            vec![g(45, 4), g(1, 4), g(1, 2), g(1, 2)],
            vec![g(1, 4), g(-7, 36), g(1, 9), g(1, 9)],
            vec![g(1, 2), g(1, 9), g(-5, 18), g(2, 9)],
            vec![g(1, 2), g(1, 9), g(2, 9), g(-5, 18)],
        ])
        .unwrap();
        let lattice = IntersectionLattice::new(&["W", "L", "R0", "R1"], gram).unwrap();
        let boundary = lattice.divisor(&[("W", q(1, 2))]).unwrap();
        let pol = lattice
            .divisor(&[("L", q(3, 2)), ("R0", q(3, 2)), ("R1", q(3, 2))])
            .unwrap();
        LogDelPezzo::new("S_2", lattice, boundary, pol, vec![]).unwrap()
    }

    #[test]
    fn pointwise_lxy() {
        let s = sn2();
        let z = decompose_at(&s, "L", &q(1, 2)).unwrap();
        assert!(z.negative.is_zero());
        let z = decompose_at(&s, "L", &q(1, 1)).unwrap();
        let expected = s.lattice.divisor(&[("R0", q(1, 2)), ("R1", q(1, 2))]).unwrap();
        assert_eq!(z.negative, expected);
        assert_eq!(z.support, ["R0", "R1"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn pointwise_r0() {
        let s = sn2();
        let z = decompose_at(&s, "R0", &q(1, 1)).unwrap();
        let expected = s.lattice.divisor(&[("L", q(5, 6)), ("R1", q(5, 6))]).unwrap();
        assert_eq!(z.negative, expected);
    }

    #[test]
    fn beyond_threshold_is_rejected() {
        let s = sn2();
        assert!(matches!(
            decompose_at(&s, "L", &q(2, 1)),
            Err(Error::NotPseudoeffective { .. })
        ));
        assert!(decompose_at(&s, "L", &q(-1, 4)).is_err());
        assert!(decompose_at(&s, "X", &q(0, 1)).is_err());
    }

    #[test]
    fn family_breakpoints() {
        let s = sn2();
        let f = decompose_family(&s, "L").unwrap();
        assert_eq!(f.breakpoints(), vec![q(0, 1), q(3, 4), q(3, 2)]);
        assert_eq!(pseff_threshold(&s, "W").unwrap(), q(1, 6));
        assert_eq!(
            decompose_family(&s, "R1").unwrap().breakpoints(),
            vec![q(0, 1), q(3, 8), q(3, 2)]
        );
        assert!(f.support_monotone() && f.negative_part_monotone());
        assert!(f.supports_negative_definite(&s.lattice));
    }

    #[test]
    fn family_matches_pointwise_on_a_grid() {
        let s = sn2();
        for curve in ["W", "L", "R0", "R1"] {
            let f = decompose_family(&s, curve).unwrap();
            for k in 0..=24 {
                let t = &f.tau * q(k, 24);
                assert_eq!(
                    f.eval(&s.lattice, &t).unwrap(),
                    decompose_at(&s, curve, &t).unwrap(),
                    "{curve} at {t}"
                );
            }
        }
    }
}
