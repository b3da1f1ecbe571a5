//! Exact real-root discovery on a closed rational interval.
//!
//! Degrees one and two are solved in closed form. Anything else goes through
//! the square-free part, a Sturm sequence and bisection; a root found this
//! way is reported as rational only if it is hit exactly, which is decided by
//! refining its isolating interval below `1 / lead` (every rational root of a
//! primitive integer polynomial has the form `k / lead`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Poly, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSet {
    /// Rational roots, sorted and distinct.
    pub rational: Vec<Rational>,
    /// Open isolating intervals `(a, b)`, one irrational root each, sorted.
    pub irrational: Vec<(Rational, Rational)>,
}

pub fn roots_in_interval(p: &Poly, lo: &Rational, hi: &Rational) -> RootSet {
    debug_assert!(!p.is_zero(), "roots of the zero polynomial");
    if p.is_zero() || lo > hi {
        return RootSet::default();
    }
    match p.degree() {
        Some(0) | None => RootSet::default(),
        Some(1) => {
            let r = -p.coeff(0) / p.coeff(1);
            RootSet {
                rational: if &r >= lo && &r <= hi { vec![r] } else { vec![] },
                irrational: vec![],
            }
        }
        Some(2) => quadratic_roots(p, lo, hi).unwrap_or_else(|| sturm_roots(p, lo, hi)),
        _ => sturm_roots(p, lo, hi),
    }
}

/// Closed-form roots when the discriminant is a rational square.
fn quadratic_roots(p: &Poly, lo: &Rational, hi: &Rational) -> Option<RootSet> {
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &b * &b - Rational::from(4) * &a * &c;
    if disc.is_negative() {
        return Some(RootSet::default());
    }
    let sqrt = rational_sqrt(&disc)?;
    let two_a = Rational::from(2) * &a;
    let mut roots = vec![(-&b - &sqrt) / &two_a, (-&b + &sqrt) / &two_a];
    roots.sort();
    roots.dedup();
    roots.retain(|r| r >= lo && r <= hi);
    Some(RootSet {
        rational: roots,
        irrational: vec![],
    })
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = integer_sqrt(x.numer())?;
    let d = integer_sqrt(x.denom())?;
    Some(Rational::from_bigints(n, d).expect("positive denominator"))
}

fn integer_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Integer primitive multiple of `p` (positive leading coefficient).
fn primitive_integer(p: &Poly) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn sturm_sequence(s: &Poly) -> Vec<Poly> {
    let mut seq = vec![s.clone(), s.derivative()];
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sturm_roots(p: &Poly, lo: &Rational, hi: &Rational) -> RootSet {
    let square_free = p.div_rem(&p.gcd(&p.derivative())).0;
    let seq = sturm_sequence(&square_free);
    let lead = primitive_integer(&square_free).pop().expect("nonzero polynomial");
    let grid = Rational::from(lead).recip().expect("nonzero lead");

    let mut out = RootSet::default();
    if square_free.eval(lo).is_zero() {
        out.rational.push(lo.clone());
    }
    // Roots in (a, b] are counted by V(a) - V(b).
    let mut stack = vec![(lo.clone(), hi.clone())];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        match count {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let mid = (&a + &b) / Rational::from(2);
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    for (mut a, mut b) in isolated {
        if square_free.eval(&b).is_zero() {
            out.rational.push(b);
            continue;
        }
        // Root is strictly inside (a, b); shrink below the rational grid.
        let mut exact = None;
        while &b - &a >= grid {
            let mid = (&a + &b) / Rational::from(2);
            let v = square_free.eval(&mid);
            if v.is_zero() {
                exact = Some(mid);
                break;
            }
            // s(b) is never zero here, unlike s(a) when a = lo is a root.
            if v.is_positive() == square_free.eval(&b).is_positive() {
                b = mid;
            } else {
                a = mid;
            }
        }
        if exact.is_none() {
            exact = grid_candidates(&a, &b, &grid)
                .filter(|c| c > &a && c < &b)
                .find(|c| square_free.eval(c).is_zero());
        }
        match exact {
            Some(r) => out.rational.push(r),
            None => out.irrational.push((a, b)),
        }
    }
    out.rational.sort();
    out.rational.dedup();
    out.irrational.sort();
    out
}

fn grid_candidates<'a>(a: &Rational, b: &Rational, grid: &'a Rational) -> impl Iterator<Item = Rational> + 'a {
    let k_lo = (a / grid).floor();
    let k_hi = (b / grid).floor() + BigInt::one();
    num_iter_range(k_lo, k_hi).map(move |k| Rational::from(k) * grid)
}

fn num_iter_range(from: BigInt, to: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = from;
    std::iter::from_fn(move || {
        if cur > to {
            return None;
        }
        let out = cur.clone();
        cur += 1;
        Some(out)
    })
}
