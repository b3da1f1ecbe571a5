//! Smale invariants of links of quasi-homogeneous hypersurface singularities.
//!
//! `b₂` is the multiplicity of the eigenvalue 1 of the Milnor monodromy,
//! read off the Milnor–Orlik divisor `Π (Λ_{u_i}/v_i - 1)` where
//! `d/a_i = u_i/v_i`. The torsion of `H₂` comes from the genus of the branch
//! curve of the orbifold structure.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedHypersurface {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub branch_multiplicity: u64,
}

impl WeightedHypersurface {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) || degree == 0 {
            return Err(Error::InvalidHypersurface(format!(
                "weights {weights:?} and degree {degree} must be positive"
            )));
        }
        let branch_multiplicity = weights[..weights.len() - 1].iter().fold(0, |g, &a| g.gcd(&a));
        Ok(WeightedHypersurface {
            weights,
            degree,
            branch_multiplicity,
        })
    }

    /// Weights `(2, 4, 4n, 4n+1)`, degree `4(2n+1)`.
    pub fn family(n: u64) -> Self {
        Self::new(vec![2, 4, 4 * n, 4 * n + 1], 4 * (2 * n + 1)).expect("positive data")
    }
}

/// Number of monomials of weighted degree `degree` (no monomial counted twice).
pub fn count_monomials(weights: &[u64], degree: i64) -> u64 {
    if degree < 0 {
        return 0;
    }
    // Coin-change count over exponent vectors.
    let d = degree as usize;
    let mut ways = vec![0u64; d + 1];
    ways[0] = 1;
    for &w in weights {
        let w = w as usize;
        for k in w..=d {
            ways[k] += ways[k - w];
        }
    }
    ways[d]
}

/// Genus of a quasi-smooth curve of degree `d` in `P(a0, a1, a2)`: the
/// dimension of degree `d - Σa` forms.
pub fn adjoint_genus(weights: [u64; 3], degree: u64) -> u64 {
    count_monomials(&weights, degree as i64 - weights.iter().sum::<u64>() as i64)
}

/// Genus of the degree `2n+1` curve in `P(1, 1, n)`.
pub fn genus_branch_curve(n: u64) -> u64 {
    adjoint_genus([1, 1, n], 2 * n + 1)
}

/// `H₂` torsion `(Z/m)^{2g}`, kept as `g` copies of `Z/m ⊕ Z/m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torsion {
    pub m: u64,
    pub pairs: u64,
}

impl Torsion {
    pub fn new(m: u64, genus: u64) -> Self {
        if m <= 1 {
            Torsion { m: 1, pairs: 0 }
        } else {
            Torsion { m, pairs: genus }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.pairs == 0
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        write!(f, "(Z/{m}+Z/{m})^{}", self.pairs, m = self.m)
    }
}

pub fn torsion_h2(n: u64) -> Torsion {
    Torsion::new(2, genus_branch_curve(n))
}

/// Formal sum `Σ c_k Λ_k` with `Λ_1 = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaDivisor(BTreeMap<u64, Rational>);

impl LambdaDivisor {
    pub fn one() -> Self {
        LambdaDivisor(BTreeMap::from([(1, Rational::one())]))
    }

    pub fn term(k: u64, c: Rational) -> Self {
        LambdaDivisor(BTreeMap::from([(k, c)]))
    }

    pub fn coefficients(&self) -> &BTreeMap<u64, Rational> {
        &self.0
    }

    fn add_term(&mut self, k: u64, c: Rational) {
        let entry = self.0.entry(k).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.0.remove(&k);
        }
    }

    /// `Λ_a Λ_b = gcd(a, b) Λ_lcm(a, b)`.
    pub fn mul(&self, other: &LambdaDivisor) -> LambdaDivisor {
        let mut out = LambdaDivisor::default();
        for (&a, ca) in &self.0 {
            for (&b, cb) in &other.0 {
                let (g, l) = (a.gcd(&b), a.lcm(&b));
                out.add_term(l, ca * cb * Rational::from(g as i64));
            }
        }
        out
    }

    pub fn sub(&self, other: &LambdaDivisor) -> LambdaDivisor {
        let mut out = self.clone();
        for (&k, c) in &other.0 {
            out.add_term(k, -c.clone());
        }
        out
    }

    /// Multiplicity of the eigenvalue `1`: every `Λ_k` contains it once.
    pub fn eigenvalue_one(&self) -> Rational {
        self.0.values().sum()
    }

    /// Degree of the characteristic polynomial.
    pub fn degree(&self) -> Rational {
        self.0.iter().map(|(&k, c)| c * Rational::from(k as i64)).sum()
    }

    /// Multiplicity of a primitive `j`-th root of unity.
    pub fn multiplicity_of_order(&self, j: u64) -> Rational {
        self.0.iter().filter(|(&k, _)| k % j == 0).map(|(_, c)| c.clone()).sum()
    }
}

impl fmt::Display for LambdaDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(&k, c)| {
                if k == 1 {
                    c.to_markdown()
                } else {
                    format!("{}L{k}", c.to_markdown())
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

pub fn milnor_orlik_divisor(weights: &[u64], degree: u64) -> LambdaDivisor {
    weights.iter().fold(LambdaDivisor::one(), |acc, &a| {
        let g = degree.gcd(&a);
        let (u, v) = (degree / g, a / g);
        let factor = LambdaDivisor::term(u, Rational::new(1, v as i64)).sub(&LambdaDivisor::one());
        acc.mul(&factor)
    })
}

/// Second Betti number of the link of `Σ a_i`-weighted degree `d`.
pub fn b2_link(weights: &[u64], degree: u64) -> Result<u64> {
    let h = WeightedHypersurface::new(weights.to_vec(), degree)?;
    let div = milnor_orlik_divisor(&h.weights, h.degree);
    let reject = |why: String| Error::InvalidHypersurface(format!("{weights:?}, d = {degree}: {why}"));
    if let Some((k, c)) = div.coefficients().iter().find(|(_, c)| !c.is_integer()) {
        return Err(reject(format!("non-integral coefficient {c} of L{k}")));
    }
    let orders: Vec<u64> = div
        .coefficients()
        .keys()
        .flat_map(|&k| (1..=k).filter(move |j| k % j == 0))
        .collect();
    for j in orders {
        let m = div.multiplicity_of_order(j);
        if m.is_negative() {
            return Err(reject(format!("negative multiplicity {m} for roots of order {j}")));
        }
    }
    let b2 = div.eigenvalue_one();
    Ok(b2.numer().try_into().expect("non-negative integer"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmaleType {
    pub b2: u64,
    pub torsion: Torsion,
    pub label: String,
}

fn subscript(k: u64) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

pub fn smale_label(b2: u64, torsion: &Torsion) -> String {
    let mut parts = Vec::new();
    match b2 {
        0 => {}
        1 => parts.push("M∞".to_string()),
        k => parts.push(format!("{k}M∞")),
    }
    if !torsion.is_trivial() {
        let m = format!("M{}", subscript(torsion.m));
        parts.push(if torsion.pairs == 1 {
            m
        } else {
            format!("{} {m}", torsion.pairs)
        });
    }
    if parts.is_empty() {
        "S⁵".to_string()
    } else {
        parts.join(" # ")
    }
}

impl SmaleType {
    pub fn new(b2: u64, torsion: Torsion) -> Self {
        SmaleType {
            label: smale_label(b2, &torsion),
            b2,
            torsion,
        }
    }
}

pub fn classify_smale(n: i64) -> Result<SmaleType> {
    if n < 2 {
        return Err(Error::FamilyIndex(n));
    }
    let n = n as u64;
    let h = WeightedHypersurface::family(n);
    let b2 = b2_link(&h.weights, h.degree)?;
    Ok(SmaleType::new(
        b2,
        Torsion::new(h.branch_multiplicity, genus_branch_curve(n)),
    ))
}
