//! Numerical model of a log del Pezzo surface.
//!
//! A surface is described only by what the certification consumes: a finite
//! set of tracked curves with their intersection numbers, the boundary and
//! the polarization as rational combinations of those curves, and annotated
//! points carrying their local data.

mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Rational};
use crate::error::{Error, Result};

pub use json::{CurveSpec, PointSpec, SingSpec, SurfaceFile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub name: String,
    pub index: usize,
}

/// Tracked curves and their symmetric intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    curves: Vec<CurveClass>,
    gram: Matrix,
}

impl IntersectionLattice {
    /// Builds a lattice; only the shape is checked here, the rest is left to
    /// [`LogDelPezzo::validate`].
    pub fn new(names: &[&str], gram: Matrix) -> Result<Self> {
        Self::from_names(names.iter().map(|s| s.to_string()).collect(), gram)
    }

    pub fn from_names(names: Vec<String>, gram: Matrix) -> Result<Self> {
        if gram.rows() != names.len() || gram.cols() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                got: gram.rows().max(gram.cols()),
            });
        }
        let curves = names
            .into_iter()
            .enumerate()
            .map(|(index, name)| CurveClass { name, index })
            .collect();
        Ok(IntersectionLattice { curves, gram })
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn curve(&self, name: &str) -> Result<&CurveClass> {
        Ok(&self.curves[self.index_of(name)?])
    }

    pub fn name(&self, index: usize) -> &str {
        &self.curves[index].name
    }

    /// The class of a single tracked curve.
    pub fn class_of(&self, name: &str) -> Result<DivisorClass> {
        let i = self.index_of(name)?;
        let mut d = DivisorClass::zero(self.len());
        d.coefficients[i] = Rational::one();
        Ok(d)
    }

    /// Rational combination of named curves.
    pub fn divisor(&self, terms: &[(&str, Rational)]) -> Result<DivisorClass> {
        let mut d = DivisorClass::zero(self.len());
        for (name, c) in terms {
            let i = self.index_of(name)?;
            d.coefficients[i] += c;
        }
        Ok(d)
    }

    /// `d · C_index`.
    pub fn dot_curve(&self, d: &DivisorClass, index: usize) -> Rational {
        d.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c * &self.gram[(j, index)])
            .sum()
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        intersect(d1, d2, self)
    }

    /// Equal pairings against every tracked curve.
    pub fn numerically_equal(&self, d1: &DivisorClass, d2: &DivisorClass) -> bool {
        let diff = d1 - d2;
        (0..self.len()).all(|i| self.dot_curve(&diff, i).is_zero())
    }
}

/// Bilinear form `d1ᵀ · gram · d2`.
pub fn intersect(d1: &DivisorClass, d2: &DivisorClass, lattice: &IntersectionLattice) -> Result<Rational> {
    for d in [d1, d2] {
        if d.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                got: d.len(),
            });
        }
    }
    Ok(d2
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * lattice.dot_curve(d1, i))
        .sum())
}

/// Rational combination of the tracked curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass {
    coefficients: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        DivisorClass { coefficients }
    }

    pub fn zero(len: usize) -> Self {
        DivisorClass {
            coefficients: vec![Rational::zero(); len],
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: usize) -> &Rational {
        &self.coefficients[index]
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> DivisorClass {
        DivisorClass::new(self.coefficients.iter().map(|c| c * k).collect())
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

impl<'b> Add<&'b DivisorClass> for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &'b DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        DivisorClass::new(
            self.coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<'b> Sub<&'b DivisorClass> for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &'b DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        DivisorClass::new(
            self.coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// Cyclic quotient singularity `1/r (a, b)`; `r = 1` is a smooth point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSingularity {
    pub r: u64,
    pub a: i64,
    pub b: i64,
}

impl QuotientSingularity {
    pub fn new(r: u64, a: i64, b: i64) -> Self {
        QuotientSingularity { r, a, b }
    }

    pub fn smooth() -> Self {
        QuotientSingularity { r: 1, a: 1, b: 1 }
    }

    pub fn is_smooth(&self) -> bool {
        self.r == 1
    }

    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.r == 0 {
            out.push("singularity order r must be at least 1".to_string());
            return out;
        }
        let r = self.r as i64;
        for (label, w) in [("a", self.a), ("b", self.b)] {
            if w.gcd(&r) != 1 {
                out.push(format!("weight {label} = {w} is not coprime to r = {r}"));
            }
        }
        out
    }
}

/// A point of a tracked curve with its local data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOnCurve {
    pub name: String,
    pub host: String,
    pub sing: QuotientSingularity,
    /// Local intersection `(Ω · host)_p` of the boundary with the host curve.
    pub boundary_local: Rational,
    /// Local intersection `(C_k · host)_p` for each tracked curve `C_k` through
    /// `p`; read as `ord_p(N|_host)` once weighted by the negative part.
    pub in_negative_support: BTreeMap<String, Rational>,
}

impl PointOnCurve {
    pub fn new(name: &str, host: &str, sing: QuotientSingularity, boundary_local: Rational) -> Self {
        PointOnCurve {
            name: name.to_string(),
            host: host.to_string(),
            sing,
            boundary_local,
            in_negative_support: BTreeMap::new(),
        }
    }

    pub fn with_local_order(mut self, curve: &str, order: Rational) -> Self {
        self.in_negative_support.insert(curve.to_string(), order);
        self
    }
}

/// Log del Pezzo pair `(S, Ω)` with polarization `A = -(K + Ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDelPezzo {
    pub name: String,
    pub lattice: IntersectionLattice,
    pub boundary: DivisorClass,
    pub polarization: DivisorClass,
    pub points: Vec<PointOnCurve>,
    volume_a2: Rational,
}

impl LogDelPezzo {
    pub fn new(
        name: &str,
        lattice: IntersectionLattice,
        boundary: DivisorClass,
        polarization: DivisorClass,
        points: Vec<PointOnCurve>,
    ) -> Result<Self> {
        let volume_a2 = intersect(&polarization, &polarization, &lattice)?;
        if boundary.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                got: boundary.len(),
            });
        }
        Ok(LogDelPezzo {
            name: name.to_string(),
            lattice,
            boundary,
            polarization,
            points,
            volume_a2,
        })
    }

    /// `A²`.
    pub fn volume_a2(&self) -> &Rational {
        &self.volume_a2
    }

    pub fn curve(&self, name: &str) -> Result<&CurveClass> {
        self.lattice.curve(name)
    }

    pub fn point(&self, curve: &str, name: &str) -> Result<&PointOnCurve> {
        self.points
            .iter()
            .find(|p| p.host == curve && p.name == name)
            .ok_or_else(|| Error::UnknownPoint {
                curve: curve.to_string(),
                point: name.to_string(),
            })
    }

    pub fn points_on(&self, curve: &str) -> impl Iterator<Item = &PointOnCurve> {
        let curve = curve.to_string();
        self.points.iter().filter(move |p| p.host == curve)
    }

    /// Every violated invariant, as human-readable messages; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        validate(self)
    }

    pub fn to_file(&self) -> SurfaceFile {
        SurfaceFile::from_surface(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("surface serializes")
    }

    /// Parses and converts a surface description; schema problems come back
    /// as [`Error::InvalidSurface`] with field paths.
    pub fn from_json(text: &str) -> Result<Self> {
        SurfaceFile::parse(text)?.into_surface()
    }
}

pub fn validate(surface: &LogDelPezzo) -> Vec<String> {
    let mut out = Vec::new();
    let lattice = &surface.lattice;
    let gram = lattice.gram();
    if gram.rows() != lattice.len() || gram.cols() != lattice.len() {
        out.push("gram dimensions do not match curve count".to_string());
    } else if !gram.is_symmetric() {
        out.push("gram not symmetric".to_string());
    }
    let mut names = BTreeSet::new();
    for c in lattice.curves() {
        if !names.insert(c.name.as_str()) {
            out.push(format!("duplicate curve name {:?}", c.name));
        }
    }
    for (label, d) in [("boundary", &surface.boundary), ("polarization", &surface.polarization)] {
        if d.len() != lattice.len() {
            out.push(format!(
                "{label} has {} coefficients for {} curves",
                d.len(),
                lattice.len()
            ));
        }
    }
    for (i, c) in surface.boundary.coefficients().iter().enumerate() {
        if c.is_negative() || c >= &Rational::one() {
            out.push(format!("boundary coefficient out of [0,1) on {}: {c}", lattice.name(i)));
        }
    }
    if !surface.volume_a2().is_positive() {
        out.push(format!("A^2 = {} is not positive", surface.volume_a2()));
    }
    let mut point_keys = BTreeSet::new();
    for p in &surface.points {
        let at = format!("point {:?} on {:?}", p.name, p.host);
        if !point_keys.insert((p.host.as_str(), p.name.as_str())) {
            out.push(format!("duplicate {at}"));
        }
        if lattice.index_of(&p.host).is_err() {
            out.push(format!("{at}: unknown host curve"));
        }
        if p.boundary_local.is_negative() {
            out.push(format!("{at}: negative boundary_local {}", p.boundary_local));
        }
        for v in p.sing.violations() {
            out.push(format!("{at}: {v}"));
        }
        for (curve, order) in &p.in_negative_support {
            if lattice.index_of(curve).is_err() {
                out.push(format!("{at}: unknown curve {curve:?} in negative_support"));
            }
            if order.is_negative() {
                out.push(format!("{at}: negative local order for {curve:?}"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn toy() -> LogDelPezzo {
        // Two curves meeting once, each of square -1 (a chain on a blow-up).
        let gram = Matrix::from_rows(vec![vec![q(-1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]]).unwrap();
        let lattice = IntersectionLattice::new(&["E", "G"], gram).unwrap();
        let pol = lattice.divisor(&[("E", q(1, 1)), ("G", q(2, 1))]).unwrap();
        LogDelPezzo::new("toy", lattice.clone(), DivisorClass::zero(2), pol, vec![]).unwrap()
    }

    #[test]
    fn intersect_is_bilinear_and_checks_dimensions() {
        let s = toy();
        let e = s.lattice.class_of("E").unwrap();
        let g = s.lattice.class_of("G").unwrap();
        assert_eq!(s.lattice.intersect(&e, &g).unwrap(), q(1, 1));
        let zero = DivisorClass::zero(2);
        assert_eq!(intersect(&zero, &e, &s.lattice).unwrap(), q(0, 1));
        assert!(intersect(&DivisorClass::zero(3), &e, &s.lattice).is_err());
    }

    #[test]
    fn toy_volume() {
        // (E + 2G)^2 = -1 + 4 - 4 = -1 -> invalid polarization
        let s = toy();
        assert_eq!(s.volume_a2(), &q(-1, 1));
        assert!(s.validate().iter().any(|v| v.contains("A^2")));
    }

    #[test]
    fn asymmetric_gram_and_bad_boundary() {
        let gram = Matrix::from_rows(vec![vec![q(1, 1), q(1, 2)], vec![q(1, 3), q(1, 1)]]).unwrap();
        let lattice = IntersectionLattice::new(&["H", "K"], gram).unwrap();
        let boundary = lattice.divisor(&[("H", q(3, 2))]).unwrap();
        let pol = lattice.class_of("H").unwrap();
        let s = LogDelPezzo::new("bad", lattice, boundary, pol, vec![]).unwrap();
        let v = s.validate();
        assert!(v.iter().any(|m| m == "gram not symmetric"));
        assert!(v.iter().any(|m| m.contains("boundary coefficient out of [0,1)")));
    }

    #[test]
    fn point_checks() {
        let mut s = toy();
        s.points
            .push(PointOnCurve::new("p", "E", QuotientSingularity::new(4, 2, 1), q(-1, 2)));
        s.points
            .push(PointOnCurve::new("p", "Z", QuotientSingularity::smooth(), q(0, 1)));
        let v = s.validate();
        assert!(v.iter().any(|m| m.contains("not coprime")));
        assert!(v.iter().any(|m| m.contains("negative boundary_local")));
        assert!(v.iter().any(|m| m.contains("unknown host")));
    }
}
