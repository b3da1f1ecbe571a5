//! The surfaces `S_n` with boundary `½W`, as numerical models.
//!
//! Three models are built per `n`: the base lattice `{W, L_xy, R0, R1}`,
//! the enlarged lattice adding a general member `R` of the pencil through
//! `O_z`, and the `(1, n)` weighted blow-up at `O_w` with exceptional curve `F`.

mod closed_forms;
mod ledger;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Rational};
use crate::error::{Error, Result};
use crate::surface::{DivisorClass, IntersectionLattice, LogDelPezzo, PointOnCurve, QuotientSingularity};

pub use closed_forms::{closed_forms, ClosedForm, Quantity};
pub use ledger::{default_epsilon, inequality_ledger, LedgerEntry, LedgerGroup, Relation};

pub const W: &str = "W";
pub const L: &str = "L_xy";
pub const R0: &str = "R0";
pub const R1: &str = "R1";
pub const R: &str = "R";
pub const F: &str = "F";
pub const L_HAT: &str = "L_xy^";
pub const R0_HAT: &str = "R0^";
pub const R1_HAT: &str = "R1^";
pub const W_HAT: &str = "W^";

pub const O_Z: &str = "O_z";
pub const O_0: &str = "O_0";
pub const O_1: &str = "O_1";
pub const O_W: &str = "O_w";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub n: u64,
    pub base: LogDelPezzo,
    pub enlarged: LogDelPezzo,
    pub blowup: LogDelPezzo,
    pub lambda: Rational,
}

/// Flags `(curve, point)` bounding δ at `O_z`, `O_0` and `O_1`.
pub const SINGULAR_FLAGS: [(&str, &str); 3] = [(L, O_Z), (R0, O_0), (R1, O_1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Base,
    Enlarged,
    Blowup,
}

impl FamilyInstance {
    pub fn model(&self, model: Model) -> &LogDelPezzo {
        match model {
            Model::Base => &self.base,
            Model::Enlarged => &self.enlarged,
            Model::Blowup => &self.blowup,
        }
    }
}

fn check_n(n: i64) -> Result<u64> {
    if n < 2 {
        return Err(Error::FamilyIndex(n));
    }
    Ok(n as u64)
}

pub fn lambda(n: u64) -> Rational {
    let n = n as i64;
    Rational::new(20 * n + 5, 20 * n + 4)
}

pub fn build_sn(n: i64) -> Result<FamilyInstance> {
    let m = check_n(n)?;
    Ok(FamilyInstance {
        n: m,
        base: base_surface(n)?,
        enlarged: enlarged_surface(n)?,
        blowup: build_blowup_ow(n)?,
        lambda: lambda(m),
    })
}

struct Table {
    w2: Rational,
    wl: Rational,
    wr: Rational,
    l2: Rational,
    lr: Rational,
    r2: Rational,
    r0r1: Rational,
}

fn table(n: i64) -> Table {
    let k = 4 * n + 1;
    Table {
        w2: Rational::new(k * (2 * n + 1), 2 * n),
        wl: Rational::new(1, 2 * n),
        wr: Rational::new(1, 2),
        l2: Rational::new(-(4 * n - 1), 2 * n * k),
        lr: Rational::new(1, k),
        r2: Rational::new(-(2 * n + 1), 2 * k),
        r0r1: Rational::new(n, k),
    }
}

fn sym(rows: Vec<Vec<Rational>>) -> Matrix {
    Matrix::from_rows(rows).expect("square table")
}

fn polarization(lattice: &IntersectionLattice, curves: [&str; 3]) -> Result<DivisorClass> {
    let c = Rational::new(3, 2);
    lattice.divisor(&curves.map(|name| (name, c.clone())))
}

fn base_points(n: i64) -> Vec<PointOnCurve> {
    let k = 4 * n + 1;
    let r_ow = QuotientSingularity::new(k as u64, 1, n);
    let orbit = Rational::new(1, k);
    let zero = Rational::zero();
    vec![
        PointOnCurve::new(
            O_Z,
            L,
            QuotientSingularity::new(2 * n as u64, 1, 1),
            Rational::new(1, 4 * n),
        ),
        PointOnCurve::new(O_0, R0, QuotientSingularity::new(2, 1, 1), Rational::new(1, 4)),
        PointOnCurve::new(O_1, R1, QuotientSingularity::new(2, 1, 1), Rational::new(1, 4)),
        PointOnCurve::new(O_W, L, r_ow, zero.clone())
            .with_local_order(R0, orbit.clone())
            .with_local_order(R1, orbit.clone()),
        PointOnCurve::new(O_W, R0, r_ow, zero.clone())
            .with_local_order(L, orbit.clone())
            .with_local_order(R1, Rational::new(n, k)),
        PointOnCurve::new(O_W, R1, r_ow, zero.clone())
            .with_local_order(L, orbit)
            .with_local_order(R0, Rational::new(n, k)),
        PointOnCurve::new("p_L", L, QuotientSingularity::smooth(), zero.clone()),
        PointOnCurve::new("p_R0", R0, QuotientSingularity::smooth(), zero.clone()),
        PointOnCurve::new("p_R1", R1, QuotientSingularity::smooth(), zero),
    ]
}

/// `S_n` on the basis `W, L_xy, R0, R1`.
pub fn base_surface(n: i64) -> Result<LogDelPezzo> {
    check_n(n)?;
    let t = table(n);
    let gram = sym(vec![
        vec![t.w2.clone(), t.wl.clone(), t.wr.clone(), t.wr.clone()],
        vec![t.wl.clone(), t.l2.clone(), t.lr.clone(), t.lr.clone()],
        vec![t.wr.clone(), t.lr.clone(), t.r2.clone(), t.r0r1.clone()],
        vec![t.wr.clone(), t.lr.clone(), t.r0r1.clone(), t.r2.clone()],
    ]);
    let lattice = IntersectionLattice::new(&[W, L, R0, R1], gram)?;
    let boundary = lattice.divisor(&[(W, Rational::new(1, 2))])?;
    let pol = polarization(&lattice, [L, R0, R1])?;
    LogDelPezzo::new(&format!("S_{n}"), lattice, boundary, pol, base_points(n))
}

/// `S_n` with the pencil member `R ≡ L_xy + 2R0 + 2R1` added to the basis.
pub fn enlarged_surface(n: i64) -> Result<LogDelPezzo> {
    check_n(n)?;
    let t = table(n);
    let half_n = Rational::new(1, 2 * n);
    let wr = Rational::new(4 * n + 1, 2 * n);
    let z = Rational::zero();
    let gram = sym(vec![
        vec![t.w2.clone(), t.wl.clone(), t.wr.clone(), t.wr.clone(), wr.clone()],
        vec![t.wl.clone(), t.l2.clone(), t.lr.clone(), t.lr.clone(), half_n.clone()],
        vec![t.wr.clone(), t.lr.clone(), t.r2.clone(), t.r0r1.clone(), z.clone()],
        vec![t.wr.clone(), t.lr.clone(), t.r0r1.clone(), t.r2.clone(), z.clone()],
        vec![wr, half_n.clone(), z.clone(), z, half_n.clone()],
    ]);
    let lattice = IntersectionLattice::new(&[W, L, R0, R1, R], gram)?;
    let boundary = lattice.divisor(&[(W, Rational::new(1, 2))])?;
    let pol = polarization(&lattice, [L, R0, R1])?;
    let mut points = base_points(n);
    points.push(
        PointOnCurve::new(
            O_Z,
            R,
            QuotientSingularity::new(2 * n as u64, 1, 1),
            Rational::new(1, 4 * n),
        )
        .with_local_order(L, half_n),
    );
    points.push(PointOnCurve::new(
        "p_R",
        R,
        QuotientSingularity::smooth(),
        Rational::zero(),
    ));
    LogDelPezzo::new(&format!("S_{n}+R"), lattice, boundary, pol, points)
}

/// Weighted blow-up of `O_w` with weights `(1, n)`. The discrepancy
/// `3n/(4n+1)` of `F` is carried as its boundary coefficient, so that
/// `A = φ*A` is unchanged.
pub fn build_blowup_ow(n: i64) -> Result<LogDelPezzo> {
    check_n(n)?;
    let k = 4 * n + 1;
    let t = table(n);
    let z = Rational::zero();
    let f2 = Rational::new(-k, n);
    let fl = Rational::new(1, n);
    let one = Rational::one();
    let l2 = Rational::new(-1, 2 * n);
    let r2 = Rational::new(-1, 2);
    let gram = sym(vec![
        vec![f2, fl.clone(), one.clone(), one.clone(), z.clone()],
        vec![fl, l2, z.clone(), z.clone(), t.wl.clone()],
        vec![one.clone(), z.clone(), r2.clone(), z.clone(), t.wr.clone()],
        vec![one, z.clone(), z.clone(), r2, t.wr.clone()],
        vec![z, t.wl, t.wr.clone(), t.wr, t.w2],
    ]);
    let lattice = IntersectionLattice::new(&[F, L_HAT, R0_HAT, R1_HAT, W_HAT], gram)?;
    let boundary = lattice.divisor(&[(W_HAT, Rational::new(1, 2)), (F, Rational::new(3 * n, k))])?;
    let mut pol = polarization(&lattice, [L_HAT, R0_HAT, R1_HAT])?;
    pol = &pol + &lattice.class_of(F)?.scale(&Rational::new(3 * (2 * n + 1), 2 * k));
    let points = vec![
        PointOnCurve::new("q", F, QuotientSingularity::new(n as u64, n - 1, 1), Rational::zero()),
        PointOnCurve::new("p_F", F, QuotientSingularity::smooth(), Rational::zero()),
    ];
    LogDelPezzo::new(&format!("S_{n}^"), lattice, boundary, pol, points)
}
