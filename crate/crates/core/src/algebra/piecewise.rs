use serde::{Deserialize, Serialize};

use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Piecewise polynomial on closed intervals `[t_i, t_{i+1}]`.
///
/// Adjacent pieces share their breakpoint. When `zero_tail` is set the
/// function is extended by zero to the right of the last breakpoint, which
/// is how volume functions behave past the pseudoeffective threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
    zero_tail: bool,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>, zero_tail: bool) -> Result<Self> {
        if breakpoints.len() < 2
            || pieces.len() + 1 != breakpoints.len()
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidBreakpoints);
        }
        debug_assert!(
            pieces.iter().all(|p| p.degree().unwrap_or(0) <= 4),
            "piece of degree > 4: probable modeling error"
        );
        Ok(PiecewisePoly {
            breakpoints,
            pieces,
            zero_tail,
        })
    }

    /// Single polynomial on `[lo, hi]`.
    pub fn single(lo: Rational, hi: Rational, piece: Poly) -> Result<Self> {
        PiecewisePoly::new(vec![lo, hi], vec![piece], false)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn zero_tail(&self) -> bool {
        self.zero_tail
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    /// `(lo, hi, piece)` triples.
    pub fn segments(&self) -> impl Iterator<Item = (&Rational, &Rational, &Poly)> {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| (&w[0], &w[1], p))
    }

    /// Value at `t`; at an interior breakpoint the left piece is used.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t < self.start() || (t > self.end() && !self.zero_tail) {
            return Err(self.domain_error(t, t));
        }
        if t > self.end() {
            return Ok(Rational::zero());
        }
        let idx = self
            .breakpoints
            .windows(2)
            .position(|w| t <= &w[1])
            .expect("t lies inside the domain");
        Ok(self.pieces[idx].eval(t))
    }

    /// Exact integral over `[lo, hi]`.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Result<Rational> {
        if lo > hi || lo < self.start() || (hi > self.end() && !self.zero_tail) {
            return Err(self.domain_error(lo, hi));
        }
        let mut total = Rational::zero();
        for (a, b, piece) in self.segments() {
            let from = if lo > a { lo } else { a };
            let to = if hi < b { hi } else { b };
            if from < to {
                total += piece.integrate(from, to);
            }
        }
        Ok(total)
    }

    /// Integral over the whole domain (the zero tail contributes nothing).
    pub fn integral(&self) -> Rational {
        self.segments().map(|(a, b, p)| p.integrate(a, b)).sum()
    }

    /// Adjacent pieces agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .zip(&self.breakpoints[1..])
            .all(|(pair, t)| pair[0].eval(t) == pair[1].eval(t))
    }

    pub fn map_pieces(&self, f: impl Fn(&Poly) -> Poly) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(f).collect(),
            zero_tail: self.zero_tail,
        }
    }

    fn domain_error(&self, lo: &Rational, hi: &Rational) -> Error {
        Error::DomainViolation {
            interval: format!("[{lo}, {hi}]"),
            domain: format!("[{}, {}]", self.start(), self.end()),
        }
    }
}

/// Free-function form of [`PiecewisePoly::integrate`].
pub fn integrate(f: &PiecewisePoly, lo: &Rational, hi: &Rational) -> Result<Rational> {
    f.integrate(lo, hi)
}
