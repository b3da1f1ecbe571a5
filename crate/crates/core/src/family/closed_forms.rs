//! Closed-form expressions in `n` for every invariant the certification
//! computes, used as the comparison column of reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "S(L_xy)")]
    SL,
    #[serde(rename = "S(W^L_xy;p)")]
    SFlagL,
    #[serde(rename = "S(R_i)")]
    SRi,
    #[serde(rename = "S(W^R_i;p)")]
    SFlagRi,
    #[serde(rename = "S(R)")]
    SR,
    #[serde(rename = "S(W)")]
    SW,
    #[serde(rename = "S(F)")]
    SF,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "A^2")]
    A2,
    #[serde(rename = "delta(O_z)")]
    DeltaOz,
    #[serde(rename = "delta(O_i)")]
    DeltaOi,
}

impl Quantity {
    pub const ALL: [Quantity; 11] = [
        Quantity::SL,
        Quantity::SFlagL,
        Quantity::SRi,
        Quantity::SFlagRi,
        Quantity::SR,
        Quantity::SW,
        Quantity::SF,
        Quantity::Lambda,
        Quantity::A2,
        Quantity::DeltaOz,
        Quantity::DeltaOi,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Quantity::SL => "S(L_xy)",
            Quantity::SFlagL => "S(W^L_xy;p)",
            Quantity::SRi => "S(R_i)",
            Quantity::SFlagRi => "S(W^R_i;p)",
            Quantity::SR => "S(R)",
            Quantity::SW => "S(W)",
            Quantity::SF => "S(F)",
            Quantity::Lambda => "lambda",
            Quantity::A2 => "A^2",
            Quantity::DeltaOz => "delta(O_z)",
            Quantity::DeltaOi => "delta(O_i)",
        }
    }

    /// The expression in `n`, as text.
    pub fn formula(self) -> &'static str {
        match self {
            Quantity::SL => "(3n+1)/(2(2n+1))",
            Quantity::SFlagL => "(4n^2+3n+1)/(4n(2n+1)(4n+1))",
            Quantity::SRi => "(4n^2+3n+1)/(4n(2n+1))",
            Quantity::SFlagRi => "(8n^2+7n+1)/(8n(2n+1)(4n+1))",
            Quantity::SR => "(16n^3+16n^2+7n+1)/(2(2n+1)(4n+1)^2)",
            Quantity::SW => "1/(2(4n+1))",
            Quantity::SF => "(4n+3)/(4(4n+1))",
            Quantity::Lambda => "(20n+5)/(20n+4)",
            Quantity::A2 => "9(2n+1)/(8n(4n+1))",
            Quantity::DeltaOz => "min(2(2n+1)/(3n+1), (2n+1)(4n+1)/(4n^2+3n+1))",
            Quantity::DeltaOi => "min(4n(2n+1)/(4n^2+3n+1), 2n(2n+1)(4n+1)/(8n^2+7n+1))",
        }
    }

    pub fn eval(self, n: u64) -> Rational {
        let n = n as i64;
        let r = Rational::new;
        let (a, b, k) = (2 * n + 1, 4 * n * n + 3 * n + 1, 4 * n + 1);
        match self {
            Quantity::SL => r(3 * n + 1, 2 * a),
            Quantity::SFlagL => r(b, 4 * n * a * k),
            Quantity::SRi => r(b, 4 * n * a),
            Quantity::SFlagRi => r(8 * n * n + 7 * n + 1, 8 * n * a * k),
            Quantity::SR => r(16 * n * n * n + 16 * n * n + 7 * n + 1, 2 * a * k * k),
            Quantity::SW => r(1, 2 * k),
            Quantity::SF => r(4 * n + 3, 4 * k),
            Quantity::Lambda => r(20 * n + 5, 20 * n + 4),
            Quantity::A2 => r(9 * a, 8 * n * k),
            Quantity::DeltaOz => r(2 * a, 3 * n + 1).min(r(a * k, b)),
            Quantity::DeltaOi => r(4 * n * a, b).min(r(2 * n * a * k, 8 * n * n + 7 * n + 1)),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub quantity: Quantity,
    pub formula: String,
    pub value: Rational,
}

pub fn closed_forms(n: u64) -> Vec<ClosedForm> {
    Quantity::ALL
        .iter()
        .map(|&quantity| ClosedForm {
            quantity,
            formula: quantity.formula().to_string(),
            value: quantity.eval(n),
        })
        .collect()
}
