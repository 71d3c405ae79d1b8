//! Named constants and the λ-constraints they induce, in exact arithmetic.
//!
//! Each constraint reads `λ < 1 / (f_1 · f_2 · ...)`; the factors are kept
//! so reports can show where each bound comes from.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::kkr_constant;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("λ must be positive, got {0}")]
    NonPositive(String),
    #[error("cannot read `{0}` as an exact rational")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constants {
    #[serde(serialize_with = "as_string")]
    pub c1: BigUint,
    #[serde(serialize_with = "as_string")]
    pub c2: BigUint,
    #[serde(serialize_with = "as_string")]
    pub c3: BigUint,
    /// `C_{3,1}` through `C_{3,7}`.
    #[serde(serialize_with = "as_strings")]
    pub c3k: [BigUint; 7],
    #[serde(serialize_with = "as_string")]
    pub c4: BigUint,
    #[serde(serialize_with = "as_string")]
    pub c5: BigUint,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_strings<S: serde::Serializer>(v: &[BigUint; 7], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: String,
    #[serde(serialize_with = "as_string")]
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub label: &'static str,
    pub factors: Vec<Factor>,
    /// `1 / ∏ factors` as `"p/q"`.
    #[serde(serialize_with = "rational_string")]
    pub bound: BigRational,
    pub bound_f64: f64,
}

fn rational_string<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Constraint {
    fn new(label: &'static str, factors: Vec<(&str, BigUint)>) -> Self {
        let product: BigUint = factors.iter().map(|(_, v)| v.clone()).product();
        let bound = BigRational::new(1.into(), product.into());
        Self {
            label,
            bound_f64: bound.to_f64().unwrap_or(0.0),
            factors: factors
                .into_iter()
                .map(|(n, value)| Factor { name: n.to_string(), value })
                .collect(),
            bound,
        }
    }

    /// The largest factor.
    pub fn dominant_factor(&self) -> &Factor {
        self.factors.iter().max_by(|a, b| a.value.cmp(&b.value)).expect("non-empty")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ledger {
    pub constants: Constants,
    pub constraints: Vec<Constraint>,
    /// The theorem's threshold `10^-23`.
    #[serde(serialize_with = "rational_string")]
    pub lambda_star: BigRational,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

pub fn build_ledger() -> Ledger {
    let c1 = kkr_constant(15, 2);
    let c3 = big(240_000_000_000);
    let c3k = [
        19_000_000_000,
        3_100_000_000,
        1_029_000_000,
        147_000_000,
        21_000_000,
        3_000_000,
        100_000,
    ]
    .map(big);
    let c31 = c3k[0].clone();
    let c5 = big(1000) * &c3;
    let constants = Constants {
        c1: c1.clone(),
        c2: big(100_000),
        c3: c3.clone(),
        c3k,
        c4: big(16) * &c3,
        c5: c5.clone(),
    };
    let constraints = vec![
        Constraint::new(
            "two-point-step",
            vec![("820", big(820)), ("C1", c1.clone()), ("K = 9·C31", big(9) * &c31)],
        ),
        Constraint::new(
            "neighborhood-diameter",
            vec![("41", big(41)), ("K = 10·C31", big(10) * &c31), ("C1", c1.clone())],
        ),
        Constraint::new("neighbor-growth", vec![("78", big(78)), ("K = 12·C31", big(12) * &c31)]),
        Constraint::new("neighbor-growth-c1", vec![("13", big(13)), ("C1", c1.clone())]),
        Constraint::new("first-good-point", vec![("5·10^12", big(5_000_000_000_000))]),
        Constraint::new(
            "second-good-point",
            vec![("7380", big(7380)), ("C1", c1.clone()), ("C31", c31.clone())],
        ),
        Constraint::new(
            "close-case",
            vec![("34440", big(34440)), ("C1", c1.clone()), ("C3", c3.clone())],
        ),
        Constraint::new(
            "far-case",
            vec![("8200000", big(8_200_000)), ("C1", c1.clone()), ("C3", c3.clone())],
        ),
        Constraint::new(
            "forbidden-target",
            vec![("10", big(10)), ("K = C5", c5), ("C1", c1)],
        ),
    ];
    Ledger {
        constants,
        constraints,
        lambda_star: BigRational::new(1.into(), num_traits::pow(BigUint::from(10u32), 23).into()),
    }
}

impl Ledger {
    /// The smallest bound; earliest listed on ties.
    pub fn binding(&self) -> &Constraint {
        let mut best = &self.constraints[0];
        for c in &self.constraints[1..] {
            if c.bound < best.bound {
                best = c;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub label: &'static str,
    pub bound: String,
    pub bound_f64: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaVerdict {
    pub lambda: String,
    pub lambda_f64: f64,
    pub feasible: bool,
    pub binding: &'static str,
    pub checks: Vec<ConstraintCheck>,
}

/// Evaluates `λ < bound` exactly for every constraint.
pub fn check_lambda(ledger: &Ledger, lambda: &BigRational) -> Result<LambdaVerdict, LedgerError> {
    if !lambda.is_positive() {
        return Err(LedgerError::NonPositive(lambda.to_string()));
    }
    let checks: Vec<ConstraintCheck> = ledger
        .constraints
        .iter()
        .map(|c| ConstraintCheck {
            label: c.label,
            bound: c.bound.to_string(),
            bound_f64: c.bound_f64,
            holds: lambda < &c.bound,
        })
        .collect();
    Ok(LambdaVerdict {
        lambda: lambda.to_string(),
        lambda_f64: lambda.to_f64().unwrap_or(f64::NAN),
        feasible: checks.iter().all(|c| c.holds),
        binding: ledger.binding().label,
        checks,
    })
}

/// Reads `p/q`, a decimal such as `0.125`, or scientific notation such as
/// `1e-23`, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, LedgerError> {
    let err = || LedgerError::Parse(text.to_string());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: num_bigint::BigInt = p.trim().parse().map_err(|_| err())?;
        let q: num_bigint::BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: num_bigint::BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
    let scale = exp - frac.len() as i32;
    let ten = num_bigint::BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if neg { -value } else { value })
}

/// The exact value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// `10^-exp`.
pub fn inverse_power_of_ten(exp: u32) -> BigRational {
    BigRational::new(One::one(), num_traits::pow(num_bigint::BigInt::from(10), exp as usize))
}
