//! Exact scalars: rationals, circle values (Q/Z) and the coefficient domains.

use std::fmt;

use num::rational::Ratio;
use num::{Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Rational = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// Representative of `q` mod 1 in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Coefficient domain of a cochain or a cohomology computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    Z,
    Q,
    /// Integers mod n, values stored as integers in `[0, n)`.
    ZMod(u64),
    /// Circle values, stored as rationals in `[0, 1)`.
    QModZ,
}

impl Coeff {
    /// Normal form of a value in this domain.
    pub fn reduce(&self, q: &Rational) -> Rational {
        match self {
            Coeff::Z | Coeff::Q => *q,
            Coeff::ZMod(n) => {
                let n = *n as i128;
                int(q.to_integer().mod_floor(&n))
            }
            Coeff::QModZ => frac(q),
        }
    }

    /// Whether `q` is an admissible value of this domain (before reduction).
    pub fn admits(&self, q: &Rational) -> bool {
        match self {
            Coeff::Z | Coeff::ZMod(_) => q.is_integer(),
            Coeff::Q | Coeff::QModZ => true,
        }
    }

    /// Whether `q` is zero in this domain.
    pub fn is_zero(&self, q: &Rational) -> bool {
        self.reduce(q).is_zero()
    }

    pub fn parse(s: &str) -> Result<Coeff> {
        match s {
            "Z" => Ok(Coeff::Z),
            "Q" => Ok(Coeff::Q),
            "QmodZ" => Ok(Coeff::QModZ),
            _ => {
                let n = s
                    .strip_prefix("Zmod:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|n| *n >= 2)
                    .ok_or_else(|| Error::Parse(format!("unknown coefficient `{s}`")))?;
                Ok(Coeff::ZMod(n))
            }
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Z => write!(f, "Z"),
            Coeff::Q => write!(f, "Q"),
            Coeff::ZMod(n) => write!(f, "Zmod:{n}"),
            Coeff::QModZ => write!(f, "QmodZ"),
        }
    }
}

/// Parses `"a"`, `"a/b"` or `"a/b mod 1"`. The flag reports the `mod 1` suffix.
pub fn parse_rational(s: &str) -> Result<(Rational, bool)> {
    let s = s.trim();
    let (body, circle) = match s.strip_suffix("mod 1") {
        Some(b) => (b.trim(), true),
        None => (s, false),
    };
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    let q = match body.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            rat(n, d)
        }
        None => int(body.parse().map_err(|_| bad())?),
    };
    Ok((if circle { frac(&q) } else { q }, circle))
}

/// `a/b` (or `a` when integral).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_circle(q: &Rational) -> String {
    format!("{} mod 1", format_rational(&frac(q)))
}

/// Least common multiple of the denominators, 1 for an empty slice.
pub fn common_denominator(values: &[Rational]) -> i128 {
    values.iter().fold(1i128, |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_reduction() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 2)), rat(1, 2));
        assert_eq!(Coeff::ZMod(4).reduce(&int(-1)), int(3));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), (int(3), false));
        assert_eq!(parse_rational("-1/2").unwrap(), (rat(-1, 2), false));
        assert_eq!(parse_rational("5/4 mod 1").unwrap(), (rat(1, 4), true));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(Coeff::parse("Zmod:3").unwrap(), Coeff::ZMod(3));
        assert!(Coeff::parse("Zmod:1").is_err());
    }
}
