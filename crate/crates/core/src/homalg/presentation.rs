//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::invariant_factors;
use crate::arith::Coeff;
use crate::error::Result;

/// `F^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_m` with `2 ≤ d_1 | d_2 | …`.
///
/// `F` is the coefficient group the presentation was computed over: `Z`, `Q`,
/// or `Q/Z` (divisible summands). Over `Z/n` the rank is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

impl Presentation {
    pub fn zero() -> Self {
        Presentation { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Presentation { rank, torsion: Vec::new() }
    }

    /// Canonical form of `F^rank ⊕ ⊕ Z/orders[i]`; orders `≤ 1` are dropped.
    pub fn from_cyclic(rank: usize, orders: &[i128]) -> Result<Self> {
        let orders: Vec<i128> = orders.iter().copied().filter(|&d| d > 1).collect();
        let diag = IntMatrix::from_triplets(orders.len(), orders.len(), orders.iter().enumerate().map(|(i, &d)| (i, i, d)));
        let torsion = invariant_factors(&diag)?.into_iter().filter(|&d| d > 1).collect();
        Ok(Presentation { rank, torsion })
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<i128> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    /// Human-readable form over the given coefficient group, e.g. `Z^2+Z/2`.
    pub fn label(&self, coeff: Coeff) -> String {
        let free = match coeff {
            Coeff::Z | Coeff::ZMod(_) => "Z",
            Coeff::Q => "Q",
            Coeff::QModZ => "Q/Z",
        };
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push(free.to_string()),
            r => parts.push(format!("{free}^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label(Coeff::Z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_chain() {
        let p = Presentation::from_cyclic(1, &[2, 3, 4, 1]).unwrap();
        assert_eq!(p.torsion, vec![2, 12]);
        assert_eq!(p.label(Coeff::Z), "Z+Z/2+Z/12");
        assert_eq!(Presentation::zero().label(Coeff::Q), "0");
        assert_eq!(Presentation::from_cyclic(0, &[6, 6]).unwrap().order(), Some(36));
    }
}
