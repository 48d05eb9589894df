use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactmath::Rational;
use crate::lens::{surgery_on_unknot, ConnSum, LensSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Knot {
    Unknot,
    RightTrefoil,
    LeftTrefoil,
}

impl Knot {
    pub fn mirror(self) -> Knot {
        match self {
            Knot::Unknot => Knot::Unknot,
            Knot::RightTrefoil => Knot::LeftTrefoil,
            Knot::LeftTrefoil => Knot::RightTrefoil,
        }
    }

    /// `Delta''(1) / 2` for the symmetrized Alexander polynomial.
    pub fn a_invariant(self) -> Rational {
        match self {
            Knot::Unknot => Rational::zero(),
            Knot::RightTrefoil | Knot::LeftTrefoil => Rational::one(),
        }
    }
}

impl fmt::Display for Knot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Knot::Unknot => "U",
            Knot::RightTrefoil => "T(2,3)",
            Knot::LeftTrefoil => "T(2,-3)",
        })
    }
}

/// `S^3_m(U)`.
pub fn unknot_surgery(m: i64) -> Result<ConnSum> {
    Ok(ConnSum::lens(surgery_on_unknot(m, 1)?))
}

/// Integer surgeries on the trefoils that are connected sums of lens
/// spaces, with `S^3_{-m}(T(2,-3)) = -S^3_m(T(2,3))`. `None` outside the
/// table.
pub fn trefoil_surgery(knot: Knot, m: i64) -> Option<ConnSum> {
    let l = |p, q| LensSpace::new(p, q).expect("table entries are valid");
    let right = |m: i64| match m {
        5 => Some(ConnSum::lens(l(5, 4))),
        6 => Some(ConnSum::new([l(3, 2), l(2, 1)])),
        7 => Some(ConnSum::lens(l(7, 4))),
        _ => None,
    };
    match knot {
        Knot::Unknot => None,
        Knot::RightTrefoil => right(m),
        Knot::LeftTrefoil => right(-m).map(|y| y.reverse_orientation()),
    }
}
