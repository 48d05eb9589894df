//! Two-bridge links and their connected sums, identified with lens spaces
//! through the branched double cover.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::cf_expand;
use crate::lens::{ConnSum, LensSpace};

/// Largest determinant [`census`] accepts.
pub const MAX_CENSUS_DETERMINANT: u64 = 64;

/// `b(p, q)`, stored by the normal form of its cover `L(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBridgeLink {
    p: u64,
    q: u64,
}

impl TwoBridgeLink {
    pub fn new(p: u64, q: i64) -> Result<Self> {
        Ok(Self::from_cover(&LensSpace::new(p, q)?))
    }

    pub fn unknot() -> Self {
        TwoBridgeLink { p: 1, q: 0 }
    }

    pub fn from_cover(l: &LensSpace) -> Self {
        let l = l.normalize();
        TwoBridgeLink { p: l.p(), q: l.q() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn determinant(&self) -> u64 {
        self.p
    }

    pub fn components(&self) -> u8 {
        if self.p.is_multiple_of(2) { 2 } else { 1 }
    }

    pub fn cover(&self) -> LensSpace {
        LensSpace::new(self.p, self.q as i64).expect("stored fractions are valid")
    }

    pub fn mirror(&self) -> Self {
        Self::from_cover(&self.cover().reverse_orientation())
    }

    pub fn continued_fraction(&self) -> Vec<u64> {
        if self.p == 1 {
            return Vec::new();
        }
        cf_expand(self.p, self.q as i64).expect("stored fractions are valid")
    }

    pub fn fraction(&self) -> String {
        format!("{}/{}", self.p, self.q)
    }

    /// Table name if the dictionary has one, otherwise `b(p,q)`.
    pub fn name(&self) -> String {
        match names().get(&(self.p, self.q)) {
            Some(e) => e.name.clone(),
            None => format!("b({},{})", self.p, self.q),
        }
    }

    /// Where the table name comes from, if there is one.
    pub fn name_provenance(&self) -> Option<&'static str> {
        names().get(&(self.p, self.q)).map(|e| e.provenance.as_str())
    }
}

impl fmt::Display for TwoBridgeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Deserialize)]
struct NameFile {
    names: Vec<NameEntry>,
}

#[derive(Debug, Deserialize)]
struct NameEntry {
    fraction: (u64, i64),
    name: String,
    provenance: String,
}

fn names() -> &'static BTreeMap<(u64, u64), NameEntry> {
    static NAMES: OnceLock<BTreeMap<(u64, u64), NameEntry>> = OnceLock::new();
    NAMES.get_or_init(|| {
        let file: NameFile =
            serde_json::from_str(include_str!("../data/knot_names.json")).expect("knot name table parses");
        file.names
            .into_iter()
            .map(|e| {
                let l = TwoBridgeLink::new(e.fraction.0, e.fraction.1).expect("table fractions are valid");
                assert_eq!((l.p, l.q as i64), e.fraction, "table keys are normal forms");
                ((l.p, l.q), e)
            })
            .collect()
    })
}

/// Connected sum of two-bridge links; unknot summands are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkSum {
    summands: Vec<TwoBridgeLink>,
}

impl LinkSum {
    pub fn new(summands: impl IntoIterator<Item = TwoBridgeLink>) -> Self {
        let mut summands: Vec<TwoBridgeLink> = summands.into_iter().filter(|l| l.p > 1).collect();
        summands.sort();
        LinkSum { summands }
    }

    pub fn unknot() -> Self {
        LinkSum { summands: Vec::new() }
    }

    pub fn from_cover(y: &ConnSum) -> Self {
        LinkSum::new(y.summands().iter().map(TwoBridgeLink::from_cover))
    }

    pub fn summands(&self) -> &[TwoBridgeLink] {
        &self.summands
    }

    pub fn mirror(&self) -> Self {
        LinkSum::new(self.summands.iter().map(TwoBridgeLink::mirror))
    }

    pub fn is_amphichiral(&self) -> bool {
        *self == self.mirror()
    }

    pub fn name(&self) -> String {
        if self.summands.is_empty() {
            return TwoBridgeLink::unknot().name();
        }
        let parts: Vec<String> = self.summands.iter().map(TwoBridgeLink::name).collect();
        parts.join(" # ")
    }

    pub fn fractions(&self) -> String {
        if self.summands.is_empty() {
            return "1/0".to_string();
        }
        let parts: Vec<String> = self.summands.iter().map(TwoBridgeLink::fraction).collect();
        parts.join(" # ")
    }
}

impl fmt::Display for LinkSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn branched_double_cover(link: &LinkSum) -> ConnSum {
    ConnSum::new(link.summands.iter().map(TwoBridgeLink::cover))
}

/// Product of the summand determinants.
pub fn det_link(link: &LinkSum) -> Result<u64> {
    link.summands
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.p))
        .ok_or(Error::Overflow("link determinant"))
}

/// Connected sums of two-bridge links with determinant `n`, one per
/// oriented cover, sorted by cover.
pub fn census(n: u64) -> Result<Vec<LinkSum>> {
    if n == 0 || n > MAX_CENSUS_DETERMINANT {
        return Err(Error::domain(
            "census",
            format!("determinant must be in 1..={MAX_CENSUS_DETERMINANT}, got {n}"),
        ));
    }
    Ok(ConnSum::all_of_order(n).iter().map(LinkSum::from_cover).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub name: String,
    pub fractions: String,
    pub determinant: u64,
    pub cover: String,
    /// Name of the mirror, or `self` when the link is amphichiral.
    pub mirror: String,
}

pub fn census_rows(n: u64) -> Result<Vec<CensusRow>> {
    census(n)?
        .into_iter()
        .map(|l| {
            let m = l.mirror();
            Ok(CensusRow {
                name: l.name(),
                fractions: l.fractions(),
                determinant: det_link(&l)?,
                cover: branched_double_cover(&l).to_string(),
                mirror: if m == l { "self".to_string() } else { m.name() },
            })
        })
        .collect()
}

pub fn census_tsv(rows: &[CensusRow]) -> String {
    let mut out = String::from("name\tfractions\tdeterminant\tcover\tmirror\n");
    for r in rows {
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.name, r.fractions, r.determinant, r.cover, r.mirror));
    }
    out
}

/// Determinant of the three-strand pretzel link `P(e1, e2, e3)`.
pub fn pretzel_det(e1: i64, e2: i64, e3: i64) -> Result<u128> {
    let (a, b, c) = (e1 as i128, e2 as i128, e3 as i128);
    (a * b)
        .checked_add(b * c)
        .and_then(|s| s.checked_add(c * a))
        .map(i128::unsigned_abs)
        .ok_or(Error::Overflow("pretzel determinant"))
}
