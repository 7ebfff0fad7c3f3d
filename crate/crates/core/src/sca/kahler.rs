use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{l0_element, SCAElement, Symbol};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// Classical operators of Kähler geometry: Δ, L, H, Λ, d, d*, d_c, d_c*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KSymbol {
    Lap,
    L,
    H,
    Lam,
    D,
    DStar,
    Dc,
    DcStar,
}

impl KSymbol {
    pub const ALL: [KSymbol; 8] =
        [KSymbol::Lap, KSymbol::L, KSymbol::H, KSymbol::Lam, KSymbol::D, KSymbol::DStar, KSymbol::Dc, KSymbol::DcStar];

    pub fn is_odd(self) -> bool {
        matches!(self, KSymbol::D | KSymbol::DStar | KSymbol::Dc | KSymbol::DcStar)
    }

    pub fn name(self) -> &'static str {
        match self {
            KSymbol::Lap => "lap",
            KSymbol::L => "L",
            KSymbol::H => "H",
            KSymbol::Lam => "Lambda",
            KSymbol::D => "d",
            KSymbol::DStar => "d*",
            KSymbol::Dc => "dc",
            KSymbol::DcStar => "dc*",
        }
    }
}

impl fmt::Display for KSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KSymbol::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown classical operator `{s}`")))
    }
}

fn raw(a: KSymbol, b: KSymbol) -> Option<(KSymbol, i64)> {
    use KSymbol::*;
    Some(match (a, b) {
        (L, Lam) => (H, 1),
        (H, L) => (L, 2),
        (H, Lam) => (Lam, -2),
        (D, DStar) => (Lap, 1),
        (Dc, DcStar) => (Lap, 1),
        (H, D) => (D, 1),
        (H, DStar) => (DStar, -1),
        (H, Dc) => (Dc, 1),
        (H, DcStar) => (DcStar, -1),
        (L, DStar) => (Dc, -1),
        (L, DcStar) => (D, 1),
        (Lam, D) => (DcStar, 1),
        (Lam, Dc) => (DStar, -1),
        _ => return None,
    })
}

/// Supercommutator in the Kähler superalgebra, as `symbol → coefficient`.
pub fn kahler_bracket(a: KSymbol, b: KSymbol) -> BTreeMap<KSymbol, Scalar> {
    let mut out = BTreeMap::new();
    if let Some((s, c)) = raw(a, b) {
        out.insert(s, Scalar::from_i64(c));
    } else if let Some((s, c)) = raw(b, a) {
        let sign = if a.is_odd() && b.is_odd() { 1 } else { -1 };
        out.insert(s, Scalar::from_i64(sign * c));
    }
    out
}

/// Image in the degree-zero part of S′(2,0).
pub fn psi(k: KSymbol) -> SCAElement {
    let b = SCAElement::basis;
    match k {
        KSymbol::Lap => l0_element(&Scalar::zero()),
        KSymbol::L => b(Symbol::E, -1),
        KSymbol::H => b(Symbol::H, 0),
        KSymbol::Lam => b(Symbol::F, 1),
        KSymbol::D => b(Symbol::Hf, 0),
        KSymbol::DStar => b(Symbol::P, 0).scaled(&-Scalar::one()),
        KSymbol::Dc => b(Symbol::X, -1),
        KSymbol::DcStar => b(Symbol::Y, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sca::bracket;

    #[test]
    fn d_dstar_maps_to_l0() {
        let z = Scalar::zero();
        let r = bracket(&z, &psi(KSymbol::D), &psi(KSymbol::DStar));
        assert_eq!(r, psi(KSymbol::Lap));
        let h = bracket(&z, &psi(KSymbol::H), &psi(KSymbol::D));
        assert_eq!(h, psi(KSymbol::D));
        assert!(bracket(&z, &psi(KSymbol::L), &psi(KSymbol::D)).is_zero());
    }

    #[test]
    fn table_is_super_antisymmetric() {
        for a in KSymbol::ALL {
            for b in KSymbol::ALL {
                let sign = if a.is_odd() && b.is_odd() { 1 } else { -1 };
                let ab = kahler_bracket(a, b);
                let ba: BTreeMap<_, _> =
                    kahler_bracket(b, a).into_iter().map(|(k, v)| (k, v * Scalar::from_i64(sign))).collect();
                assert_eq!(ab, ba, "{a} {b}");
            }
        }
    }
}
