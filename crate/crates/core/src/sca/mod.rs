//! Superconformal algebras as exact structure-constant tables, with an
//! independent realization by super vector fields on the (1|2) torus.

mod derext;
mod element;
mod kahler;
mod n2;
mod table;
mod vf;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use derext::{derext_action, derivation_sweep};
pub use element::SCAElement;
pub use kahler::{kahler_bracket, psi, KSymbol};
pub use n2::{n2_bracket, spectral_flow};
pub use table::{bracket, bracket_basis, deg, golden_table, l0_element, BasisBracket};
pub use vf::{divergence, remark_43_field, vf_bracket, vf_realize, SuperFunction, SuperVectorField};

/// Basis families of S′(2,α), `n ∈ ℤ` indexed.
///
/// Over the N=2 subalgebra the same symbols `Lalpha, H, Hf, P` name
/// ℒ_n, H_n, 𝔥_n, 𝔭_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Symbol {
    Lalpha,
    E,
    H,
    F,
    Hf,
    P,
    X,
    Y,
}

impl Symbol {
    pub const ALL: [Symbol; 8] =
        [Symbol::Lalpha, Symbol::E, Symbol::H, Symbol::F, Symbol::Hf, Symbol::P, Symbol::X, Symbol::Y];

    pub fn is_odd(self) -> bool {
        matches!(self, Symbol::Hf | Symbol::P | Symbol::X | Symbol::Y)
    }

    pub fn in_n2(self) -> bool {
        matches!(self, Symbol::Lalpha | Symbol::H | Symbol::Hf | Symbol::P)
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Lalpha => "Lalpha",
            Symbol::E => "E",
            Symbol::H => "H",
            Symbol::F => "F",
            Symbol::Hf => "h",
            Symbol::P => "p",
            Symbol::X => "x",
            Symbol::Y => "y",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Symbol::ALL
            .into_iter()
            .find(|x| x.name() == s || (s == "L" && *x == Symbol::Lalpha))
            .ok_or_else(|| Error::Usage(format!("unknown symbol `{s}`")))
    }
}

/// The exterior derivations 𝔼, ℍ, 𝔽.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sl2Symbol {
    EE,
    HH,
    FF,
}

impl Sl2Symbol {
    pub const ALL: [Sl2Symbol; 3] = [Sl2Symbol::EE, Sl2Symbol::HH, Sl2Symbol::FF];

    pub fn name(self) -> &'static str {
        match self {
            Sl2Symbol::EE => "EE",
            Sl2Symbol::HH => "HH",
            Sl2Symbol::FF => "FF",
        }
    }
}

impl fmt::Display for Sl2Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sl2Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Sl2Symbol::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown derivation `{s}`")))
    }
}
