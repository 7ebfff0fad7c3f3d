//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.
//!
//! Values are stored as `(re + im·i) / den` over a common positive
//! denominator with `gcd(re, im, den) = 1`, so equality and hashing are
//! structural. Small values live in machine words; anything that does not
//! fit is promoted to arbitrary-precision integers.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone)]
enum Repr {
    Small { re: i64, im: i64, den: i64 },
    Big(Box<BigParts>),
}

#[derive(Clone)]
struct BigParts {
    re: BigInt,
    im: BigInt,
    den: BigInt,
}

/// An element of ℚ(i).
#[derive(Clone)]
pub struct Scalar(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small { re: 0, im: 0, den: 1 })
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar(Repr::Small { re: 0, im: 1, den: 1 })
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::from_i128_parts(n as i128, 0, 1)
    }

    /// `num / den` as a real scalar. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_i128_parts(num as i128, 0, den as i128)
    }

    /// `re + im·i` with integer parts.
    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar::from_i128_parts(re as i128, im as i128, 1)
    }

    /// Real rational from big integers.
    pub fn from_big_frac(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Scalar::from_big_parts(num, BigInt::zero(), den)
    }

    fn from_i128_parts(re: i128, im: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if re == 0 && im == 0 {
            return Scalar::zero();
        }
        let (mut re, mut im, mut den) = (re, im, den);
        if den < 0 {
            re = -re;
            im = -im;
            den = -den;
        }
        let g = gcd_u128(gcd_u128(re.unsigned_abs(), im.unsigned_abs()), den as u128) as i128;
        if g > 1 {
            re /= g;
            im /= g;
            den /= g;
        }
        if fits(re) && fits(im) && fits(den) {
            Scalar(Repr::Small { re: re as i64, im: im as i64, den: den as i64 })
        } else {
            Scalar(Repr::Big(Box::new(BigParts {
                re: BigInt::from(re),
                im: BigInt::from(im),
                den: BigInt::from(den),
            })))
        }
    }

    fn from_big_parts(re: BigInt, im: BigInt, den: BigInt) -> Self {
        if re.is_zero() && im.is_zero() {
            return Scalar::zero();
        }
        let (mut re, mut im, mut den) = (re, im, den);
        if den.is_negative() {
            re = -re;
            im = -im;
            den = -den;
        }
        let g = re.gcd(&im).gcd(&den);
        if !g.is_one() {
            re /= &g;
            im /= &g;
            den /= &g;
        }
        match (re.to_i64(), im.to_i64(), den.to_i64()) {
            (Some(r), Some(i), Some(d)) if r != i64::MIN && i != i64::MIN => {
                Scalar(Repr::Small { re: r, im: i, den: d })
            }
            _ => Scalar(Repr::Big(Box::new(BigParts { re, im, den }))),
        }
    }

    fn big(&self) -> BigParts {
        match &self.0 {
            Repr::Small { re, im, den } => BigParts {
                re: BigInt::from(*re),
                im: BigInt::from(*im),
                den: BigInt::from(*den),
            },
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { re: 0, im: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { re: 1, im: 0, den: 1 })
    }

    pub fn is_real(&self) -> bool {
        match &self.0 {
            Repr::Small { im, .. } => *im == 0,
            Repr::Big(b) => b.im.is_zero(),
        }
    }

    /// True for rational integers.
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { im, den, .. } => *im == 0 && *den == 1,
            Repr::Big(b) => b.im.is_zero() && b.den.is_one(),
        }
    }

    /// The value as an `i64`, when it is a rational integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { re, im: 0, den: 1 } => Some(*re),
            _ => None,
        }
    }

    /// Real part as a reduced `(numerator, denominator)`.
    pub fn re_parts(&self) -> (BigInt, BigInt) {
        let b = self.big();
        reduce_pair(b.re, b.den)
    }

    /// Imaginary part as a reduced `(numerator, denominator)`.
    pub fn im_parts(&self) -> (BigInt, BigInt) {
        let b = self.big();
        reduce_pair(b.im, b.den)
    }

    pub fn re(&self) -> Scalar {
        let (n, d) = self.re_parts();
        Scalar::from_big_frac(n, d)
    }

    pub fn im(&self) -> Scalar {
        let (n, d) = self.im_parts();
        Scalar::from_big_frac(n, d)
    }

    pub fn conj(&self) -> Scalar {
        match &self.0 {
            Repr::Small { re, im, den } => Scalar(Repr::Small { re: *re, im: -*im, den: *den }),
            Repr::Big(b) => Scalar::from_big_parts(b.re.clone(), -b.im.clone(), b.den.clone()),
        }
    }

    /// `|z|²`, a nonnegative rational.
    pub fn norm_sqr(&self) -> Scalar {
        self * &self.conj()
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.0 {
            Repr::Small { re, im, den } => {
                let (re, im, den) = (*re as i128, *im as i128, *den as i128);
                // (re + im i)/den inverted = den (re - im i) / (re² + im²)
                let n = (re * re).checked_add(im * im);
                match (n, den.checked_mul(re), den.checked_mul(-im)) {
                    (Some(n), Some(a), Some(b)) => Some(Scalar::from_i128_parts(a, b, n)),
                    _ => Some(Scalar::big_inv(&self.big())),
                }
            }
            Repr::Big(b) => Some(Scalar::big_inv(b)),
        }
    }

    fn big_inv(b: &BigParts) -> Scalar {
        let n = &b.re * &b.re + &b.im * &b.im;
        Scalar::from_big_parts(&b.den * &b.re, -(&b.den * &b.im), n)
    }

    /// Multiply by `i^k`.
    pub fn times_i_pow(&self, k: i64) -> Scalar {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => self * &Scalar::i(),
            2 => -self,
            _ => -(self * &Scalar::i()),
        }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Scalar {
        Scalar::one().times_i_pow(k)
    }

    /// Sign of the real part for real scalars (`None` if not real).
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small { re, .. } => re.cmp(&0),
            Repr::Big(b) => b.re.cmp(&BigInt::zero()),
        })
    }

    /// Floor of a real scalar.
    pub fn floor(&self) -> Option<BigInt> {
        if !self.is_real() {
            return None;
        }
        let b = self.big();
        Some(b.re.div_floor(&b.den))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

fn reduce_pair(n: BigInt, d: BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (n, BigInt::one());
    }
    let g = n.gcd(&d);
    (n / &g, d / &g)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_i64(n as i64)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (
                Repr::Small { re: a, im: b, den: c },
                Repr::Small { re: x, im: y, den: z },
            ) => a == x && b == y && c == z,
            (Repr::Big(p), Repr::Big(q)) => p.re == q.re && p.im == q.im && p.den == q.den,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { re, im, den } => {
                0u8.hash(state);
                re.hash(state);
                im.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.re.hash(state);
                b.im.hash(state);
                b.den.hash(state);
            }
        }
    }
}

fn add_impl(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if let (Repr::Small { re: ar, im: ai, den: ad }, Repr::Small { re: br, im: bi, den: bd }) =
        (&a.0, &b.0)
    {
        let (ar, ai, ad, br, bi, bd) =
            (*ar as i128, *ai as i128, *ad as i128, *br as i128, *bi as i128, *bd as i128);
        if ad == bd {
            return Scalar::from_i128_parts(ar + br, ai + bi, ad);
        }
        let re = (ar * bd).checked_add(br * ad);
        let im = (ai * bd).checked_add(bi * ad);
        if let (Some(re), Some(im)) = (re, im) {
            return Scalar::from_i128_parts(re, im, ad * bd);
        }
    }
    let (x, y) = (a.big(), b.big());
    Scalar::from_big_parts(
        &x.re * &y.den + &y.re * &x.den,
        &x.im * &y.den + &y.im * &x.den,
        &x.den * &y.den,
    )
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() || b.is_zero() {
        return Scalar::zero();
    }
    if let (Repr::Small { re: ar, im: ai, den: ad }, Repr::Small { re: br, im: bi, den: bd }) =
        (&a.0, &b.0)
    {
        let (ar, ai, ad, br, bi, bd) =
            (*ar as i128, *ai as i128, *ad as i128, *br as i128, *bi as i128, *bd as i128);
        let re = (ar * br).checked_sub(ai * bi);
        let im = (ar * bi).checked_add(ai * br);
        if let (Some(re), Some(im)) = (re, im) {
            return Scalar::from_i128_parts(re, im, ad * bd);
        }
    }
    let (x, y) = (a.big(), b.big());
    Scalar::from_big_parts(
        &x.re * &y.re - &x.im * &y.im,
        &x.re * &y.im + &x.im * &y.re,
        &x.den * &y.den,
    )
}

fn neg_impl(a: &Scalar) -> Scalar {
    match &a.0 {
        Repr::Small { re, im, den } => Scalar(Repr::Small { re: -*re, im: -*im, den: *den }),
        Repr::Big(b) => Scalar::from_big_parts(-b.re.clone(), -b.im.clone(), b.den.clone()),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $f(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| add_impl(a, &neg_impl(b)));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &Scalar, b: &Scalar| mul_impl(
    a,
    &b.inv().expect("division by zero scalar")
));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = add_impl(self, &neg_impl(rhs));
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_impl(self, rhs);
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_frac(n: &BigInt, d: &BigInt) -> String {
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Exact text form: `3`, `-3/2`, `1/4i`, `-3/2+1/4i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rn, rd) = self.re_parts();
        let (in_, id) = self.im_parts();
        if in_.is_zero() {
            return write!(f, "{}", fmt_frac(&rn, &rd));
        }
        let im = format!("{}i", fmt_frac(&in_, &id));
        if rn.is_zero() {
            write!(f, "{im}")
        } else if in_.is_negative() {
            write!(f, "{}{}", fmt_frac(&rn, &rd), im)
        } else {
            write!(f, "{}+{}", fmt_frac(&rn, &rd), im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Scalar::from_big_frac(n, d))
}

/// Accepts `p`, `p/q`, `p/q+r/si`, `p/q+r/s*i`, `i`, `-i`, `r/si`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid scalar `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).ok_or_else(bad);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not the leading character
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k]).ok_or_else(bad)?, &body[k..]),
            None => (Scalar::zero(), body),
        };
        let im = match im {
            "" | "+" => Scalar::one(),
            "-" => -Scalar::one(),
            other => parse_rational(other).ok_or_else(bad)?,
        };
        Ok(re + im * Scalar::i())
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trips_fixture_strings() {
        for s in ["0", "3", "-3/2", "1/4i", "-3/2+1/4i", "5-2/7i", "-1i"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("i"), Scalar::i());
        assert_eq!(q("-i"), -Scalar::i());
        assert_eq!(q("1/2+3/4*i"), q("1/2+3/4i"));
    }

    #[test]
    fn canonical_form_is_reduced() {
        assert_eq!(Scalar::frac(6, -4), Scalar::frac(-3, 2));
        assert_eq!(Scalar::frac(0, 7), Scalar::zero());
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_i64(-1));
    }

    #[test]
    fn inverse_and_division() {
        let z = q("1+1i");
        assert_eq!(z.inv().unwrap(), q("1/2-1/2i"));
        assert_eq!(&z / &z, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Scalar::from_i64(i64::MAX);
        let sq = &big * &big;
        let back = &sq / &big;
        assert_eq!(back, big);
        let tiny = Scalar::frac(1, i64::MAX) * Scalar::frac(1, i64::MAX);
        assert_eq!(tiny * Scalar::from_i64(i64::MAX) * Scalar::from_i64(i64::MAX), Scalar::one());
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    fn arb() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(a, b, c, d)| Scalar::frac(a, b) + Scalar::frac(c, d) * Scalar::i())
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a - &a, Scalar::zero());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism(a in arb(), b in arb()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
            prop_assert_eq!((&a + &b).conj(), a.conj() + b.conj());
        }

        #[test]
        fn text_form_round_trips(a in arb()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }
    }
}
