//! Canonical basis states of `W = S ⊗ Λ` and the action of the generators
//! `β, γ, τ, ε` on them, with the polarization fixed at K = 0.
//!
//! A state is stored as its finite set of excitations over the vacuum. The
//! creators are `γ(u'_m), ε(u'_m)` for `m > 0` and `β(u_m), τ(u_m)` for
//! `m ≤ 0`; the remaining generators annihilate the vacuum and act by
//! contraction:
//!
//! * `γ(u'_m) β(u_m) − β(u_m) γ(u'_m) = 1`
//! * `ε(u'_m) τ(u_m) + τ(u_m) ε(u'_m) = 1`

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// Generator family. The declaration order puts `Eps` before `Tau`, which
/// is the first key of the fermionic canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    Beta,
    Gamma,
    Eps,
    Tau,
}

impl Family {
    pub fn is_fermionic(self) -> bool {
        matches!(self, Family::Eps | Family::Tau)
    }

    /// The family whose matching creator this family contracts against.
    pub fn partner(self) -> Family {
        match self {
            Family::Beta => Family::Gamma,
            Family::Gamma => Family::Beta,
            Family::Eps => Family::Tau,
            Family::Tau => Family::Eps,
        }
    }

    /// True for the dual-space families `γ, ε`.
    pub fn is_dual(self) -> bool {
        matches!(self, Family::Gamma | Family::Eps)
    }

    fn letter(self) -> char {
        match self {
            Family::Beta => 'b',
            Family::Gamma => 'g',
            Family::Eps => 'e',
            Family::Tau => 't',
        }
    }
}

/// A generator label. Field order makes the derived `Ord` the canonical
/// order: family, then mode, then component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenKey {
    pub family: Family,
    pub mode: i32,
    pub comp: u16,
}

impl GenKey {
    pub fn new(family: Family, comp: usize, mode: i64) -> Self {
        GenKey { family, mode: mode as i32, comp: comp as u16 }
    }

    pub fn is_creator(self) -> bool {
        if self.family.is_dual() {
            self.mode > 0
        } else {
            self.mode <= 0
        }
    }

    pub fn partner(self) -> GenKey {
        GenKey { family: self.family.partner(), ..self }
    }

    /// Energy contributed when this key is a creator; also the energy change
    /// caused by applying it, creator or not.
    pub fn energy(self) -> i64 {
        if self.family.is_dual() {
            self.mode as i64
        } else {
            -(self.mode as i64)
        }
    }
}

impl fmt::Display for GenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mode;
        if m > 0 {
            write!(f, "{}({},+{})", self.family.letter(), self.comp + 1, m)
        } else {
            write!(f, "{}({},{})", self.family.letter(), self.comp + 1, m)
        }
    }
}

impl FromStr for GenKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid generator `{s}`"));
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('b') => Family::Beta,
            Some('g') => Family::Gamma,
            Some('e') => Family::Eps,
            Some('t') => Family::Tau,
            _ => return Err(bad()),
        };
        let inner = chars.as_str().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (c, m) = inner.split_once(',').ok_or_else(bad)?;
        let comp: usize = c.trim().parse().map_err(|_| bad())?;
        let m = m.trim();
        let mode: i64 = m.strip_prefix('+').unwrap_or(m).parse().map_err(|_| bad())?;
        if comp == 0 {
            return Err(bad());
        }
        Ok(GenKey::new(family, comp - 1, mode))
    }
}

pub type KeyVec = SmallVec<[GenKey; 8]>;

/// A canonical basis state: a sorted multiset of bosonic creators and a
/// strictly sorted list of fermionic creators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockMonomial {
    bosons: KeyVec,
    fermions: KeyVec,
}

impl FockMonomial {
    pub fn vacuum() -> Self {
        FockMonomial::default()
    }

    /// `Π_c τ(u^c_0) · vac`, the vacuum of the relative model.
    pub fn relative_vacuum(dim: usize) -> Self {
        FockMonomial {
            bosons: KeyVec::new(),
            fermions: (0..dim).map(|c| GenKey::new(Family::Tau, c, 0)).collect(),
        }
    }

    /// Builds the canonical monomial for the product of `keys` (all
    /// creators) applied to the vacuum, returning the sign of reordering;
    /// `None` when a fermion repeats.
    pub fn from_creators(keys: &[GenKey]) -> Result<Option<(FockMonomial, i64)>> {
        let mut m = FockMonomial::vacuum();
        let mut sign = 1;
        for &k in keys.iter().rev() {
            if !k.is_creator() {
                return Err(Error::Domain(format!("{k} is not a creator")));
            }
            match m.create(k) {
                Some(s) => sign *= s,
                None => return Ok(None),
            }
        }
        Ok(Some((m, sign)))
    }

    pub fn bosons(&self) -> &[GenKey] {
        &self.bosons
    }

    pub fn fermions(&self) -> &[GenKey] {
        &self.fermions
    }

    pub fn is_vacuum(&self) -> bool {
        self.bosons.is_empty() && self.fermions.is_empty()
    }

    pub fn boson_count(&self, key: GenKey) -> usize {
        let lo = self.bosons.partition_point(|k| *k < key);
        self.bosons[lo..].iter().take_while(|k| **k == key).count()
    }

    pub fn has_fermion(&self, key: GenKey) -> bool {
        self.fermions.binary_search(&key).is_ok()
    }

    /// Multiplies by a creator in place; returns the sign, or `None` if the
    /// product vanishes.
    fn create(&mut self, key: GenKey) -> Option<i64> {
        if key.family.is_fermionic() {
            match self.fermions.binary_search(&key) {
                Ok(_) => None,
                Err(pos) => {
                    self.fermions.insert(pos, key);
                    Some(if pos % 2 == 0 { 1 } else { -1 })
                }
            }
        } else {
            let pos = self.bosons.partition_point(|k| *k <= key);
            self.bosons.insert(pos, key);
            Some(1)
        }
    }

    /// Contracts an annihilator in place; returns the integer factor, or
    /// `None` if the result is zero.
    fn annihilate(&mut self, key: GenKey) -> Option<i64> {
        let target = key.partner();
        if key.family.is_fermionic() {
            let pos = self.fermions.binary_search(&target).ok()?;
            self.fermions.remove(pos);
            Some(if pos % 2 == 0 { 1 } else { -1 })
        } else {
            let lo = self.bosons.partition_point(|k| *k < target);
            let n = self.bosons[lo..].iter().take_while(|k| **k == target).count();
            if n == 0 {
                return None;
            }
            self.bosons.remove(lo);
            // γ differentiates β-content; β (mode > 0) is minus the γ-derivative
            Some(if key.family == Family::Gamma { n as i64 } else { -(n as i64) })
        }
    }

    /// Applies one generator; `None` when the result is zero.
    pub fn apply_key(&self, key: GenKey) -> Option<(FockMonomial, i64)> {
        let mut m = self.clone();
        let f = if key.is_creator() { m.create(key) } else { m.annihilate(key) }?;
        Some((m, f))
    }

    /// Applies `word[0] · word[1] · … · word[last]` (rightmost first), as a
    /// literal product without reordering.
    pub fn apply_word(&self, word: &[GenKey]) -> Option<(FockMonomial, i64)> {
        // cheap rejection: a trailing annihilator needs its partner present
        for &k in word.iter().rev() {
            if k.is_creator() {
                break;
            }
            let t = k.partner();
            let present = if t.family.is_fermionic() { self.has_fermion(t) } else { self.boson_count(t) > 0 };
            if !present {
                return None;
            }
        }
        let mut m = self.clone();
        let mut factor = 1i64;
        for &k in word.iter().rev() {
            let f = if k.is_creator() { m.create(k) } else { m.annihilate(k) }?;
            factor *= f;
        }
        Some((m, factor))
    }

    pub fn energy(&self) -> i64 {
        self.bosons.iter().chain(&self.fermions).map(|k| k.energy()).sum()
    }

    /// `(E, Deg_S, Deg_Λ, a, b)` with `a = #ε` and `b = #τ`.
    pub fn energy_and_degrees(&self) -> (i64, i64, i64, i64, i64) {
        let count = |v: &[GenKey], f: Family| v.iter().filter(|k| k.family == f).count() as i64;
        let g = count(&self.bosons, Family::Gamma);
        let b = count(&self.bosons, Family::Beta);
        let e = count(&self.fermions, Family::Eps);
        let t = count(&self.fermions, Family::Tau);
        (self.energy(), g - b, e - t, e, t)
    }

    /// Number of mode-0 bosonic creators.
    pub fn zero_mode_bosons(&self) -> usize {
        self.bosons.iter().filter(|k| k.mode == 0).count()
    }

    /// Whether this is a state of the relative model for `dim` components:
    /// every `τ(u_0)` present and no other mode-0 fermion.
    pub fn is_relative(&self, dim: usize) -> bool {
        let zeros: Vec<_> = self.fermions.iter().filter(|k| k.mode == 0).collect();
        zeros.len() == dim
            && zeros.iter().enumerate().all(|(c, k)| k.family == Family::Tau && k.comp as usize == c)
    }

    /// Bidegree `(a, b)` relative to the relative vacuum: `a = #ε`, `b = #τ`
    /// at negative modes.
    pub fn relative_bidegree(&self) -> (i64, i64) {
        let a = self.fermions.iter().filter(|k| k.family == Family::Eps).count() as i64;
        let b = self.fermions.iter().filter(|k| k.family == Family::Tau && k.mode < 0).count() as i64;
        (a, b)
    }

    /// Fermionic excitations over the relative vacuum, in canonical order.
    pub fn relative_fermions(&self) -> impl Iterator<Item = GenKey> + '_ {
        self.fermions.iter().copied().filter(|k| k.mode != 0)
    }

    pub fn with_parts(bosons: &[GenKey], fermions: &[GenKey]) -> Result<FockMonomial> {
        let mut b: KeyVec = bosons.iter().copied().collect();
        b.sort();
        let mut f: KeyVec = fermions.iter().copied().collect();
        f.sort();
        if b.iter().chain(&f).any(|k| !k.is_creator()) {
            return Err(Error::Domain("monomials contain creators only".into()));
        }
        if b.iter().any(|k| k.family.is_fermionic()) || f.iter().any(|k| !k.family.is_fermionic()) {
            return Err(Error::Domain("bosons and fermions listed on the wrong side".into()));
        }
        if f.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("repeated fermion".into()));
        }
        Ok(FockMonomial { bosons: b, fermions: f })
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[GenKey]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ");
        let (b, r) = (side(&self.bosons), side(&self.fermions));
        match (b.is_empty(), r.is_empty()) {
            (true, true) => write!(f, "|"),
            (true, false) => write!(f, "| {r}"),
            (false, true) => write!(f, "{b} |"),
            (false, false) => write!(f, "{b} | {r}"),
        }
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Parses `g(1,+2) b(1,0) | e(1,+1) t(1,-3)`. The fermions are read as the
/// already-canonical list; a non-canonical order is rejected.
impl FromStr for FockMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (b, f) = s.split_once('|').ok_or_else(|| Error::Parse(format!("missing `|` in `{s}`")))?;
        let keys = |t: &str| t.split_whitespace().map(str::parse).collect::<Result<Vec<GenKey>>>();
        let (bos, fer) = (keys(b)?, keys(f)?);
        if fer.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("fermions not in canonical order in `{s}`")));
        }
        FockMonomial::with_parts(&bos, &fer).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for FockMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite linear combination of monomials; zero coefficients are never
/// stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: FxHashMap<FockMonomial, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(m: FockMonomial) -> Self {
        let mut v = FockVector::zero();
        v.add_term(m, Scalar::one());
        v
    }

    pub fn vacuum() -> Self {
        FockVector::basis(FockMonomial::vacuum())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&mut self, other: &FockVector) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &FockVector) {
        self.add_scaled(other, &-Scalar::one());
    }

    pub fn scaled(&self, s: &Scalar) -> FockVector {
        let mut v = FockVector::zero();
        v.add_scaled(self, s);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical monomial order.
    pub fn sorted(&self) -> Vec<(FockMonomial, Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn max_energy(&self) -> Option<i64> {
        self.terms.keys().map(FockMonomial::energy).max()
    }
}

impl FromIterator<(FockMonomial, Scalar)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, Scalar)>>(iter: I) -> Self {
        let mut v = FockVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.sorted().iter().map(|(m, c)| format!("({c})[{m}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let sorted = self.sorted();
        let mut seq = s.serialize_seq(Some(sorted.len()))?;
        for (m, c) in &sorted {
            seq.serialize_element(&(m.to_string(), c.to_string()))?;
        }
        seq.end()
    }
}

/// Applies one generator to a vector.
pub fn apply_generator(key: GenKey, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in v.iter() {
        if let Some((r, f)) = m.apply_key(key) {
            out.add_term(r, c * &Scalar::from_i64(f));
        }
    }
    out
}

/// Moves annihilators to the right of creators in a word of generators,
/// keeping the relative order inside each class. Returns the sign picked up
/// by exchanging fermions.
pub fn normal_order_word(word: &mut [GenKey]) -> i64 {
    let mut sign = 1;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && !word[j - 1].is_creator() && word[j].is_creator() {
            if word[j - 1].family.is_fermionic() && word[j].family.is_fermionic() {
                sign = -sign;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

/// `:a b:` as a signed ordered pair.
pub fn normal_order_pair(a: GenKey, b: GenKey) -> Result<(i64, GenKey, GenKey)> {
    if a.family.is_fermionic() != b.family.is_fermionic() {
        return Err(Error::Structural(format!("cannot normal-order mixed pair {a}, {b}")));
    }
    let mut w = [a, b];
    let s = normal_order_word(&mut w);
    Ok((s, w[0], w[1]))
}

/// Truncation box for enumerating basis states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FockBox {
    pub emax: i64,
    pub b0max: usize,
    /// When false the states are those of the relative model: all `τ(u_0)`
    /// filled and no other mode-0 fermion.
    pub zero_fermions_allowed: bool,
    pub deg_s: Option<i64>,
    pub deg_lambda: Option<i64>,
}

impl FockBox {
    pub fn absolute(emax: i64, b0max: usize) -> Self {
        FockBox { emax, b0max, zero_fermions_allowed: true, deg_s: None, deg_lambda: None }
    }

    pub fn relative(emax: i64, b0max: usize) -> Self {
        FockBox { emax, b0max, zero_fermions_allowed: false, deg_s: None, deg_lambda: None }
    }

    pub fn is_relative(&self) -> bool {
        !self.zero_fermions_allowed
    }
}

impl fmt::Display for FockBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E<={},B0<={}", self.emax, self.b0max)?;
        if let Some(s) = self.deg_s {
            write!(f, ",DegS={s}")?;
        }
        if let Some(l) = self.deg_lambda {
            write!(f, ",DegL={l}")?;
        }
        if self.is_relative() {
            f.write_str(",rel")?;
        }
        Ok(())
    }
}

/// All basis monomials of a box, sorted.
pub fn enumerate_box(dim: usize, bx: &FockBox) -> Result<Vec<FockMonomial>> {
    if bx.emax < 0 {
        return Err(Error::Domain("box energy bound must be nonnegative".into()));
    }
    if bx.emax > 64 || bx.b0max > 64 || dim > 64 {
        return Err(Error::Domain("box parameters too large to enumerate".into()));
    }
    let e = bx.emax;
    let mut fermion_pool = Vec::new();
    let mut boson_pool = Vec::new();
    for c in 0..dim {
        for m in 1..=e {
            fermion_pool.push(GenKey::new(Family::Eps, c, m));
            boson_pool.push(GenKey::new(Family::Gamma, c, m));
        }
        for m in -e..=0 {
            if m != 0 || bx.zero_fermions_allowed {
                fermion_pool.push(GenKey::new(Family::Tau, c, m));
            }
            boson_pool.push(GenKey::new(Family::Beta, c, m));
        }
    }
    let base: KeyVec = if bx.zero_fermions_allowed {
        KeyVec::new()
    } else {
        (0..dim).map(|c| GenKey::new(Family::Tau, c, 0)).collect()
    };
    let mut fermion_sets = Vec::new();
    let mut cur = Vec::new();
    subsets(&fermion_pool, 0, e, &mut cur, &mut fermion_sets);
    let mut out = Vec::new();
    for (fs, used) in fermion_sets {
        let mut fer: KeyVec = base.iter().copied().chain(fs.iter().copied()).collect();
        fer.sort();
        let mut bos = Vec::new();
        multisets(&boson_pool, 0, e - used, bx.b0max, &mut bos, &mut |b| {
            let m = FockMonomial { bosons: b.iter().copied().collect(), fermions: fer.clone() };
            let (_, ds, dl, _, _) = m.energy_and_degrees();
            if bx.deg_s.is_none_or(|x| x == ds) && bx.deg_lambda.is_none_or(|x| x == dl) {
                out.push(m);
            }
        });
    }
    out.sort();
    Ok(out)
}

fn subsets(pool: &[GenKey], i: usize, budget: i64, cur: &mut Vec<GenKey>, out: &mut Vec<(Vec<GenKey>, i64)>) {
    if i == pool.len() {
        out.push((cur.clone(), cur.iter().map(|k| k.energy()).sum()));
        return;
    }
    subsets(pool, i + 1, budget, cur, out);
    let e = pool[i].energy();
    if e <= budget {
        cur.push(pool[i]);
        subsets(pool, i + 1, budget - e, cur, out);
        cur.pop();
    }
}

fn multisets(
    pool: &[GenKey],
    i: usize,
    budget: i64,
    zero_budget: usize,
    cur: &mut Vec<GenKey>,
    emit: &mut dyn FnMut(&[GenKey]),
) {
    if i == pool.len() {
        let mut s = cur.clone();
        s.sort();
        emit(&s);
        return;
    }
    let k = pool[i];
    let e = k.energy();
    let mut n = 0usize;
    loop {
        if e == 0 && n > zero_budget {
            break;
        }
        if (n as i64) * e > budget {
            break;
        }
        let (b, z) = (budget - n as i64 * e, if e == 0 { zero_budget - n } else { zero_budget });
        multisets(pool, i + 1, b, z, cur, emit);
        cur.push(k);
        n += 1;
    }
    cur.truncate(cur.len() - n);
}
