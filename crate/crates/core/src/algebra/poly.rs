//! Canonical graded-commutative polynomials.
//!
//! A monomial keeps its even variables as a sorted exponent list and its odd
//! variables as a strictly increasing list in the global variable order.
//! Every reordering sign is computed against that one order, so any
//! bracketing or ordering of the same product normalizes to the same map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use smallvec::SmallVec;

use crate::algebra::registry::Registry;
use crate::algebra::var::Var;
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    even: SmallVec<[(Var, u32); 4]>,
    odd: SmallVec<[Var; 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_var(v: Var) -> Monomial {
        let mut m = Monomial::default();
        if v.is_odd() {
            m.odd.push(v);
        } else {
            m.even.push((v, 1));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even(&self) -> &[(Var, u32)] {
        &self.even
    }

    pub fn odd(&self) -> &[Var] {
        &self.odd
    }

    /// Grassmann parity: number of odd factors mod 2.
    pub fn parity(&self) -> bool {
        self.odd.len() % 2 == 1
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| *e).sum::<u32>() + self.odd.len() as u32
    }

    /// Degree counting only variables accepted by `pred`.
    pub fn degree_where(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.even.iter().filter(|(v, _)| pred(*v)).map(|(_, e)| *e).sum::<u32>()
            + self.odd.iter().filter(|v| pred(**v)).count() as u32
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.even.iter().map(|(v, _)| *v).chain(self.odd.iter().copied())
    }

    /// Factors in printing order: even ones (with multiplicity), then odd ones.
    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.even.iter().copied().chain(self.odd.iter().map(|v| (*v, 1)))
    }

    /// Product `self * other`, or `None` when an odd factor repeats.
    /// The sign is that of sorting the concatenated odd lists.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut odd = SmallVec::<[Var; 4]>::with_capacity(self.odd.len() + other.odd.len());
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < self.odd.len() && j < other.odd.len() {
            let (a, b) = (self.odd[i], other.odd[j]);
            if a < b {
                odd.push(a);
                i += 1;
            } else if b < a {
                odd.push(b);
                // b moves left past the remaining factors of self
                if (self.odd.len() - i) % 2 == 1 {
                    negative = !negative;
                }
                j += 1;
            } else {
                return None;
            }
        }
        odd.extend_from_slice(&self.odd[i..]);
        odd.extend_from_slice(&other.odd[j..]);

        let mut even = SmallVec::<[(Var, u32); 4]>::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() && j < other.even.len() {
            let (a, b) = (self.even[i], other.even[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    even.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    even.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    even.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        even.extend_from_slice(&self.even[i..]);
        even.extend_from_slice(&other.even[j..]);
        Some((Monomial { even, odd }, negative))
    }

    /// Exponent of `v` in this monomial.
    pub fn exponent(&self, v: Var) -> u32 {
        if v.is_odd() {
            self.odd.binary_search(&v).map(|_| 1).unwrap_or(0)
        } else {
            self.even
                .binary_search_by(|(w, _)| w.cmp(&v))
                .map(|i| self.even[i].1)
                .unwrap_or(0)
        }
    }

    /// Left partial derivative: returns (multiplier, remaining monomial).
    pub fn left_derivative(&self, v: Var) -> Option<(i64, Monomial)> {
        self.derivative(v, false)
    }

    /// Right partial derivative: returns (multiplier, remaining monomial).
    pub fn right_derivative(&self, v: Var) -> Option<(i64, Monomial)> {
        self.derivative(v, true)
    }

    fn derivative(&self, v: Var, from_right: bool) -> Option<(i64, Monomial)> {
        if v.is_odd() {
            let i = self.odd.binary_search(&v).ok()?;
            let passed = if from_right { self.odd.len() - 1 - i } else { i };
            let mut m = self.clone();
            m.odd.remove(i);
            Some((if passed % 2 == 1 { -1 } else { 1 }, m))
        } else {
            let i = self.even.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
            let mut m = self.clone();
            let e = m.even[i].1;
            if e == 1 {
                m.even.remove(i);
            } else {
                m.even[i].1 -= 1;
            }
            Some((e as i64, m))
        }
    }
}

/// A polynomial in canonical form: monomial → nonzero coefficient.
///
/// Polynomials carry the id of the registry their variables come from;
/// id 0 marks constants, which combine with anything. Equality compares
/// terms only.
#[derive(Clone, Debug, Default)]
pub struct GradedPoly {
    reg: u32,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &GradedPoly) -> bool {
        self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl std::hash::Hash for GradedPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl GradedPoly {
    pub fn zero() -> GradedPoly {
        GradedPoly::default()
    }

    pub fn constant(c: Q) -> GradedPoly {
        let mut p = GradedPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> GradedPoly {
        GradedPoly::constant(Q::one())
    }

    pub fn var(reg: &Registry, v: Var) -> GradedPoly {
        GradedPoly::monomial(reg.id(), Monomial::from_var(v), Q::one())
    }

    pub fn monomial(reg: u32, m: Monomial, c: Q) -> GradedPoly {
        let mut p = GradedPoly { reg, terms: BTreeMap::new() };
        if !c.is_zero() {
            if m.is_one() {
                p.reg = 0;
            }
            p.terms.insert(m, c);
        }
        p
    }

    pub fn registry_id(&self) -> u32 {
        self.reg
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Q)> {
        self.terms.into_iter()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    fn join_reg(a: u32, b: u32) -> Result<u32> {
        match (a, b) {
            (0, x) | (x, 0) => Ok(x),
            (x, y) if x == y => Ok(x),
            _ => Err(Error::RegistryMismatch),
        }
    }

    /// Add `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn absorb(&mut self, other: GradedPoly, negate: bool) {
        if !other.is_zero() {
            self.reg = Self::join_reg(self.reg, other.reg).expect("registry mismatch in addition");
        }
        for (m, c) in other.terms {
            self.add_term(m, if negate { -c } else { c });
        }
    }

    pub fn try_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        Self::join_reg(self.reg, other.reg)?;
        Ok(self.clone() + other.clone())
    }

    pub fn scale(&self, c: &Q) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            reg: self.reg,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Graded product; fails if the operands come from different registries.
    pub fn try_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        let reg = Self::join_reg(self.reg, other.reg)?;
        let mut out = GradedPoly { reg, terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut acc = GradedPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parity if every term has the same parity (zero has none).
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Ghost number if homogeneous.
    pub fn ghost_number(&self, reg: &Registry) -> Option<i32> {
        self.homogeneous(|v| reg.ghost_number(v))
    }

    /// Antifield number if homogeneous.
    pub fn antifield_number(&self, reg: &Registry) -> Option<i32> {
        self.homogeneous(|v| reg.antifield_number(v))
    }

    fn homogeneous(&self, weight: impl Fn(Var) -> i32) -> Option<i32> {
        let mut it = self
            .terms
            .keys()
            .map(|m| m.factors().map(|(v, e)| weight(v) * e as i32).sum::<i32>());
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    /// Graded left partial derivative `∂/∂v` acting from the left.
    pub fn left_derivative(&self, v: Var) -> GradedPoly {
        self.derive(v, false)
    }

    /// Graded right partial derivative: strips `v` from the right end.
    pub fn right_derivative(&self, v: Var) -> GradedPoly {
        self.derive(v, true)
    }

    fn derive(&self, v: Var, from_right: bool) -> GradedPoly {
        let mut out = GradedPoly { reg: self.reg, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let d = if from_right { m.right_derivative(v) } else { m.left_derivative(v) };
            if let Some((k, rest)) = d {
                out.add_term(rest, c * &Q::from_int(k));
            }
        }
        out
    }

    /// Every variable that occurs, in global order.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Highest jet order of any variable (0 for constants).
    pub fn jet_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .map(|v| v.jet_order())
            .max()
            .unwrap_or(0)
    }

    /// Keep only the terms accepted by `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> GradedPoly {
        GradedPoly {
            reg: self.reg,
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Rebuild the polynomial by sending each variable factor through `f`
    /// (a ring homomorphism on generators, applied in factor order).
    pub fn substitute(&self, f: &impl Fn(Var) -> GradedPoly) -> GradedPoly {
        let mut out = GradedPoly { reg: self.reg, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let mut acc = GradedPoly::constant(c.clone());
            for (v, e) in m.factors() {
                let img = f(v);
                for _ in 0..e {
                    acc = &acc * &img;
                }
            }
            out += acc;
        }
        out
    }

    pub fn display<'a>(&'a self, reg: &'a Registry) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, reg, max_terms: None }
    }
}

impl From<Q> for GradedPoly {
    fn from(c: Q) -> GradedPoly {
        GradedPoly::constant(c)
    }
}

impl From<i64> for GradedPoly {
    fn from(c: i64) -> GradedPoly {
        GradedPoly::constant(Q::from_int(c))
    }
}

impl AddAssign for GradedPoly {
    fn add_assign(&mut self, rhs: GradedPoly) {
        self.absorb(rhs, false);
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        self.absorb(rhs.clone(), false);
    }
}

impl SubAssign for GradedPoly {
    fn sub_assign(&mut self, rhs: GradedPoly) {
        self.absorb(rhs, true);
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        self.absorb(rhs.clone(), true);
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        if self.terms.len() < rhs.terms.len() {
            let mut r = rhs;
            r.absorb(self, false);
            return r;
        }
        self.absorb(rhs, false);
        self
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.clone() + rhs.clone()
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(mut self, rhs: GradedPoly) -> GradedPoly {
        self.absorb(rhs, true);
        self
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.clone() - rhs.clone()
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            reg: self.reg,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -self.clone()
    }
}

/// Panics on a registry mismatch; use [`GradedPoly::try_mul`] to handle it.
impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_mul(rhs).expect("registry mismatch in multiplication")
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for GradedPoly {
    fn sum<I: Iterator<Item = GradedPoly>>(iter: I) -> GradedPoly {
        let mut acc = GradedPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

/// Prints a polynomial in the expression grammar.
pub struct PolyDisplay<'a> {
    poly: &'a GradedPoly,
    reg: &'a Registry,
    max_terms: Option<usize>,
}

impl PolyDisplay<'_> {
    /// Print at most `n` terms, then `+ ...(k more terms)`.
    pub fn truncate(mut self, n: usize) -> Self {
        self.max_terms = Some(n);
        self
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let total = self.poly.len();
        let shown = self.max_terms.unwrap_or(total).min(total);
        for (i, (m, c)) in self.poly.terms().take(shown).enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for (v, e) in m.factors() {
                let s = self.reg.display_var(v).to_string();
                parts.push(if e > 1 { format!("{s}^{e}") } else { s });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        if shown < total {
            write!(f, " + ...({} more terms)", total - shown)?;
        }
        Ok(())
    }
}
