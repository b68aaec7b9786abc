//! Total derivatives and evolutionary (vertical) derivations.
//!
//! Explicit base-coordinate dependence is not modelled: `d_λ` acts only
//! through the jet shift `s^A_Λ ↦ s^A_{λΛ}`. Only vertical derivations are
//! represented; a contact derivation is a variational symmetry iff its
//! vertical part is, so the horizontal part is dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::algebra::{GradedPoly, Monomial, MultiIndex, Registry, Var};
use crate::error::{Error, Result};
use crate::rational::Q;

/// Partial derivatives of `p` with respect to every variable it contains,
/// collected in one pass over its terms.
pub fn partials(p: &GradedPoly, from_right: bool) -> BTreeMap<Var, GradedPoly> {
    let mut out: BTreeMap<Var, GradedPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        for v in m.vars() {
            let d = if from_right { m.right_derivative(v) } else { m.left_derivative(v) };
            if let Some((k, rest)) = d {
                out.entry(v)
                    .or_insert_with(|| GradedPoly::monomial(p.registry_id(), Monomial::one(), Q::zero()))
                    .add_term(rest, c * &Q::from_int(k));
            }
        }
    }
    out.retain(|_, q| !q.is_zero());
    out
}

fn shifted(v: Var, lambda: u8, reg: &Registry) -> Result<Var> {
    if lambda >= reg.dim() {
        return Err(Error::Validation(format!(
            "base index {lambda} out of range for dimension {}",
            reg.dim()
        )));
    }
    let order = v.jet_order() + 1;
    if order > reg.cap() as u32 {
        return Err(Error::JetCap { order, cap: reg.cap() });
    }
    Ok(v.with_jet(v.jet().with(lambda)))
}

/// Total derivative `d_λ p`, an even derivation.
pub fn total_derivative(p: &GradedPoly, lambda: u8, reg: &Registry) -> Result<GradedPoly> {
    let mut out = GradedPoly::monomial(reg.id(), Monomial::one(), Q::zero());
    for (m, c) in p.terms() {
        for v in m.vars() {
            let (k, rest) = m.left_derivative(v).expect("variable taken from monomial");
            let w = shifted(v, lambda, reg)?;
            if let Some((prod, neg)) = Monomial::from_var(w).mul(&rest) {
                let coeff = c * &Q::from_int(if neg { -k } else { k });
                out.add_term(prod, coeff);
            }
        }
    }
    Ok(out)
}

/// `d_Λ p = d_{λ1} ⋯ d_{λk} p`; the empty multi-index is the identity.
pub fn iterated_derivative(p: &GradedPoly, jet: &MultiIndex, reg: &Registry) -> Result<GradedPoly> {
    let mut acc = p.clone();
    for lambda in jet.entries() {
        if acc.is_zero() {
            break;
        }
        acc = total_derivative(&acc, lambda, reg)?;
    }
    Ok(acc)
}

/// A vertical graded derivation given by its values `υ^A` on zero-order
/// generators; it acts on jets through its prolongation `d_Λ υ^A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvolutionaryDerivation {
    components: BTreeMap<Var, GradedPoly>,
    parity: bool,
    ghost_number: i32,
}

impl EvolutionaryDerivation {
    pub fn new(parity: bool, ghost_number: i32) -> EvolutionaryDerivation {
        EvolutionaryDerivation { components: BTreeMap::new(), parity, ghost_number }
    }

    pub fn parity(&self) -> bool {
        self.parity
    }

    pub fn ghost_number(&self) -> i32 {
        self.ghost_number
    }

    /// Set `υ^A`; `a` must be a zero-order variable. Zero components are dropped.
    pub fn set(&mut self, a: Var, value: GradedPoly) {
        assert!(a.jet_order() == 0, "components are indexed by zero-order generators");
        if value.is_zero() {
            self.components.remove(&a);
        } else {
            self.components.insert(a, value);
        }
    }

    pub fn add_to(&mut self, a: Var, value: GradedPoly) {
        let cur = self.components.remove(&a).unwrap_or_default();
        self.set(a, cur + value);
    }

    pub fn with(mut self, a: Var, value: GradedPoly) -> Self {
        self.set(a, value);
        self
    }

    pub fn component(&self, a: Var) -> GradedPoly {
        self.components.get(&a.base()).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Var, &GradedPoly)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Sum of two derivations of equal grading.
    pub fn plus(&self, other: &EvolutionaryDerivation) -> EvolutionaryDerivation {
        let mut out = self.clone();
        for (a, v) in &other.components {
            out.add_to(*a, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> EvolutionaryDerivation {
        let mut out = EvolutionaryDerivation::new(self.parity, self.ghost_number);
        for (a, v) in &self.components {
            out.set(*a, v.scale(c));
        }
        out
    }

    /// Restrict to generators accepted by `pred`.
    pub fn restrict(&self, pred: impl Fn(Var) -> bool) -> EvolutionaryDerivation {
        EvolutionaryDerivation {
            components: self.components.iter().filter(|(a, _)| pred(**a)).map(|(a, v)| (*a, v.clone())).collect(),
            parity: self.parity,
            ghost_number: self.ghost_number,
        }
    }

    /// Check that each `υ^A` has parity `[A] + [u]` and ghost number `gh(A) + gh(u)`.
    pub fn validate(&self, reg: &Registry) -> Result<()> {
        for (a, v) in &self.components {
            let want = a.is_odd() ^ self.parity;
            if let Some(p) = v.parity() {
                if p != want {
                    return Err(Error::Validation(format!(
                        "component for {} has parity {} (expected {})",
                        reg.display_var(*a),
                        p as u8,
                        want as u8
                    )));
                }
            } else {
                return Err(Error::Validation(format!(
                    "component for {} is not parity-homogeneous",
                    reg.display_var(*a)
                )));
            }
            let gh = reg.ghost_number(*a) + self.ghost_number;
            if let Some(g) = v.ghost_number(reg) {
                if g != gh {
                    return Err(Error::Validation(format!(
                        "component for {} has ghost number {g} (expected {gh})",
                        reg.display_var(*a)
                    )));
                }
            }
        }
        Ok(())
    }

    fn prolonged_components(&self, vars: &[Var], reg: &Registry) -> Result<HashMap<Var, GradedPoly>> {
        vars.par_iter()
            .filter_map(|v| self.components.get(&v.base()).map(|c| (v, c)))
            .map(|(v, c)| Ok((*v, iterated_derivative(c, &v.jet(), reg)?)))
            .collect()
    }

    /// Apply the prolongation as a left derivation:
    /// `Σ_{A,Λ} d_Λ(υ^A) · ∂_left p / ∂s^A_Λ`.
    pub fn apply(&self, p: &GradedPoly, reg: &Registry) -> Result<GradedPoly> {
        let parts = partials(p, false);
        let vars: Vec<Var> = parts.keys().copied().collect();
        let comps = self.prolonged_components(&vars, reg)?;
        let pieces: Vec<GradedPoly> = parts
            .into_par_iter()
            .filter_map(|(v, d)| comps.get(&v).map(|c| c * &d))
            .collect();
        Ok(pieces.into_iter().sum())
    }

    /// Apply the prolongation as a right derivation:
    /// `Σ_{A,Λ} ∂_right p / ∂s^A_Λ · d_Λ(υ^A)`.
    pub fn apply_right(&self, p: &GradedPoly, reg: &Registry) -> Result<GradedPoly> {
        let parts = partials(p, true);
        let vars: Vec<Var> = parts.keys().copied().collect();
        let comps = self.prolonged_components(&vars, reg)?;
        let pieces: Vec<GradedPoly> = parts
            .into_par_iter()
            .filter_map(|(v, d)| comps.get(&v).map(|c| &d * c))
            .collect();
        Ok(pieces.into_iter().sum())
    }

    /// `u(υ^A)` for every component: zero for all `A` iff an odd `u` is nilpotent.
    pub fn self_application(&self, reg: &Registry) -> Result<BTreeMap<Var, GradedPoly>> {
        let mut out = BTreeMap::new();
        for (a, v) in &self.components {
            let r = self.apply(v, reg)?;
            if !r.is_zero() {
                out.insert(*a, r);
            }
        }
        Ok(out)
    }
}

/// Graded commutator `[u, v]` with components
/// `u(v^A) − (−1)^{[u][v]} v(u^A)`.
pub fn commutator(
    u: &EvolutionaryDerivation,
    v: &EvolutionaryDerivation,
    reg: &Registry,
) -> Result<EvolutionaryDerivation> {
    let keys: BTreeSet<Var> = u.components.keys().chain(v.components.keys()).copied().collect();
    let sign = if u.parity && v.parity { Q::one() } else { -Q::one() };
    let mut out = EvolutionaryDerivation::new(u.parity ^ v.parity, u.ghost_number + v.ghost_number);
    for a in keys {
        let w = u.apply(&v.component(a), reg)? + v.apply(&u.component(a), reg)?.scale(&sign);
        out.set(a, w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ParitySpec, SymbolDecl, SymbolKind};
    use crate::JetSpace;

    fn setup() -> Registry {
        Registry::new(
            JetSpace::new(2, 4),
            vec![
                SymbolDecl::new("s", SymbolKind::Field, vec![], ParitySpec::Fixed(false)),
                SymbolDecl::new("c", SymbolKind::Ghost { stage: 0 }, vec![], ParitySpec::Fixed(true)),
            ],
        )
        .unwrap()
    }

    fn v(reg: &Registry, name: &str, jet: &[u8]) -> GradedPoly {
        let (x, _) = reg.var(name, &[], MultiIndex::from_entries(jet)).unwrap().unwrap();
        GradedPoly::var(reg, x)
    }

    #[test]
    fn total_derivative_basics() {
        let reg = setup();
        let s = v(&reg, "s", &[]);
        assert_eq!(total_derivative(&s, 0, &reg).unwrap(), v(&reg, "s", &[0]));
        let s2 = &s * &s;
        assert_eq!(
            total_derivative(&s2, 0, &reg).unwrap(),
            (&s * &v(&reg, "s", &[0])).scale(&Q::from_int(2))
        );
        let xy = iterated_derivative(&s, &MultiIndex::from_entries(&[1, 0]), &reg).unwrap();
        let yx = total_derivative(&total_derivative(&s, 1, &reg).unwrap(), 0, &reg).unwrap();
        assert_eq!(xy, yx);
        assert_eq!(xy, v(&reg, "s", &[0, 1]));
        assert_eq!(iterated_derivative(&s, &MultiIndex::EMPTY, &reg).unwrap(), s);
    }

    #[test]
    fn mixed_second_derivative_of_product() {
        // d_x d_y (s c) = s_xy c + s_x c_y + s_y c_x + s c_xy
        let reg = setup();
        let p = &v(&reg, "s", &[]) * &v(&reg, "c", &[]);
        let got = iterated_derivative(&p, &MultiIndex::from_entries(&[0, 1]), &reg).unwrap();
        let expected = &v(&reg, "s", &[0, 1]) * &v(&reg, "c", &[])
            + &v(&reg, "s", &[0]) * &v(&reg, "c", &[1])
            + &v(&reg, "s", &[1]) * &v(&reg, "c", &[0])
            + &v(&reg, "s", &[]) * &v(&reg, "c", &[0, 1]);
        assert_eq!(got.len(), 4);
        assert_eq!(got, expected);
    }

    #[test]
    fn cap_is_loud() {
        let reg = setup();
        let s4 = v(&reg, "s", &[0, 0, 0, 0]);
        assert!(matches!(total_derivative(&s4, 1, &reg), Err(Error::JetCap { order: 5, cap: 4 })));
    }

    #[test]
    fn prolongation_of_first_jet() {
        let reg = setup();
        let (s, _) = reg.var("s", &[], MultiIndex::EMPTY).unwrap().unwrap();
        let u = EvolutionaryDerivation::new(true, 1).with(s, v(&reg, "c", &[]));
        assert_eq!(u.apply(&v(&reg, "s", &[0]), &reg).unwrap(), v(&reg, "c", &[0]));
        u.validate(&reg).unwrap();
    }

    #[test]
    fn even_shift_commutes_with_itself() {
        let reg = setup();
        let (s, _) = reg.var("s", &[], MultiIndex::EMPTY).unwrap().unwrap();
        let u = EvolutionaryDerivation::new(false, 0).with(s, GradedPoly::one());
        assert!(commutator(&u, &u, &reg).unwrap().is_zero());
    }
}
