//! A complete theory declaration: registry, Lagrangian, identity records and
//! the operator candidates to be checked.

use std::collections::BTreeMap;

use crate::algebra::{GradedPoly, MultiIndex, Registry, SymbolKind, Var};
use crate::error::{Error, Result};
use crate::jet::EvolutionaryDerivation;

/// Stage of the identity a ghost pairs with.
pub fn ghost_stage(reg: &Registry, v: Var) -> Option<u8> {
    match reg.kind(v) {
        SymbolKind::Ghost { stage } => Some(stage),
        _ => None,
    }
}

/// Number of antifield factors in a monomial.
fn antifield_degree(reg: &Registry, m: &crate::algebra::Monomial) -> u32 {
    m.degree_where(|v| reg.kind(v).is_antifield())
}

/// `Δ_r = δ_KT(c̄_r)` for the ghost `c^r`.
///
/// Stage 0 records are Noether identities, linear in field antifields.
/// A stage-k record is linear in stage-(k−1) ghost antifields plus an
/// optional part quadratic in antifields (the on-shell certificate `h`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherRecord {
    pub ghost: Var,
    pub stage: u8,
    pub delta: GradedPoly,
}

impl NoetherRecord {
    pub fn linear(&self, reg: &Registry) -> GradedPoly {
        self.delta.filter_terms(|m| antifield_degree(reg, m) == 1)
    }

    /// The part quadratic in antifields.
    pub fn certificate(&self, reg: &Registry) -> GradedPoly {
        self.delta.filter_terms(|m| antifield_degree(reg, m) == 2)
    }

    /// `Δ^{B,Λ}` keyed by the zero-order paired generator `B` and `Λ`, read
    /// off as right derivatives by `B̄_Λ` of the linear part.
    pub fn coefficients(&self, reg: &Registry) -> BTreeMap<(Var, MultiIndex), GradedPoly> {
        let lin = self.linear(reg);
        let mut out = BTreeMap::new();
        for v in lin.vars() {
            if !reg.kind(v).is_antifield() {
                continue;
            }
            let b = reg.paired(v).expect("antifield has a partner").base();
            let d = lin.right_derivative(v);
            if !d.is_zero() {
                out.insert((b, v.jet()), d);
            }
        }
        out
    }

    fn validate(&self, reg: &Registry) -> Result<()> {
        let name = reg.display_var(self.ghost).to_string();
        let target: i8 = self.stage as i8 - 1;
        for (m, _) in self.delta.terms() {
            match antifield_degree(reg, m) {
                1 => {
                    for v in m.vars() {
                        if let SymbolKind::Antifield { stage } = reg.kind(v) {
                            if stage != target {
                                return Err(Error::Validation(format!(
                                    "record for {name}: linear term uses antifield {} of the wrong stage",
                                    reg.display_var(v)
                                )));
                            }
                        }
                    }
                }
                2 if self.stage > 0 => {}
                d => {
                    return Err(Error::Validation(format!(
                        "record for {name}: term of antifield degree {d} is not supported"
                    )))
                }
            }
        }
        let want = self.stage as i32 + 1;
        if let Some(n) = self.delta.antifield_number(reg) {
            if n != want && !self.delta.is_zero() {
                return Err(Error::Validation(format!(
                    "record for {name}: antifield number {n}, expected {want}"
                )));
            }
        } else {
            return Err(Error::Validation(format!("record for {name}: mixed antifield number")));
        }
        // c̄_r has parity [c_r] + 1 and δ_KT is odd
        let parity = self.ghost.is_odd();
        if self.delta.parity().is_some_and(|p| p != parity) {
            return Err(Error::Validation(format!("record for {name}: wrong Grassmann parity")));
        }
        Ok(())
    }
}

/// A named identity `Δ′` to be certified trivial, with an optional `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialClaim {
    pub name: String,
    pub delta: GradedPoly,
    pub witness: Option<GradedPoly>,
}

#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    pub registry: Registry,
    pub lagrangian: GradedPoly,
    pub records: Vec<NoetherRecord>,
    /// Gauge operator as written in the source, on fields and ghosts.
    pub gauge: Option<EvolutionaryDerivation>,
    /// BRST terms `γ` acting on ghosts.
    pub gamma: EvolutionaryDerivation,
    /// On-shell certificates `α` for the gauge conditions, keyed by ghost generator.
    pub alpha: BTreeMap<Var, GradedPoly>,
    pub trivial: Vec<TrivialClaim>,
}

impl Theory {
    pub fn new(name: &str, registry: Registry, lagrangian: GradedPoly) -> Theory {
        Theory {
            name: name.to_string(),
            registry,
            lagrangian,
            records: Vec::new(),
            gauge: None,
            gamma: EvolutionaryDerivation::new(true, 1),
            alpha: BTreeMap::new(),
            trivial: Vec::new(),
        }
    }

    pub fn reg(&self) -> &Registry {
        &self.registry
    }

    pub fn max_stage(&self) -> Option<u8> {
        self.records.iter().map(|r| r.stage).max()
    }

    pub fn records_of_stage(&self, k: u8) -> impl Iterator<Item = &NoetherRecord> {
        self.records.iter().filter(move |r| r.stage == k)
    }

    pub fn record(&self, ghost: Var) -> Option<&NoetherRecord> {
        self.records.iter().find(|r| r.ghost == ghost)
    }

    /// Check gradings and the supported record shape.
    pub fn validate(&self) -> Result<()> {
        let reg = &self.registry;
        if self.lagrangian.parity() == Some(true) {
            return Err(Error::Validation("Lagrangian must be even".into()));
        }
        if self.lagrangian.terms().any(|(m, _)| m.vars().any(|v| reg.kind(v) != SymbolKind::Field && reg.kind(v) != SymbolKind::Background)) {
            return Err(Error::Validation("Lagrangian may only contain fields and backgrounds".into()));
        }
        for r in &self.records {
            r.validate(reg)?;
        }
        if let Some(g) = &self.gauge {
            g.validate(reg)?;
        }
        self.gamma.validate(reg)?;
        Ok(())
    }
}
