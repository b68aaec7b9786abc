#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::OnceLock;

use gvc_core::parser::parse_theory;
use gvc_core::{GradedPoly, MultiIndex, Registry, Var, Q};
use proptest::prelude::*;
use rand::Rng;

pub const MAX_DIM: u8 = 3;

/// Registry with two even and two odd unconstrained fields, jet cap 8.
pub fn space(dim: u8) -> &'static Registry {
    static SPACES: OnceLock<Vec<Registry>> = OnceLock::new();
    let all = SPACES.get_or_init(|| {
        (1..=MAX_DIM)
            .map(|d| {
                let src = format!("dim {d}; jet_order 8; field s even; field t even; field p odd; field q odd; L = s*t;");
                parse_theory(&src).unwrap().theory.registry
            })
            .collect()
    });
    &all[dim as usize - 1]
}

/// Zero-order generators of the given registry, optionally with antifields.
pub fn alphabet(reg: &Registry, antifields: bool) -> Vec<Var> {
    reg.base_vars_where(|d| antifields || !d.kind.is_antifield())
}

/// A polynomial as plain data: terms of (coefficient, [(generator, jet)]).
/// Jet directions are reduced modulo the dimension when built.
#[derive(Clone, Debug)]
pub struct Recipe(pub Vec<(i64, Vec<(usize, Vec<u8>)>)>);

impl Recipe {
    pub fn build(&self, reg: &Registry, gens: &[Var]) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (c, fs) in &self.0 {
            let mut t = GradedPoly::constant(Q::from(*c));
            for (g, jet) in fs {
                let jet: Vec<u8> = jet.iter().map(|j| j % reg.dim()).collect();
                let v = gens[g % gens.len()].with_jet(MultiIndex::from_entries(&jet));
                t = &t * &GradedPoly::var(reg, v);
            }
            out += &t;
        }
        out
    }
}

fn jet_strategy(dim: u8, order: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..dim, 0..=order)
}

pub fn recipe(dim: u8, order: usize, terms: usize, degree: usize) -> impl Strategy<Value = Recipe> {
    let factor = (0..64usize, jet_strategy(dim, order));
    let term = (-4i64..=4, prop::collection::vec(factor, 0..=degree));
    prop::collection::vec(term, 0..=terms).prop_map(Recipe)
}

/// Random `f^Λ` for `|Λ| ≤ order`.
pub fn family_strategy(dim: u8, order: usize) -> impl Strategy<Value = Vec<(Vec<u8>, Recipe)>> {
    prop::collection::vec((jet_strategy(dim, order), recipe(dim, 2, 3, 2)), 1..=4)
}

pub fn family(reg: &Registry, gens: &[Var], raw: &[(Vec<u8>, Recipe)]) -> BTreeMap<MultiIndex, GradedPoly> {
    let mut f: BTreeMap<MultiIndex, GradedPoly> = BTreeMap::new();
    for (jet, r) in raw {
        let jet: Vec<u8> = jet.iter().map(|j| j % reg.dim()).collect();
        *f.entry(MultiIndex::from_entries(&jet)).or_default() += &r.build(reg, gens);
    }
    f
}

/// Same shapes as `recipe`, drawn from a seeded generator.
pub fn random_recipe(rng: &mut impl Rng, dim: u8, order: usize, terms: usize, degree: usize) -> Recipe {
    let n_terms = rng.gen_range(1..=terms);
    Recipe(
        (0..n_terms)
            .map(|_| {
                let deg = rng.gen_range(1..=degree);
                let fs = (0..deg)
                    .map(|_| {
                        let o = rng.gen_range(0..=order);
                        (rng.gen_range(0..64), (0..o).map(|_| rng.gen_range(0..dim)).collect())
                    })
                    .collect();
                (rng.gen_range(-4..=4), fs)
            })
            .collect(),
    )
}

pub fn random_family(rng: &mut impl Rng, dim: u8, order: usize) -> Vec<(Vec<u8>, Recipe)> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|_| {
            let o = rng.gen_range(0..=order);
            let jet = (0..o).map(|_| rng.gen_range(0..dim)).collect();
            (jet, random_recipe(rng, dim, 2, 3, 2))
        })
        .collect()
}
