//! Noether identities, the Koszul–Tate operator and the extended Lagrangian.
//!
//! `δ_KT` is stored as a derivation on antifield generators
//! (`s̄_A ↦ 𝓔_A`, `c̄_r ↦ Δ_r`) and always applied from the right.

use rayon::prelude::*;

use crate::algebra::{GradedPoly, Registry, SymbolKind, Var};
use crate::check::{Outcome, Status};
use crate::error::Result;
use crate::jet::EvolutionaryDerivation;
use crate::linsolve::solve_combination;
use crate::theory::Theory;
use crate::variational::{euler_lagrange, is_total_divergence};

pub fn assemble_kt(th: &Theory) -> Result<EvolutionaryDerivation> {
    let reg = th.reg();
    let mut kt = EvolutionaryDerivation::new(true, 0);
    for (a, e) in euler_lagrange(&th.lagrangian, reg)? {
        if reg.kind(a) == SymbolKind::Field {
            kt.set(reg.antifield(a).expect("fields have antifields"), e);
        }
    }
    for r in &th.records {
        kt.set(reg.antifield(r.ghost).expect("ghosts have antifields"), r.delta.clone());
    }
    Ok(kt)
}

fn label(reg: &Registry, v: Var) -> String {
    reg.display_var(v).to_string()
}

/// `Σ Δ_r^{A,Λ} d_Λ𝓔_A` for every stage-0 record.
pub fn verify_ni(th: &Theory, kt: &EvolutionaryDerivation) -> Result<Vec<Outcome>> {
    let reg = th.reg();
    th.records_of_stage(0)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|r| {
            let res = kt.apply_right(&r.delta, reg)?;
            let name = label(reg, r.ghost);
            Ok(Outcome::from_residuals(format!("NI {name}"), vec![(name, res)]))
        })
        .collect()
}

/// Stage-k identities: the linear part composed with the stage-(k−1)
/// records, plus `δ̄` of the quadratic certificate, must vanish.
pub fn verify_stage_ni(th: &Theory, kt: &EvolutionaryDerivation, k: u8) -> Result<Vec<Outcome>> {
    let reg = th.reg();
    let recs: Vec<_> = th.records_of_stage(k).collect();
    if recs.is_empty() {
        return Ok(vec![Outcome::pass(format!("stage {k}")).with_note("no identities at this stage")]);
    }
    recs.par_iter()
        .map(|r| {
            let name = label(reg, r.ghost);
            let lhs = kt.apply_right(&r.linear(reg), reg)?;
            let h = r.certificate(reg);
            let res = &lhs + &kt.apply_right(&h, reg)?;
            let out = Outcome::from_residuals(format!("stage {k} NI {name}"), vec![(name, res)]);
            Ok(if !out.passed() && h.is_zero() {
                out.with_status(Status::UnverifiedOnShell)
                    .with_note("on-shell identity unverified without certificate")
            } else {
                out
            })
        })
        .collect()
}

/// Apply `δ_KT` to each of its own components.
pub fn check_kt_nilpotent(th: &Theory, kt: &EvolutionaryDerivation) -> Result<Outcome> {
    let reg = th.reg();
    let comps: Vec<_> = kt.components().collect();
    let residual = comps
        .par_iter()
        .map(|(a, p)| Ok((label(reg, **a), kt.apply_right(p, reg)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_residuals("KT nilpotency", residual))
}

/// `L_e = L + Σ c^r Δ_r`, ghosts on the left.
pub fn extended_lagrangian(th: &Theory) -> GradedPoly {
    let reg = th.reg();
    let mut le = th.lagrangian.clone();
    for r in &th.records {
        le += &GradedPoly::var(reg, r.ghost) * &r.delta;
    }
    le
}

/// `δ_KT(L_e)` must be variationally trivial.
pub fn check_extended_symmetry(th: &Theory, kt: &EvolutionaryDerivation) -> Result<Outcome> {
    let reg = th.reg();
    let image = kt.apply_right(&extended_lagrangian(th), reg)?;
    let ok = image.is_zero() || is_total_divergence(&image, reg)?;
    let label = "KT symmetry of extended Lagrangian";
    Ok(if ok {
        Outcome::pass(label)
    } else {
        Outcome::from_residuals(label, vec![("L_e".into(), image)])
    })
}

/// True iff `Δ′ = δ̄(H)`.
pub fn check_ni_trivial(th: &Theory, kt: &EvolutionaryDerivation, delta: &GradedPoly, h: &GradedPoly) -> Result<bool> {
    Ok(&kt.apply_right(h, th.reg())? == delta)
}

/// Search `H = Σ x_{AB} s̄_A s̄_B` over zero-order field antifields with
/// constant rational coefficients such that `δ̄(H) = Δ′`.
pub fn solve_trivial_certificate(
    th: &Theory,
    kt: &EvolutionaryDerivation,
    delta: &GradedPoly,
) -> Result<Option<GradedPoly>> {
    let reg = th.reg();
    let bars: Vec<Var> = reg
        .base_vars_where(|d| d.kind == SymbolKind::Field)
        .into_iter()
        .filter_map(|v| reg.antifield(v))
        .collect();
    let mut ansatz = Vec::new();
    for (i, a) in bars.iter().enumerate() {
        for b in &bars[i..] {
            if a == b && a.is_odd() {
                continue;
            }
            ansatz.push(&GradedPoly::var(reg, *a) * &GradedPoly::var(reg, *b));
        }
    }
    let images = ansatz
        .par_iter()
        .map(|h| kt.apply_right(h, reg))
        .collect::<Result<Vec<_>>>()?;
    Ok(solve_combination(&images, delta).map(|x| {
        ansatz.iter().zip(&x).filter(|(_, c)| !c.is_zero()).map(|(h, c)| h.scale(c)).sum()
    }))
}
