//! Named checks over a theory and the verification report.

use std::fmt::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::check::{Outcome, Status};
use crate::error::{Error, Result};
use crate::gauge::{
    brst_operator, check_brst_nilpotent, check_gauge_symmetry, compare, gamma1, gauge_from_ni, lie_antibracket_defect,
};
use crate::jet::EvolutionaryDerivation;
use crate::noether::{
    assemble_kt, check_extended_symmetry, check_kt_nilpotent, check_ni_trivial, solve_trivial_certificate, verify_ni,
    verify_stage_ni,
};
use crate::theory::Theory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Ni,
    Stages,
    Kt,
    Extended,
    Gauge,
    Brst,
    Antibracket,
    Triviality,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Ni,
        Check::Stages,
        Check::Kt,
        Check::Extended,
        Check::Gauge,
        Check::Brst,
        Check::Antibracket,
        Check::Triviality,
    ];
    pub const DEFAULT: [Check; 4] = [Check::Ni, Check::Kt, Check::Gauge, Check::Brst];

    pub fn name(self) -> &'static str {
        match self {
            Check::Ni => "ni",
            Check::Stages => "stages",
            Check::Kt => "kt",
            Check::Extended => "extended",
            Check::Gauge => "gauge",
            Check::Brst => "brst",
            Check::Antibracket => "antibracket",
            Check::Triviality => "triviality",
        }
    }

    /// Comma-separated names; `all` selects every check.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown check `{s}`")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub target: String,
    pub terms: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub check: String,
    pub label: String,
    pub status: String,
    pub residual: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Wall time of the whole check, shared by its entries.
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theory: String,
    /// Description of the applied source mutation, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<String>,
    pub status: String,
    pub checks: Vec<String>,
    pub entries: Vec<Entry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass.as_str()
    }

    /// Deterministic text form; timings are omitted.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "theory {}", self.theory).unwrap();
        if let Some(m) = &self.mutation {
            writeln!(s, "mutation {m}").unwrap();
        }
        writeln!(s, "checks {}", self.checks.join(",")).unwrap();
        for e in &self.entries {
            writeln!(s, "[{}] {}: {}", e.check, e.label, e.status).unwrap();
            if let Some(n) = &e.note {
                writeln!(s, "    note: {n}").unwrap();
            }
            for r in &e.residual {
                writeln!(s, "    residual {} ({} terms): {}", r.target, r.terms, r.value).unwrap();
            }
        }
        writeln!(s, "overall {}", self.status).unwrap();
        s
    }
}

/// State shared between checks.
struct Ctx<'a> {
    th: &'a Theory,
    kt: EvolutionaryDerivation,
}

fn run_check(ctx: &Ctx, check: Check) -> Result<Vec<Outcome>> {
    let th = ctx.th;
    let reg = th.reg();
    let kt = &ctx.kt;
    Ok(match check {
        Check::Ni => {
            let out = verify_ni(th, kt)?;
            if out.is_empty() {
                vec![Outcome::pass("NI").with_note("no identities declared")]
            } else {
                out
            }
        }
        Check::Stages => {
            let top = th.max_stage().unwrap_or(0);
            if top == 0 {
                vec![Outcome::pass("higher-stage NI").with_note("no higher-stage identities")]
            } else {
                let mut out = Vec::new();
                for k in 1..=top {
                    out.extend(verify_stage_ni(th, kt, k)?);
                }
                out
            }
        }
        Check::Kt => vec![check_kt_nilpotent(th, kt)?],
        Check::Extended => vec![check_extended_symmetry(th, kt)?],
        Check::Gauge => {
            let g = gauge_from_ni(th)?;
            let mut out = Vec::new();
            if let Some(w) = &th.gauge {
                out.push(compare(w, &g.total(), reg, "gauge operator from NI matches the written one"));
            }
            for k in 0..g.stages.len() {
                out.push(check_gauge_symmetry(th, &g, kt, k)?);
            }
            if out.is_empty() {
                out.push(Outcome::pass("gauge").with_note("no identities, no gauge operator"));
            }
            out
        }
        Check::Brst => {
            let g = gauge_from_ni(th)?;
            check_brst_nilpotent(&brst_operator(th, &g), reg)?
        }
        Check::Antibracket => {
            let g = gauge_from_ni(th)?;
            let u = th.gauge.clone().unwrap_or_else(|| g.total());
            let defect = lie_antibracket_defect(&u, &gamma1(th), reg)?;
            let res = defect.into_iter().map(|(a, p)| (reg.display_var(a).to_string(), p)).collect();
            vec![Outcome::from_residuals("closure of the gauge algebra on fields", res)]
        }
        Check::Triviality => {
            if th.trivial.is_empty() {
                return Ok(vec![Outcome::pass("triviality").with_note("no identities claimed trivial")]);
            }
            let mut out = Vec::new();
            for t in &th.trivial {
                let label = format!("{} trivial", t.name);
                let o = match &t.witness {
                    Some(h) if check_ni_trivial(th, kt, &t.delta, h)? => Outcome::pass(label).with_note("given witness"),
                    Some(h) => {
                        let r = &kt.apply_right(h, reg)? - &t.delta;
                        Outcome::from_residuals(label, vec![(t.name.clone(), r)])
                    }
                    None => match solve_trivial_certificate(th, kt, &t.delta)? {
                        Some(h) => Outcome::pass(label).with_note(format!("H = {}", h.display(reg))),
                        None => Outcome::pass(label)
                            .with_status(Status::Fail)
                            .with_note("no certificate quadratic in field antifields"),
                    },
                };
                out.push(o);
            }
            out
        }
    })
}

/// Run the selected checks; entries are ordered by check name.
pub fn verify(th: &Theory, checks: &[Check], max_terms: usize) -> Result<VerificationReport> {
    let ctx = Ctx { th, kt: assemble_kt(th)? };
    let reg = th.reg();
    let mut checks = checks.to_vec();
    checks.sort_by_key(|c| c.name());
    checks.dedup();
    let mut entries = Vec::new();
    for &c in &checks {
        let t0 = Instant::now();
        let outs = run_check(&ctx, c)?;
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        for o in outs {
            entries.push(Entry {
                check: c.name().to_string(),
                label: o.label,
                status: o.status.as_str().to_string(),
                residual: o
                    .residual
                    .iter()
                    .map(|(t, p)| Residual {
                        target: t.clone(),
                        terms: p.len(),
                        value: p.display(reg).truncate(max_terms).to_string(),
                    })
                    .collect(),
                note: o.note,
                wall_ms: ms,
            });
        }
    }
    let ok = entries.iter().all(|e| e.status == Status::Pass.as_str());
    Ok(VerificationReport {
        theory: th.name.clone(),
        mutation: None,
        status: if ok { Status::Pass } else { Status::Fail }.as_str().to_string(),
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        entries,
    })
}

/// True iff every outcome passes; shorthand for harness code.
pub fn passes(th: &Theory, checks: &[Check]) -> Result<bool> {
    Ok(verify(th, checks, 0)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lists() {
        assert_eq!(Check::parse_list("brst,ni,ni").unwrap(), vec![Check::Ni, Check::Brst]);
        assert_eq!(Check::parse_list("all").unwrap().len(), 8);
        assert!(Check::parse_list("nope").is_err());
    }
}
