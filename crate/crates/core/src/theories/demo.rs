//! Chern–Simons identities: two presentations of the diffeomorphism identity,
//! the ghost rewriting `c′ = c − a_μ c^μ`, and triviality of `Δ′_μ`.

use crate::check::{Outcome, Status};
use crate::error::{Error, Result};
use crate::gauge::{compare, ni_from_gauge};
use crate::noether::{assemble_kt, check_ni_trivial, solve_trivial_certificate, verify_ni};
use crate::parser::{parse_expr_in, parse_theory, TheoryFile};
use crate::theory::Theory;

use super::{fixture_source, FixtureParams, StructureConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsVariant {
    /// cs3 with `c` replaced by `c′ + a_μ cx^μ`; ghost `cp` is `c′`.
    Rewritten,
    /// Abelian Chern–Simons on five dimensions.
    Abelian5,
}

pub fn cs_variant_source(v: CsVariant) -> String {
    match v {
        CsVariant::Rewritten => {
            let base = fixture_source(&FixtureParams::ChernSimons {
                algebra: StructureConstants::su2(),
                background: false,
            })
            .expect("su(2) is valid");
            let mut out = String::new();
            for line in base.lines() {
                if line.starts_with("name ") {
                    out.push_str("name cs3_rewritten;\n");
                } else if line.starts_with("ghost 0 c[R]") {
                    out.push_str("ghost 0 cp[R] odd by P[0];\n");
                } else if line.starts_with("ni ") || line.starts_with("brst ") || line.starts_with('#') {
                    continue;
                } else {
                    out.push_str(line);
                    out.push('\n');
                    if line.starts_with("def F") {
                        out.push_str("def c[r] = cp[r] + sum(m:n){a[r,m]*cx[m]};\n");
                    }
                }
            }
            out
        }
        CsVariant::Abelian5 => "\
name cs5;
dim 5;
jet_order 3;
const eps[n,n,n,n,n] = levi;

field a[n] even;
ghost 0 c odd;
ghost 0 cx[n] odd;

def F[l,m] = a[m;l] - a[l;m];

L = 1/3*sum(x:n,y:n,z:n,u:n,v:n){eps[x,y,z,u,v]*a[x]*a[z;y]*a[v;u]};

ni c = -sum(l:n){a~[l;l]};
ni cx[m] = sum(l:n){-a[l;m]*a~[l] + d(l){a[m]*a~[l]}};

gauge a[l] = c[;l] - sum(m:n){cx[m;l]*a[m] + cx[m]*a[l;m]};

trivial D[m] = sum(l:n){F[l,m]*a~[l]};
"
        .to_string(),
    }
}

fn load(src: &str) -> Result<TheoryFile> {
    parse_theory(src)
}

fn triviality(th: &Theory, label: &str, expect_found: bool) -> Result<Vec<Outcome>> {
    let kt = assemble_kt(th)?;
    let mut out = Vec::new();
    for t in &th.trivial {
        let l = if expect_found {
            format!("{label}: {} certified trivial", t.name)
        } else {
            format!("{label}: {} not certified by the quadratic ansatz", t.name)
        };
        let o = match solve_trivial_certificate(th, &kt, &t.delta)? {
            Some(h) if check_ni_trivial(th, &kt, &t.delta, &h)? => {
                let o = Outcome::pass(l).with_note(format!("H = {}", h.display(th.reg())));
                if expect_found {
                    o
                } else {
                    o.with_status(Status::Fail)
                }
            }
            Some(_) => Outcome::pass(l).with_status(Status::Fail).with_note("certificate does not verify"),
            None if expect_found => {
                Outcome::pass(l).with_status(Status::Fail).with_note("no certificate in the quadratic antifield ansatz")
            }
            None => Outcome::pass(l).with_note("non-trivial by this ansatz"),
        };
        out.push(o);
    }
    Ok(out)
}

/// Run every step and report one outcome per check.
pub fn cs_triviality_demo() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();

    let orig = load(&fixture_source(&FixtureParams::ChernSimons {
        algebra: StructureConstants::su2(),
        background: false,
    })?)?;
    let th = &orig.theory;
    let kt = assemble_kt(th)?;
    for o in verify_ni(th, &kt)? {
        out.push(Outcome { label: format!("original presentation: {}", o.label), ..o });
    }

    // rewritten ghosts: identities read off the gauge operator
    let rw = load(&cs_variant_source(CsVariant::Rewritten))?;
    let mut th2 = rw.theory.clone();
    let u2 = th2.gauge.clone().ok_or_else(|| Error::Validation("rewritten theory has no gauge".into()))?;
    let reg2 = th2.registry.clone();
    th2.records = ni_from_gauge(&u2, &reg2)?;
    let kt2 = assemble_kt(&th2)?;
    for o in verify_ni(&th2, &kt2)? {
        out.push(Outcome { label: format!("rewritten presentation: {}", o.label), ..o });
    }

    // u = −c^r_{pq} c′^p a^q_λ + c′^r_λ + cx^μ 𝓕^r_{λμ}
    let mut expected = u2.clone();
    let mut nontrivial = u2.clone();
    let cx = reg2.lookup("cx").expect("cx declared");
    for (a, _) in u2.components() {
        let r = a.comp(0);
        let l = a.comp(1);
        let src = format!(
            "-sum(p:R,q:R){{f[{r},p,q]*cp[p]*a[q,{l}]}} + cp[{r};{l}] + sum(m:n){{cx[m]*F[{r},{l},m]}}"
        );
        expected.set(*a, parse_expr_in(&src, &reg2, &rw.scope)?);
        let keep = |m: &crate::algebra::Monomial| m.vars().all(|v| v.sym() != cx);
        nontrivial.set(*a, u2.component(*a).filter_terms(keep));
    }
    out.push(compare(&expected, &u2, &reg2, "rewritten gauge operator"));
    let mut ym = u2.clone();
    for (a, _) in u2.components() {
        let src = format!("-sum(p:R,q:R){{f[{0},p,q]*cp[p]*a[q,{1}]}} + cp[{0};{1}]", a.comp(0), a.comp(1));
        ym.set(*a, parse_expr_in(&src, &reg2, &rw.scope)?);
    }
    out.push(compare(&ym, &nontrivial, &reg2, "non-trivial gauge symmetry"));

    // the cx identities of the rewritten presentation are Δ′_μ
    let mut res = Vec::new();
    for t in &th2.trivial {
        let m = t.name.trim_start_matches("D[").trim_end_matches(']');
        let (g, _) = reg2.var("cx", &[m.parse().unwrap_or(0)], Default::default())?.expect("cx component");
        let d = th2.record(g).map(|r| r.delta.clone()).unwrap_or_default();
        res.push((t.name.clone(), &d - &t.delta));
    }
    out.push(Outcome::from_residuals("rewritten diffeomorphism identities equal the trivial ones", res));

    out.extend(triviality(th, "n = 3", true)?);
    let five = load(&cs_variant_source(CsVariant::Abelian5))?;
    out.extend(triviality(&five.theory, "n = 5", false)?);
    Ok(out)
}
