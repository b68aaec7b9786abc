//! Acceptance criteria 1–9, one pass/fail line each.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gvc_core::check::{all_pass, Outcome};
use gvc_core::gauge::{brst_operator, check_brst_nilpotent, check_gauge_symmetry, compare, gauge_from_ni, ni_from_gauge};
use gvc_core::jet::total_derivative;
use gvc_core::mutate::{flip, negative_control, spread};
use gvc_core::noether::{
    assemble_kt, check_extended_symmetry, check_kt_nilpotent, verify_ni, verify_stage_ni,
};
use gvc_core::parser::{parse_expr_in, parse_theory, TheoryFile};
use gvc_core::report::{verify, Check};
use gvc_core::theories::{builtin, catalog, cs_triviality_demo, StructureConstants};
use gvc_core::theory::Theory;
use gvc_core::variational::{eta, euler_lagrange, euler_lagrange_side, pairing, triviality, variational_derivative, Side};
use gvc_core::{GradedPoly, MultiIndex, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Res = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(name: &str) -> TheoryFile {
    builtin(name).unwrap().load().unwrap()
}

fn failed(outs: &[Outcome]) -> String {
    let bad: Vec<_> = outs.iter().filter(|o| !o.passed()).map(|o| format!("{} ({})", o.label, o.status.as_str())).collect();
    bad.join("; ")
}

fn all_ok(outs: &[Outcome], what: &str) -> Result<(), String> {
    ensure(all_pass(outs), format!("{what}: {}", failed(outs)))
}

fn c1_eta() -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 240;
    for i in 0..n {
        let d = 1 + (i % 3) as u8;
        let reg = space(d);
        let g = alphabet(reg, false);
        let f: BTreeMap<MultiIndex, GradedPoly> =
            family(reg, &g, &random_family(&mut rng, d, 2)).into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let phi = random_recipe(&mut rng, d, 2, 3, 2).build(reg, &g);
        let e = eta(&f, reg).map_err(|e| e.to_string())?;
        let back: BTreeMap<_, _> = eta(&e, reg).unwrap().into_iter().filter(|(_, p)| !p.is_zero()).collect();
        ensure(back == f, format!("involution fails on tuple {i} (n = {d})"))?;
        let mut lhs = GradedPoly::zero();
        for (lam, fl) in &f {
            let t = gvc_core::jet::iterated_derivative(&(fl * &phi), lam, reg).unwrap();
            if lam.order() % 2 == 1 {
                lhs -= t
            } else {
                lhs += &t
            }
        }
        let mut rhs = GradedPoly::zero();
        for (lam, el) in &e {
            rhs += &(el * &gvc_core::jet::iterated_derivative(&phi, lam, reg).unwrap());
        }
        ensure(lhs == rhs, format!("adjunction fails on tuple {i} (n = {d})"))?;
    }
    Ok(format!("involution and adjunction exact on {n} tuples, n <= 3, order <= 2"))
}

fn c2_euler() -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 150;
    let mut nonzero = 0;
    for i in 0..n {
        let d = 1 + (i % 3) as u8;
        let reg = space(d);
        let l = random_recipe(&mut rng, d, 2, 4, 3).build(reg, &alphabet(reg, false));
        let div = total_derivative(&l, (i % d as usize) as u8, reg).unwrap();
        nonzero += usize::from(!div.is_zero());
        for side in [Side::Left, Side::Right] {
            let el = euler_lagrange_side(&div, reg, side, |_| true).unwrap();
            ensure(el.is_empty(), format!("density {i}: Euler-Lagrange of a total derivative is nonzero"))?;
        }
    }
    Ok(format!("EL(d_l L) = 0 on {n} densities ({nonzero} nonzero divergences), both sides"))
}

fn standard(th: &Theory) -> Result<(Vec<Outcome>, Vec<Outcome>), String> {
    let kt = assemble_kt(th).map_err(|e| e.to_string())?;
    let ni = verify_ni(th, &kt).map_err(|e| e.to_string())?;
    let g = gauge_from_ni(th).map_err(|e| e.to_string())?;
    let b = check_brst_nilpotent(&brst_operator(th, &g), th.reg()).map_err(|e| e.to_string())?;
    Ok((ni, b))
}

fn gauge_matches(th: &Theory) -> Result<(), String> {
    let g = gauge_from_ni(th).map_err(|e| e.to_string())?;
    let w = th.gauge.as_ref().ok_or("no written gauge operator")?;
    let o = compare(w, &g.total(), th.reg(), "gauge");
    ensure(o.passed(), "gauge operator from NI differs from the written one")
}

fn c3_ym() -> Res {
    let f = load("ym4");
    let th = &f.theory;
    let (ni, b) = standard(th)?;
    all_ok(&ni, "NI")?;
    gauge_matches(th)?;
    all_ok(&b, "BRST")?;
    let src = builtin("ym4").unwrap().source.replace("brst c[r] = -1/2*", "brst c[r] = -1*");
    let neg = parse_theory(&src).unwrap().theory;
    let (_, nb) = standard(&neg)?;
    let bad: Vec<_> = nb.iter().filter(|o| !o.passed()).map(|o| o.label.as_str()).collect();
    ensure(
        bad.len() == 1 && bad[0].contains("degree 2"),
        format!("negative control should fail only in degree 2, failed: {bad:?}"),
    )?;
    Ok(format!("{} NI residuals 0; gauge from NI matches; b^2 = 0; -1 for -1/2 fails in degree 2 only", ni.len()))
}

fn c4_super() -> Res {
    let osp = StructureConstants::osp12();
    osp.validate().map_err(|e| e.to_string())?;
    let wrong = StructureConstants::osp12_with(Q::new(-1, 2));
    ensure(wrong.is_err(), "inconsistent osp(1|2) table was accepted")?;
    let f = load("ym4_osp12");
    let th = &f.theory;
    let (ni, b) = standard(th)?;
    all_ok(&ni, "NI")?;
    gauge_matches(th)?;
    all_ok(&b, "BRST")?;
    let unsigned = builtin("ym4_osp12").unwrap().source.replace("sg[i]*", "");
    let (_, nb) = standard(&parse_theory(&unsigned).unwrap().theory)?;
    ensure(!all_pass(&nb), "BRST without the parity sign should not be nilpotent")?;
    Ok(format!(
        "osp(1|2) ({} even, {} odd) passes antisymmetry and Jacobi, a wrong table is rejected; {} NI residuals 0; b^2 = 0 with (-1)^[i], fails without",
        osp.parity.iter().filter(|p| !**p).count(),
        osp.parity.iter().filter(|p| **p).count(),
        ni.len()
    ))
}

fn c5_cs() -> Res {
    let f = load("cs3");
    let th = &f.theory;
    let reg = th.reg();
    let el = euler_lagrange(&th.lagrangian, reg).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for a in reg.base_vars_where(|d| d.name == "a") {
        let (r, l) = (a.comp(0), a.comp(1));
        let want =
            parse_expr_in(&format!("sum(p:R,b:n,g:n){{h[{r},p]*eps[{l},b,g]*F[p,b,g]}}"), reg, &f.scope).unwrap();
        ensure(el.get(&a).cloned().unwrap_or_default() == want, format!("E^{l}_{r} differs from h eps F"))?;
        checked += 1;
    }
    let (ni, b) = standard(th)?;
    all_ok(&ni, "NI")?;
    let demo = cs_triviality_demo().map_err(|e| e.to_string())?;
    all_ok(&demo, "triviality demo")?;
    let certified = demo.iter().filter(|o| o.label.contains("certified trivial")).count();

    let fb = load("cs3b");
    let elb = euler_lagrange(&fb.theory.lagrangian, fb.theory.reg()).map_err(|e| e.to_string())?;
    let same = el.iter().all(|(a, e)| {
        let name = reg.display_var(*a).to_string();
        let ab = fb.theory.reg().base_vars_where(|d| d.name == "a").into_iter().find(|v| fb.theory.reg().display_var(*v).to_string() == name);
        ab.and_then(|v| elb.get(&v)).map(|p| p.display(fb.theory.reg()).to_string()) == Some(e.display(reg).to_string())
    });
    ensure(same && elb.len() == el.len(), "background terms change the Euler-Lagrange operator")?;

    all_ok(&b, "BRST (with ghost transport of c)")?;
    let printed = builtin("cs3").unwrap().source.replace(" - sum(m:n){cx[m]*c[r;m]}", "");
    let (_, pb) = standard(&parse_theory(&printed).unwrap().theory)?;
    let bad: Vec<_> = pb.iter().filter(|o| !o.passed()).map(|o| o.label.as_str()).collect();
    ensure(bad.len() == 1 && bad[0].contains("degree 2"), format!("unexpected result for the uncorrected BRST: {bad:?}"))?;
    Ok(format!(
        "E = h eps F on {checked} components; {} NI residuals 0 in both presentations; {certified} trivial identities certified; background adds 0 to E; b^2 = 0 once c carries -c^m c^r_m (without it: degree 2 fails)",
        ni.len()
    ))
}

fn c6_grav() -> Res {
    let f = load("grav4");
    let th = &f.theory;
    let reg = th.reg();
    ensure(reg.cap() == 3, format!("jet order {} instead of 3", reg.cap()))?;
    let el = euler_lagrange(&th.lagrangian, reg).map_err(|e| e.to_string())?;
    ensure(!el.is_empty(), "test density is variationally trivial")?;
    let u = th.gauge.clone().ok_or("no gauge operator")?;
    let p = pairing(&u, &el);
    let t = triviality(&p, reg).map_err(|e| e.to_string())?;
    ensure(t.residual.is_empty(), "u is not a variational symmetry of the test density")?;
    // identities read off u agree with the transcribed ones
    let derived = ni_from_gauge(&u, reg).map_err(|e| e.to_string())?;
    for r in &derived {
        let written = th.record(r.ghost).ok_or("missing record")?;
        ensure(written.delta == r.delta, format!("NI for {} differs from the one read off u", reg.display_var(r.ghost)))?;
        let e = variational_derivative(&p, r.ghost, Side::Left, reg).map_err(|e| e.to_string())?;
        ensure(e.is_zero(), "variational derivative of u^A E_A by a ghost is nonzero")?;
    }
    let (ni, b) = standard(th)?;
    all_ok(&ni, "NI")?;
    gauge_matches(th)?;
    all_ok(&b, "BRST")?;
    Ok(format!(
        "test density has {} nonzero EL components; u is a variational symmetry; {} NI read off u equal the transcription, residual 0; b^2 = 0 at jet order 3",
        el.len(),
        ni.len()
    ))
}

fn chain(th: &Theory) -> Result<(usize, usize), String> {
    let kt = assemble_kt(th).map_err(|e| e.to_string())?;
    let ni = verify_ni(th, &kt).map_err(|e| e.to_string())?;
    all_ok(&ni, "NI")?;
    let top = th.max_stage().unwrap_or(0);
    let mut stages = 0;
    for k in 1..=top {
        let recs: Vec<_> = th.records_of_stage(k).collect();
        ensure(recs.iter().all(|r| r.certificate(th.reg()).is_zero()), "stage identity with h != 0")?;
        let outs = verify_stage_ni(th, &kt, k).map_err(|e| e.to_string())?;
        all_ok(&outs, &format!("stage {k}"))?;
        stages += recs.len();
    }
    ensure(check_kt_nilpotent(th, &kt).map_err(|e| e.to_string())?.passed(), "KT not nilpotent")?;
    ensure(check_extended_symmetry(th, &kt).map_err(|e| e.to_string())?.passed(), "extended Lagrangian not KT-invariant")?;
    ensure(th.gamma.is_zero(), "BF needs no BRST terms")?;
    let g = gauge_from_ni(th).map_err(|e| e.to_string())?;
    for k in 0..g.stages.len() {
        ensure(check_gauge_symmetry(th, &g, &kt, k).map_err(|e| e.to_string())?.passed(), format!("gauge stage {k}"))?;
    }
    let b = check_brst_nilpotent(&brst_operator(th, &g), th.reg()).map_err(|e| e.to_string())?;
    all_ok(&b, "b = u")?;
    Ok((ni.len(), stages))
}

fn c7_bf() -> Res {
    let (n0, s0) = chain(&load("bf").theory)?;
    let (n1, s1) = chain(&load("bf_4_1_2").theory)?;
    Ok(format!(
        "n=3,p=q=1: {n0} NI, {s0} stage identities; n=4,p=1,q=2: {n1} NI, {s1} stage-1 identity; KT nilpotent, L_e invariant, b = u nilpotent"
    ))
}

/// KT nilpotency against the per-record checks; BRST against off-shell stage conditions.
fn cross(th: &Theory) -> Result<(bool, bool), String> {
    let kt = assemble_kt(th).map_err(|e| e.to_string())?;
    let mut records = verify_ni(th, &kt).map_err(|e| e.to_string())?;
    for k in 1..=th.max_stage().unwrap_or(0) {
        records.extend(verify_stage_ni(th, &kt, k).map_err(|e| e.to_string())?);
    }
    let kt_ok = check_kt_nilpotent(th, &kt).map_err(|e| e.to_string())?.passed();
    ensure(kt_ok == all_pass(&records), format!("{}: KT nilpotency {kt_ok} but record checks {}", th.name, all_pass(&records)))?;
    let g = gauge_from_ni(th).map_err(|e| e.to_string())?;
    let b_ok = all_pass(&check_brst_nilpotent(&brst_operator(th, &g), th.reg()).map_err(|e| e.to_string())?);
    if b_ok {
        let mut off = th.clone();
        off.alpha.clear();
        let split = match &th.gauge {
            Some(w) => gvc_core::gauge::GaugeOperator::split(w, th.reg()),
            None => g,
        };
        for k in 1..split.stages.len() {
            let o = check_gauge_symmetry(&off, &split, &kt, k).map_err(|e| e.to_string())?;
            ensure(o.passed(), format!("{}: BRST nilpotent but stage {k} condition fails off shell", th.name))?;
        }
    }
    Ok((kt_ok, b_ok))
}

fn c8_cross() -> Res {
    let mut cases = 0;
    let mut kt_fail = 0;
    let mut b_pass = 0;
    for fx in catalog() {
        let mut sources = vec![fx.source.to_string()];
        if let Some(s) = negative_control(fx.source) {
            sources.push(flip(fx.source, &s));
        }
        if fx.name != "grav4" {
            for s in spread(fx.source, &["ni"], 4) {
                sources.push(flip(fx.source, &s));
            }
        }
        for src in sources {
            let th = parse_theory(&src).map_err(|e| e.to_string())?.theory;
            let (k, b) = cross(&th)?;
            cases += 1;
            kt_fail += usize::from(!k);
            b_pass += usize::from(b);
        }
    }
    Ok(format!(
        "{cases} theories (fixtures and sign mutants): KT nilpotency agrees with the record checks ({kt_fail} non-nilpotent); {b_pass} nilpotent BRST operators satisfy every off-shell stage condition"
    ))
}

fn c9_mutants() -> Res {
    let mut summary = Vec::new();
    let mut total = 0;
    for fx in catalog() {
        let checks: Vec<Check> = if fx.brst_nilpotent {
            Check::ALL.to_vec()
        } else {
            Check::ALL.into_iter().filter(|c| !matches!(c, Check::Brst | Check::Antibracket)).collect()
        };
        let base = fx.load().map_err(|e| e.to_string())?;
        ensure(verify(&base.theory, &checks, 0).unwrap().passed(), format!("{} fails before mutation", fx.name))?;
        let sites = spread(fx.source, &["ni", "gauge", "brst"], 8);
        ensure(sites.len() >= 5, format!("{}: only {} mutation sites", fx.name, sites.len()))?;
        for s in &sites {
            let caught = match parse_theory(&flip(fx.source, s)) {
                Ok(t) => !verify(&t.theory, &checks, 0).unwrap().passed(),
                Err(_) => true,
            };
            ensure(caught, format!("{}: sign mutation at {}:{} ({}) not detected", fx.name, s.line, s.col, s.kind))?;
        }
        total += sites.len();
        summary.push(format!("{} {}", fx.name, sites.len()));
    }
    Ok(format!("{total} sign mutations all detected ({})", summary.join(", ")))
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, f64, fn() -> Res);
    let criteria: [Criterion; 9] = [
        (1, "eta calculus", 30.0, c1_eta),
        (2, "Euler kernel", 10.0, c2_euler),
        (3, "Yang-Mills su(2)", 60.0, c3_ym),
        (4, "Yang-Mills osp(1|2)", 60.0, c4_super),
        (5, "Chern-Simons n=3", 120.0, c5_cs),
        (6, "gravitation n=4", 300.0, c6_grav),
        (7, "BF chain", 60.0, c7_bf),
        (8, "cross-equivalence", f64::INFINITY, c8_cross),
        (9, "mutation harness", f64::INFINITY, c9_mutants),
    ];
    let mut ok = true;
    for (id, name, budget, f) in criteria {
        let t0 = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        let within = secs < budget;
        let pass = r.is_ok() && within;
        ok &= pass;
        let budget = if budget.is_finite() { format!(" / {budget:.0}s") } else { String::new() };
        let detail = match r {
            Ok(s) if within => s,
            Ok(s) => format!("over time budget; {s}"),
            Err(e) => e,
        };
        println!("criterion {id} {} [{secs:.2}s{budget}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
