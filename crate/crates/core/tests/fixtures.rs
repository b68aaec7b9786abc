use gvc_core::gauge::{check_brst_nilpotent, brst_operator, gauge_from_ni};
use gvc_core::report::{verify, Check};
use gvc_core::theories::{build_fixture, catalog, cs_triviality_demo, fixture_source, FixtureParams};

#[test]
fn every_fixture_passes_its_declared_checks() {
    for f in catalog() {
        let th = f.load().unwrap().theory;
        let mut checks = vec![Check::Ni, Check::Stages, Check::Kt, Check::Extended, Check::Gauge, Check::Triviality];
        if f.brst_nilpotent {
            checks.extend([Check::Brst, Check::Antibracket]);
        }
        let r = verify(&th, &checks, 5).unwrap();
        assert!(r.passed(), "{}\n{}", f.name, r.to_text());
    }
}

#[test]
fn on_shell_stage_toy_has_a_degree_one_brst_defect() {
    let th = gvc_core::theories::builtin("stages").unwrap().load().unwrap().theory;
    let g = gauge_from_ni(&th).unwrap();
    let outs = check_brst_nilpotent(&brst_operator(&th, &g), th.reg()).unwrap();
    let bad: Vec<_> = outs.iter().filter(|o| !o.passed()).map(|o| o.label.clone()).collect();
    assert_eq!(bad, ["BRST nilpotency, degree 1 (gauge conditions)"]);
}

#[test]
fn cs_demo_passes() {
    for o in cs_triviality_demo().unwrap() {
        assert!(o.passed(), "{}: {:?}", o.label, o.note);
    }
}

#[test]
fn bf_generator_builds_longer_chains() {
    // n = 5, p = 1, q = 3: B has two reducibility stages
    let th = build_fixture(&FixtureParams::Bf { n: 5, p: 1, q: 3 }).unwrap().theory;
    assert_eq!(th.max_stage(), Some(2));
    let r = verify(&th, &Check::ALL, 5).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    let src = fixture_source(&FixtureParams::Bf { n: 5, p: 1, q: 3 }).unwrap();
    assert!(src.contains("ghost 2 x2 odd;"), "{src}");
}
