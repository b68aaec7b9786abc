//! Golden fixtures: generators for the theory files under `theories/` and
//! the immutable catalog of shipped sources.

mod algebra;
mod demo;

use std::fmt::Write;

pub use algebra::StructureConstants;
pub use demo::{cs_triviality_demo, cs_variant_source, CsVariant};

use crate::error::{Error, Result};
use crate::parser::{parse_theory, TheoryFile};
use crate::rational::Q;

/// Parameters of a generated fixture.
#[derive(Clone, Debug)]
pub enum FixtureParams {
    /// Yang–Mills on four dimensions over the given algebra.
    YangMills(StructureConstants),
    /// Chern–Simons on three dimensions, optionally relative to a background.
    ChernSimons { algebra: StructureConstants, background: bool },
    Gravitation,
    /// `A ∧ d_H B` with `A` a p-form and `B` a q-form, `p + q = n − 1`.
    Bf { n: u8, p: u8, q: u8 },
    Stages,
}

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    /// Whether `b = u + γ` is nilpotent off shell.
    pub brst_nilpotent: bool,
}

const CATALOG: &[Fixture] = &[
    Fixture {
        name: "ym4",
        summary: "Yang-Mills on R^4, su(2)",
        source: include_str!("../../theories/ym4.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "ym4_osp12",
        summary: "Yang-Mills on R^4, osp(1|2)",
        source: include_str!("../../theories/ym4_osp12.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "cs3",
        summary: "Chern-Simons on R^3, su(2), gauge and diffeomorphism ghosts",
        source: include_str!("../../theories/cs3.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "cs3b",
        summary: "Chern-Simons on R^3 relative to a background connection",
        source: include_str!("../../theories/cs3b.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "grav4",
        summary: "metric-affine gravitation on R^4 with a torsion test density",
        source: include_str!("../../theories/grav4.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "bf",
        summary: "BF theory, n = 3, p = q = 1",
        source: include_str!("../../theories/bf.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "bf_4_1_2",
        summary: "BF theory, n = 4, p = 1, q = 2 (one reducibility stage)",
        source: include_str!("../../theories/bf_4_1_2.gvc"),
        brst_nilpotent: true,
    },
    Fixture {
        name: "stages",
        summary: "two scalars with an on-shell stage-1 identity",
        source: include_str!("../../theories/stages.gvc"),
        brst_nilpotent: false,
    },
];

pub fn catalog() -> &'static [Fixture] {
    CATALOG
}

pub fn builtin(name: &str) -> Option<&'static Fixture> {
    CATALOG.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn load(&self) -> Result<TheoryFile> {
        parse_theory(self.source)
    }

    /// Parameters that regenerate this fixture's source.
    pub fn params(&self) -> FixtureParams {
        match self.name {
            "ym4" => FixtureParams::YangMills(StructureConstants::su2()),
            "ym4_osp12" => FixtureParams::YangMills(StructureConstants::osp12()),
            "cs3" => FixtureParams::ChernSimons { algebra: StructureConstants::su2(), background: false },
            "cs3b" => FixtureParams::ChernSimons { algebra: StructureConstants::su2(), background: true },
            "grav4" => FixtureParams::Gravitation,
            "bf" => FixtureParams::Bf { n: 3, p: 1, q: 1 },
            "bf_4_1_2" => FixtureParams::Bf { n: 4, p: 1, q: 2 },
            _ => FixtureParams::Stages,
        }
    }
}

pub fn build_fixture(params: &FixtureParams) -> Result<TheoryFile> {
    parse_theory(&fixture_source(params)?)
}

pub fn fixture_source(params: &FixtureParams) -> Result<String> {
    match params {
        FixtureParams::YangMills(alg) => ym_source(alg),
        FixtureParams::ChernSimons { algebra, background } => cs_source(algebra, *background),
        FixtureParams::Gravitation => Ok(grav_source()),
        FixtureParams::Bf { n, p, q } => bf_source(*n, *p, *q),
        FixtureParams::Stages => Ok(include_str!("../../theories/stages.gvc").to_string()),
    }
}

fn sparse<K: Copy>(entries: impl IntoIterator<Item = (K, Q)>, key: impl Fn(K) -> String) -> String {
    let body: Vec<String> = entries
        .into_iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(k, q)| format!("({}): {q}", key(k)))
        .collect();
    format!("sparse{{{}}}", body.join(", "))
}

fn algebra_header(out: &mut String, alg: &StructureConstants) {
    let d = alg.dim();
    let bits: Vec<&str> = alg.parity.iter().map(|&p| if p { "1" } else { "0" }).collect();
    let f = sparse(alg.c.iter().map(|(k, q)| (*k, q.clone())), |(r, i, j)| format!("{r},{i},{j}"));
    let h = sparse(alg.h.iter().map(|(k, q)| (*k, q.clone())), |(i, j)| format!("{i},{j}"));
    let sg = sparse((0..d).map(|i| (i, Q::from(if alg.parity[i as usize] { -1 } else { 1 }))), |i| i.to_string());
    writeln!(out, "range R = {d};").unwrap();
    writeln!(out, "parity P = [{}];", bits.join(",")).unwrap();
    writeln!(out, "const f[R,R,R] = {f};").unwrap();
    writeln!(out, "const h[R,R] = {h};").unwrap();
    writeln!(out, "const sg[R] = {sg};").unwrap();
}

const CURVATURE: &str =
    "def F[r,l,m] = a[r,m;l] - a[r,l;m] + sum(i:R,j:R){f[r,i,j]*a[i,l]*a[j,m]};\n";

const GAUGE_NI: &str = "ni c[j] = -sum(r:R,i:R,l:n){f[r,j,i]*a[i,l]*a~[r,l]} - sum(l:n){a~[j,l;l]};\n";

fn ym_source(alg: &StructureConstants) -> Result<String> {
    alg.validate()?;
    let name = if alg.name == "su2" { "ym4".to_string() } else { format!("ym4_{}", alg.name) };
    let mut s = String::new();
    writeln!(s, "# Yang-Mills on four dimensions, algebra {}.", alg.name).unwrap();
    writeln!(s, "name {name};\ndim 4;\njet_order 4;").unwrap();
    algebra_header(&mut s, alg);
    s.push_str("const g[n,n] = diag[1,-1,-1,-1];\n\n");
    s.push_str("field a[R,n] even by P[0];\nghost 0 c[R] odd by P[0];\n\n");
    s.push_str(CURVATURE);
    s.push('\n');
    s.push_str("L = 1/4*sum(i:R,j:R,l:n,m:n,b:n,v:n){h[i,j]*g[l,m]*g[b,v]*F[i,l,b]*F[j,m,v]};\n\n");
    s.push_str(GAUGE_NI);
    s.push('\n');
    s.push_str("gauge a[r,l] = -sum(j:R,i:R){f[r,j,i]*c[j]*a[i,l]} + c[r;l];\n\n");
    s.push_str("brst c[r] = -1/2*sum(i:R,j:R){sg[i]*f[r,i,j]*c[i]*c[j]};\n");
    Ok(s)
}

/// Chern–Simons three-form of a connection `x` with curvature `G`.
fn cs_form(x: &str, g: &str) -> String {
    format!(
        "sum(m:R,k:R,x:n,y:n,z:n){{1/2*h[m,k]*eps[x,y,z]*{x}[m,x]*({g}[k,y,z] - 1/3*sum(p:R,q:R){{f[k,p,q]*{x}[p,y]*{x}[q,z]}})}}"
    )
}

fn cs_source(alg: &StructureConstants, background: bool) -> Result<String> {
    alg.validate()?;
    if alg.is_graded() {
        return Err(Error::Validation("the Chern-Simons fixture takes an even algebra".into()));
    }
    let mut s = String::new();
    if background {
        s.push_str("# Chern-Simons on three dimensions relative to a background connection B.\n");
        writeln!(s, "name cs3b;").unwrap();
    } else {
        s.push_str("# Chern-Simons on three dimensions with gauge and diffeomorphism ghosts.\n");
        writeln!(s, "name cs3;").unwrap();
    }
    s.push_str("dim 3;\njet_order 4;\n");
    algebra_header(&mut s, alg);
    s.push_str("const eps[n,n,n] = levi;\n\n");
    s.push_str("field a[R,n] even by P[0];\n");
    if background {
        s.push_str("background B[R,n] even by P[0];\n");
    }
    s.push_str("ghost 0 c[R] odd by P[0];\nghost 0 cx[n] odd;\n\n");
    s.push_str(CURVATURE);
    if background {
        s.push_str(
            "def G[r,l,m] = B[r,m;l] - B[r,l;m] + sum(i:R,j:R){f[r,i,j]*B[i,l]*B[j,m]};\n",
        );
        writeln!(s, "\nL = {} - {}", cs_form("a", "F"), cs_form("B", "G")).unwrap();
        s.push_str("    - sum(m:R,k:R,x:n,y:n,z:n){d(x){h[m,k]*eps[x,y,z]*a[m,y]*B[k,z]}};\n\n");
    } else {
        writeln!(s, "\nL = {};\n", cs_form("a", "F")).unwrap();
    }
    s.push_str(GAUGE_NI);
    s.push_str("ni cx[m] = sum(r:R,l:n){-a[r,l;m]*a~[r,l] + d(l){a[r,m]*a~[r,l]}};\n\n");
    s.push_str(
        "gauge a[r,l] = -sum(p:R,q:R){f[r,p,q]*c[p]*a[q,l]} + c[r;l] - sum(m:n){cx[m;l]*a[r,m] + cx[m]*a[r,l;m]};\n\n",
    );
    s.push_str("# the diffeomorphism ghost also transports c\n");
    s.push_str("brst c[r] = -1/2*sum(i:R,j:R){f[r,i,j]*c[i]*c[j]} - sum(m:n){cx[m]*c[r;m]};\n");
    s.push_str("brst cx[l] = sum(m:n){cx[l;m]*cx[m]};\n\n");
    s.push_str("trivial D[m] = sum(r:R,l:n){F[r,l,m]*a~[r,l]};\n");
    Ok(s)
}

fn grav_source() -> String {
    let tri = sparse((0..4u8).flat_map(|a| (a..4).map(move |b| ((a, b), Q::one()))), |(a, b)| format!("{a},{b}"));
    format!(
        "\
# Metric-affine gravitation on four dimensions: connection k[m,a,b] (upper
# index a), metric s[a,b] (upper indices) and diffeomorphism ghosts c[l].
# The density is a torsion invariant. The identity for c is read off the
# gauge operator u below, term by term.
name grav4;
dim 4;
jet_order 3;
const eps[n,n,n,n] = levi;
const dl[n,n] = delta;
const tri[n,n] = {tri};

field k[n,n,n] even;
field s[n,n] even symmetric;
ghost 0 c[n] odd;

def T[m,b,a] = k[m,a,b] - k[b,a,m];
def t[v] = sum(r:n){{T[v,r,r]}};
def w[a,b] = sum(r:n){{T[a,b,r]*t[r]}};

L = sum(a:n,b:n,g:n,e:n){{eps[a,b,g,e]*w[a,b]*w[g,e]}};

ni c[l] = sum(a:n,b:n){{tri[a,b]*(-s[a,b;l]*s~[a,b] - sum(v:n){{d(v){{(dl[a,l]*s[v,b] + dl[b,l]*s[a,v])*s~[a,b]}}}})}}
    + sum(m:n,a:n,b:n){{-k[m,a,b;l]*k~[m,a,b]
        - sum(v:n){{d(v){{(dl[a,l]*k[m,v,b] - dl[v,b]*k[m,a,l] - dl[v,m]*k[l,a,b])*k~[m,a,b]}}}}
        + d(m,b){{dl[a,l]*k~[m,a,b]}}}};

gauge s[a,b] = sum(v:n){{s[v,b]*c[a;v] + s[a,v]*c[b;v]}} - sum(l:n){{c[l]*s[a,b;l]}};
gauge k[m,a,b] = sum(v:n){{c[a;v]*k[m,v,b] - c[v;b]*k[m,a,v] - c[v;m]*k[v,a,b] - c[v]*k[m,a,b;v]}} + c[a;m,b];

brst c[l] = sum(m:n){{c[l;m]*c[m]}};
"
    )
}

fn factorial(k: u8) -> u64 {
    (1..=k as u64).product()
}

fn idx(prefix: char, k: u8) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

/// Component reference `x[i0,i1;jet]`, or `x[;jet]` for scalars.
fn comp(x: &str, ix: &[String], jet: Option<&str>) -> String {
    match (ix.is_empty(), jet) {
        (true, None) => x.to_string(),
        (true, Some(j)) => format!("{x}[;{j}]"),
        (false, None) => format!("{x}[{}]", ix.join(",")),
        (false, Some(j)) => format!("{x}[{};{j}]", ix.join(",")),
    }
}

fn form_decl(kind: &str, x: &str, deg: u8, odd: bool) -> String {
    let ext = if deg == 0 { String::new() } else { format!("[{}]", vec!["n"; deg as usize].join(",")) };
    let sym = if deg >= 2 { " antisymmetric" } else { "" };
    format!("{kind} {x}{ext} {}{sym};\n", if odd { "odd" } else { "even" })
}

/// Exterior derivative of a ghost into the form `parent` of degree `deg`.
fn exterior(parent: &str, child: &str, deg: u8) -> String {
    let ix = idx('i', deg);
    let mut terms = String::new();
    for j in 0..deg as usize {
        let rest: Vec<String> = ix.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, s)| s.clone()).collect();
        let sign = if j % 2 == 0 { " + " } else { " - " };
        if j == 0 {
            terms.push_str(&comp(child, &rest, Some(&ix[j])));
        } else {
            terms.push_str(sign);
            terms.push_str(&comp(child, &rest, Some(&ix[j])));
        }
    }
    format!("gauge {} = {terms};\n", comp(parent, &ix, None))
}

fn bf_source(n: u8, p: u8, q: u8) -> Result<String> {
    if n < 2 || p as u16 + q as u16 + 1 != n as u16 {
        return Err(Error::Validation(format!("bf needs p + q = n - 1, got n = {n}, p = {p}, q = {q}")));
    }
    let name = if (n, p, q) == (3, 1, 1) { "bf".to_string() } else { format!("bf_{n}_{p}_{q}") };
    let mut s = String::new();
    writeln!(s, "# BF theory, n = {n}: A is a {p}-form, B a {q}-form, L = A ^ d_H B.").unwrap();
    writeln!(s, "name {name};\ndim {n};\njet_order 4;").unwrap();
    writeln!(s, "const eps[{}] = levi;\n", vec!["n"; n as usize].join(",")).unwrap();
    s.push_str(&form_decl("field", "A", p, false));
    s.push_str(&form_decl("field", "B", q, false));
    // ghost k of a p-form has degree p − k − 1 and stage k
    let chains = [("A", 'e', p), ("B", 'x', q)];
    for (_, g, deg) in chains {
        for k in 0..deg {
            s.push_str(&form_decl(&format!("ghost {k}"), &format!("{g}{k}"), deg - k - 1, k % 2 == 0));
        }
    }
    let (ia, jb) = (idx('i', p), idx('j', q));
    let mut binders: Vec<String> = ia.iter().chain(std::iter::once(&"v".to_string())).chain(&jb).map(|x| format!("{x}:n")).collect();
    let eps_ix: Vec<String> = ia.iter().cloned().chain(std::iter::once("v".to_string())).chain(jb.iter().cloned()).collect();
    let norm = factorial(p) * factorial(q);
    let coef = if norm == 1 { String::new() } else { format!("1/{norm}*") };
    writeln!(
        s,
        "\nL = {coef}sum({}){{eps[{}]*{}*{}}};\n",
        binders.join(","),
        eps_ix.join(","),
        comp("A", &ia, None),
        comp("B", &jb, Some("v"))
    )
    .unwrap();
    binders.clear();
    for (form, g, deg) in chains {
        for k in 0..deg {
            let parent = if k == 0 { form.to_string() } else { format!("{g}{}", k - 1) };
            let rest = idx('j', deg - k - 1);
            let mut pix = vec!["m".to_string()];
            pix.extend(rest.iter().cloned());
            writeln!(
                s,
                "ni {} = -sum(m:n){{{}}};",
                comp(&format!("{g}{k}"), &rest, None),
                comp(&format!("{parent}~"), &pix, Some("m"))
            )
            .unwrap();
        }
    }
    s.push('\n');
    for (form, g, deg) in chains {
        for k in 0..deg {
            let parent = if k == 0 { form.to_string() } else { format!("{g}{}", k - 1) };
            s.push_str(&exterior(&parent, &format!("{g}{k}"), deg - k));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_sources_match_generators() {
        for f in catalog() {
            let generated = fixture_source(&f.params()).unwrap();
            assert_eq!(generated, f.source, "fixture {} differs from its generator", f.name);
        }
    }

    #[test]
    fn bf_rejects_bad_split() {
        assert!(fixture_source(&FixtureParams::Bf { n: 4, p: 1, q: 1 }).is_err());
    }
}
