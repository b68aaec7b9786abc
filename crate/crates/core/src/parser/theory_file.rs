//! Elaboration of a parsed file into a [`Theory`].

use std::collections::{BTreeMap, HashMap};

use super::ast::{Assign, Expr, Idx, ParitySrc, Parser, Pos, Stmt, SymKind, Target, Tensor};
use super::eval::{Constant, Def, Env, Eval, Scope};
use crate::algebra::{GradedPoly, JetSpace, MultiIndex, ParitySpec, Registry, SymbolDecl, SymbolKind, Symmetry, Var};
use crate::algebra::var::{MAX_DIM, MAX_JET_ORDER};
use crate::error::{Error, Result};
use crate::jet::EvolutionaryDerivation;
use crate::rational::Q;
use crate::theory::{ghost_stage, NoetherRecord, Theory, TrivialClaim};

/// Default jet-order cap when neither the file nor the caller sets one.
pub const DEFAULT_JET_ORDER: u8 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Overrides the file's `jet_order`.
    pub jet_order: Option<u8>,
    /// Used when the file sets no `jet_order`; falls back to [`DEFAULT_JET_ORDER`].
    pub default_jet_order: Option<u8>,
}

/// A parsed theory with the constants and definitions it declared.
#[derive(Debug)]
pub struct TheoryFile {
    pub theory: Theory,
    pub scope: Scope,
}

fn syn(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Syntax { line: pos.line, col: pos.col, msg: msg.into() }
}

pub fn parse_theory(src: &str) -> Result<TheoryFile> {
    parse_theory_with(src, ParseOptions::default())
}

pub fn parse_theory_with(src: &str, opts: ParseOptions) -> Result<TheoryFile> {
    let stmts = Parser::new(src)?.program()?;
    let mut name = String::from("theory");
    let mut dim = None;
    let mut cap = None;
    let mut parities: HashMap<String, Vec<bool>> = HashMap::new();
    let mut consts = Vec::new();
    let mut decls = Vec::new();
    let mut ranges = HashMap::new();
    for s in &stmts {
        match s {
            Stmt::Name(n) => name = n.clone(),
            Stmt::Dim(n, pos) => {
                if *n == 0 || *n as usize > MAX_DIM {
                    return Err(syn(*pos, format!("dimension must be 1..={MAX_DIM}")));
                }
                dim = Some(*n);
            }
            Stmt::JetOrder(n, pos) => {
                if *n > MAX_JET_ORDER {
                    return Err(syn(*pos, format!("jet order must be at most {MAX_JET_ORDER}")));
                }
                cap = Some(*n);
            }
            Stmt::Range(n, v) => {
                ranges.insert(n.clone(), *v);
            }
            Stmt::Parity(n, bits) => {
                parities.insert(n.clone(), bits.clone());
            }
            Stmt::Const { .. } => consts.push(s),
            Stmt::Symbol { .. } => decls.push(s),
            _ => {}
        }
    }
    let dim = dim.ok_or_else(|| Error::Validation("missing `dim` declaration".into()))?;
    let cap = opts.jet_order.or(cap).or(opts.default_jet_order).unwrap_or(DEFAULT_JET_ORDER);
    if cap > MAX_JET_ORDER {
        return Err(Error::Validation(format!("jet order must be at most {MAX_JET_ORDER}")));
    }
    let mut scope = Scope::new(dim);
    scope.ranges = ranges;

    for s in consts {
        let Stmt::Const { name, dims, value, pos } = s else { unreachable!() };
        let dims = dims.iter().map(|e| scope.extent(e)).collect::<Result<Vec<_>>>()?;
        let c = build_constant(&dims, value, *pos)?;
        if scope.constants.insert(name.clone(), c).is_some() {
            return Err(syn(*pos, format!("constant `{name}` declared twice")));
        }
    }

    let mut symbol_decls = Vec::new();
    for s in decls {
        let Stmt::Symbol { kind, name, dims, parity, symmetry, pos } = s else { unreachable!() };
        let slots = dims.iter().map(|e| scope.extent(e)).collect::<Result<Vec<_>>>()?;
        let kind = match kind {
            SymKind::Field => SymbolKind::Field,
            SymKind::Background => SymbolKind::Background,
            SymKind::Ghost(k) => SymbolKind::Ghost { stage: *k },
        };
        let parity = match parity {
            ParitySrc::Fixed(p) => ParitySpec::Fixed(*p),
            ParitySrc::Table { odd, table, slot, pos } => {
                let bits = parities.get(table).ok_or_else(|| syn(*pos, format!("unknown parity table `{table}`")))?;
                let range = *slots.get(*slot as usize).ok_or_else(|| syn(*pos, "parity slot out of range"))?;
                if bits.len() < range as usize {
                    return Err(syn(*pos, format!("parity table `{table}` is shorter than the slot range")));
                }
                ParitySpec::Table { table: bits.clone(), slot: *slot as usize, flip: *odd }
            }
        };
        if name.ends_with('~') {
            return Err(syn(*pos, "names ending in `~` are reserved for antifields"));
        }
        if scope.constants.contains_key(name) {
            return Err(syn(*pos, format!("`{name}` is already a constant")));
        }
        let sym = match symmetry {
            None => Symmetry::None,
            Some(true) => Symmetry::Symmetric,
            Some(false) => Symmetry::Antisymmetric,
        };
        symbol_decls.push(SymbolDecl::new(name, kind, slots, parity).with_symmetry(sym));
    }
    let reg = Registry::new(JetSpace::new(dim, cap), symbol_decls)?;

    for s in &stmts {
        if let Stmt::Def { name, params, body, pos } = s {
            if reg.lookup(name).is_some() || scope.constants.contains_key(name) {
                return Err(syn(*pos, format!("definition `{name}` shadows a declared name")));
            }
            let def = Def { params: params.clone(), body: body.clone() };
            if scope.defs.insert(name.clone(), def).is_some() {
                return Err(syn(*pos, format!("definition `{name}` declared twice")));
            }
        }
    }

    let theory = Elab { reg: &reg, scope: &scope }.run(&name, &stmts)?;
    theory.validate()?;
    Ok(TheoryFile { theory, scope })
}

fn rat(neg: bool, n: u64, d: u64) -> Q {
    let q = Q::new(n as i64, d as i64);
    if neg {
        -q
    } else {
        q
    }
}

fn build_constant(dims: &[u8], value: &Tensor, pos: Pos) -> Result<Constant> {
    let mut values = HashMap::new();
    match value {
        Tensor::Levi => {
            let r = dims.len();
            if dims.iter().any(|&d| d as usize != r) {
                return Err(syn(pos, "levi needs rank equal to every index range"));
            }
            for perm in permutations(r as u8) {
                let sign = permutation_sign(&perm);
                values.insert(perm, Q::from_int(sign));
            }
        }
        Tensor::Delta => {
            if dims.len() != 2 || dims[0] != dims[1] {
                return Err(syn(pos, "delta needs two equal index ranges"));
            }
            for i in 0..dims[0] {
                values.insert(vec![i, i], Q::one());
            }
        }
        Tensor::Diag(v) => {
            if dims.len() != 2 || dims[0] != dims[1] || v.len() != dims[0] as usize {
                return Err(syn(pos, "diag needs two equal index ranges and one entry per index"));
            }
            for (i, (neg, n, d)) in v.iter().enumerate() {
                values.insert(vec![i as u8, i as u8], rat(*neg, *n, *d));
            }
        }
        Tensor::Sparse(entries) => {
            for (key, neg, n, d) in entries {
                if key.len() != dims.len() || key.iter().zip(dims).any(|(k, d)| k >= d) {
                    return Err(syn(pos, format!("sparse key {key:?} does not fit ranges {dims:?}")));
                }
                if values.insert(key.clone(), rat(*neg, *n, *d)).is_some() {
                    return Err(syn(pos, format!("sparse key {key:?} given twice")));
                }
            }
        }
    }
    values.retain(|_, q: &mut Q| !q.is_zero());
    Ok(Constant { dims: dims.to_vec(), values })
}

fn permutations(n: u8) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_sign(p: &[u8]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Elab<'a> {
    reg: &'a Registry,
    scope: &'a Scope,
}

impl Elab<'_> {
    fn eval(&self, e: &Expr, env: &mut Env) -> Result<GradedPoly> {
        Eval { reg: self.reg, scope: self.scope }.eval(e, env)
    }

    /// Every component named by a target with its index bindings.
    fn expand(&self, t: &Target, slots: &[u8]) -> Result<Vec<(Vec<u8>, Env)>> {
        if t.idx.len() != slots.len() {
            return Err(syn(t.pos, Error::IndexArity { symbol: t.name.clone(), expected: slots.len(), found: t.idx.len() }.to_string()));
        }
        let mut out = vec![(Vec::new(), Env::new())];
        for (i, r) in t.idx.iter().zip(slots) {
            let mut next = Vec::new();
            for (comp, env) in out {
                match i {
                    Idx::Lit(v) => {
                        if v >= r {
                            return Err(syn(t.pos, format!("index {v} out of range {r}")));
                        }
                        let mut c = comp.clone();
                        c.push(*v);
                        next.push((c, env));
                    }
                    Idx::Var(name, _) => {
                        let bound = env.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
                        let values: Vec<u8> = match bound {
                            Some(v) => vec![v],
                            None => (0..*r).collect(),
                        };
                        for v in values {
                            let mut c = comp.clone();
                            c.push(v);
                            let mut e = env.clone();
                            if bound.is_none() {
                                e.push((name.clone(), v));
                            }
                            next.push((c, e));
                        }
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Independent components of a symbol named by a target.
    fn symbol_components(&self, t: &Target) -> Result<Vec<(Var, Env)>> {
        let id = self.reg.lookup(&t.name).ok_or_else(|| syn(t.pos, format!("unknown symbol `{}`", t.name)))?;
        let decl = self.reg.decl(id);
        let literal = t.idx.iter().all(|i| matches!(i, Idx::Lit(_)));
        let mut out = Vec::new();
        for (comp, env) in self.expand(t, &decl.slots)? {
            match decl.canonical_component(&comp) {
                Some((c, 1)) if c == comp => {
                    let (v, _) = self.reg.var_by_id(id, &comp, MultiIndex::EMPTY)?.expect("canonical");
                    out.push((v, env));
                }
                _ if literal => {
                    return Err(syn(t.pos, format!("`{}{comp:?}` is not an independent component", t.name)));
                }
                _ => {}
            }
        }
        Ok(out)
    }

    fn run(&self, name: &str, stmts: &[Stmt]) -> Result<Theory> {
        let reg = self.reg;
        let mut lagrangian = None;
        let mut records: BTreeMap<Var, NoetherRecord> = BTreeMap::new();
        let mut gauge: Option<EvolutionaryDerivation> = None;
        let mut gamma = EvolutionaryDerivation::new(true, 1);
        let mut alpha = BTreeMap::new();
        let mut trivial: Vec<TrivialClaim> = Vec::new();
        let mut witnesses: Vec<(String, GradedPoly, Pos)> = Vec::new();
        for s in stmts {
            match s {
                Stmt::Lagrangian(e) => {
                    if lagrangian.is_some() {
                        return Err(Error::Validation("Lagrangian given twice".into()));
                    }
                    lagrangian = Some(self.eval(e, &mut Env::new())?);
                }
                Stmt::Assign { what: what @ (Assign::Trivial | Assign::Witness), target, body } => {
                    let slots = vec![reg.dim(); target.idx.len()];
                    for (comp, mut env) in self.expand(target, &slots)? {
                        let label = if comp.is_empty() {
                            target.name.clone()
                        } else {
                            let cs: Vec<String> = comp.iter().map(|c| c.to_string()).collect();
                            format!("{}[{}]", target.name, cs.join(","))
                        };
                        let p = self.eval(body, &mut env)?;
                        if *what == Assign::Trivial {
                            if trivial.iter().any(|t| t.name == label) {
                                return Err(syn(target.pos, format!("`{label}` assigned twice")));
                            }
                            trivial.push(TrivialClaim { name: label, delta: p, witness: None });
                        } else {
                            witnesses.push((label, p, target.pos));
                        }
                    }
                }
                Stmt::Assign { what, target, body } => {
                    for (v, mut env) in self.symbol_components(target)? {
                        let p = self.eval(body, &mut env)?;
                        let dup = || syn(target.pos, format!("component `{}` assigned twice", reg.display_var(v)));
                        match what {
                            Assign::Ni => {
                                let stage = ghost_stage(reg, v)
                                    .ok_or_else(|| syn(target.pos, format!("`{}` is not a ghost", target.name)))?;
                                if records.insert(v, NoetherRecord { ghost: v, stage, delta: p }).is_some() {
                                    return Err(dup());
                                }
                            }
                            Assign::Gauge | Assign::Brst => {
                                let kind = reg.kind(v);
                                if kind.is_antifield() || kind == SymbolKind::Background {
                                    return Err(syn(target.pos, "operators act on fields and ghosts only"));
                                }
                                if *what == Assign::Brst && !kind.is_ghost() {
                                    return Err(syn(target.pos, "brst terms act on ghosts only"));
                                }
                                let u = if *what == Assign::Gauge {
                                    gauge.get_or_insert_with(|| EvolutionaryDerivation::new(true, 1))
                                } else {
                                    &mut gamma
                                };
                                if !u.component(v).is_zero() {
                                    return Err(dup());
                                }
                                u.set(v, p);
                            }
                            Assign::Alpha => {
                                if alpha.insert(v, p).is_some() {
                                    return Err(dup());
                                }
                            }
                            Assign::Trivial | Assign::Witness => unreachable!(),
                        }
                    }
                }
                _ => {}
            }
        }
        for (label, w, pos) in witnesses {
            let t = trivial
                .iter_mut()
                .find(|t| t.name == label)
                .ok_or_else(|| syn(pos, format!("witness for unknown claim `{label}`")))?;
            t.witness = Some(w);
        }
        let lagrangian = lagrangian.ok_or_else(|| Error::Validation("missing Lagrangian `L = ...;`".into()))?;
        let mut th = Theory::new(name, reg.clone(), lagrangian);
        th.records = records.into_values().collect();
        th.gauge = gauge;
        th.gamma = gamma;
        th.alpha = alpha;
        th.trivial = trivial;
        Ok(th)
    }
}
