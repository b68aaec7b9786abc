//! Evaluation of expressions against a frozen registry.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use super::ast::{Expr, Extent, Idx, Pos};
use crate::algebra::{GradedPoly, MultiIndex, Registry};
use crate::error::{Error, Result};
use crate::jet::iterated_derivative;
use crate::rational::Q;

/// A named constant table of rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constant {
    pub dims: Vec<u8>,
    pub values: HashMap<Vec<u8>, Q>,
}

impl Constant {
    pub fn get(&self, key: &[u8]) -> Q {
        self.values.get(key).cloned().unwrap_or_else(Q::zero)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Def {
    pub params: Vec<String>,
    pub body: Expr,
}

/// Names visible to expressions besides registry symbols.
#[derive(Debug, Default)]
pub struct Scope {
    pub(crate) dim: u8,
    pub(crate) ranges: HashMap<String, u8>,
    pub(crate) constants: HashMap<String, Constant>,
    pub(crate) defs: HashMap<String, Def>,
    cache: RefCell<HashMap<(String, Vec<u8>), GradedPoly>>,
    active: RefCell<HashSet<String>>,
}

impl Scope {
    pub fn new(dim: u8) -> Scope {
        Scope { dim, ..Scope::default() }
    }

    pub fn constant(&self, name: &str) -> Option<&Constant> {
        self.constants.get(name)
    }

    pub fn range(&self, name: &str) -> Option<u8> {
        if name == "n" {
            Some(self.dim)
        } else {
            self.ranges.get(name).copied()
        }
    }

    pub(crate) fn extent(&self, e: &Extent) -> Result<u8> {
        match e {
            Extent::Lit(n) => Ok(*n),
            Extent::Named(name, pos) => self.range(name).ok_or_else(|| Error::Syntax {
                line: pos.line,
                col: pos.col,
                msg: format!("unknown range `{name}`"),
            }),
        }
    }
}

fn at(pos: &Pos, e: Error) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => Error::Syntax { line: pos.line, col: pos.col, msg: other.to_string() },
    }
}

pub(crate) struct Eval<'a> {
    pub reg: &'a Registry,
    pub scope: &'a Scope,
}

pub(crate) type Env = Vec<(String, u8)>;

impl Eval<'_> {
    fn index(&self, i: &Idx, env: &Env) -> Result<u8> {
        match i {
            Idx::Lit(n) => Ok(*n),
            Idx::Var(name, pos) => env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| at(pos, Error::Validation(format!("unbound index `{name}`")))),
        }
    }

    fn indices(&self, is: &[Idx], env: &Env) -> Result<Vec<u8>> {
        is.iter().map(|i| self.index(i, env)).collect()
    }

    fn jet(&self, is: &[Idx], env: &Env, pos: &Pos) -> Result<MultiIndex> {
        let entries = self.indices(is, env)?;
        if let Some(&bad) = entries.iter().find(|&&e| e >= self.reg.dim()) {
            return Err(at(pos, Error::Validation(format!("jet index {bad} out of range for dimension {}", self.reg.dim()))));
        }
        if entries.len() > self.reg.cap() as usize {
            return Err(at(pos, Error::JetCap { order: entries.len() as u32, cap: self.reg.cap() }));
        }
        Ok(MultiIndex::from_entries(&entries))
    }

    pub fn eval(&self, e: &Expr, env: &mut Env) -> Result<GradedPoly> {
        Ok(match e {
            Expr::Int(n) => GradedPoly::constant(Q::from_int(*n as i64)),
            Expr::Add(a, b) => self.eval(a, env)? + self.eval(b, env)?,
            Expr::Sub(a, b) => self.eval(a, env)? - self.eval(b, env)?,
            Expr::Neg(a) => -self.eval(a, env)?,
            Expr::Mul(a, b) => {
                let l = self.eval(a, env)?;
                if l.is_zero() {
                    return Ok(l);
                }
                l.try_mul(&self.eval(b, env)?)?
            }
            Expr::Div(a, b, pos) => {
                let d = self.eval(b, env)?;
                if !d.is_constant() || d.is_zero() {
                    return Err(at(pos, Error::Validation("division only by a nonzero constant".into())));
                }
                let inv = d.constant_term().recip().expect("nonzero");
                self.eval(a, env)?.scale(&inv)
            }
            Expr::Pow(a, k) => self.eval(a, env)?.pow(*k),
            Expr::Sum { binders, body } => {
                let extents = binders
                    .iter()
                    .map(|(_, x)| self.scope.extent(x))
                    .collect::<Result<Vec<_>>>()?;
                let mut acc = GradedPoly::zero();
                self.sum_rec(binders, &extents, 0, body, env, &mut acc)?;
                acc
            }
            Expr::Deriv { jet, body } => {
                let p = self.eval(body, env)?;
                let j = self.jet(jet, env, &Pos { line: 0, col: 0 })?;
                iterated_derivative(&p, &j, self.reg)?
            }
            Expr::Ref { name, idx, jet, pos } => self.reference(name, idx, jet, pos, env)?,
        })
    }

    fn sum_rec(
        &self,
        binders: &[(String, Extent)],
        extents: &[u8],
        k: usize,
        body: &Expr,
        env: &mut Env,
        acc: &mut GradedPoly,
    ) -> Result<()> {
        if k == binders.len() {
            *acc += self.eval(body, env)?;
            return Ok(());
        }
        for v in 0..extents[k] {
            env.push((binders[k].0.clone(), v));
            let r = self.sum_rec(binders, extents, k + 1, body, env, acc);
            env.pop();
            r?;
        }
        Ok(())
    }

    fn reference(&self, name: &str, idx: &[Idx], jet: &[Idx], pos: &Pos, env: &Env) -> Result<GradedPoly> {
        let comps = self.indices(idx, env)?;
        if let Some(def) = self.scope.defs.get(name) {
            if comps.len() != def.params.len() {
                return Err(at(pos, Error::IndexArity { symbol: name.into(), expected: def.params.len(), found: comps.len() }));
            }
            let j = self.jet(jet, env, pos)?;
            let base = self.def_value(name, def, comps, pos)?;
            return iterated_derivative(&base, &j, self.reg).map_err(|e| at(pos, e));
        }
        if let Some(c) = self.scope.constants.get(name) {
            if comps.len() != c.dims.len() {
                return Err(at(pos, Error::IndexArity { symbol: name.into(), expected: c.dims.len(), found: comps.len() }));
            }
            if let Some((i, _)) = comps.iter().zip(&c.dims).enumerate().find(|(_, (v, d))| v >= d) {
                return Err(at(pos, Error::Validation(format!("index {} out of range in slot {i} of `{name}`", comps[i]))));
            }
            if !jet.is_empty() {
                return Ok(GradedPoly::zero());
            }
            return Ok(GradedPoly::constant(c.get(&comps)));
        }
        let j = self.jet(jet, env, pos)?;
        match self.reg.var(name, &comps, j).map_err(|e| at(pos, e))? {
            Some((v, sign)) => Ok(GradedPoly::var(self.reg, v).scale(&Q::from_int(sign))),
            None => Ok(GradedPoly::zero()),
        }
    }

    fn def_value(&self, name: &str, def: &Def, args: Vec<u8>, pos: &Pos) -> Result<GradedPoly> {
        let key = (name.to_string(), args);
        if let Some(p) = self.scope.cache.borrow().get(&key) {
            return Ok(p.clone());
        }
        if !self.scope.active.borrow_mut().insert(name.to_string()) {
            return Err(at(pos, Error::Validation(format!("definition `{name}` refers to itself"))));
        }
        let mut env: Env = def.params.iter().cloned().zip(key.1.iter().copied()).collect();
        let r = self.eval(&def.body, &mut env);
        self.scope.active.borrow_mut().remove(name);
        let p = r?;
        self.scope.cache.borrow_mut().insert(key, p.clone());
        Ok(p)
    }
}
