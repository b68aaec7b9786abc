//! Syntax tree and recursive-descent parser.

use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

/// An index position: a literal or a bound index variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Idx {
    Lit(u8),
    Var(String, Pos),
}

/// An index range: a literal, `n` (the dimension) or a `range` name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extent {
    Lit(u8),
    Named(String, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Ref { name: String, idx: Vec<Idx>, jet: Vec<Idx>, pos: Pos },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Sum { binders: Vec<(String, Extent)>, body: Box<Expr> },
    Deriv { jet: Vec<Idx>, body: Box<Expr> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParitySrc {
    Fixed(bool),
    /// Base parity flipped by `table[comp[slot]]`.
    Table { odd: bool, table: String, slot: u8, pos: Pos },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tensor {
    Levi,
    Delta,
    Diag(Vec<(bool, u64, u64)>),
    Sparse(Vec<(Vec<u8>, bool, u64, u64)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymKind {
    Field,
    Background,
    Ghost(u8),
}

/// Target of a component assignment: `name[i, j]` with literal or free indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub name: String,
    pub idx: Vec<Idx>,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assign {
    Ni,
    Gauge,
    Brst,
    Alpha,
    Trivial,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Name(String),
    Dim(u8, Pos),
    JetOrder(u8, Pos),
    Range(String, u8),
    Parity(String, Vec<bool>),
    Const { name: String, dims: Vec<Extent>, value: Tensor, pos: Pos },
    Symbol { kind: SymKind, name: String, dims: Vec<Extent>, parity: ParitySrc, symmetry: Option<bool>, pos: Pos },
    Def { name: String, params: Vec<String>, body: Expr, pos: Pos },
    Lagrangian(Expr),
    Assign { what: Assign, target: Target, body: Expr },
}

pub struct Parser {
    toks: Vec<Token>,
    at: usize,
}

fn err<T>(t: &Token, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser> {
        Ok(Parser { toks: tokenize(src)?, at: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        let t = self.peek();
        Pos { line: t.line, col: t.col }
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let t = self.peek();
            err(t, format!("expected `{c}`, found {}", t.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => {
                let t = self.peek();
                err(t, format!("expected a name, found {}", t.describe()))
            }
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => {
                let t = self.peek();
                err(t, format!("expected an integer, found {}", t.describe()))
            }
        }
    }

    fn small(&mut self) -> Result<u8> {
        let t = self.peek().clone();
        let n = self.int()?;
        u8::try_from(n).or_else(|_| err(&t, format!("integer {n} out of range")))
    }

    pub fn at_end(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            let t = self.peek();
            err(t, format!("unexpected {}", t.describe()))
        }
    }
}

// Expressions.
impl Parser {
    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_punct('/') {
                let pos = self.pos();
                self.next();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let t = self.peek().clone();
            let e = self.int()?;
            let e = u32::try_from(e).or_else(|_| err(&t, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(*n))
            }
            Tok::Punct('(') => {
                self.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(w) if w == "sum" && *self.peek2() == Tok::Punct('(') => {
                self.next();
                self.expect('(')?;
                let mut binders = Vec::new();
                loop {
                    let v = self.ident()?;
                    self.expect(':')?;
                    binders.push((v, self.extent()?));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(')')?;
                let body = self.block()?;
                Ok(Expr::Sum { binders, body: Box::new(body) })
            }
            Tok::Ident(w) if w == "d" && *self.peek2() == Tok::Punct('(') => {
                self.next();
                self.expect('(')?;
                let jet = self.idx_list(')')?;
                self.expect(')')?;
                let body = self.block()?;
                Ok(Expr::Deriv { jet, body: Box::new(body) })
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                let name = name.clone();
                self.next();
                let (idx, jet) = if self.eat('[') {
                    let idx = self.idx_list(';')?;
                    let jet = if self.eat(';') { self.idx_list(']')? } else { Vec::new() };
                    self.expect(']')?;
                    (idx, jet)
                } else {
                    (Vec::new(), Vec::new())
                };
                Ok(Expr::Ref { name, idx, jet, pos })
            }
            _ => err(&t, format!("expected an expression, found {}", t.describe())),
        }
    }

    fn block(&mut self) -> Result<Expr> {
        self.expect('{')?;
        let e = self.expr()?;
        self.expect('}')?;
        Ok(e)
    }

    fn idx(&mut self) -> Result<Idx> {
        let pos = self.pos();
        match self.peek().tok {
            Tok::Int(_) => Ok(Idx::Lit(self.small()?)),
            _ => Ok(Idx::Var(self.ident()?, pos)),
        }
    }

    /// Comma-separated indices, possibly empty when the next token is `stop` or `]`.
    fn idx_list(&mut self, stop: char) -> Result<Vec<Idx>> {
        let mut out = Vec::new();
        if self.is_punct(stop) || self.is_punct(']') {
            return Ok(out);
        }
        loop {
            out.push(self.idx()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn extent(&mut self) -> Result<Extent> {
        let pos = self.pos();
        match self.peek().tok {
            Tok::Int(_) => Ok(Extent::Lit(self.small()?)),
            _ => Ok(Extent::Named(self.ident()?, pos)),
        }
    }

    fn extents(&mut self) -> Result<Vec<Extent>> {
        let mut out = Vec::new();
        if self.eat('[') {
            loop {
                out.push(self.extent()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        }
        Ok(out)
    }
}

// Statements.
impl Parser {
    fn rational(&mut self) -> Result<(bool, u64, u64)> {
        let neg = self.eat('-');
        let num = self.int()?;
        let den = if self.eat('/') {
            let t = self.peek().clone();
            let d = self.int()?;
            if d == 0 {
                return err(&t, "zero denominator");
            }
            d
        } else {
            1
        };
        Ok((neg, num, den))
    }

    fn tensor(&mut self) -> Result<Tensor> {
        let t = self.peek().clone();
        let w = self.ident()?;
        match w.as_str() {
            "levi" => Ok(Tensor::Levi),
            "delta" => Ok(Tensor::Delta),
            "diag" => {
                self.expect('[')?;
                let mut vals = vec![self.rational()?];
                while self.eat(',') {
                    vals.push(self.rational()?);
                }
                self.expect(']')?;
                Ok(Tensor::Diag(vals))
            }
            "sparse" => {
                self.expect('{')?;
                let mut entries = Vec::new();
                while !self.is_punct('}') {
                    self.expect('(')?;
                    let mut key = Vec::new();
                    if !self.is_punct(')') {
                        key.push(self.small()?);
                        while self.eat(',') {
                            key.push(self.small()?);
                        }
                    }
                    self.expect(')')?;
                    self.expect(':')?;
                    let (neg, n, d) = self.rational()?;
                    entries.push((key, neg, n, d));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect('}')?;
                Ok(Tensor::Sparse(entries))
            }
            _ => err(&t, format!("unknown tensor form `{w}` (expected levi, delta, diag or sparse)")),
        }
    }

    fn parity_src(&mut self) -> Result<ParitySrc> {
        let t = self.peek().clone();
        let odd = match &t.tok {
            Tok::Ident(w) if w == "even" => false,
            Tok::Ident(w) if w == "odd" => true,
            _ => return err(&t, format!("expected `even` or `odd`, found {}", t.describe())),
        };
        self.next();
        if self.is_word("by") {
            self.next();
            let pos = self.pos();
            let table = self.ident()?;
            self.expect('[')?;
            let slot = self.small()?;
            self.expect(']')?;
            return Ok(ParitySrc::Table { odd, table, slot, pos });
        }
        Ok(ParitySrc::Fixed(odd))
    }

    fn symbol(&mut self, kind: SymKind, pos: Pos) -> Result<Stmt> {
        let name = self.ident()?;
        let dims = self.extents()?;
        let parity = self.parity_src()?;
        let symmetry = if self.is_word("symmetric") {
            self.next();
            Some(true)
        } else if self.is_word("antisymmetric") {
            self.next();
            Some(false)
        } else {
            None
        };
        Ok(Stmt::Symbol { kind, name, dims, parity, symmetry, pos })
    }

    fn target(&mut self) -> Result<Target> {
        let pos = self.pos();
        let name = self.ident()?;
        let idx = if self.eat('[') {
            let idx = self.idx_list(']')?;
            self.expect(']')?;
            idx
        } else {
            Vec::new()
        };
        Ok(Target { name, idx, pos })
    }

    /// One `;`-terminated statement.
    pub fn stmt(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let t = self.peek().clone();
        let Tok::Ident(w) = &t.tok else {
            return err(&t, format!("expected a statement, found {}", t.describe()));
        };
        let w = w.clone();
        self.next();
        let what = match w.as_str() {
            "ni" => Some(Assign::Ni),
            "gauge" => Some(Assign::Gauge),
            "brst" => Some(Assign::Brst),
            "alpha" => Some(Assign::Alpha),
            "trivial" => Some(Assign::Trivial),
            "witness" => Some(Assign::Witness),
            _ => None,
        };
        let stmt = if let Some(what) = what {
            let target = self.target()?;
            self.expect('=')?;
            Stmt::Assign { what, target, body: self.expr()? }
        } else {
            match w.as_str() {
                "name" => Stmt::Name(self.ident()?),
                "dim" => Stmt::Dim(self.small()?, pos),
                "jet_order" => Stmt::JetOrder(self.small()?, pos),
                "range" => {
                    let n = self.ident()?;
                    self.expect('=')?;
                    Stmt::Range(n, self.small()?)
                }
                "parity" => {
                    let n = self.ident()?;
                    self.expect('=')?;
                    self.expect('[')?;
                    let mut bits = Vec::new();
                    loop {
                        let t = self.peek().clone();
                        match self.int()? {
                            0 => bits.push(false),
                            1 => bits.push(true),
                            _ => return err(&t, "parity entries are 0 or 1"),
                        }
                        if !self.eat(',') {
                            break;
                        }
                    }
                    self.expect(']')?;
                    Stmt::Parity(n, bits)
                }
                "const" => {
                    let name = self.ident()?;
                    let dims = self.extents()?;
                    self.expect('=')?;
                    Stmt::Const { name, dims, value: self.tensor()?, pos }
                }
                "field" => self.symbol(SymKind::Field, pos)?,
                "background" => self.symbol(SymKind::Background, pos)?,
                "ghost" => {
                    let stage = self.small()?;
                    self.symbol(SymKind::Ghost(stage), pos)?
                }
                "def" => {
                    let name = self.ident()?;
                    let mut params = Vec::new();
                    if self.eat('[') {
                        loop {
                            params.push(self.ident()?);
                            if !self.eat(',') {
                                break;
                            }
                        }
                        self.expect(']')?;
                    }
                    self.expect('=')?;
                    Stmt::Def { name, params, body: self.expr()?, pos }
                }
                "L" => {
                    self.expect('=')?;
                    Stmt::Lagrangian(self.expr()?)
                }
                _ => return err(&t, format!("unknown statement `{w}`")),
            }
        };
        self.expect(';')?;
        Ok(stmt)
    }

    pub fn program(&mut self) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.stmt()?);
        }
        Ok(out)
    }
}
