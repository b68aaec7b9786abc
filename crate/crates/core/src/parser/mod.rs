//! Theory files and expressions.
//!
//! Grammar (EBNF; `#` starts a comment, whitespace is free):
//!
//! ```text
//! file      = { stmt ";" } ;
//! stmt      = "name" IDENT
//!           | "dim" INT | "jet_order" INT
//!           | "range" IDENT "=" INT
//!           | "parity" IDENT "=" "[" bit { "," bit } "]"
//!           | "const" IDENT [ extents ] "=" tensor
//!           | ( "field" | "background" | "ghost" INT ) IDENT [ extents ] parity [ symmetry ]
//!           | "def" IDENT [ "[" IDENT { "," IDENT } "]" ] "=" expr
//!           | "L" "=" expr
//!           | ( "ni" | "gauge" | "brst" | "alpha" | "trivial" | "witness" ) target "=" expr ;
//! extents   = "[" extent { "," extent } "]" ;
//! extent    = INT | "n" | IDENT ;                      (* IDENT names a range *)
//! parity    = ( "even" | "odd" ) [ "by" IDENT "[" INT "]" ] ;
//! symmetry  = "symmetric" | "antisymmetric" ;
//! tensor    = "levi" | "delta" | "diag" "[" rat { "," rat } "]"
//!           | "sparse" "{" [ key ":" rat { "," key ":" rat } ] "}" ;
//! key       = "(" [ INT { "," INT } ] ")" ;
//! rat       = [ "-" ] INT [ "/" INT ] ;
//! target    = IDENT [ "[" [ index { "," index } ] "]" ] ;
//! expr      = term { ( "+" | "-" ) term } ;
//! term      = unary { ( "*" | "/" ) unary } ;        (* divisors must be constants *)
//! unary     = ( "-" | "+" ) unary | atom [ "^" INT ] ;
//! atom      = INT | "(" expr ")"
//!           | "sum" "(" IDENT ":" extent { "," IDENT ":" extent } ")" "{" expr "}"
//!           | "d" "(" [ index { "," index } ] ")" "{" expr "}"
//!           | IDENT [ "[" [ indices ] [ ";" [ indices ] ] "]" ] ;
//! indices   = index { "," index } ;
//! index     = INT | IDENT ;                          (* IDENT is a bound index *)
//! ```
//!
//! References resolve to a definition, then a constant, then a symbol.
//! `x[i,j;k,l]` is component `(i,j)` of `x` differentiated along `k` and `l`;
//! on a definition the jet part means total derivatives. Antifields are
//! named `x~`. Free indices in an assignment target range over the slot, and
//! only independent components of (anti)symmetric symbols are assigned.

mod ast;
mod eval;
mod lexer;
mod theory_file;

pub use eval::{Constant, Scope};
pub use theory_file::{parse_theory, parse_theory_with, ParseOptions, TheoryFile};

use crate::algebra::{GradedPoly, Registry};
use crate::error::Result;

/// Parse one expression against a registry and optional named constants and definitions.
pub fn parse_expr_in(src: &str, reg: &Registry, scope: &Scope) -> Result<GradedPoly> {
    let mut p = ast::Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    eval::Eval { reg, scope }.eval(&e, &mut Vec::new())
}

/// Parse one expression using only the registry's symbols.
pub fn parse_expr(src: &str, reg: &Registry) -> Result<GradedPoly> {
    parse_expr_in(src, reg, &Scope::new(reg.dim()))
}
