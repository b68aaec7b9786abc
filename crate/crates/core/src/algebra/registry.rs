//! Symbol declarations and the frozen symbol registry.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::algebra::var::{JetSpace, MultiIndex, SymId, Var, MAX_COMPONENT, MAX_SLOTS};
use crate::error::{Error, Result};

/// Suffix that names the antifield of a symbol: the antifield of `a` is `a~`.
pub const ANTIFIELD_SUFFIX: char = '~';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Field,
    /// A fixed section, not varied; it still carries jets.
    Background,
    Ghost { stage: u8 },
    /// `stage == -1` pairs with a field, `stage == k` with a stage-k ghost.
    Antifield { stage: i8 },
}

impl SymbolKind {
    fn rank(self) -> (u8, i8) {
        match self {
            SymbolKind::Field => (0, 0),
            SymbolKind::Background => (1, 0),
            SymbolKind::Ghost { stage } => (2, stage as i8),
            SymbolKind::Antifield { stage } => (3, stage),
        }
    }

    pub fn is_antifield(self) -> bool {
        matches!(self, SymbolKind::Antifield { .. })
    }

    pub fn is_ghost(self) -> bool {
        matches!(self, SymbolKind::Ghost { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

/// How the Grassmann parity of a component is determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParitySpec {
    Fixed(bool),
    /// Parity read from a table at the value of one slot, optionally flipped.
    Table { table: Vec<bool>, slot: usize, flip: bool },
}

impl ParitySpec {
    fn eval(&self, comp: &[u8]) -> bool {
        match self {
            ParitySpec::Fixed(p) => *p,
            ParitySpec::Table { table, slot, flip } => table[comp[*slot] as usize] ^ flip,
        }
    }

    fn flipped(&self) -> ParitySpec {
        match self {
            ParitySpec::Fixed(p) => ParitySpec::Fixed(!p),
            ParitySpec::Table { table, slot, flip } => ParitySpec::Table {
                table: table.clone(),
                slot: *slot,
                flip: !flip,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
    /// Range of each index slot.
    pub slots: Vec<u8>,
    pub symmetry: Symmetry,
    pub parity: ParitySpec,
    /// For antifields: the symbol they pair with.
    pub pairs_with: Option<String>,
}

impl SymbolDecl {
    pub fn new(name: &str, kind: SymbolKind, slots: Vec<u8>, parity: ParitySpec) -> SymbolDecl {
        SymbolDecl {
            name: name.to_string(),
            kind,
            slots,
            symmetry: Symmetry::None,
            parity,
            pairs_with: None,
        }
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> SymbolDecl {
        self.symmetry = symmetry;
        self
    }

    pub fn ghost_number(&self) -> i32 {
        match self.kind {
            SymbolKind::Ghost { stage } => stage as i32 + 1,
            _ => 0,
        }
    }

    pub fn antifield_number(&self) -> i32 {
        match self.kind {
            SymbolKind::Ghost { stage } => -(stage as i32 + 1),
            SymbolKind::Antifield { stage: -1 } => 1,
            SymbolKind::Antifield { stage } => stage as i32 + 2,
            _ => 0,
        }
    }

    pub fn parity_of(&self, comp: &[u8]) -> bool {
        self.parity.eval(comp)
    }

    /// Canonical independent component for `comp` plus the sign relating them;
    /// `None` if the component vanishes identically (repeated antisymmetric index).
    pub fn canonical_component(&self, comp: &[u8]) -> Option<(Vec<u8>, i64)> {
        let mut c = comp.to_vec();
        match self.symmetry {
            Symmetry::None => Some((c, 1)),
            Symmetry::Symmetric => {
                c.sort_unstable();
                Some((c, 1))
            }
            Symmetry::Antisymmetric => {
                let mut sign = 1;
                for i in 0..c.len() {
                    for j in 0..c.len() - 1 - i {
                        if c[j] > c[j + 1] {
                            c.swap(j, j + 1);
                            sign = -sign;
                        } else if c[j] == c[j + 1] {
                            return None;
                        }
                    }
                }
                if c.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                Some((c, sign))
            }
        }
    }

    /// All independent components, in increasing order.
    pub fn components(&self) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = vec![vec![]];
        for &range in &self.slots {
            let mut next = Vec::new();
            for prefix in &out {
                for v in 0..range {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out.retain(|c| matches!(self.canonical_component(c), Some((ref k, _)) if k == c));
        out
    }
}

static NEXT_REGISTRY_ID: AtomicU32 = AtomicU32::new(1);

/// Frozen table of symbols. Symbol ids follow the global variable order:
/// kind rank (field, background, ghost, antifield), then stage, then name.
#[derive(Clone, Debug)]
pub struct Registry {
    id: u32,
    space: JetSpace,
    symbols: Vec<SymbolDecl>,
    by_name: HashMap<String, SymId>,
    antifield_of: HashMap<SymId, SymId>,
    paired_of: HashMap<SymId, SymId>,
}

impl Registry {
    /// Freeze a symbol list. Every field and ghost gets an antifield named
    /// `<name>~` unless one is declared explicitly.
    pub fn new(space: JetSpace, decls: Vec<SymbolDecl>) -> Result<Registry> {
        let mut all = decls;
        let mut seen: HashMap<String, ()> = HashMap::new();
        for d in &all {
            if seen.insert(d.name.clone(), ()).is_some() {
                return Err(Error::Validation(format!("symbol `{}` declared twice", d.name)));
            }
            if d.slots.len() > MAX_SLOTS {
                return Err(Error::Validation(format!("symbol `{}` has too many index slots", d.name)));
            }
            if d.slots.iter().any(|&r| r == 0 || r > MAX_COMPONENT) {
                return Err(Error::Validation(format!("symbol `{}` has an index range outside 1..=16", d.name)));
            }
        }
        let mut extra = Vec::new();
        for d in &all {
            let stage = match d.kind {
                SymbolKind::Field => -1,
                SymbolKind::Ghost { stage } => stage as i8,
                _ => continue,
            };
            let name = format!("{}{}", d.name, ANTIFIELD_SUFFIX);
            if seen.contains_key(&name) {
                continue;
            }
            extra.push(SymbolDecl {
                name,
                kind: SymbolKind::Antifield { stage },
                slots: d.slots.clone(),
                symmetry: d.symmetry,
                parity: d.parity.flipped(),
                pairs_with: Some(d.name.clone()),
            });
        }
        all.extend(extra);
        if all.len() > 255 {
            return Err(Error::Validation("too many symbols".into()));
        }
        all.sort_by(|a, b| (a.kind.rank(), &a.name).cmp(&(b.kind.rank(), &b.name)));
        let by_name: HashMap<String, SymId> =
            all.iter().enumerate().map(|(i, d)| (d.name.clone(), SymId(i as u8))).collect();
        let mut antifield_of = HashMap::new();
        let mut paired_of = HashMap::new();
        for (i, d) in all.iter().enumerate() {
            if let Some(p) = &d.pairs_with {
                let pid = *by_name
                    .get(p)
                    .ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
                antifield_of.insert(pid, SymId(i as u8));
                paired_of.insert(SymId(i as u8), pid);
            }
        }
        Ok(Registry {
            id: NEXT_REGISTRY_ID.fetch_add(1, Ordering::Relaxed),
            space,
            symbols: all,
            by_name,
            antifield_of,
            paired_of,
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    pub fn dim(&self) -> u8 {
        self.space.dim
    }

    pub fn cap(&self) -> u8 {
        self.space.cap
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymId, &SymbolDecl)> {
        self.symbols.iter().enumerate().map(|(i, d)| (SymId(i as u8), d))
    }

    pub fn decl(&self, id: SymId) -> &SymbolDecl {
        &self.symbols[id.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<SymId> {
        self.by_name.get(name).copied()
    }

    pub fn kind(&self, v: Var) -> SymbolKind {
        self.decl(v.sym()).kind
    }

    pub fn name(&self, v: Var) -> &str {
        &self.decl(v.sym()).name
    }

    pub fn arity(&self, v: Var) -> usize {
        self.decl(v.sym()).slots.len()
    }

    pub fn ghost_number(&self, v: Var) -> i32 {
        self.decl(v.sym()).ghost_number()
    }

    pub fn antifield_number(&self, v: Var) -> i32 {
        self.decl(v.sym()).antifield_number()
    }

    /// The variable `name[comp; jet]`, canonicalized. Returns the sign from
    /// (anti)symmetric reordering, or `None` when the component vanishes.
    pub fn var(&self, name: &str, comp: &[u8], jet: MultiIndex) -> Result<Option<(Var, i64)>> {
        let id = self.lookup(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.var_by_id(id, comp, jet)
    }

    pub fn var_by_id(&self, id: SymId, comp: &[u8], jet: MultiIndex) -> Result<Option<(Var, i64)>> {
        let d = self.decl(id);
        if comp.len() != d.slots.len() {
            return Err(Error::IndexArity {
                symbol: d.name.clone(),
                expected: d.slots.len(),
                found: comp.len(),
            });
        }
        for (i, (&c, &r)) in comp.iter().zip(&d.slots).enumerate() {
            if c >= r {
                return Err(Error::Validation(format!(
                    "index {c} out of range {r} in slot {i} of `{}`",
                    d.name
                )));
            }
        }
        if jet.order() > self.space.cap as u32 {
            return Err(Error::JetCap { order: jet.order(), cap: self.space.cap });
        }
        if jet.counts().iter().enumerate().any(|(i, &c)| c > 0 && i >= self.space.dim as usize) {
            return Err(Error::Validation(format!("jet index out of range for dimension {}", self.space.dim)));
        }
        Ok(d.canonical_component(comp).map(|(c, sign)| {
            let odd = d.parity_of(&c);
            (Var::new(id, &c, jet, odd), sign)
        }))
    }

    /// Zero-order variables of every independent component of `id`.
    pub fn base_vars(&self, id: SymId) -> Vec<Var> {
        let d = self.decl(id);
        d.components()
            .into_iter()
            .map(|c| Var::new(id, &c, MultiIndex::EMPTY, d.parity_of(&c)))
            .collect()
    }

    /// Zero-order variables of every symbol matching `pred`.
    pub fn base_vars_where(&self, pred: impl Fn(&SymbolDecl) -> bool) -> Vec<Var> {
        self.symbols()
            .filter(|(_, d)| pred(d))
            .flat_map(|(id, _)| self.base_vars(id))
            .collect()
    }

    /// Dynamic symbols: everything except backgrounds.
    pub fn is_dynamic(&self, v: Var) -> bool {
        self.kind(v) != SymbolKind::Background
    }

    /// Antifield of a field or ghost variable (same component and jet).
    pub fn antifield(&self, v: Var) -> Option<Var> {
        let a = *self.antifield_of.get(&v.sym())?;
        let comp = v.comps(self.arity(v));
        Some(Var::new(a, &comp, v.jet(), self.decl(a).parity_of(&comp)))
    }

    /// The field or ghost an antifield variable pairs with.
    pub fn paired(&self, v: Var) -> Option<Var> {
        let p = *self.paired_of.get(&v.sym())?;
        let comp = v.comps(self.arity(v));
        Some(Var::new(p, &comp, v.jet(), self.decl(p).parity_of(&comp)))
    }

    pub fn display_var(&self, v: Var) -> VarDisplay<'_> {
        VarDisplay { reg: self, var: v }
    }
}

/// Prints a variable in source grammar: `name[comp;jet]`.
pub struct VarDisplay<'a> {
    reg: &'a Registry,
    var: Var,
}

impl fmt::Display for VarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var;
        let name = self.reg.name(v);
        let comp = v.comps(self.reg.arity(v));
        let jet = v.jet().entries();
        if comp.is_empty() && jet.is_empty() {
            return write!(f, "{name}");
        }
        write!(f, "{name}[")?;
        let cs: Vec<String> = comp.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", cs.join(","))?;
        if !jet.is_empty() {
            let js: Vec<String> = jet.iter().map(|c| c.to_string()).collect();
            write!(f, ";{}", js.join(","))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Registry {
        Registry::new(
            JetSpace::new(3, 4),
            vec![
                SymbolDecl::new("a", SymbolKind::Field, vec![2, 3], ParitySpec::Fixed(false)),
                SymbolDecl::new("c", SymbolKind::Ghost { stage: 0 }, vec![2], ParitySpec::Fixed(true)),
                SymbolDecl::new("B", SymbolKind::Field, vec![3, 3], ParitySpec::Fixed(false))
                    .with_symmetry(Symmetry::Antisymmetric),
            ],
        )
        .unwrap()
    }

    #[test]
    fn antifields_are_generated_with_flipped_parity() {
        let r = reg();
        let (a, _) = r.var("a", &[1, 2], MultiIndex::EMPTY).unwrap().unwrap();
        let abar = r.antifield(a).unwrap();
        assert_eq!(r.name(abar), "a~");
        assert!(abar.is_odd());
        assert_eq!(r.paired(abar), Some(a));
        assert_eq!(r.antifield_number(abar), 1);
        let (c, _) = r.var("c", &[0], MultiIndex::EMPTY).unwrap().unwrap();
        let cbar = r.antifield(c).unwrap();
        assert!(!cbar.is_odd());
        assert_eq!(r.antifield_number(cbar), 2);
        assert_eq!(r.ghost_number(c), 1);
        assert_eq!(r.antifield_number(c), -1);
    }

    #[test]
    fn global_order_puts_fields_before_ghosts_before_antifields() {
        let r = reg();
        let names: Vec<&str> = r.symbols().map(|(_, d)| d.name.as_str()).collect();
        assert_eq!(names, vec!["B", "a", "c", "B~", "a~", "c~"]);
    }

    #[test]
    fn antisymmetric_components() {
        let r = reg();
        let (v, s) = r.var("B", &[2, 0], MultiIndex::EMPTY).unwrap().unwrap();
        assert_eq!(s, -1);
        assert_eq!(v.comps(2), vec![0, 2]);
        assert!(r.var("B", &[1, 1], MultiIndex::EMPTY).unwrap().is_none());
        assert_eq!(r.base_vars(r.lookup("B").unwrap()).len(), 3);
    }

    #[test]
    fn errors() {
        let r = reg();
        assert!(matches!(r.var("zz", &[], MultiIndex::EMPTY), Err(Error::UnknownSymbol(_))));
        assert!(matches!(r.var("a", &[0], MultiIndex::EMPTY), Err(Error::IndexArity { .. })));
        let deep = MultiIndex::from_entries(&[0, 0, 0, 0, 0]);
        assert!(matches!(r.var("a", &[0, 0], deep), Err(Error::JetCap { .. })));
    }
}
