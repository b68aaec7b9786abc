//! Jet variables and symmetric multi-indices.

use std::fmt;

/// Largest supported spacetime dimension.
pub const MAX_DIM: usize = 8;
/// Largest number of index slots on one symbol.
pub const MAX_SLOTS: usize = 4;
/// Largest value a component index may take (exclusive).
pub const MAX_COMPONENT: u8 = 16;
/// Hard ceiling for any jet-order cap (per-coordinate counts are 4-bit).
pub const MAX_JET_ORDER: u8 = 15;

/// Dimension and jet-order cap of the jet space a theory lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpace {
    pub dim: u8,
    pub cap: u8,
}

impl JetSpace {
    pub fn new(dim: u8, cap: u8) -> JetSpace {
        assert!((1..=MAX_DIM as u8).contains(&dim), "dimension out of range");
        assert!(cap <= MAX_JET_ORDER, "jet cap out of range");
        JetSpace { dim, cap }
    }
}

/// A symmetric multi-index, stored as per-coordinate multiplicities.
///
/// Any permutation of the same entries gives the same value.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    counts: [u8; MAX_DIM],
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex { counts: [0; MAX_DIM] };

    pub fn from_entries(entries: &[u8]) -> MultiIndex {
        let mut counts = [0u8; MAX_DIM];
        for &e in entries {
            counts[e as usize] += 1;
        }
        MultiIndex { counts }
    }

    pub fn from_counts(counts: [u8; MAX_DIM]) -> MultiIndex {
        MultiIndex { counts }
    }

    pub fn counts(&self) -> &[u8; MAX_DIM] {
        &self.counts
    }

    pub fn count(&self, coord: u8) -> u8 {
        self.counts[coord as usize]
    }

    pub fn order(&self) -> u32 {
        self.counts.iter().map(|&c| c as u32).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    /// Sorted entries, e.g. `(0,0,2)`.
    pub fn entries(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.order() as usize);
        for (i, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(i as u8);
            }
        }
        out
    }

    pub fn with(&self, coord: u8) -> MultiIndex {
        let mut m = *self;
        m.counts[coord as usize] += 1;
        m
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let mut m = *self;
        for i in 0..MAX_DIM {
            m.counts[i] += other.counts[i];
        }
        m
    }

    /// `self - other` if `other` is a sub-multiset.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut m = *self;
        for i in 0..MAX_DIM {
            m.counts[i] = m.counts[i].checked_sub(other.counts[i])?;
        }
        Some(m)
    }

    /// All multi-indices over `dim` coordinates with order `<= max`, by order then lexicographically.
    pub fn all_up_to(dim: u8, max: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::EMPTY];
        let mut frontier = vec![(MultiIndex::EMPTY, 0u8)];
        for _ in 0..max {
            let mut next = Vec::new();
            for (m, lo) in frontier {
                for c in lo..dim {
                    next.push((m.with(c), c));
                }
            }
            out.extend(next.iter().map(|(m, _)| *m));
            frontier = next;
        }
        out
    }

    /// Sub-multisets of `self`.
    pub fn submultisets(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::EMPTY];
        for i in 0..MAX_DIM {
            let c = self.counts[i];
            if c == 0 {
                continue;
            }
            let mut grown = Vec::with_capacity(out.len() * (c as usize + 1));
            for m in &out {
                for k in 0..=c {
                    let mut m2 = *m;
                    m2.counts[i] = k;
                    grown.push(m2);
                }
            }
            out = grown;
        }
        out
    }

    /// Product of per-coordinate binomials `C(self_i, sub_i)`.
    pub fn binomial(&self, sub: &MultiIndex) -> u64 {
        let mut acc = 1u64;
        for i in 0..MAX_DIM {
            acc *= binom(self.counts[i] as u64, sub.counts[i] as u64);
        }
        acc
    }
}

pub(crate) fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

/// Index of a symbol in a frozen registry. Registry order is the global
/// variable order, so comparing ids compares (kind rank, name).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymId(pub u8);

/// A concrete jet coordinate `s^A_Λ`, packed into one word.
///
/// Layout from the most significant end: symbol id (8 bits), component
/// slots (4 × 4 bits), jet order (4 bits), per-coordinate jet counts
/// (8 × 4 bits), parity (1 bit). Integer order of the packed word is the
/// global variable order used for every odd reordering sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u64);

const ODD_BITS: u32 = 1;
const COUNT_SHIFT: u32 = ODD_BITS;
const ORDER_SHIFT: u32 = COUNT_SHIFT + 32;
const COMP_SHIFT: u32 = ORDER_SHIFT + 4;
const SYM_SHIFT: u32 = COMP_SHIFT + 16;

impl Var {
    pub fn new(sym: SymId, comp: &[u8], jet: MultiIndex, odd: bool) -> Var {
        assert!(comp.len() <= MAX_SLOTS);
        let mut w = (sym.0 as u64) << SYM_SHIFT;
        for (i, &c) in comp.iter().enumerate() {
            assert!(c < MAX_COMPONENT);
            w |= (c as u64) << (COMP_SHIFT + 4 * (MAX_SLOTS as u32 - 1 - i as u32));
        }
        w |= Self::pack_jet(&jet);
        if odd {
            w |= 1;
        }
        Var(w)
    }

    fn pack_jet(jet: &MultiIndex) -> u64 {
        let order = jet.order();
        assert!(order <= MAX_JET_ORDER as u32, "jet order overflow");
        let mut w = (order as u64) << ORDER_SHIFT;
        for (i, &c) in jet.counts().iter().enumerate() {
            w |= (c as u64) << (COUNT_SHIFT + 4 * (MAX_DIM as u32 - 1 - i as u32));
        }
        w
    }

    pub fn sym(self) -> SymId {
        SymId((self.0 >> SYM_SHIFT) as u8)
    }

    pub fn is_odd(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn comp(self, slot: usize) -> u8 {
        ((self.0 >> (COMP_SHIFT + 4 * (MAX_SLOTS as u32 - 1 - slot as u32))) & 0xf) as u8
    }

    pub fn comps(self, arity: usize) -> Vec<u8> {
        (0..arity).map(|i| self.comp(i)).collect()
    }

    pub fn jet_order(self) -> u32 {
        ((self.0 >> ORDER_SHIFT) & 0xf) as u32
    }

    pub fn jet(self) -> MultiIndex {
        let mut counts = [0u8; MAX_DIM];
        for (i, c) in counts.iter_mut().enumerate() {
            *c = ((self.0 >> (COUNT_SHIFT + 4 * (MAX_DIM as u32 - 1 - i as u32))) & 0xf) as u8;
        }
        MultiIndex::from_counts(counts)
    }

    /// Same symbol component, jet part replaced.
    pub fn with_jet(self, jet: MultiIndex) -> Var {
        let mask = (1u64 << (ORDER_SHIFT + 4)) - 1;
        let keep = self.0 & !(mask & !1);
        Var(keep | Self::pack_jet(&jet))
    }

    /// Zero-order variable with the same symbol component.
    pub fn base(self) -> Var {
        self.with_jet(MultiIndex::EMPTY)
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v{}{:?}{:?}{}",
            self.sym().0,
            self.comps(MAX_SLOTS),
            self.jet(),
            if self.is_odd() { "'" } else { "" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_is_order_independent() {
        assert_eq!(MultiIndex::from_entries(&[0, 1]), MultiIndex::from_entries(&[1, 0]));
        assert_eq!(MultiIndex::from_entries(&[2, 0, 2]).entries(), vec![0, 2, 2]);
        assert_eq!(MultiIndex::from_entries(&[2, 0, 2]).order(), 3);
    }

    #[test]
    fn var_roundtrip() {
        let j = MultiIndex::from_entries(&[3, 1, 1]);
        let v = Var::new(SymId(7), &[2, 0, 15], j, true);
        assert_eq!(v.sym(), SymId(7));
        assert_eq!(v.comps(3), vec![2, 0, 15]);
        assert_eq!(v.jet(), j);
        assert_eq!(v.jet_order(), 3);
        assert!(v.is_odd());
        let w = v.with_jet(MultiIndex::from_entries(&[0]));
        assert_eq!(w.jet_order(), 1);
        assert!(w.is_odd());
        assert_eq!(w.comps(3), vec![2, 0, 15]);
        assert_eq!(v.base().jet(), MultiIndex::EMPTY);
    }

    #[test]
    fn var_order_is_symbol_then_component_then_jet() {
        let a = Var::new(SymId(1), &[3], MultiIndex::from_entries(&[0, 0]), false);
        let b = Var::new(SymId(2), &[0], MultiIndex::EMPTY, false);
        let c = Var::new(SymId(1), &[4], MultiIndex::EMPTY, false);
        assert!(a < b);
        assert!(a < c);
    }

    #[test]
    fn enumerate_multi_indices() {
        // 1 + 3 + 6 multi-indices of order <= 2 in 3 coordinates
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
        let m = MultiIndex::from_entries(&[0, 0, 1]);
        assert_eq!(m.submultisets().len(), 6);
        assert_eq!(m.binomial(&MultiIndex::from_entries(&[0])), 2);
    }
}
