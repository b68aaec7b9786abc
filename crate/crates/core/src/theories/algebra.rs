//! Structure constants of (super) Lie algebras for the gauge fixtures.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Q;

/// `[e_i, e_j} = Σ_r c^r_{ij} e_r` with parities `[r]` and an invariant form `h_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub name: String,
    pub parity: Vec<bool>,
    /// Keyed `(r, i, j)`.
    pub c: BTreeMap<(u8, u8, u8), Q>,
    pub h: BTreeMap<(u8, u8), Q>,
}

fn sign(odd: bool) -> Q {
    if odd {
        Q::from(-1)
    } else {
        Q::from(1)
    }
}

impl StructureConstants {
    /// Build from the brackets `[e_i, e_j}` for `i ≤ j`; the rest follows by
    /// graded antisymmetry. `h` is the supertrace form when not given.
    pub fn from_brackets(
        name: &str,
        parity: Vec<bool>,
        brackets: &[(u8, u8, &[(u8, Q)])],
        h: Option<BTreeMap<(u8, u8), Q>>,
    ) -> Result<StructureConstants> {
        let mut c = BTreeMap::new();
        for (i, j, terms) in brackets {
            for (r, q) in terms.iter() {
                c.insert((*r, *i, *j), q.clone());
                if i != j {
                    let s = sign(parity[*i as usize] && parity[*j as usize]);
                    c.insert((*r, *j, *i), -(&s * q));
                }
            }
        }
        let mut out = StructureConstants { name: name.into(), parity, c, h: BTreeMap::new() };
        out.h = match h {
            Some(h) => h,
            None => out.supertrace_form(),
        };
        out.validate()?;
        Ok(out)
    }

    pub fn dim(&self) -> u8 {
        self.parity.len() as u8
    }

    pub fn get(&self, r: u8, i: u8, j: u8) -> Q {
        self.c.get(&(r, i, j)).cloned().unwrap_or_default()
    }

    fn odd(&self, i: u8) -> bool {
        self.parity[i as usize]
    }

    /// `str(ad e_i ad e_j) = Σ_{r,s} (−1)^{[r]} c^r_{is} c^s_{jr}`.
    pub fn supertrace_form(&self) -> BTreeMap<(u8, u8), Q> {
        let n = self.dim();
        let mut h = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let mut v = Q::zero();
                for r in 0..n {
                    for s in 0..n {
                        let t = &self.get(r, i, s) * &self.get(s, j, r);
                        v += &(&sign(self.odd(r)) * &t);
                    }
                }
                if !v.is_zero() {
                    h.insert((i, j), v);
                }
            }
        }
        h
    }

    /// Graded antisymmetry, the graded Jacobi identity, and graded
    /// symmetry, parity and invariance of `h`.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let bad = |what: String| Err(Error::Validation(format!("algebra {}: {what}", self.name)));
        for (&(r, i, j), q) in &self.c {
            if r >= n || i >= n || j >= n {
                return bad(format!("index out of range in c[{r},{i},{j}]"));
            }
            if !q.is_zero() && self.odd(r) != (self.odd(i) ^ self.odd(j)) {
                return bad(format!("c[{r},{i},{j}] does not respect parity"));
            }
            let back = &sign(self.odd(i) && self.odd(j)) * &self.get(r, j, i);
            if &back + q != Q::zero() {
                return bad(format!("graded antisymmetry fails for c[{r},{i},{j}]"));
            }
        }
        for i in 0..n {
            for a in 0..n {
                for b in 0..n {
                    for r in 0..n {
                        let mut v = Q::zero();
                        for (x, y, z) in [(i, a, b), (a, b, i), (b, i, a)] {
                            let s = sign(self.odd(x) && self.odd(z));
                            for j in 0..n {
                                let t = &self.get(r, x, j) * &self.get(j, y, z);
                                v += &(&s * &t);
                            }
                        }
                        if !v.is_zero() {
                            return bad(format!("graded Jacobi identity fails for ({i},{a},{b}) in component {r}"));
                        }
                    }
                }
            }
        }
        for (&(i, j), q) in &self.h {
            if self.odd(i) != self.odd(j) && !q.is_zero() {
                return bad(format!("h[{i},{j}] mixes parities"));
            }
            let back = self.h.get(&(j, i)).cloned().unwrap_or_default();
            if &back != &(&sign(self.odd(i) && self.odd(j)) * q) {
                return bad(format!("h[{i},{j}] is not graded symmetric"));
            }
        }
        // h([e_i, e_j}, e_k) = h(e_i, [e_j, e_k})
        let hv = |i: u8, j: u8| self.h.get(&(i, j)).cloned().unwrap_or_default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = Q::zero();
                    for r in 0..n {
                        v += &(&self.get(r, i, j) * &hv(r, k));
                        v -= &(&hv(i, r) * &self.get(r, j, k));
                    }
                    if !v.is_zero() {
                        return bad(format!("h is not invariant at ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// su(2) with `c^r_{ij} = ε_{rij}` and `h = δ`.
    pub fn su2() -> StructureConstants {
        let one = Q::from(1);
        let h = (0..3).map(|i| ((i, i), one.clone())).collect();
        Self::from_brackets(
            "su2",
            vec![false; 3],
            &[(0, 1, &[(2, one.clone())]), (1, 2, &[(0, one.clone())]), (0, 2, &[(1, -one.clone())])],
            Some(h),
        )
        .expect("su(2) tables are consistent")
    }

    /// osp(1|2) on `H, E+, E−, F+, F−` with the supertrace form.
    pub fn osp12() -> StructureConstants {
        Self::osp12_with(Q::new(1, 2)).expect("osp(1|2) tables are consistent")
    }

    /// osp(1|2) with `{F+, F−} = k H`; only `k = 1/2` is consistent.
    pub fn osp12_with(k: Q) -> Result<StructureConstants> {
        let q = |a: i64, b: i64| Q::new(a, b);
        let (h, ep, em, fp, fm) = (0, 1, 2, 3, 4);
        Self::from_brackets(
            "osp12",
            vec![false, false, false, true, true],
            &[
                (h, ep, &[(ep, q(1, 1))]),
                (h, em, &[(em, q(-1, 1))]),
                (ep, em, &[(h, q(2, 1))]),
                (h, fp, &[(fp, q(1, 2))]),
                (h, fm, &[(fm, q(-1, 2))]),
                (ep, fm, &[(fp, q(-1, 1))]),
                (em, fp, &[(fm, q(-1, 1))]),
                (fp, fp, &[(ep, q(1, 2))]),
                (fm, fm, &[(em, q(-1, 2))]),
                (fp, fm, &[(h, k)]),
            ],
            None,
        )
    }

    pub fn is_graded(&self) -> bool {
        self.parity.iter().any(|&p| p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        let s = StructureConstants::su2();
        assert_eq!(s.get(0, 2, 1), Q::from(-1));
        let o = StructureConstants::osp12();
        assert!(o.is_graded());
        assert_eq!(o.get(0, 4, 3), Q::new(1, 2));
        assert!(!o.h.is_empty());
    }

    #[test]
    fn wrong_anticommutator_breaks_jacobi() {
        let e = StructureConstants::osp12_with(Q::new(-1, 2)).unwrap_err();
        assert!(e.to_string().contains("Jacobi"), "{e}");
    }
}
