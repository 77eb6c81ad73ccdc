//! Vectors in graded free modules S(−a₁) ⊕ … ⊕ S(−a_m).

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::field::Field;
use crate::monomial::{lex, revlex, Monomial, OrderTag};
use crate::poly::{Poly, PolyCtx};

/// One term c·x^mono·e_pos. `deg` is the shifted degree mono.degree() + a_pos.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub pos: u32,
    pub deg: i32,
    pub mono: Monomial,
    pub c: u32,
}

/// Term order on a free module: positions below `elim` form a block that
/// dominates the rest, then shifted degree, then the monomial tiebreak, then
/// position (smaller first). With `elim = 0` this is the module's canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub tag: OrderTag,
    pub elim: u32,
}

impl TermOrder {
    pub fn canonical(tag: OrderTag) -> Self {
        TermOrder { tag, elim: 0 }
    }

    #[inline]
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        let (ba, bb) = (a.pos < self.elim, b.pos < self.elim);
        if ba != bb {
            return if ba { Ordering::Greater } else { Ordering::Less };
        }
        a.deg
            .cmp(&b.deg)
            .then_with(|| match self.tag {
                OrderTag::Degrevlex => revlex(&a.mono, &b.mono),
                _ => lex(&a.mono, &b.mono),
            })
            .then_with(|| b.pos.cmp(&a.pos))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeVector {
    terms: Vec<Term>,
}

impl FreeVector {
    pub fn zero() -> Self {
        FreeVector { terms: Vec::new() }
    }

    /// Builds from arbitrary terms; sorts, merges and drops zeros.
    pub fn from_terms(mut terms: Vec<Term>, ord: &TermOrder, field: Field) -> Self {
        terms.sort_by(|a, b| ord.cmp(b, a));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.pos == t.pos && last.mono == t.mono => last.c = field.add(last.c, t.c),
                _ => out.push(t),
            }
        }
        out.retain(|t| t.c != 0);
        FreeVector { terms: out }
    }

    /// Trusts that `terms` are already sorted under the relevant order.
    pub(crate) fn from_sorted(terms: Vec<Term>) -> Self {
        FreeVector { terms }
    }

    pub fn unit(pos: usize, shifts: &[i32]) -> Self {
        FreeVector { terms: alloc::vec![Term { pos: pos as u32, deg: shifts[pos], mono: Monomial::one(), c: 1 }] }
    }

    pub fn from_components(comps: &[Poly], shifts: &[i32], tag: OrderTag, field: Field) -> Self {
        let mut terms = Vec::new();
        for (p, poly) in comps.iter().enumerate() {
            for &(m, c) in poly.terms() {
                terms.push(Term { pos: p as u32, deg: m.degree() as i32 + shifts[p], mono: m, c });
            }
        }
        Self::from_terms(terms, &TermOrder::canonical(tag), field)
    }

    pub fn component(&self, pos: usize, ctx: &PolyCtx) -> Poly {
        Poly::from_terms(self.terms.iter().filter(|t| t.pos as usize == pos).map(|t| (t.mono, t.c)).collect(), ctx)
    }

    pub fn components(&self, rank: usize, ctx: &PolyCtx) -> Vec<Poly> {
        (0..rank).map(|p| self.component(p, ctx)).collect()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Shifted degree of the leading term (the degree, when homogeneous).
    pub fn degree(&self) -> Option<i32> {
        self.terms.first().map(|t| t.deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.deg == t.deg),
        }
    }

    pub fn max_pos(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.pos as usize).max()
    }

    /// Re-expresses positions and degrees; `f` maps (pos, deg) to new values.
    pub fn remap(&self, ord: &TermOrder, field: Field, f: impl Fn(u32, i32) -> (u32, i32)) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (pos, deg) = f(t.pos, t.deg);
                Term { pos, deg, ..*t }
            })
            .collect();
        Self::from_terms(terms, ord, field)
    }

    pub fn scale(&self, c: u32, field: Field) -> Self {
        if c == 0 {
            return Self::zero();
        }
        FreeVector { terms: self.terms.iter().map(|t| Term { c: field.mul(c, t.c), ..*t }).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32, field: Field) -> Self {
        if c == 0 {
            return Self::zero();
        }
        FreeVector { terms: mul_term_raw(&self.terms, m, c, field) }
    }

    pub fn mul_poly(&self, p: &Poly, ord: &TermOrder, field: Field) -> Self {
        let mut acc = FreeVector::zero();
        for &(m, c) in p.terms() {
            acc = acc.lin_comb(1, &self.mul_term(&m, c, field), 1, ord, field);
        }
        acc
    }

    pub fn lin_comb(&self, a: u32, other: &FreeVector, b: u32, ord: &TermOrder, field: Field) -> Self {
        FreeVector { terms: merge(&self.terms, a, &other.terms, b, ord, field) }
    }

    pub fn add(&self, other: &FreeVector, ord: &TermOrder, field: Field) -> Self {
        self.lin_comb(1, other, 1, ord, field)
    }

    pub fn sub(&self, other: &FreeVector, ord: &TermOrder, field: Field) -> Self {
        self.lin_comb(1, other, field.neg(1), ord, field)
    }

    pub fn monic(&self, field: Field) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(t) => self.scale(field.inv(t.c), field),
        }
    }
}

pub(crate) fn mul_term_raw(ts: &[Term], m: &Monomial, c: u32, field: Field) -> Vec<Term> {
    ts.iter()
        .map(|t| Term { pos: t.pos, deg: t.deg + m.degree() as i32, mono: t.mono.mul(m), c: field.mul(c, t.c) })
        .collect()
}

/// a·s + b·o for sorted term lists.
pub(crate) fn merge(s: &[Term], a: u32, o: &[Term], b: u32, ord: &TermOrder, f: Field) -> Vec<Term> {
    let mut out = Vec::with_capacity(s.len() + o.len());
    let (mut i, mut j) = (0, 0);
    while i < s.len() && j < o.len() {
        match ord.cmp(&s[i], &o[j]) {
            Ordering::Greater => {
                let c = f.mul(a, s[i].c);
                if c != 0 {
                    out.push(Term { c, ..s[i] });
                }
                i += 1;
            }
            Ordering::Less => {
                let c = f.mul(b, o[j].c);
                if c != 0 {
                    out.push(Term { c, ..o[j] });
                }
                j += 1;
            }
            Ordering::Equal => {
                let c = f.add(f.mul(a, s[i].c), f.mul(b, o[j].c));
                if c != 0 {
                    out.push(Term { c, ..s[i] });
                }
                i += 1;
                j += 1;
            }
        }
    }
    for t in &s[i..] {
        let c = f.mul(a, t.c);
        if c != 0 {
            out.push(Term { c, ..*t });
        }
    }
    for t in &o[j..] {
        let c = f.mul(b, t.c);
        if c != 0 {
            out.push(Term { c, ..*t });
        }
    }
    out
}
