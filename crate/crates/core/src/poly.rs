//! Sparse multivariate polynomials over 𝔽_p.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{compare, Monomial, OrderTag};

/// Everything a polynomial operation needs besides its operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyCtx {
    pub field: Field,
    pub order: OrderTag,
    pub nvars: usize,
}

impl PolyCtx {
    pub fn new(field: Field, order: OrderTag, nvars: usize) -> Result<Self> {
        if nvars > crate::monomial::MAX_VARS {
            return Err(Error::TooManyVariables(nvars));
        }
        Ok(PolyCtx { field, order, nvars })
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        compare(a, b, self.order)
    }
}

/// Terms sorted strictly descending in the ambient order, coefficients nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: u32) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: u32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly { terms: alloc::vec![(m, c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), 1)
    }

    /// Sorts, merges duplicates and drops zero coefficients.
    pub fn from_terms(mut terms: Vec<(Monomial, u32)>, ctx: &PolyCtx) -> Self {
        let f = ctx.field;
        terms.sort_by(|a, b| ctx.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % f.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { terms: out }
    }

    pub fn normalize(&self, ctx: &PolyCtx) -> Self {
        Self::from_terms(self.terms.clone(), ctx)
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.0.degree() == t.0.degree()),
        }
    }

    pub fn arity(&self) -> usize {
        self.terms.iter().map(|t| t.0.arity()).max().unwrap_or(0)
    }

    pub fn neg(&self, ctx: &PolyCtx) -> Self {
        Poly { terms: self.terms.iter().map(|&(m, c)| (m, ctx.field.neg(c))).collect() }
    }

    pub fn scale(&self, c: u32, ctx: &PolyCtx) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|&(m, d)| (m, ctx.field.mul(c, d))).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32, ctx: &PolyCtx) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|&(n, d)| (n.mul(m), ctx.field.mul(c, d))).collect() }
    }

    /// a·self + b·other via a sorted merge.
    pub fn lin_comb(&self, a: u32, other: &Poly, b: u32, ctx: &PolyCtx) -> Self {
        let f = ctx.field;
        let (s, o) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(s.len() + o.len());
        let (mut i, mut j) = (0, 0);
        while i < s.len() || j < o.len() {
            let ord = if i == s.len() {
                Ordering::Less
            } else if j == o.len() {
                Ordering::Greater
            } else {
                ctx.cmp(&s[i].0, &o[j].0)
            };
            match ord {
                Ordering::Greater => {
                    let c = f.mul(a, s[i].1);
                    if c != 0 {
                        out.push((s[i].0, c));
                    }
                    i += 1;
                }
                Ordering::Less => {
                    let c = f.mul(b, o[j].1);
                    if c != 0 {
                        out.push((o[j].0, c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(f.mul(a, s[i].1), f.mul(b, o[j].1));
                    if c != 0 {
                        out.push((s[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly, ctx: &PolyCtx) -> Self {
        self.lin_comb(1, other, 1, ctx)
    }

    pub fn sub(&self, other: &Poly, ctx: &PolyCtx) -> Self {
        self.lin_comb(1, other, ctx.field.neg(1), ctx)
    }

    pub fn mul(&self, other: &Poly, ctx: &PolyCtx) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(m, c) in &self.terms {
            for &(n, d) in &other.terms {
                terms.push((m.mul(&n), ctx.field.mul(c, d)));
            }
        }
        Self::from_terms(terms, ctx)
    }

    /// Product with an arity check against the context.
    pub fn try_mul(&self, other: &Poly, ctx: &PolyCtx) -> Result<Self> {
        for p in [self, other] {
            if p.arity() > ctx.nvars {
                return Err(Error::ArityMismatch { expected: ctx.nvars, found: p.arity() });
            }
        }
        Ok(self.mul(other, ctx))
    }

    pub fn pow(&self, k: u32, ctx: &PolyCtx) -> Self {
        let mut r = Poly::constant(1);
        for _ in 0..k {
            r = r.mul(self, ctx);
        }
        r
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self, ctx: &PolyCtx) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(&(_, c)) => self.scale(ctx.field.inv(c), ctx),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PolyCtx {
        PolyCtx::new(Field::default(), OrderTag::Degrevlex, 3).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx();
        let (x, y) = (Poly::var(0), Poly::var(1));
        let lhs = x.add(&y, &c).mul(&x.sub(&y, &c), &c);
        let rhs = x.mul(&x, &c).sub(&y.mul(&y, &c), &c);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.terms().len(), 2);
        assert_eq!(x.mul(&Poly::constant(1), &c), x);
    }

    #[test]
    fn arity_checked() {
        let c = PolyCtx::new(Field::default(), OrderTag::Degrevlex, 2).unwrap();
        assert!(matches!(Poly::var(2).try_mul(&Poly::var(0), &c), Err(Error::ArityMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn normalization_merges_and_drops() {
        let c = ctx();
        let m = Monomial::var(0);
        let p = Poly::from_terms(alloc::vec![(m, 5), (m, 31998)], &c);
        assert!(p.is_zero());
        let q = Poly::from_terms(alloc::vec![(Monomial::var(1), 1), (m, 2), (m, 3)], &c);
        assert_eq!(q.terms(), &[(m, 5), (Monomial::var(1), 1)]);
        assert_eq!(q.normalize(&c), q);
    }
}
