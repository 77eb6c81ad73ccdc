//! Graded quotient rings k[x₁..xₙ]/a and the computation caps they carry.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::Engine;
use crate::monomial::{Monomial, OrderTag};
use crate::poly::{Poly, PolyCtx};
use crate::vector::{FreeVector, Term, TermOrder};

/// Limits for loops that the theory gives no bound for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Caps {
    /// Largest degree a Gröbner computation may reach.
    pub max_degree: u32,
    /// Exponent grid bound for strong d-sequence certification.
    pub exp_bound: u32,
    /// Attempts allowed to randomized constructions.
    pub retries: u32,
    /// Degree up to which identities quantified over all n are checked.
    pub verify_cap: u32,
    /// Largest n for which ψ(n) is computed.
    pub psi_max: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_degree: 40, exp_bound: 3, retries: 20, verify_cap: 10, psi_max: 24 }
    }
}

/// R = S/a with S = k[x₁..xₙ] standard graded. `relations` is the reduced
/// Gröbner basis of a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    ctx: PolyCtx,
    names: Vec<String>,
    relations: Vec<Poly>,
    pub caps: Caps,
}

impl Ring {
    pub fn polynomial(field: Field, names: Vec<String>) -> Result<Self> {
        Self::quotient(field, names, Vec::new(), Caps::default())
    }

    pub fn quotient(field: Field, names: Vec<String>, relations: Vec<Poly>, caps: Caps) -> Result<Self> {
        let ctx = PolyCtx::new(field, OrderTag::Degrevlex, names.len())?;
        let mut ring = Ring { ctx, names, relations: Vec::new(), caps };
        for r in &relations {
            if r.arity() > ring.nvars() {
                return Err(Error::ArityMismatch { expected: ring.nvars(), found: r.arity() });
            }
            if !r.is_homogeneous() {
                return Err(Error::Inhomogeneous(format!("relation {}", ring.fmt_poly(r))));
            }
        }
        let gens: Vec<FreeVector> = relations
            .iter()
            .map(|p| FreeVector::from_components(core::slice::from_ref(p), &[0], ring.ctx.order, field))
            .collect();
        let gb = ring.gb(&[0], &gens)?;
        ring.relations = gb.iter().map(|v| v.component(0, &ring.ctx)).collect();
        Ok(ring)
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    #[inline]
    pub fn ctx(&self) -> &PolyCtx {
        &self.ctx
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.ctx.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(i)
    }

    pub fn order(&self) -> TermOrder {
        TermOrder::canonical(self.ctx.order)
    }

    pub(crate) fn engine(&self, elim: u32, rank: usize) -> Engine {
        Engine {
            field: self.field(),
            ord: TermOrder { tag: self.ctx.order, elim },
            max_degree: self.caps.max_degree as i32,
            product_criterion: rank == 1 && elim == 0,
        }
    }

    /// Reduced Gröbner basis in the canonical order of F = ⊕ S(−shifts).
    pub(crate) fn gb(&self, shifts: &[i32], gens: &[FreeVector]) -> Result<Vec<FreeVector>> {
        for g in gens {
            if let Some(p) = g.max_pos() {
                if p >= shifts.len() {
                    return Err(Error::RankMismatch { expected: shifts.len(), found: p + 1 });
                }
            }
            if g.terms().iter().any(|t| t.deg != t.mono.degree() as i32 + shifts[t.pos as usize]) {
                return Err(Error::ShiftMismatch(String::from("term degree disagrees with shifts")));
            }
        }
        let e = self.engine(0, shifts.len());
        let out = e.groebner(gens.iter().map(|g| g.terms().to_vec()).collect())?;
        #[cfg(debug_assertions)]
        if out.len() <= 24 {
            debug_assert!(e.verify(&out), "Buchberger criterion failed");
        }
        Ok(out.into_iter().map(FreeVector::from_sorted).collect())
    }

    /// a·e_p for every relation and position.
    pub(crate) fn relation_vectors(&self, shifts: &[i32]) -> Vec<FreeVector> {
        let mut out = Vec::new();
        for (p, &s) in shifts.iter().enumerate() {
            for r in &self.relations {
                let terms = r
                    .terms()
                    .iter()
                    .map(|&(m, c)| Term { pos: p as u32, deg: m.degree() as i32 + s, mono: m, c })
                    .collect();
                out.push(FreeVector::from_sorted(terms));
            }
        }
        out
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for i in 0..self.nvars() {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&self.names[i]);
            if e > 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Canonical text form, e.g. `x^2*z - 3*y`.
    pub fn fmt_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, &(m, c)) in p.terms().iter().enumerate() {
            let v = self.field().to_signed(c);
            let a = v.unsigned_abs();
            if i == 0 {
                if v < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if v < 0 { " - " } else { " + " });
            }
            if m.degree() == 0 {
                s.push_str(&format!("{a}"));
            } else if a == 1 {
                s.push_str(&self.fmt_monomial(&m));
            } else {
                s.push_str(&format!("{a}*{}", self.fmt_monomial(&m)));
            }
        }
        s
    }
}
